import json

import numpy as np
import pytest

from su21reps.cli import main
from su21reps.linalg import random_su21


def pytest_configure(config):
    np.set_printoptions(precision=4, suppress=True)


@pytest.fixture
def pair():
    return random_su21(7), random_su21(8)


def _cli_run(tmp_path_factory, r, threads):
    out = tmp_path_factory.mktemp(f"run{r}") / f"sigma_2_3_{r}_t{threads}.json"
    code = main(["search", "2", "3", str(r), "--json", str(out), "--threads", str(threads)])
    assert code == 0
    return out


@pytest.fixture(scope="session")
def run11_path(tmp_path_factory):
    return _cli_run(tmp_path_factory, 11, 1)


@pytest.fixture(scope="session")
def run13_path(tmp_path_factory):
    return _cli_run(tmp_path_factory, 13, 1)


@pytest.fixture(scope="session")
def run11_threaded_path(tmp_path_factory):
    return _cli_run(tmp_path_factory, 11, 4)


@pytest.fixture(scope="session")
def run11(run11_path):
    return json.loads(run11_path.read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def run13(run13_path):
    return json.loads(run13_path.read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def search11():
    from su21reps.search import SearchConfig, search

    return search(2, 3, 11, SearchConfig())


@pytest.fixture(scope="session")
def search13():
    from su21reps.search import SearchConfig, search

    return search(2, 3, 13, SearchConfig())
