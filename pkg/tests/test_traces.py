import numpy as np
import pytest

from su21reps.linalg import random_su21, su21_inverse
from su21reps.traces import (
    IdentityName,
    comm_trace_direct,
    comm_trace_im_sq,
    comm_trace_real,
    identity_residual,
    identity_scale,
    parse_word,
    reduced_trace,
    trace_tuple,
    word_trace,
)

W = np.exp(2j * np.pi / 3)


def pairs(n, seed=0, **kw):
    for i in range(n):
        yield random_su21(seed + 2 * i, **kw), random_su21(seed + 2 * i + 1, **kw)


def test_parse_word_forms():
    assert parse_word("ABab") == ("A", "B", "a", "b")
    assert parse_word("A B A^-1 B^-1") == ("A", "B", "a", "b")
    assert parse_word("A B⁻¹") == ("A", "b")
    assert parse_word("") == ()
    with pytest.raises(ValueError):
        parse_word("A C")


def test_word_trace_examples():
    x = np.diag([1, -1, -1]).astype(complex)
    assert word_trace(x, x, "") == 3
    assert word_trace(x, np.eye(3), "A") == -1
    assert word_trace(np.eye(3), np.eye(3), "A B A^-1 B^-1") == 3


def test_word_trace_conjugation_invariant(pair):
    A, B = pair
    Q = random_su21(99)
    Qi = su21_inverse(Q)
    for w in ("AB", "aB", "ABab", "AABB", "ABAABB", "bAAbaB"):
        lhs = word_trace(Q @ A @ Qi, Q @ B @ Qi, w)
        assert abs(lhs - word_trace(A, B, w)) <= 1e-9


def test_identity_examples():
    B = random_su21(3)
    assert identity_residual("II", np.eye(3), B) <= 1e-12
    assert identity_residual(IdentityName.I, np.diag([1, W, W * W]), B) <= 1e-12


@pytest.fixture(scope="module")
def thousand():
    return list(pairs(1000))


@pytest.mark.parametrize("name", [n for n in IdentityName if n is not IdentityName.V])
def test_identities_hold(thousand, name):
    worst = max(identity_residual(name, A, B) for A, B in thousand)
    assert worst <= 1e-9


def test_identity_v_as_printed_misses_conj_tab(thousand):
    # The printed right side is short exactly by conj(t_AB).
    for A, B in thousand[:200]:
        gap = identity_residual(IdentityName.V, A, B)
        assert abs(gap - abs(word_trace(A, B, "AB"))) <= 1e-9


def test_identity_vii_relative_on_unguarded_samples():
    for A, B in pairs(300, seed=5000, max_entry=None):
        rel = identity_residual("VII", A, B) / identity_scale("VII", A, B)
        assert rel <= 1e-12


def test_generator_sufficiency(thousand):
    for A, B in thousand[:300]:
        t = trace_tuple(A, B)
        comm = comm_trace_direct(A, B)
        for w in ("AAB", "AABB", "ABAb", "ABAABB"):
            assert abs(word_trace(A, B, w) - reduced_trace(w, t, comm)) <= 1e-9
    with pytest.raises(KeyError):
        reduced_trace("BBB", t, comm)


def test_comm_trace_examples():
    assert comm_trace_real((3, 3, 3, 3)) == pytest.approx(3)
    assert comm_trace_im_sq((3, 3, 3, 3)) == pytest.approx(0, abs=1e-12)
    for angles in ([0.3, 1.2, -1.5], [2 * np.pi / 3, -2 * np.pi / 3, 0]):
        a = complex(np.sum(np.exp(1j * np.array(angles))))
        assert comm_trace_real((a, 3, a, np.conj(a))) == pytest.approx(3, abs=1e-12)


def test_comm_trace_direct_examples(pair):
    A, _ = pair
    assert comm_trace_direct(A, A) == pytest.approx(3)
    x = np.diag(np.exp(1j * np.array([0.1, 0.5, -0.6])))
    y = np.diag(np.exp(1j * np.array([1.0, -2.0, 1.0])))
    assert comm_trace_direct(x, y) == pytest.approx(3)


def test_commutator_formulas_thousand(thousand):
    for A, B in thousand:
        t = trace_tuple(A, B)
        direct = comm_trace_direct(A, B)
        assert abs(comm_trace_real(t) - direct.real) <= 1e-8
        assert abs(comm_trace_im_sq(t) - direct.imag ** 2) <= 1e-7


def test_im_sq_cross_validation_ten_thousand():
    worst = 0.0
    for A, B in pairs(10_000, seed=20_000):
        t = trace_tuple(A, B)
        worst = max(worst, abs(comm_trace_im_sq(t) - comm_trace_direct(A, B).imag ** 2))
    assert worst <= 1e-7


def test_commutator_formulas_relative_on_unguarded_samples():
    # Heavy-tailed draws have traces in the hundreds; compare on the natural scale.
    for A, B in pairs(500, seed=9000, max_entry=None):
        t = trace_tuple(A, B)
        s = max(1.0, *map(abs, t))
        direct = comm_trace_direct(A, B)
        assert abs(comm_trace_real(t) - direct.real) / s ** 4 <= 1e-12
        assert abs(comm_trace_im_sq(t) - direct.imag ** 2) / s ** 6 <= 1e-12


def test_im_sq_is_never_negative(thousand):
    assert min(comm_trace_im_sq(trace_tuple(A, B)) for A, B in thousand) >= 0
