"""Seeded property suites behind ``su21reps check``.

Pair i of a run with base seed S uses ``random_su21(S + 2i)`` and
``random_su21(S + 2i + 1)``.  Each suite records its worst residual and the
seed that produced it.

Identities V and VI are allowed to fail *systematically* as printed: such a
failure is reported as an erratum rather than a defect, but only when the
corresponding Cayley-Hamilton reduction (worked out independently in
:func:`traces.reduced_trace`) holds on the same samples.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .domain import (
    DomainMatrix,
    cyclic_difference_product,
    diagonal_recovery_det,
    diagonal_recovery_det_closed_form,
    hat,
    in_domain_D,
    reconstruct_P,
    triangle_slack,
)
from .linalg import random_su21
from .search import magnitudes_of
from .traces import (
    IdentityName,
    comm_trace_direct,
    comm_trace_im_sq,
    comm_trace_real,
    identity_residual,
    reduced_trace,
    trace_tuple,
    word_trace,
)

IDENTITY_TOL = 1e-9
REAL_TOL = 1e-8
IM_SQ_TOL = 1e-7
DET_TOL = 1e-10
ROUND_TRIP_TOL = 1e-10
VIOLATING_SAMPLES = 100

ERRATUM_ELIGIBLE = {IdentityName.V: "AABB", IdentityName.VI: "ABAb"}

PASS, FAIL, ERRATUM = "PASS", "FAIL", "ERRATUM"


@dataclass
class SuiteResult:
    name: str
    max_residual: float
    threshold: float
    status: str
    worst_seed: int | None = None
    failures: int = 0
    note: str = ""

    @property
    def ok(self) -> bool:
        return self.status != FAIL

    def line(self) -> str:
        seed = "" if self.worst_seed is None else f"  worst seed {self.worst_seed}"
        note = f"  ({self.note})" if self.note else ""
        return f"{self.status:<7} {self.name:<38} max {self.max_residual:.3e}  tol {self.threshold:.0e}{seed}{note}"


class _Tracker:
    def __init__(self, name, threshold):
        self.name, self.threshold = name, threshold
        self.worst, self.seed, self.failures = 0.0, None, 0

    def add(self, value, seed):
        value = float(value)
        if not value <= self.threshold:
            self.failures += 1
        if self.seed is None or not value <= self.worst:
            self.worst, self.seed = value, seed

    def result(self, status=None, note="") -> SuiteResult:
        if status is None:
            status = PASS if self.failures == 0 else FAIL
        return SuiteResult(self.name, self.worst, self.threshold, status, self.seed, self.failures, note)


def sample_pairs(samples: int, seed: int):
    for i in range(samples):
        s = seed + 2 * i
        yield s, random_su21(s), random_su21(s + 1)


def identity_suites(samples: int, seed: int) -> list[SuiteResult]:
    printed = {n: _Tracker(f"identity {n.value}", IDENTITY_TOL) for n in IdentityName}
    reduced = {n: _Tracker(f"identity {n.value} (reduction)", IDENTITY_TOL) for n in ERRATUM_ELIGIBLE}
    for s, A, B in sample_pairs(samples, seed):
        t = trace_tuple(A, B)
        comm = comm_trace_direct(A, B)
        for name in IdentityName:
            printed[name].add(identity_residual(name, A, B), s)
        for name, word in ERRATUM_ELIGIBLE.items():
            reduced[name].add(abs(word_trace(A, B, word) - reduced_trace(word, t, comm)), s)

    out = []
    for name in IdentityName:
        tr = printed[name]
        if tr.failures == 0 or name not in ERRATUM_ELIGIBLE:
            out.append(tr.result())
            continue
        systematic = tr.failures * 2 > samples
        if systematic and reduced[name].failures == 0:
            out.append(tr.result(ERRATUM, f"fails as printed on {tr.failures}/{samples}; "
                                          f"reduction holds to {reduced[name].worst:.1e}"))
        else:
            out.append(tr.result())
    return out


def commutator_suites(samples: int, seed: int) -> list[SuiteResult]:
    re_t = _Tracker("commutator trace Re formula", REAL_TOL)
    im_t = _Tracker("commutator trace Im^2 formula", IM_SQ_TOL)
    for s, A, B in sample_pairs(samples, seed):
        t = trace_tuple(A, B)
        direct = comm_trace_direct(A, B)
        re_t.add(abs(comm_trace_real(t) - direct.real), s)
        im_t.add(abs(comm_trace_im_sq(t) - direct.imag ** 2), s)
    return [re_t.result(), im_t.result()]


def distinct_angles(rng, min_gap: float = 1e-3) -> np.ndarray:
    while True:
        theta = rng.uniform(-np.pi, np.pi, 3)
        diffs = np.angle(np.exp(1j * (theta[:, None] - theta[None, :])))
        if np.all(np.abs(diffs[np.triu_indices(3, 1)]) > min_gap):
            return theta


def determinant_suites(samples: int, seed: int) -> list[SuiteResult]:
    """The printed product, the closed form it should be, and their moduli."""
    printed = _Tracker("determinant, printed product", DET_TOL)
    closed = _Tracker("determinant, closed form", DET_TOL)
    modulus = _Tracker("determinant, modulus of product", DET_TOL)
    rng = np.random.default_rng(seed)
    for i in range(samples):
        theta = distinct_angles(rng)
        det = diagonal_recovery_det(theta)
        prod = cyclic_difference_product(theta)
        printed.add(abs(det - prod), seed)
        closed.add(abs(det - diagonal_recovery_det_closed_form(theta)), seed)
        modulus.add(abs(abs(det) - abs(prod)), seed)
    status = None
    note = ""
    if printed.failures and not closed.failures and not modulus.failures:
        status = ERRATUM
        note = "printed product is off by the phase -e^{i(t1+t2+t3)}; modulus and closed form agree"
    return [printed.result(status, note), closed.result(), modulus.result()]


def violating_matrices(count: int, seed: int, margin: float = 1e-6) -> list[DomainMatrix]:
    """Matrices with the right signs and unit sums that break a triangle inequality."""
    rng = np.random.default_rng(seed)
    out: list[DomainMatrix] = []
    while len(out) < count:
        u = rng.uniform(0.0, 3.0, 4)
        mags = magnitudes_of(u)
        if mags.min() < 0:
            continue
        M = DomainMatrix.from_magnitudes(mags)
        if triangle_slack(M) < -margin:
            out.append(M)
    return out


def domain_suites(samples: int, seed: int) -> list[SuiteResult]:
    member = _Tracker("hat(P) lies in D", 0.0)
    trip = _Tracker("hat/reconstruct round trip", ROUND_TRIP_TOL)
    for i in range(samples):
        s = seed + i
        M = hat(random_su21(s))
        member.add(0.0 if in_domain_D(M) else 1.0, s)
        for orientation in (1, -1):
            back = hat(reconstruct_P(M, orientation))
            trip.add(np.abs(back.m - M.m).max(), s)
    outside = _Tracker("triangle-violating matrices rejected", 0.0)
    n_bad = VIOLATING_SAMPLES if samples else 0
    for M in violating_matrices(n_bad, seed):
        outside.add(1.0 if in_domain_D(M) else 0.0, seed)
    return [member.result(), trip.result(), outside.result()]


def run_all(samples: int = 1000, seed: int = 0) -> list[SuiteResult]:
    if samples < 0:
        raise ValueError("samples must be non-negative")
    return (
        identity_suites(samples, seed)
        + commutator_suites(samples, seed)
        + determinant_suites(samples, seed)
        + domain_suites(samples, seed)
    )
