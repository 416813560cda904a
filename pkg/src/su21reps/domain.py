"""The hat map P -> P^, its image D, and the trace map Phi.

A :class:`DomainMatrix` is stored *signed*: entry (i, j) equals
``s_i s_j |p_ij|^2`` with ``s = (1, 1, -1)``.  With that convention every
row and column sums to one and

    t_xy       = lam   . M . mu
    t_{x^-1 y} = 1/lam . M . mu

for ``x = diag(lam)`` and ``y = P diag(mu) P^-1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .linalg import (
    DEFAULT_TOL,
    SIGNS,
    ToleranceConfig,
    as_mat3,
    herm_form,
    is_su21,
    su21_inverse,
)

SIGN_PATTERN = np.outer(SIGNS, SIGNS)


class DomainStructureError(ValueError):
    """Sign pattern or unit row/column sums violated: not a candidate at all."""


class NotInDomainError(ValueError):
    pass


class DegenerateComplementError(ArithmeticError):
    """The form-orthogonal complement of the first two rows is not negative."""


@dataclass(frozen=True, eq=False)
class DomainMatrix:
    m: np.ndarray

    def __post_init__(self):
        arr = np.array(self.m, dtype=float)
        if arr.shape != (3, 3):
            raise ValueError(f"expected a 3x3 matrix, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("domain matrix has non-finite entries")
        arr.setflags(write=False)
        object.__setattr__(self, "m", arr)

    @classmethod
    def from_magnitudes(cls, mags) -> "DomainMatrix":
        return cls(SIGN_PATTERN * np.asarray(mags, dtype=float))

    @property
    def magnitudes(self) -> np.ndarray:
        return SIGN_PATTERN * self.m

    def check_structure(self, tol: float = 1e-9) -> None:
        mags = self.magnitudes
        if np.any(mags < -tol):
            i, j = np.unravel_index(np.argmin(mags), mags.shape)
            raise DomainStructureError(f"entry ({i + 1},{j + 1}) has the wrong sign")
        rows = self.m.sum(axis=1)
        cols = self.m.sum(axis=0)
        if np.any(np.abs(rows - 1) > tol) or np.any(np.abs(cols - 1) > tol):
            raise DomainStructureError(
                f"row sums {rows.tolist()} / column sums {cols.tolist()} are not all 1"
            )

    def side_lengths(self) -> np.ndarray:
        mags = np.clip(self.magnitudes, 0.0, None)
        return np.sqrt(mags[0] * mags[1])

    def __eq__(self, other):
        return isinstance(other, DomainMatrix) and np.array_equal(self.m, other.m)

    def __hash__(self):
        return hash(self.m.tobytes())


class TraceTarget(NamedTuple):
    t_xy: complex
    t_x_inv_y: complex


def hat(P, tol: ToleranceConfig = DEFAULT_TOL) -> DomainMatrix:
    P = as_mat3(P)
    if not is_su21(P, tol):
        raise ValueError("hat requires an SU(2,1) member")
    return DomainMatrix(SIGN_PATTERN * np.abs(P) ** 2)


def triangle_slack(M: DomainMatrix) -> float:
    """min_k (sum of the other two side lengths - s_k); >= 0 on D."""
    s = M.side_lengths()
    return float(np.min(s.sum() - 2 * s))


def in_domain_D(M: DomainMatrix, tol: float = 1e-9) -> bool:
    M.check_structure(tol)
    return triangle_slack(M) >= -tol


def reconstruct_P(
    M: DomainMatrix, orientation: int = 1, tol: float = 1e-9
) -> np.ndarray:
    """An SU(2,1) member P with hat(P) = M.

    Row 1 is real and non-negative and p_21 is real; the phases of p_22 and
    p_23 close the triangle s_1 + s_2 e^{i alpha} - s_3 e^{i beta} = 0 with
    ``alpha`` in [0, pi] (``orientation=-1`` takes the mirror triangle).  Row
    3 is the form-orthogonal complement of rows 1-2, scaled to norm -1 and
    rephased so that det P = 1.
    """
    if orientation not in (1, -1):
        raise ValueError("orientation must be +1 or -1")
    if not in_domain_D(M, tol):
        raise NotInDomainError("triangle inequalities fail; M is not in D")
    mags = np.clip(M.magnitudes, 0.0, None)
    s1, s2, s3 = np.sqrt(mags[0] * mags[1])
    if s1 * s2 <= 1e-300:
        # Collinear closure: with s1 or s2 zero the other two sides are equal.
        alpha = 0.0
    else:
        cos_alpha = (s3 * s3 - s1 * s1 - s2 * s2) / (2 * s1 * s2)
        alpha = float(np.arccos(np.clip(cos_alpha, -1.0, 1.0)))
    alpha *= orientation
    closure = s1 + s2 * np.exp(1j * alpha)
    beta = float(np.angle(closure)) if abs(closure) > 1e-300 else 0.0

    r1 = np.sqrt(mags[0]).astype(complex)
    r2 = np.sqrt(mags[1]) * np.exp(-1j * np.array([0.0, alpha, beta]))
    v = np.conj(np.cross(SIGNS * r1, SIGNS * r2))
    n = herm_form(v, v).real
    if not n < -1e-14:
        raise DegenerateComplementError(f"complement has form norm {n:.3e}")
    v = v / np.sqrt(-n)
    P = np.vstack([r1, r2, v])
    d = np.linalg.det(P)
    P[2] *= np.conj(d) / abs(d)
    return P


def phi_of_M(lam, mu, M: DomainMatrix) -> TraceTarget:
    lam = np.asarray(lam, dtype=complex)
    mu = np.asarray(mu, dtype=complex)
    return TraceTarget(complex(lam @ M.m @ mu), complex((1 / lam) @ M.m @ mu))


def phi(lam, mu, P, tol: ToleranceConfig = DEFAULT_TOL) -> TraceTarget:
    return phi_of_M(lam, mu, hat(P, tol))


def phi_direct(lam, mu, P, tol: ToleranceConfig = DEFAULT_TOL) -> TraceTarget:
    """The same two traces from explicit matrix products (reference path)."""
    x = np.diag(np.asarray(lam, dtype=complex))
    y = P @ np.diag(np.asarray(mu, dtype=complex)) @ su21_inverse(P, tol)
    x_inv = np.diag(1 / np.asarray(lam, dtype=complex))
    return TraceTarget(complex(np.trace(x @ y)), complex(np.trace(x_inv @ y)))


def diagonal_recovery_det(theta) -> complex:
    """det [[1,1,1], [e^{i th_k}], [e^{-i th_k}]]; nonzero for distinct phases."""
    e = np.exp(1j * np.asarray(theta, dtype=float))
    return complex(np.linalg.det(np.array([np.ones(3), e, 1 / e])))


def cyclic_difference_product(theta) -> complex:
    """(1 - e^{i(t1-t2)})(1 - e^{i(t2-t3)})(1 - e^{i(t3-t1)}) e^{-i(t1+t2+t3)}."""
    t1, t2, t3 = np.asarray(theta, dtype=float)
    return complex(
        (1 - np.exp(1j * (t1 - t2)))
        * (1 - np.exp(1j * (t2 - t3)))
        * (1 - np.exp(1j * (t3 - t1)))
        * np.exp(-1j * (t1 + t2 + t3))
    )


def diagonal_recovery_det_closed_form(theta) -> complex:
    # Vandermonde: det = (e2-e1)(e3-e1)(e3-e2)/(e1 e2 e3).
    return -cyclic_difference_product(theta) * np.exp(1j * float(np.sum(theta)))
