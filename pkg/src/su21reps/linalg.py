"""Linear algebra on C^3 with the signature (2,1) Hermitian form.

Everything here works with plain ``numpy`` arrays: vectors have shape
``(3,)`` and matrices shape ``(3, 3)``, both complex.  The form is

    <Z, W> = Z1 conj(W1) + Z2 conj(W2) - Z3 conj(W3)

and SU(2,1) is the group of determinant-one matrices preserving it.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

J = np.diag([1.0, 1.0, -1.0]).astype(complex)
SIGNS = np.array([1.0, 1.0, -1.0])


class NotInSU21Error(ValueError):
    """Raised when an operation requires an SU(2,1) member and gets something else."""


class SamplingError(RuntimeError):
    pass


@dataclass(frozen=True)
class ToleranceConfig:
    membership_tol: float = 1e-10
    eigen_tol: float = 1e-9
    null_margin: float = 1e-8

    def __post_init__(self):
        for name in ("membership_tol", "eigen_tol", "null_margin"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be strictly positive, got {value!r}")


DEFAULT_TOL = ToleranceConfig()


class EigenType(enum.Enum):
    POSITIVE = "Positive"
    NEGATIVE = "Negative"
    INDETERMINATE = "Indeterminate"


class ElementClass(enum.Enum):
    ELLIPTIC = "Elliptic"
    PARABOLIC = "Parabolic"
    LOXODROMIC = "Loxodromic"


def as_vec3(z) -> np.ndarray:
    v = np.asarray(z, dtype=complex)
    if v.shape != (3,):
        raise ValueError(f"expected a vector of length 3, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector has non-finite entries")
    return v


def as_mat3(a) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.shape != (3, 3):
        raise ValueError(f"expected a 3x3 matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def herm_form(z, w) -> complex:
    """The indefinite inner product <z, w>, linear in ``z``."""
    z = as_vec3(z)
    w = as_vec3(w)
    return complex(np.sum(SIGNS * z * np.conj(w)))


def membership_residual(a) -> float:
    """max(|A* J A - J|, |det A - 1|); zero exactly on SU(2,1)."""
    a = as_mat3(a)
    form = np.abs(a.conj().T @ J @ a - J).max()
    return float(max(form, abs(np.linalg.det(a) - 1.0)))


def is_su21(a, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    return membership_residual(a) <= tol.membership_tol


def su21_inverse(a, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Inverse of an SU(2,1) member without elimination.

    Entry (i, j) of the inverse is ``s_i s_j conj(a_ji)`` with
    ``s = (1, 1, -1)``, i.e. ``J A* J``.
    """
    a = as_mat3(a)
    res = membership_residual(a)
    if res > tol.membership_tol:
        raise NotInSU21Error(f"matrix is not in SU(2,1) (residual {res:.3e})")
    return J @ a.conj().T @ J


def char_poly_coefficients(a) -> np.ndarray:
    """Coefficients (c2, c1, c0) of det(X I - A) = X^3 + c2 X^2 + c1 X + c0."""
    a = as_mat3(a)
    tr = np.trace(a)
    minors = (
        a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]
        + a[0, 0] * a[2, 2] - a[0, 2] * a[2, 0]
        + a[1, 1] * a[2, 2] - a[1, 2] * a[2, 1]
    )
    return np.array([-tr, minors, -np.linalg.det(a)])


def _principal_arg(z: complex) -> float:
    # Fold -pi onto pi so that values like -1 - 1e-17j sort with -1.
    ang = float(np.angle(z))
    if ang <= -np.pi + 1e-9:
        ang += 2 * np.pi
    return ang


def sort_eigenvalues(values) -> np.ndarray:
    vals = list(np.asarray(values, dtype=complex))
    vals.sort(key=lambda z: (round(_principal_arg(z), 12), round(abs(z), 12)))
    return np.array(vals)


def solve_trace_cubic(t: complex) -> np.ndarray:
    """Roots of X^3 - t X^2 + conj(t) X - 1 (closed form + one Newton step).

    Near-coincident roots are replaced by their mean; the sum of a cluster is
    well conditioned even when the individual roots are not.
    """
    t = complex(t)
    a2, a1, a0 = -t, t.conjugate(), -1.0 + 0j
    shift = -a2 / 3
    p = a1 - a2 * a2 / 3
    q = 2 * a2 ** 3 / 27 - a2 * a1 / 3 + a0
    disc = np.sqrt(complex(q * q / 4 + p ** 3 / 27))
    u3 = -q / 2 + disc
    alt = -q / 2 - disc
    if abs(alt) > abs(u3):
        u3 = alt
    if abs(u3) < 1e-300:
        ys = [0j, 0j, 0j]
    else:
        u = u3 ** (1 / 3)
        omega = np.exp(2j * np.pi / 3)
        ys = []
        for k in range(3):
            uk = u * omega ** k
            ys.append(uk - p / (3 * uk))
    roots = np.array([y + shift for y in ys], dtype=complex)

    poly = lambda x: ((x + a2) * x + a1) * x + a0
    dpoly = lambda x: (3 * x + 2 * a2) * x + a1
    for i, x in enumerate(roots):
        d = dpoly(x)
        if abs(d) > 1e-12 * max(1.0, abs(x)) ** 2:
            step = poly(x) / d
            if abs(step) < 1e-3 * max(1.0, abs(x)):
                roots[i] = x - step

    scale = max(1.0, abs(t))
    merge = 1e-5 * scale
    out = roots.copy()
    used = [False] * 3
    for i in range(3):
        if used[i]:
            continue
        group = [i]
        for j in range(i + 1, 3):
            if not used[j] and abs(roots[i] - roots[j]) <= merge:
                group.append(j)
        if len(group) > 1:
            mean = roots[group].mean()
            for j in group:
                out[j] = mean
                used[j] = True
    return sort_eigenvalues(out)


def eigen_triple(a, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Eigenvalues of an SU(2,1) member from its trace alone."""
    a = as_mat3(a)
    if not is_su21(a, tol):
        raise NotInSU21Error("eigen_triple requires an SU(2,1) member")
    return solve_trace_cubic(np.trace(a))


def _null_basis(a, lam, tol: ToleranceConfig) -> np.ndarray:
    m = as_mat3(a) - lam * np.eye(3)
    _, s, vh = np.linalg.svd(m)
    thresh = tol.eigen_tol * max(1.0, np.linalg.norm(a, 2))
    nullity = int(np.sum(s <= thresh))
    if nullity == 0:
        nullity = 1
    return vh[3 - nullity:].conj().T


def eigenspaces(a, tol: ToleranceConfig = DEFAULT_TOL) -> list[tuple[complex, np.ndarray]]:
    """Distinct eigenvalues with an orthonormal (Euclidean) basis of each eigenspace.

    Works for any matrix whose characteristic polynomial has the SU(2,1)
    shape, which includes conjugate transposes of members.
    """
    vals = solve_trace_cubic(np.trace(as_mat3(a)))
    distinct: list[complex] = []
    for v in vals:
        if all(abs(v - d) > 1e-6 * max(1.0, abs(v)) for d in distinct):
            distinct.append(complex(v))
    return [(lam, _null_basis(a, lam, tol)) for lam in distinct]


def eigenvalue_type(a, lam, tol: ToleranceConfig = DEFAULT_TOL) -> list[EigenType]:
    """Signs of the form on the eigenspace of ``lam``, one entry per dimension.

    On a 2-dimensional eigenspace the restricted form is diagonalized, so
    diag(1, -1, -1) at -1 reports one positive and one negative direction.
    """
    a = as_mat3(a)
    if not is_su21(a, tol):
        raise NotInSU21Error("eigenvalue_type requires an SU(2,1) member")
    lam = complex(lam)
    c2, c1, c0 = char_poly_coefficients(a)
    value = ((lam + c2) * lam + c1) * lam + c0
    scale = max(1.0, abs(np.trace(a))) * max(1.0, abs(lam)) ** 3
    if abs(value) > tol.eigen_tol * scale:
        raise ValueError(f"{lam} is not an eigenvalue (|p(lam)| = {abs(value):.3e})")
    basis = _null_basis(a, lam, tol)
    gram = basis.conj().T @ J @ basis
    gram = (gram + gram.conj().T) / 2
    out = []
    for g in np.linalg.eigvalsh(gram):
        if g > tol.null_margin:
            out.append(EigenType.POSITIVE)
        elif g < -tol.null_margin:
            out.append(EigenType.NEGATIVE)
        else:
            out.append(EigenType.INDETERMINATE)
    order = {EigenType.POSITIVE: 0, EigenType.NEGATIVE: 1, EigenType.INDETERMINATE: 2}
    return sorted(out, key=order.__getitem__)


def classify_element(a, tol: ToleranceConfig = DEFAULT_TOL) -> ElementClass:
    vals = eigen_triple(a, tol)
    if np.any(np.abs(np.abs(vals) - 1.0) > tol.eigen_tol):
        return ElementClass.LOXODROMIC
    geometric = sum(basis.shape[1] for _, basis in eigenspaces(a, tol))
    return ElementClass.ELLIPTIC if geometric == 3 else ElementClass.PARABOLIC


def random_su21(
    seed: int,
    tol: ToleranceConfig = DEFAULT_TOL,
    max_entry: float | None = 4.0,
    max_tries: int = 10_000,
) -> np.ndarray:
    """A seeded SU(2,1) member built by Gram-Schmidt against the form.

    Columns are orthonormalized in order, the first two to norm +1 and the
    last to -1; a draw is rejected if any intermediate norm is within
    ``null_margin`` of zero or has the wrong sign.  Draws with an entry larger
    than ``max_entry`` in modulus are also rejected (``None`` disables this),
    which keeps double-precision residuals of long words meaningful.
    """
    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        v = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        cols: list[np.ndarray] = []
        for k in range(3):
            x = v[:, k].copy()
            for c in cols:
                x = x - herm_form(x, c) / herm_form(c, c) * c
            n = herm_form(x, x).real
            want_positive = k < 2
            if abs(n) <= tol.null_margin or (n > 0) != want_positive:
                break
            cols.append(x / np.sqrt(abs(n)))
        if len(cols) < 3:
            continue
        p = np.stack(cols, axis=1)
        d = np.linalg.det(p)
        p[:, 2] *= np.conj(d) / abs(d)
        if max_entry is not None and np.abs(p).max() > max_entry:
            continue
        return p
    raise SamplingError(f"no SU(2,1) sample accepted after {max_tries} draws (seed {seed})")
