"""Enumeration of irreducible SU(2,1) representations of Sigma(p,q,r).

For a central h = eps I, classes x ~ diag(lam), y ~ diag(mu) and a target
value tau for t_xy, the condition t_xy = tau is two real *linear* equations
in the free magnitudes u = (m11, m12, m21, m22) of M = hat(P).  The search
therefore solves for the affine slice of solutions, scans it on a grid
clipped to the polyhedron of non-negative magnitudes, keeps the points that
satisfy the triangle inequalities of D, and certifies a few of them by
rebuilding explicit matrices and checking every relation.
"""

from __future__ import annotations

import logging
import os
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.optimize import linprog, minimize

from .domain import DomainMatrix, SIGN_PATTERN, in_domain_D, reconstruct_P
from .linalg import (
    ToleranceConfig,
    EigenType,
    eigenspaces,
    eigenvalue_type,
    membership_residual,
    su21_inverse,
)
from .presentation import (
    BrieskornPresentation,
    CentralElement,
    ClassLabel,
    TargetTrace,
    _label_sort_key,
    admissible_classes,
    admissible_xy_traces,
    enumerate_central,
    root,
)
from .traces import comm_trace_direct

log = logging.getLogger(__name__)

THREADS_ENV = "SU21REPS_THREADS"

# mag(u) = _K0 + sum_k u_k _K[k]; see FreeParams.
_K0 = np.array([[0, 0, -1], [0, 0, -1], [-1, -1, -1]], dtype=float)
_K = np.array(
    [
        [[1, 0, 1], [0, 0, 0], [1, 0, 1]],
        [[0, 1, 1], [0, 0, 0], [0, 1, 1]],
        [[0, 0, 0], [1, 0, 1], [1, 0, 1]],
        [[0, 0, 0], [0, 1, 1], [0, 1, 1]],
    ],
    dtype=float,
)
# Entries whose non-negativity is a constraint (m33 >= 1 follows from m31, m32 >= 0).
_CONSTRAINED = [(i, j) for i in range(3) for j in range(3) if (i, j) != (2, 2)]


def magnitudes_of(u) -> np.ndarray:
    """Magnitude matrices for one (4,) or many (N, 4) parameter vectors."""
    u = np.asarray(u, dtype=float)
    return _K0 + np.tensordot(u, _K, axes=([-1], [0]))


@dataclass(frozen=True)
class FreeParams:
    """Free magnitudes (m11, m12, m21, m22); the other five follow from unit sums."""

    u: tuple[float, float, float, float]
    orientation: int = 1

    @classmethod
    def from_domain(cls, M: DomainMatrix, orientation: int = 1) -> "FreeParams":
        mags = M.magnitudes
        return cls(tuple(float(v) for v in (mags[0, 0], mags[0, 1], mags[1, 0], mags[1, 1])), orientation)

    def magnitudes(self) -> np.ndarray:
        return magnitudes_of(self.u)

    def domain_matrix(self) -> DomainMatrix:
        return DomainMatrix.from_magnitudes(self.magnitudes())


@dataclass(frozen=True)
class SearchConfig:
    grid_step: float = 0.02
    patch_bound: float = 10.0
    solve_tol: float = 1e-8
    cluster_radius: float = 1e-4
    refine_iters: int = 50
    seed: int = 0
    per_cluster: int = 3
    max_candidates: int = 240
    max_grid_points: int = 4_000_000
    threads: int | None = None

    def __post_init__(self):
        for name in ("grid_step", "patch_bound", "solve_tol", "cluster_radius"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        for name in ("refine_iters", "per_cluster", "max_candidates", "max_grid_points"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be at least 1")
        if self.threads is not None and self.threads < 1:
            raise ValueError("threads must be at least 1")

    def resolved_threads(self) -> int:
        if self.threads is not None:
            return self.threads
        return max(1, int(os.environ.get(THREADS_ENV, "1")))

    def echo(self) -> dict:
        """Config values that affect results (thread count does not)."""
        d = asdict(self)
        d.pop("threads")
        return d

    def tolerances(self) -> ToleranceConfig:
        return ToleranceConfig(membership_tol=100 * self.solve_tol)


def _linear_form(weights: np.ndarray) -> tuple[complex, np.ndarray]:
    """sum_ij weights_ij mag_ij(u) as c0 + coef . u."""
    c0 = complex(np.sum(weights * _K0))
    coef = np.array([np.sum(weights * k) for k in _K], dtype=complex)
    return c0, coef


def trace_form(lam, mu) -> tuple[complex, np.ndarray]:
    """t_xy as an affine function of u."""
    return _linear_form(SIGN_PATTERN * np.outer(np.asarray(lam), np.asarray(mu)))


def inverse_trace_form(lam, mu) -> tuple[complex, np.ndarray]:
    """t_{x^-1 y} as an affine function of u."""
    return _linear_form(SIGN_PATTERN * np.outer(1 / np.asarray(lam), np.asarray(mu)))


class TargetSlice(NamedTuple):
    """{u : t_xy(u) = target} = point + span(basis rows); ``empty`` if inconsistent."""

    point: np.ndarray
    basis: np.ndarray
    rank: int
    empty: bool
    system: np.ndarray
    rhs: np.ndarray


def solve_target_slice(lam, mu, target: complex, tol: float = 1e-8) -> TargetSlice:
    c0, coef = trace_form(lam, mu)
    system = np.vstack([coef.real, coef.imag])
    rhs = np.array([(target - c0).real, (target - c0).imag])
    _, s, vh = np.linalg.svd(system)
    rank = int(np.sum(s > 1e-12 * max(1.0, s.max(initial=0.0))))
    point = np.linalg.pinv(system, rcond=1e-12) @ rhs
    empty = bool(np.linalg.norm(system @ point - rhs) > tol)
    return TargetSlice(point, vh[rank:], rank, empty, system, rhs)


def _constraint_rows(slice_: TargetSlice, bound: float) -> tuple[np.ndarray, np.ndarray]:
    """Rows (G, h) with G w <= h meaning 0 <= mags and u <= bound on the slice."""
    N = slice_.basis
    G, h = [], []
    for i, j in _CONSTRAINED:
        # mag_ij(u0 + N^T w) >= 0
        lin = np.array([_K[k, i, j] for k in range(4)])
        G.append(-(N @ lin))
        h.append(_K0[i, j] + lin @ slice_.point)
    for k in range(4):
        G.append(N[:, k])
        h.append(bound - slice_.point[k])
    return np.array(G), np.array(h)


def _bounding_box(G, h, dim) -> tuple[np.ndarray, np.ndarray] | None:
    lo, hi = np.zeros(dim), np.zeros(dim)
    for i in range(dim):
        for sign, store in ((1.0, lo), (-1.0, hi)):
            c = np.zeros(dim)
            c[i] = sign
            res = linprog(c, A_ub=G, b_ub=h, bounds=[(None, None)] * dim, method="highs")
            if res.status == 2:
                return None
            if res.status != 0:
                raise RuntimeError(f"bounding-box LP failed: {res.message}")
            store[i] = res.x[i]
    return lo, hi


def domain_margin(u) -> np.ndarray:
    """Smallest slack among non-negativity and triangle constraints, per row of u."""
    mags = magnitudes_of(u)
    nonneg = np.min(np.stack([mags[..., i, j] for i, j in _CONSTRAINED], axis=-1), axis=-1)
    s = np.sqrt(np.clip(mags[..., 0, :] * mags[..., 1, :], 0.0, None))
    tri = np.min(s.sum(axis=-1, keepdims=True) - 2 * s, axis=-1)
    return np.minimum(nonneg, tri)


def _project(u, slice_: TargetSlice, cfg: SearchConfig) -> np.ndarray:
    pinv = np.linalg.pinv(slice_.system, rcond=1e-12)
    for _ in range(cfg.refine_iters):
        resid = slice_.system @ u - slice_.rhs
        if np.linalg.norm(resid) <= cfg.solve_tol * 1e-3:
            break
        u = u - pinv @ resid
    return u


def _grid(lo, hi, step, frac, max_points):
    """Axis-aligned grid on [lo, hi] shifted by ``frac * step`` per axis."""
    extent = hi - lo
    while np.prod(np.floor(extent / step) + 1) > max_points:
        step *= 2
    axes = []
    for i in range(len(lo)):
        n = int(np.floor((extent[i] - frac[i] * step) / step)) + 1
        if n <= 0:
            axes.append(np.array([lo[i] + extent[i] / 2]))
        else:
            axes.append(lo[i] + frac[i] * step + step * np.arange(n))
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1)


def sweep_slice(slice_: TargetSlice, lam, mu, cfg: SearchConfig, cell_index: int = 0) -> list[FreeParams]:
    """Grid-scan a target slice and return representative points of D on it.

    Feasible grid points are grouped by t_{x^-1 y} (radius ``cluster_radius``)
    and ``per_cluster`` spread representatives of each group are returned: the
    deepest point of D, then the first and last in grid order.  When no grid
    point is feasible the best ones are pushed toward D by a local search.
    """
    if slice_.empty:
        return []
    dim = slice_.basis.shape[0]
    if dim == 0:
        candidates = slice_.point[None, :]
    else:
        G, h = _constraint_rows(slice_, cfg.patch_bound)
        box = _bounding_box(G, h, dim)
        if box is None:
            return []
        lo, hi = box
        rng = np.random.default_rng([cfg.seed, cell_index])
        frac = rng.uniform(0.0, 1.0, size=dim)
        w = _grid(lo, hi, cfg.grid_step, frac, cfg.max_grid_points)
        candidates = slice_.point + w @ slice_.basis
    margin = domain_margin(candidates)
    score = margin / (1.0 + np.linalg.norm(candidates, axis=-1))
    feasible = np.flatnonzero(margin >= 0)

    if feasible.size == 0:
        rescued = _rescue(candidates, score, slice_, cfg)
        return [FreeParams(tuple(map(float, u))) for u in rescued]

    d0, dcoef = inverse_trace_form(lam, mu)
    t_inv = d0 + candidates[feasible] @ dcoef
    keys = np.stack([np.round(t_inv.real / cfg.cluster_radius), np.round(t_inv.imag / cfg.cluster_radius)], -1)
    groups: dict[tuple, list[int]] = {}
    for idx, key in zip(feasible, map(tuple, keys)):
        groups.setdefault(key, []).append(int(idx))
    ordered = [groups[k] for k in sorted(groups)]
    max_groups = max(1, cfg.max_candidates // cfg.per_cluster)
    if len(ordered) > max_groups:
        picks = np.linspace(0, len(ordered) - 1, max_groups).round().astype(int)
        ordered = [ordered[i] for i in sorted(set(picks))]

    out: list[FreeParams] = []
    for members in ordered:
        best = max(members, key=lambda i: (score[i], -i))
        chosen = []
        for i in (best, members[0], members[-1]):
            if i not in chosen:
                chosen.append(i)
        for i in chosen[: cfg.per_cluster]:
            u = _project(candidates[i], slice_, cfg)
            if domain_margin(u) >= -cfg.solve_tol * 1e-2:
                out.append(FreeParams(tuple(map(float, u))))
    return out


def _rescue(candidates, score, slice_: TargetSlice, cfg: SearchConfig) -> list[np.ndarray]:
    dim = slice_.basis.shape[0]
    if dim == 0:
        return []
    order = np.argsort(-score, kind="stable")[:5]
    found = []
    for i in order:
        w0 = (candidates[i] - slice_.point) @ slice_.basis.T
        res = minimize(
            lambda w: -float(domain_margin(slice_.point + w @ slice_.basis)),
            w0,
            method="Nelder-Mead",
            options={"maxiter": 40 * cfg.refine_iters, "xatol": 1e-13, "fatol": 1e-14},
        )
        u = _project(slice_.point + res.x @ slice_.basis, slice_, cfg)
        if domain_margin(u) >= -1e-11 and np.all(u <= cfg.patch_bound):
            found.append(u)
            break
    return found


@dataclass
class Certificate:
    X: np.ndarray
    Y: np.ndarray
    H: np.ndarray
    P: np.ndarray
    relation_residuals: dict[str, float]
    irreducible: bool
    t_xy: complex
    t_x_inv_y: complex
    im_comm: float
    z_class: ClassLabel | None
    accepted: bool
    reason: str = ""


def _power(A, n: int, tol: ToleranceConfig) -> np.ndarray:
    base = A if n >= 0 else su21_inverse(A, tol)
    out = np.eye(3, dtype=complex)
    for _ in range(abs(n)):
        out = out @ base
    return out


def _shares_eigenvector(A, B, tol: ToleranceConfig, angle_tol: float) -> bool:
    for _, E in eigenspaces(A, tol):
        proj = np.eye(3) - E @ E.conj().T
        for _, F in eigenspaces(B, tol):
            sines = np.linalg.svd(proj @ F, compute_uv=False)
            if sines.min() <= angle_tol:
                return True
    return False


def is_irreducible(X, Y, tol: ToleranceConfig = ToleranceConfig(), angle_tol: float = 1e-7) -> bool:
    """No common invariant line (X, Y) and no common invariant plane (via X*, Y*)."""
    if _shares_eigenvector(X, Y, tol, angle_tol):
        return False
    return not _shares_eigenvector(X.conj().T, Y.conj().T, tol, angle_tol)


def _z_class(Z, target: TargetTrace, tol: ToleranceConfig) -> ClassLabel | None:
    exact = [(-f) % 1 for f in target.exponents]
    positive, negative = [], []
    for lam, basis in eigenspaces(Z, tol):
        f = min(exact, key=lambda e: abs(root(e) - lam))
        if abs(root(f) - lam) > 1e-6:
            return None
        for t in eigenvalue_type(Z, lam, tol):
            if t is EigenType.POSITIVE:
                positive.append(f)
            elif t is EigenType.NEGATIVE:
                negative.append(f)
            else:
                return None
    if len(positive) != 2 or len(negative) != 1:
        return None
    return ClassLabel((positive[0], positive[1], negative[0]))


def certify(
    eps: CentralElement,
    x_class: ClassLabel,
    y_class: ClassLabel,
    u: FreeParams,
    pres: BrieskornPresentation,
    cfg: SearchConfig = SearchConfig(),
    target: TargetTrace | None = None,
) -> Certificate:
    """Rebuild explicit matrices from a witness and check every relation."""
    tol = cfg.tolerances()
    M = u.domain_matrix()
    if not in_domain_D(M):
        raise ValueError("witness is not in the domain D")
    P = reconstruct_P(M, u.orientation)
    X = x_class.matrix()
    Y = P @ y_class.matrix() @ su21_inverse(P, tol)
    H = eps.matrix()
    Z = su21_inverse(X @ Y, tol)
    eye = np.eye(3)
    residuals = {
        "x^p h^a": float(np.abs(_power(X, pres.p, tol) @ _power(H, pres.a, tol) - eye).max()),
        "y^q h^b": float(np.abs(_power(Y, pres.q, tol) @ _power(H, pres.b, tol) - eye).max()),
        "z^r h^c": float(np.abs(_power(Z, pres.r, tol) @ _power(H, pres.c, tol) - eye).max()),
        "membership": float(max(membership_residual(m) for m in (P, X, Y, Z))),
    }
    t_xy = complex(np.trace(X @ Y))
    t_x_inv_y = complex(np.trace(su21_inverse(X, tol) @ Y))
    im_comm = float(comm_trace_direct(X, Y, tol).imag)
    irreducible = is_irreducible(X, Y, tol)
    if target is None:
        target = _nearest_target(t_xy, pres, eps)
    z_class = _z_class(Z, target, tol) if target is not None else None

    reason = ""
    limit = 100 * cfg.solve_tol
    bad = [k for k, v in residuals.items() if not v <= limit]
    if bad:
        reason = "relation residual too large: " + ", ".join(bad)
    elif not irreducible:
        reason = "reducible"
    elif z_class is None:
        reason = "z class undetermined"
    return Certificate(
        X, Y, H, P, residuals, irreducible, t_xy, t_x_inv_y, im_comm, z_class,
        accepted=not reason, reason=reason,
    )


def _nearest_target(t_xy: complex, pres: BrieskornPresentation, eps: CentralElement) -> TargetTrace | None:
    targets = admissible_xy_traces(pres.r, pres.c, eps)
    if not targets:
        return None
    best = min(targets, key=lambda t: abs(t.value - t_xy))
    return best if abs(best.value - t_xy) <= 1e-6 else None


@dataclass
class RepPoint:
    epsilon: CentralElement
    x_class: ClassLabel
    y_class: ClassLabel
    z_class: ClassLabel
    target: TargetTrace
    t_xy: complex
    t_x_inv_y: complex
    im_comm: float
    witness: FreeParams
    residuals: dict[str, float] = field(default_factory=dict)

    @property
    def coordinates(self) -> tuple[float, float, float, float, float]:
        return (self.t_xy.real, self.t_xy.imag, self.t_x_inv_y.real, self.t_x_inv_y.imag, self.im_comm)

    @property
    def discrete_key(self):
        return (self.epsilon.k, _label_sort_key(self.x_class), _label_sort_key(self.y_class))

    def sort_key(self):
        return self.discrete_key + (tuple(round(c, 9) for c in self.coordinates), self.coordinates)


def dedup(points: list[RepPoint], radius: float) -> list[RepPoint]:
    """One representative per conjugacy class (discrete data + coordinates within radius)."""
    groups: dict[tuple, list[RepPoint]] = {}
    for pt in points:
        groups.setdefault((pt.epsilon, pt.x_class, pt.y_class), []).append(pt)
    reps: list[RepPoint] = []
    for members in groups.values():
        kept: list[RepPoint] = []
        for pt in sorted(members, key=lambda p: p.coordinates):
            c = np.array(pt.coordinates)
            if all(np.abs(c - np.array(k.coordinates)).max() > radius for k in kept):
                kept.append(pt)
        reps.extend(kept)
    return sorted(reps, key=RepPoint.sort_key)


class Cell(NamedTuple):
    index: int
    eps: CentralElement
    x_class: ClassLabel
    y_class: ClassLabel
    target: TargetTrace


@dataclass
class SearchResult:
    presentation: BrieskornPresentation
    config: SearchConfig
    points: list[RepPoint]
    diagnostics: dict[str, int]


def enumerate_cells(pres: BrieskornPresentation) -> tuple[list[Cell], Counter]:
    cells: list[Cell] = []
    stats: Counter = Counter()
    for eps in enumerate_central():
        xs = admissible_classes(pres.p, pres.a, eps)
        ys = admissible_classes(pres.q, pres.b, eps)
        targets = admissible_xy_traces(pres.r, pres.c, eps)
        for x in xs:
            for y in ys:
                if x.is_central or y.is_central:
                    # A central generator leaves every eigenline of the other invariant.
                    stats["cells_central_skipped"] += len(targets)
                    continue
                for t in targets:
                    cells.append(Cell(len(cells), eps, x, y, t))
    return cells, stats


def run_cell(cell: Cell, pres: BrieskornPresentation, cfg: SearchConfig) -> tuple[list[RepPoint], Counter]:
    stats: Counter = Counter()
    lam, mu = cell.x_class.values, cell.y_class.values
    slice_ = solve_target_slice(lam, mu, cell.target.value, cfg.solve_tol)
    if slice_.empty:
        stats["cells_empty_slice"] += 1
        return [], stats
    candidates = sweep_slice(slice_, lam, mu, cfg, cell.index)
    if not candidates:
        stats["cells_outside_domain"] += 1
        return [], stats
    stats["cells_with_candidates"] += 1
    points: list[RepPoint] = []
    for cand in candidates:
        for orientation in (1, -1):
            witness = FreeParams(cand.u, orientation)
            stats["certifications"] += 1
            try:
                cert = certify(cell.eps, cell.x_class, cell.y_class, witness, pres, cfg, cell.target)
            except (ArithmeticError, ValueError) as exc:
                log.debug("cell %d: reconstruction failed: %s", cell.index, exc)
                stats["rejected_reconstruction"] += 1
                continue
            if not cert.accepted:
                key = "rejected_reducible" if cert.reason == "reducible" else "rejected_relations"
                if cert.reason == "z class undetermined":
                    key = "rejected_z_class"
                stats[key] += 1
                continue
            stats["accepted"] += 1
            points.append(
                RepPoint(
                    cell.eps, cell.x_class, cell.y_class, cert.z_class, cell.target,
                    cert.t_xy, cert.t_x_inv_y, cert.im_comm, witness, cert.relation_residuals,
                )
            )
    return points, stats


def search(p: int, q: int, r: int, cfg: SearchConfig = SearchConfig(), weights=None) -> SearchResult:
    """All certified irreducible points found within the configured patch.

    Completeness holds only relative to ``patch_bound`` and ``grid_step``.
    """
    pres = BrieskornPresentation(p, q, r, *weights) if weights is not None else BrieskornPresentation.canonical(p, q, r)
    cells, stats = enumerate_cells(pres)
    stats["cells_total"] = len(cells) + stats["cells_central_skipped"]
    threads = cfg.resolved_threads()
    log.info("Sigma(%d,%d,%d): %d cells, %d threads", p, q, r, len(cells), threads)
    if threads == 1:
        results = [run_cell(c, pres, cfg) for c in cells]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda c: run_cell(c, pres, cfg), cells))
    found: list[RepPoint] = []
    for pts, cell_stats in results:
        found.extend(pts)
        stats.update(cell_stats)
    points = dedup(found, cfg.cluster_radius)
    stats["points"] = len(points)
    return SearchResult(pres, cfg, points, dict(sorted(stats.items())))
