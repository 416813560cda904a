"""JSON records for search runs, exact-form strings and plain-text tables.

Floating values are written as decimal strings with 17 significant digits,
which is enough for every double to survive a round trip unchanged.  A run
parsed with :func:`parse_run` and written back with :func:`emit_run` gives
the same bytes.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .presentation import (
    BrieskornPresentation,
    CentralElement,
    ClassLabel,
    PresentationError,
    TargetTrace,
    format_root_sum,
    root,
)
from .search import FreeParams, RepPoint, SearchConfig, SearchResult, certify

TOOL = "su21reps"
EXACT_TOL = 1e-9


class MalformedRunError(ValueError):
    """The file is not a (complete) search run."""


def fmt_float(x: float) -> str:
    return format(float(x), ".17g")


def _float(s) -> float:
    if not isinstance(s, str):
        raise MalformedRunError(f"expected a decimal string, got {s!r}")
    try:
        return float(s)
    except ValueError:
        raise MalformedRunError(f"not a number: {s!r}") from None


def _fraction(s) -> Fraction:
    if not isinstance(s, str):
        raise MalformedRunError(f"expected an exponent string like '1/3', got {s!r}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise MalformedRunError(f"bad exponent {s!r}") from None


# exact forms -----------------------------------------------------------------

@lru_cache(maxsize=None)
def _root_sums(n: int) -> tuple[tuple[complex, tuple[Fraction, ...]], ...]:
    roots = [Fraction(k, n) for k in range(n)]
    out = []
    for triple in itertools.combinations_with_replacement(roots, 3):
        out.append((complex(sum(root(f) for f in triple)), triple))
    # Product-one triples first so they win ties against other spellings.
    out.sort(key=lambda item: sum(item[1]) % 1 != 0)
    return tuple(out)


def recognize_exact(value: complex, orders=(3,)) -> str | None:
    """Spell ``value`` as a sum of three n-th roots of unity, n in ``orders``."""
    for n in orders:
        for total, triple in _root_sums(int(n)):
            if abs(total - value) <= EXACT_TOL:
                return format_root_sum(triple)
    return None


_TERM = re.compile(
    r"""(?P<cos>1\+2cos\((?P<cnum>\d*)π(?:/(?P<cden>\d+))?\))
      | (?P<exp>e\^\{(?P<enum>\d*)πi(?:/(?P<eden>\d+))?\})
      | (?P<one>-?1)""",
    re.VERBOSE,
)


def evaluate_exact_form(text: str) -> complex:
    """Numeric value of a string made by :func:`format_root_sum`."""
    total = 0j
    pos = 0
    first = True
    while pos < len(text):
        if not first:
            if text[pos] != "+":
                raise ValueError(f"expected '+' at position {pos} in {text!r}")
            pos += 1
        m = _TERM.match(text, pos)
        if m is None:
            raise ValueError(f"cannot parse exact form {text!r} at position {pos}")
        if m.group("cos"):
            angle = int(m.group("cnum") or 1) * np.pi / int(m.group("cden") or 1)
            total += 1 + 2 * np.cos(angle)
        elif m.group("exp"):
            angle = int(m.group("enum") or 1) * np.pi / int(m.group("eden") or 1)
            total += np.exp(1j * angle)
        else:
            total += int(m.group("one"))
        pos = m.end()
        first = False
    if first:
        raise ValueError("empty exact form")
    return complex(total)


# records ---------------------------------------------------------------------

@dataclass
class PointRecord:
    epsilon: Fraction
    x_class: tuple[Fraction, ...]
    y_class: tuple[Fraction, ...]
    z_class: tuple[Fraction, ...]
    target: tuple[Fraction, ...]
    t_xy: complex
    t_x_inv_y: complex
    im_comm: float
    u: tuple[float, ...]
    orientation: int
    residuals: dict[str, float]
    exact_xy: str | None = None
    exact_x_inv_y: str | None = None

    @classmethod
    def from_point(cls, pt: RepPoint, r: int) -> "PointRecord":
        orders = (r, 3)
        return cls(
            pt.epsilon.exponent,
            pt.x_class.exponents,
            pt.y_class.exponents,
            pt.z_class.exponents,
            tuple(sorted(pt.target.exponents)),
            pt.t_xy,
            pt.t_x_inv_y,
            pt.im_comm,
            tuple(pt.witness.u),
            pt.witness.orientation,
            dict(pt.residuals),
            recognize_exact(pt.t_xy, orders),
            recognize_exact(pt.t_x_inv_y, orders),
        )

    @property
    def central(self) -> CentralElement:
        k = self.epsilon * 3
        if k.denominator != 1 or k not in (0, 1, 2):
            raise MalformedRunError(f"epsilon exponent {self.epsilon} is not k/3")
        return CentralElement(int(k))

    @property
    def witness(self) -> FreeParams:
        return FreeParams(self.u, self.orientation)

    def to_json(self) -> dict:
        def cplx(z, exact):
            return {"re": fmt_float(z.real), "im": fmt_float(z.imag), "exact": exact}

        return {
            "epsilon": f"{self.epsilon.numerator * (3 // self.epsilon.denominator)}/3",
            "x_class": [str(f) for f in self.x_class],
            "y_class": [str(f) for f in self.y_class],
            "z_class": [str(f) for f in self.z_class],
            "target": [str(f) for f in self.target],
            "t_xy": cplx(self.t_xy, self.exact_xy),
            "t_x_inv_y": cplx(self.t_x_inv_y, self.exact_x_inv_y),
            "im_comm": fmt_float(self.im_comm),
            "witness": {"u": [fmt_float(v) for v in self.u], "orientation": self.orientation},
            "residuals": {k: fmt_float(v) for k, v in self.residuals.items()},
        }

    @classmethod
    def from_json(cls, d) -> "PointRecord":
        try:
            def triple(key):
                vals = d[key]
                if not isinstance(vals, list) or len(vals) != 3:
                    raise MalformedRunError(f"{key} must be a list of three exponents")
                return tuple(_fraction(v) for v in vals)

            def cplx(key):
                z = d[key]
                exact = z.get("exact")
                if exact is not None and not isinstance(exact, str):
                    raise MalformedRunError(f"{key}.exact must be a string or null")
                return complex(_float(z["re"]), _float(z["im"])), exact

            t_xy, exact_xy = cplx("t_xy")
            t_inv, exact_inv = cplx("t_x_inv_y")
            w = d["witness"]
            u = tuple(_float(v) for v in w["u"])
            if len(u) != 4:
                raise MalformedRunError("witness u must have four entries")
            orientation = w["orientation"]
            if orientation not in (1, -1) or isinstance(orientation, bool):
                raise MalformedRunError("witness orientation must be 1 or -1")
            rec = cls(
                _fraction(d["epsilon"]),
                triple("x_class"),
                triple("y_class"),
                triple("z_class"),
                triple("target"),
                t_xy,
                t_inv,
                _float(d["im_comm"]),
                u,
                orientation,
                {str(k): _float(v) for k, v in d["residuals"].items()},
                exact_xy,
                exact_inv,
            )
        except (KeyError, TypeError, AttributeError) as exc:
            raise MalformedRunError(f"point record is incomplete: {exc!r}") from None
        rec.central  # validates epsilon
        return rec


@dataclass
class RunDocument:
    version: str
    presentation: BrieskornPresentation
    config: dict
    diagnostics: dict[str, int]
    points: list[PointRecord]
    wall_time: float | None = None
    tool: str = TOOL

    @classmethod
    def from_result(cls, result: SearchResult, version: str, wall_time: float | None = None) -> "RunDocument":
        records = [PointRecord.from_point(pt, result.presentation.r) for pt in result.points]
        return cls(version, result.presentation, result.config.echo(), dict(result.diagnostics), records, wall_time)

    def search_config(self) -> SearchConfig:
        try:
            return SearchConfig(**self.config)
        except TypeError as exc:
            raise MalformedRunError(f"config block not understood: {exc}") from None

    def to_json(self) -> dict:
        pres = self.presentation
        manifest = {
            "tool": self.tool,
            "version": self.version,
            "presentation": {k: getattr(pres, k) for k in ("p", "q", "r", "a", "b", "c")},
            "config": self.config,
            "point_count": len(self.points),
            "wall_time": None if self.wall_time is None else fmt_float(self.wall_time),
            "completeness": {
                "patch_bound": self.config["patch_bound"],
                "grid_step": self.config["grid_step"],
            },
            "diagnostics": self.diagnostics,
        }
        return {"manifest": manifest, "points": [p.to_json() for p in self.points]}


def emit_run(doc: RunDocument) -> str:
    return json.dumps(doc.to_json(), indent=2, ensure_ascii=False) + "\n"


def parse_run(text: str) -> RunDocument:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedRunError(f"not valid JSON: {exc}") from None
    try:
        man = raw["manifest"]
        pres = BrieskornPresentation(**{k: int(man["presentation"][k]) for k in ("p", "q", "r", "a", "b", "c")})
        points = [PointRecord.from_json(p) for p in raw["points"]]
        if man["point_count"] != len(points):
            raise MalformedRunError(f"point_count {man['point_count']} but {len(points)} records")
        wall = man.get("wall_time")
        doc = RunDocument(
            str(man["version"]),
            pres,
            dict(man["config"]),
            dict(man["diagnostics"]),
            points,
            None if wall is None else _float(wall),
            str(man["tool"]),
        )
    except (KeyError, TypeError, AttributeError, PresentationError) as exc:
        if isinstance(exc, MalformedRunError):
            raise
        raise MalformedRunError(f"run manifest is incomplete: {exc!r}") from None
    doc.search_config()
    return doc


def read_run(path) -> RunDocument:
    with open(path, encoding="utf-8") as fh:
        return parse_run(fh.read())


def write_run(doc: RunDocument, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(emit_run(doc))


# re-certification ------------------------------------------------------------

@dataclass
class RecordCheck:
    index: int
    accepted: bool
    residuals: dict[str, float]
    coordinate_error: float
    reason: str = ""
    notes: list[str] = field(default_factory=list)


def recertify(doc: RunDocument, rec: PointRecord, index: int = 0) -> RecordCheck:
    """Rebuild the witness of ``rec`` and compare against what was stored."""
    cfg = doc.search_config()
    x, y = ClassLabel(rec.x_class), ClassLabel(rec.y_class)
    try:
        cert = certify(rec.central, x, y, rec.witness, doc.presentation, cfg)
    except (ValueError, ArithmeticError) as exc:
        return RecordCheck(index, False, {}, float("inf"), f"witness rejected: {exc}")
    stored = np.array([rec.t_xy.real, rec.t_xy.imag, rec.t_x_inv_y.real, rec.t_x_inv_y.imag, rec.im_comm])
    fresh = np.array([cert.t_xy.real, cert.t_xy.imag, cert.t_x_inv_y.real, cert.t_x_inv_y.imag, cert.im_comm])
    err = float(np.abs(stored - fresh).max())
    reason = cert.reason
    if not reason and err > 10 * cfg.solve_tol:
        reason = f"stored coordinates differ from recomputed ones by {err:.3e}"
    if not reason and cert.z_class is not None and cert.z_class.exponents != ClassLabel(rec.z_class).exponents:
        reason = "stored z class does not match"
    if not reason and abs(TargetTrace(rec.target).value - cert.t_xy) > 1e-6:
        reason = "stored target does not match t_xy"
    notes = []
    for label, z, exact in (("t_xy", rec.t_xy, rec.exact_xy), ("t_x_inv_y", rec.t_x_inv_y, rec.exact_x_inv_y)):
        if exact is not None:
            try:
                off = abs(evaluate_exact_form(exact) - z)
            except ValueError as exc:
                notes.append(f"{label}: {exc}")
                continue
            if off > EXACT_TOL:
                notes.append(f"{label}: exact form {exact} is {off:.3e} from the stored value")
    if not reason and notes:
        reason = "; ".join(notes)
    return RecordCheck(index, not reason, cert.relation_residuals, err, reason, notes)


# tables ----------------------------------------------------------------------

def _class_str(exponents) -> str:
    return str(ClassLabel(tuple(exponents)))


def format_table(doc: RunDocument) -> str:
    pres = doc.presentation
    lines = [
        f"Sigma({pres.p},{pres.q},{pres.r})  weights (a,b,c) = ({pres.a},{pres.b},{pres.c})"
        f"  points: {len(doc.points)}"
    ]
    if not doc.points:
        return lines[0] + "\n"
    header = ("#", "eps", "x class", "y class", "t_xy = t_x^-1y" if _all_equal(doc) else "t_xy", "Im t_[x,y]", "max resid")
    rows = []
    for i, rec in enumerate(doc.points, 1):
        t = rec.exact_xy or f"{rec.t_xy.real:.6f}{rec.t_xy.imag:+.6f}i"
        if not _all_equal(doc):
            t += f" | {rec.exact_x_inv_y or f'{rec.t_x_inv_y.real:.6f}{rec.t_x_inv_y.imag:+.6f}i'}"
        rows.append((
            str(i),
            format_epsilon(rec.epsilon),
            _class_str(rec.x_class),
            _class_str(rec.y_class),
            t,
            f"{rec.im_comm:.1e}",
            f"{max(rec.residuals.values(), default=0.0):.1e}",
        ))
    widths = [max(len(r[k]) for r in rows + [header]) for k in range(len(header))]
    fmt = lambda row: "  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip()
    lines.append(fmt(header))
    lines.append(fmt(tuple("-" * w for w in widths)))
    lines.extend(fmt(r) for r in rows)
    return "\n".join(lines) + "\n"


def _all_equal(doc: RunDocument) -> bool:
    return all(abs(r.t_xy - r.t_x_inv_y) <= 1e-8 for r in doc.points)


def format_epsilon(f: Fraction) -> str:
    k = int(f * 3) % 3
    return {0: "1", 1: "e^{2πi/3}", 2: "e^{4πi/3}"}[k]
