"""Traces of words in a pair of SU(2,1) matrices and the identities among them.

Words use the letters ``A``, ``B`` and their inverses ``a``, ``b``, so the
commutator is ``"ABab"``.  Spaced tokens like ``"A B A^-1 B^-1"`` are also
accepted by :func:`parse_word`.
"""

from __future__ import annotations

import enum
from typing import Callable, NamedTuple

import numpy as np

from .linalg import DEFAULT_TOL, ToleranceConfig, as_mat3, su21_inverse

conj = np.conj

_INVERSE_SUFFIXES = ("^-1", "⁻¹", "-1", "'")


def parse_word(word: str) -> tuple[str, ...]:
    """Normalize a word to a tuple over {'A', 'a', 'B', 'b'} (lowercase = inverse)."""
    if isinstance(word, (tuple, list)):
        letters = tuple(word)
        if not set(letters) <= {"A", "a", "B", "b"}:
            raise ValueError(f"bad letters in word {word!r}")
        return letters
    letters = []
    for token in word.split():
        if set(token) <= set("AaBb"):
            letters.extend(token)
            continue
        base, rest = token[0], token[1:]
        if base not in "AB" or rest not in _INVERSE_SUFFIXES:
            raise ValueError(f"cannot parse token {token!r} in word {word!r}")
        letters.append(base.lower())
    return tuple(letters)


def word_matrix(A, B, word, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    A = as_mat3(A)
    B = as_mat3(B)
    letters = parse_word(word)
    table = {"A": A, "B": B}
    if "a" in letters:
        table["a"] = su21_inverse(A, tol)
    if "b" in letters:
        table["b"] = su21_inverse(B, tol)
    out = np.eye(3, dtype=complex)
    for letter in letters:
        out = out @ table[letter]
    return out


def word_trace(A, B, word, tol: ToleranceConfig = DEFAULT_TOL) -> complex:
    return complex(np.trace(word_matrix(A, B, word, tol)))


class TraceTuple(NamedTuple):
    """The basic traces (t_A, t_B, t_AB, t_{A^-1 B})."""

    a: complex
    b: complex
    c: complex
    d: complex


def trace_tuple(A, B, tol: ToleranceConfig = DEFAULT_TOL) -> TraceTuple:
    return TraceTuple(
        word_trace(A, B, "A", tol),
        word_trace(A, B, "B", tol),
        word_trace(A, B, "AB", tol),
        word_trace(A, B, "aB", tol),
    )


def comm_trace_direct(A, B, tol: ToleranceConfig = DEFAULT_TOL) -> complex:
    return word_trace(A, B, "ABab", tol)


class IdentityName(enum.Enum):
    I = "I"
    II = "II"
    III = "III"
    IV = "IV"
    V = "V"
    VI = "VI"
    VII = "VII"


def _sides_i(A, B, tol):
    return word_trace(A, B, "a", tol), conj(word_trace(A, B, "A", tol))


def _sides_ii(A, B, tol):
    ta = word_trace(A, B, "A", tol)
    return word_trace(A, B, "AA", tol), ta ** 2 - 2 * conj(ta)


def _sides_iii(A, B, tol):
    ta = word_trace(A, B, "A", tol)
    return word_trace(A, B, "AAA", tol), ta ** 3 - 3 * abs(ta) ** 2 + 3


def _sides_iv(A, B, tol):
    a, b, c, d = trace_tuple(A, B, tol)
    return word_trace(A, B, "AAB", tol), a * c - conj(a) * b + d


def _sides_v(A, B, tol):
    # As printed; see check.py for how a systematic mismatch is reported.
    a, b, c, d = trace_tuple(A, B, tol)
    rhs = a * b * c - a ** 2 * conj(b) + a * conj(d) - conj(a) * b ** 2 + conj(a * b) + b * d
    return word_trace(A, B, "AABB", tol), rhs


def _sides_vi(A, B, tol):
    a, b, c, d = trace_tuple(A, B, tol)
    rhs = c * conj(d) + conj(c) * b + conj(b) * d + conj(a) * (1 - abs(b) ** 2)
    return word_trace(A, B, "ABAb", tol), rhs


def _sides_vii(A, B, tol):
    c = word_trace(A, B, "AB", tol)
    rhs = comm_trace_direct(A, B, tol) + c * word_trace(A, B, "AABB", tol) - c * conj(c)
    return word_trace(A, B, "ABAABB", tol), rhs


IDENTITIES: dict[IdentityName, Callable] = {
    IdentityName.I: _sides_i,
    IdentityName.II: _sides_ii,
    IdentityName.III: _sides_iii,
    IdentityName.IV: _sides_iv,
    IdentityName.V: _sides_v,
    IdentityName.VI: _sides_vi,
    IdentityName.VII: _sides_vii,
}


def identity_sides(name, A, B, tol: ToleranceConfig = DEFAULT_TOL) -> tuple[complex, complex]:
    name = IdentityName(name) if not isinstance(name, IdentityName) else name
    lhs, rhs = IDENTITIES[name](A, B, tol)
    return complex(lhs), complex(rhs)


def identity_residual(name, A, B, tol: ToleranceConfig = DEFAULT_TOL) -> float:
    lhs, rhs = identity_sides(name, A, B, tol)
    return abs(lhs - rhs)


def identity_scale(name, A, B, tol: ToleranceConfig = DEFAULT_TOL) -> float:
    """A magnitude against which a residual can be judged relatively."""
    lhs, rhs = identity_sides(name, A, B, tol)
    a, b, c, d = trace_tuple(A, B, tol)
    basic = max(1.0, abs(a), abs(b), abs(c), abs(d))
    return max(abs(lhs), abs(rhs), basic ** 3)


def _conj_all(t: TraceTuple):
    return tuple(conj(v) for v in t)


def comm_trace_real(t: TraceTuple) -> float:
    """Re t_[A,B] as a polynomial in (a, b, c, d) and conjugates."""
    a, b, c, d = t
    ab = a * b
    total = 0.5 * (
        abs(ab) ** 2 + abs(a) ** 2 + abs(b) ** 2 + abs(c) ** 2 + abs(d) ** 2
        - ab * conj(c) - conj(ab) * c - a * conj(b) * d - conj(a) * b * conj(d)
        - 3
    )
    return float(np.real(total))


def comm_trace_im_sq(t: TraceTuple) -> float:
    """(Im t_[A,B])^2 as a polynomial; tiny negative values are clamped to 0."""
    a, b, c, d = t
    ca, cb, cc, cd = _conj_all(t)
    ab = a * b
    na, nb, nc, nd = abs(a) ** 2, abs(b) ** 2, abs(c) ** 2, abs(d) ** 2
    grouped = (
        abs(ab) ** 2 - na - nb + nc + nd
        - ab * cc - conj(ab) * c - a * cb * d - ca * b * cd
    )
    inner = (
        -a ** 3 * nb + a ** 2 * cb ** 2 * cd + a ** 2 * b ** 2 * c - a * nb * cd * c
        - na * b ** 3 - na * b * c * d + a ** 2 * cc * d
        + a ** 2 * cb * c + a ** 2 * cd * b + a * b ** 2 * d - 2 * a * b * c ** 2 + a * c * d ** 2
        + cb * cd * c ** 2 + b ** 2 * c * ca - 2 * b * d ** 2 * ca + c ** 2 * d * ca
        + a ** 3 + 1.5 * a * b * cc + 1.5 * a * cb * d - 3 * a * c * cd + b ** 3
        + b ** 2 * cc * cd - 3 * b * c * d + c ** 3 + d ** 3 + d ** 2 * cb * cc
    )
    total = (
        -0.25 * grouped ** 2
        + 2 * np.real(inner)
        + 2.5 * abs(ab) ** 2 + abs(c * d) ** 2
        - 4.5 * (na + nb + nc + nd)
        + 6.75
    )
    value = float(np.real(total))
    if -1e-8 <= value < 0:
        return 0.0
    return value


def reduced_trace(word: str, t: TraceTuple, t_comm: complex) -> complex:
    """Trace of a short word written in the five generating traces.

    Covers the words ``AAB``, ``AABB``, ``ABAb`` and ``ABAABB``.  The
    expressions come from multiplying the Cayley-Hamilton relation
    A^3 - t_A A^2 + conj(t_A) A - I = 0 by suitable words.
    """
    a, b, c, d = t
    ca, cb, cc, cd = _conj_all(t)
    a2b2 = a * b * c - a ** 2 * cb + a * cd - ca * b ** 2 + ca * cb + b * d + cc
    if word == "AAB":
        return a * c - ca * b + d
    if word == "AABB":
        return a2b2
    if word == "ABAb":
        return c * cd + cc * b + cb * d + ca * (1 - abs(b) ** 2)
    if word == "ABAABB":
        return t_comm + c * a2b2 - c * cc
    raise KeyError(f"no reduction recorded for word {word!r}")
