"""Presentation data for Brieskorn spheres and the admissible eigenvalue data.

pi_1 Sigma(p,q,r) = < x, y, z, h | h central, x^p h^a = y^q h^b = z^r h^c = xyz = 1 >

with a qr + b pr + c pq = 1.  Roots of unity are kept exact as
``Fraction`` exponents f in [0, 1), meaning e^{2 pi i f}.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np


class PresentationError(ValueError):
    pass


def root(f: Fraction) -> complex:
    f = Fraction(f) % 1
    if f == 0:
        return 1 + 0j
    if f == Fraction(1, 2):
        return -1 + 0j
    if f.denominator == 3:
        # keeps eps^3 = 1 to the last bit or so
        return complex(-0.5, (1 if f.numerator == 1 else -1) * np.sqrt(3) / 2)
    return complex(np.exp(2j * np.pi * float(f)))


def _arg_key(f: Fraction) -> Fraction:
    # Principal argument in units of 2 pi, range (-1/2, 1/2].
    f = Fraction(f) % 1
    return f if f <= Fraction(1, 2) else f - 1


def check_coprime(p: int, q: int, r: int) -> None:
    for v in (p, q, r):
        if not isinstance(v, (int, np.integer)) or v < 1:
            raise PresentationError(f"p, q, r must be positive integers, got {(p, q, r)}")
    for u, v in ((p, q), (p, r), (q, r)):
        if math.gcd(u, v) != 1:
            raise PresentationError(f"{(p, q, r)} is not pairwise coprime")


@dataclass(frozen=True)
class BrieskornPresentation:
    p: int
    q: int
    r: int
    a: int
    b: int
    c: int

    def __post_init__(self):
        check_coprime(self.p, self.q, self.r)
        if self.a * self.q * self.r + self.b * self.p * self.r + self.c * self.p * self.q != 1:
            raise PresentationError(
                f"weights {(self.a, self.b, self.c)} do not satisfy a qr + b pr + c pq = 1"
                f" for {(self.p, self.q, self.r)}"
            )

    @classmethod
    def canonical(cls, p: int, q: int, r: int) -> "BrieskornPresentation":
        return cls(p, q, r, *solve_weights(p, q, r))

    @property
    def weights(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)


def solve_weights(p: int, q: int, r: int) -> tuple[int, int, int]:
    """The solution of a qr + b pr + c pq = 1 with least |a|+|b|+|c|.

    Ties are broken lexicographically on (a, b, c).
    """
    check_coprime(p, q, r)
    a0 = pow(q * r, -1, p) if p > 1 else 0
    b0 = pow(p * r, -1, q) if q > 1 else 0
    span = max(p, q, r) + 2
    best = None
    for i in range(-span, span + 1):
        a = a0 + p * i
        for j in range(-span, span + 1):
            b = b0 + q * j
            num = 1 - a * q * r - b * p * r
            if num % (p * q):
                continue
            c = num // (p * q)
            key = (abs(a) + abs(b) + abs(c), (a, b, c))
            if best is None or key < best:
                best = key
    return best[1]


@dataclass(frozen=True)
class CentralElement:
    """h = eps I with eps = e^{2 pi i k / 3}."""

    k: int

    def __post_init__(self):
        if self.k not in (0, 1, 2):
            raise ValueError("central element index must be 0, 1 or 2")

    @property
    def exponent(self) -> Fraction:
        return Fraction(self.k, 3)

    @property
    def epsilon(self) -> complex:
        return root(self.exponent)

    def matrix(self) -> np.ndarray:
        return self.epsilon * np.eye(3, dtype=complex)


def enumerate_central() -> list[CentralElement]:
    return [CentralElement(k) for k in range(3)]


@dataclass(frozen=True, order=True)
class ClassLabel:
    """A conjugacy class of elliptic elements with root-of-unity eigenvalues.

    Slots 1 and 2 carry the positive-type eigenvalues and slot 3 the negative
    type one.  The canonical form orders slots 1-2 by principal argument.
    """

    exponents: tuple[Fraction, Fraction, Fraction]

    def __post_init__(self):
        e = tuple(Fraction(f) % 1 for f in self.exponents)
        if len(e) != 3:
            raise ValueError("a class label needs three exponents")
        first, second = sorted(e[:2], key=_arg_key)
        object.__setattr__(self, "exponents", (first, second, e[2]))

    @property
    def values(self) -> np.ndarray:
        return np.array([root(f) for f in self.exponents])

    @property
    def is_central(self) -> bool:
        return self.exponents[0] == self.exponents[1] == self.exponents[2]

    @property
    def determinant_exponent(self) -> Fraction:
        return sum(self.exponents, Fraction(0)) % 1

    def matrix(self) -> np.ndarray:
        return np.diag(self.values)

    def __str__(self):
        return "diag(" + ", ".join(format_root(f) for f in self.exponents) + ")"


def format_root(f: Fraction) -> str:
    """e^{2 pi i f} written the way the tables print it, e.g. e^{4πi/3}."""
    f = Fraction(f) % 1
    if f == 0:
        return "1"
    if f == Fraction(1, 2):
        return "-1"
    num = (2 * f).numerator
    den = (2 * f).denominator
    top = "π" if num == 1 else f"{num}π"
    return f"e^{{{top}i}}" if den == 1 else f"e^{{{top}i/{den}}}"


def nth_roots_of(n: int, target: Fraction) -> list[Fraction]:
    """All f with n f = target (mod 1)."""
    if n < 1:
        raise ValueError("n must be positive")
    target = Fraction(target) % 1
    return sorted(((target + j) / n) % 1 for j in range(n))


def admissible_triples(n: int, exponent: int, eps: CentralElement) -> list[tuple[Fraction, ...]]:
    """Every ordered triple v with v_i^n = eps^{-exponent} and v1 v2 v3 = 1."""
    roots = nth_roots_of(n, -exponent * eps.exponent)
    return [t for t in itertools.product(roots, repeat=3) if sum(t) % 1 == 0]


def admissible_classes(n: int, exponent: int, eps: CentralElement) -> list[ClassLabel]:
    """Classes g with g^n h^exponent = 1 for h = eps I, up to swapping slots 1-2.

    May be empty.  Central classes are included; check ``is_central``.
    """
    labels = {ClassLabel(t) for t in admissible_triples(n, exponent, eps)}
    return sorted(labels, key=_label_sort_key)


def _label_sort_key(label: ClassLabel):
    return tuple(_arg_key(f) for f in (label.exponents[2],) + label.exponents[:2])


@dataclass(frozen=True)
class TargetTrace:
    """A candidate value of t_xy: a sum of three unit roots with product 1."""

    exponents: tuple[Fraction, Fraction, Fraction]

    @property
    def value(self) -> complex:
        return complex(sum(root(f) for f in self.exponents))

    @property
    def distinct(self) -> bool:
        return len(set(self.exponents)) == 3

    def exact_form(self) -> str:
        return format_root_sum(self.exponents)


def format_root_sum(exponents) -> str:
    """e.g. ``e^{10πi/11}+e^{16πi/11}+e^{18πi/11}`` or ``1+2cos(2π/11)``."""
    e = sorted(Fraction(f) % 1 for f in exponents)
    if len(e) == 3 and e[0] == 0 and e[1] != 0 and e[1] + e[2] == 1 and e[1] != e[2]:
        twice = 2 * e[1]
        num, den = twice.numerator, twice.denominator
        top = "π" if num == 1 else f"{num}π"
        return f"1+2cos({top}/{den})" if den != 1 else f"1+2cos({top})"
    return "+".join(format_root(f) for f in e)


def admissible_xy_traces(r: int, c: int, eps: CentralElement) -> list[TargetTrace]:
    """Possible traces of xy = z^-1 when z^r h^c = 1.

    The eigenvalues w of xy satisfy w^r = eps^c and have product 1; values
    that coincide within 1e-10 are reported once.
    """
    if r < 1:
        raise ValueError("r must be positive")
    roots = nth_roots_of(r, c * eps.exponent)
    out: list[TargetTrace] = []
    for triple in itertools.combinations_with_replacement(roots, 3):
        if sum(triple) % 1 != 0:
            continue
        target = TargetTrace(tuple(triple))
        if all(abs(target.value - o.value) > 1e-10 for o in out):
            out.append(target)
    return out
