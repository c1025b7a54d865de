"""Exact normal-ordered algebra for multimode bosonic ladder operators.

A polynomial is a canonical sum of normal-ordered monomials.  Each monomial
carries an exact Gaussian-rational coefficient, a per-mode pair of
creation/annihilation exponents, and an integer grade counting powers of the
combined small parameter (coupling constant times time).  Terms whose grade
exceeds the polynomial's truncation order are dropped on construction.

All values are immutable and every operation is a pure function, so
polynomials can be shared freely between concurrent workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as cartesian
from typing import Iterable, Union

__all__ = [
    "CR_I",
    "CR_ONE",
    "CR_ZERO",
    "ComplexRational",
    "ModeSetError",
    "NormalMonomial",
    "OperatorPolynomial",
    "add",
    "adjoint",
    "commutator",
    "multiply",
    "normal_order_product",
]

_MODE_LETTERS = "ABCDEFGHIJKLMNOPQRSTUVWXYZ"

Rationalish = Union[int, Fraction]


class ModeSetError(ValueError):
    """Operands disagree on mode count or truncation grade."""


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected int or Fraction, got {type(value).__name__}")


@dataclass(frozen=True)
class ComplexRational:
    """Complex number with exact rational real and imaginary parts."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", _as_fraction(self.re))
        object.__setattr__(self, "im", _as_fraction(self.im))

    @property
    def is_zero(self) -> bool:
        return not self.re and not self.im

    def conjugate(self) -> "ComplexRational":
        return ComplexRational(self.re, -self.im)

    def __add__(self, other) -> "ComplexRational":
        other = _coerce(other)
        return ComplexRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other) -> "ComplexRational":
        other = _coerce(other)
        return ComplexRational(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "ComplexRational":
        return ComplexRational(-self.re, -self.im)

    def __mul__(self, other) -> "ComplexRational":
        other = _coerce(other)
        return ComplexRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __str__(self) -> str:
        if not self.im:
            return f"({self.re})"
        sign = "+" if self.im >= 0 else "-"
        return f"({self.re}{sign}{abs(self.im)}i)"


def _coerce(value) -> ComplexRational:
    if isinstance(value, ComplexRational):
        return value
    if isinstance(value, (int, Fraction)):
        return ComplexRational(_as_fraction(value))
    raise TypeError(f"cannot use {type(value).__name__} as an exact coefficient")


CR_ZERO = ComplexRational()
CR_ONE = ComplexRational(Fraction(1))
CR_I = ComplexRational(Fraction(0), Fraction(1))

Exponents = tuple  # tuple[tuple[int, int], ...]: per-mode (creation, annihilation)


@dataclass(frozen=True)
class NormalMonomial:
    """One normal-ordered term: coeff * (gt)^grade * prod_k adag_k^p_k a_k^q_k."""

    coeff: ComplexRational
    grade: int
    exps: Exponents

    def __post_init__(self):
        if self.grade < 0:
            raise ValueError("grade must be non-negative")
        for p, q in self.exps:
            if p < 0 or q < 0:
                raise ValueError("ladder exponents must be non-negative")

    @property
    def n_modes(self) -> int:
        return len(self.exps)

    @property
    def total_degree(self) -> int:
        return sum(p + q for p, q in self.exps)

    def adjoint(self) -> "NormalMonomial":
        swapped = tuple((q, p) for p, q in self.exps)
        return NormalMonomial(self.coeff.conjugate(), self.grade, swapped)


@dataclass(frozen=True)
class OperatorPolynomial:
    """Canonical, grade-truncated sum of normal-ordered monomials.

    Terms are kept sorted by (grade, exponent tuples); no two terms share a
    key and no term has a zero coefficient, so equal polynomials compare and
    serialize identically.
    """

    n_modes: int
    max_order: int
    terms: tuple

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(n_modes: int, max_order: int) -> "OperatorPolynomial":
        return OperatorPolynomial(n_modes, max_order, ())

    @staticmethod
    def one(n_modes: int, max_order: int) -> "OperatorPolynomial":
        return OperatorPolynomial.monomial(CR_ONE, 0, ((0, 0),) * n_modes, max_order)

    @staticmethod
    def monomial(coeff, grade: int, exps, max_order: int) -> "OperatorPolynomial":
        coeff = _coerce(coeff)
        exps = tuple((int(p), int(q)) for p, q in exps)
        if coeff.is_zero or grade > max_order:
            return OperatorPolynomial.zero(len(exps), max_order)
        term = NormalMonomial(coeff, grade, exps)
        return OperatorPolynomial(len(exps), max_order, (term,))

    @staticmethod
    def ladder(mode: int, n_modes: int, max_order: int, dagger: bool = False,
               coeff=CR_ONE, grade: int = 0) -> "OperatorPolynomial":
        """Single creation (dagger) or annihilation operator on one mode."""
        if not 0 <= mode < n_modes:
            raise ValueError(f"mode {mode} outside 0..{n_modes - 1}")
        exps = [(0, 0)] * n_modes
        exps[mode] = (1, 0) if dagger else (0, 1)
        return OperatorPolynomial.monomial(coeff, grade, exps, max_order)

    @staticmethod
    def from_terms(n_modes: int, max_order: int,
                   terms: Iterable[NormalMonomial]) -> "OperatorPolynomial":
        acc: dict = {}
        for t in terms:
            if t.n_modes != n_modes:
                raise ModeSetError("monomial mode count differs from polynomial")
            if t.grade > max_order:
                continue
            key = (t.grade, t.exps)
            acc[key] = acc.get(key, CR_ZERO) + t.coeff
        return _from_dict(n_modes, max_order, acc)

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: "OperatorPolynomial") -> "OperatorPolynomial":
        return add(self, other)

    def __sub__(self, other: "OperatorPolynomial") -> "OperatorPolynomial":
        return add(self, other.scaled(-1))

    def __mul__(self, other):
        if isinstance(other, OperatorPolynomial):
            return multiply(self, other)
        return self.scaled(other)

    def __rmul__(self, other):
        return self.scaled(other)

    def scaled(self, factor) -> "OperatorPolynomial":
        factor = _coerce(factor)
        if factor.is_zero:
            return OperatorPolynomial.zero(self.n_modes, self.max_order)
        scaled = tuple(
            NormalMonomial(t.coeff * factor, t.grade, t.exps) for t in self.terms
        )
        return OperatorPolynomial(self.n_modes, self.max_order, scaled)

    def adjoint(self) -> "OperatorPolynomial":
        return adjoint(self)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    # -- serialization -----------------------------------------------------

    def to_text(self) -> str:
        """Deterministic text form; the golden-file format."""
        if not self.terms:
            return "0"
        return " + ".join(_term_text(t) for t in self.terms)

    def __str__(self) -> str:
        return self.to_text()


def _from_dict(n_modes: int, max_order: int, acc: dict) -> OperatorPolynomial:
    terms = tuple(
        NormalMonomial(coeff, grade, exps)
        for (grade, exps), coeff in sorted(acc.items())
        if not coeff.is_zero
    )
    return OperatorPolynomial(n_modes, max_order, terms)


def _term_text(t: NormalMonomial) -> str:
    parts = [str(t.coeff)]
    if t.grade == 1:
        parts.append("(gt)")
    elif t.grade > 1:
        parts.append(f"(gt)^{t.grade}")
    ops = []
    for k, (p, q) in enumerate(t.exps):
        letter = _MODE_LETTERS[k] if k < len(_MODE_LETTERS) else f"M{k}"
        if p:
            ops.append(f"{letter}†" + (f"^{p}" if p > 1 else ""))
        if q:
            ops.append(f"{letter}" + (f"^{q}" if q > 1 else ""))
    if ops:
        parts.append(" ".join(ops))
    return "·".join(parts)


# -- core operations -------------------------------------------------------


def _mode_product_terms(pq1, pq2):
    """Normal-order a single mode's a^q1 adag^p2 sandwich.

    Yields (combinatorial factor, (p, q)) using
    a^q adag^p = sum_k k! C(q,k) C(p,k) adag^(p-k) a^(q-k).
    """
    p1, q1 = pq1
    p2, q2 = pq2
    for k in range(min(q1, p2) + 1):
        factor = math.factorial(k) * math.comb(q1, k) * math.comb(p2, k)
        yield factor, (p1 + p2 - k, q1 + q2 - k)


def _accumulate_product(acc: dict, left: NormalMonomial, right: NormalMonomial,
                        max_order: int) -> None:
    grade = left.grade + right.grade
    if grade > max_order:
        return
    base = left.coeff * right.coeff
    per_mode = [
        list(_mode_product_terms(pq1, pq2))
        for pq1, pq2 in zip(left.exps, right.exps)
    ]
    for combo in cartesian(*per_mode):
        factor = 1
        exps = []
        for f, pq in combo:
            factor *= f
            exps.append(pq)
        key = (grade, tuple(exps))
        acc[key] = acc.get(key, CR_ZERO) + base * factor


def normal_order_product(left: NormalMonomial, right: NormalMonomial,
                         max_order: int) -> OperatorPolynomial:
    """Normal-ordered expansion of the product of two monomials.

    Modes reorder independently (distinct modes commute); the product grade
    is the sum of the factor grades and anything above ``max_order`` is
    dropped.
    """
    if left.n_modes != right.n_modes:
        raise ModeSetError(
            f"mode count mismatch: {left.n_modes} vs {right.n_modes}"
        )
    acc: dict = {}
    _accumulate_product(acc, left, right, max_order)
    return _from_dict(left.n_modes, max_order, acc)


def _check_compatible(x: OperatorPolynomial, y: OperatorPolynomial) -> None:
    if x.n_modes != y.n_modes:
        raise ModeSetError(f"mode count mismatch: {x.n_modes} vs {y.n_modes}")
    if x.max_order != y.max_order:
        raise ModeSetError(
            f"truncation mismatch: {x.max_order} vs {y.max_order}"
        )


def add(x: OperatorPolynomial, y: OperatorPolynomial) -> OperatorPolynomial:
    """Termwise sum with like terms combined and zeros removed."""
    _check_compatible(x, y)
    acc = {(t.grade, t.exps): t.coeff for t in x.terms}
    for t in y.terms:
        key = (t.grade, t.exps)
        acc[key] = acc.get(key, CR_ZERO) + t.coeff
    return _from_dict(x.n_modes, x.max_order, acc)


def multiply(x: OperatorPolynomial, y: OperatorPolynomial) -> OperatorPolynomial:
    """Bilinear extension of the monomial product, truncated in grade."""
    _check_compatible(x, y)
    acc: dict = {}
    for tx in x.terms:
        for ty in y.terms:
            _accumulate_product(acc, tx, ty, x.max_order)
    return _from_dict(x.n_modes, x.max_order, acc)


def adjoint(x: OperatorPolynomial) -> OperatorPolynomial:
    """Hermitian conjugate: coefficients conjugated, (p, q) swapped per mode."""
    acc: dict = {}
    for t in x.terms:
        adj = t.adjoint()
        acc[(adj.grade, adj.exps)] = adj.coeff
    return _from_dict(x.n_modes, x.max_order, acc)


def commutator(x: OperatorPolynomial, y: OperatorPolynomial) -> OperatorPolynomial:
    """multiply(x, y) - multiply(y, x), canonicalized."""
    return add(multiply(x, y), multiply(y, x).scaled(-1))
