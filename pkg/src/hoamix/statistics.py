"""Expectation values over product states and antibunching criteria.

Expectations of normal-ordered polynomials factorize over modes: a coherent
mode contributes symbolic powers of its amplitude and conjugate, vacuum
contributes only through operator-free terms, and a Fock level contributes a
falling factorial.  The result is a power series in (gt) whose coefficients
are exact polynomials in the amplitude symbols.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence, Union

from .algebra import CR_ONE, CR_ZERO, ComplexRational, ModeSetError, OperatorPolynomial
from .heisenberg import InteractionSpec, evolve_mode, factorial_moment_operator

__all__ = [
    "AMPLITUDE_SYMBOLS",
    "Classification",
    "Coherent",
    "DegenerateStateError",
    "ExpectationSeries",
    "Fock",
    "NumericPoint",
    "ProductState",
    "Vacuum",
    "ba_an_A",
    "classify",
    "expect",
    "hoa_d",
    "lee_R",
    "moment_series",
]

AMPLITUDE_SYMBOLS = ("α", "β", "γ", "δ", "ε", "ζ", "η", "θ")

DEGENERATE_FLOOR = 1e-300


class DegenerateStateError(ValueError):
    """A moment-ratio denominator vanished (e.g. an all-vacuum state)."""


@dataclass(frozen=True)
class Vacuum:
    pass


@dataclass(frozen=True)
class Coherent:
    """Coherent mode; the amplitude stays a free symbol in series work.

    A numeric amplitude, when given, is used by the Fock-space oracle and as
    the default substitution point for numeric evaluation.
    """

    amplitude: complex | None = None


@dataclass(frozen=True)
class Fock:
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("Fock level must be non-negative")


ModeState = Union[Vacuum, Coherent, Fock]


@dataclass(frozen=True)
class ProductState:
    """One initial condition per mode."""

    modes: tuple

    def __post_init__(self):
        object.__setattr__(self, "modes", tuple(self.modes))
        for m in self.modes:
            if not isinstance(m, (Vacuum, Coherent, Fock)):
                raise TypeError(f"not a mode state: {m!r}")

    @property
    def n_modes(self) -> int:
        return len(self.modes)

    @staticmethod
    def vacuum(n_modes: int) -> "ProductState":
        return ProductState((Vacuum(),) * n_modes)

    @staticmethod
    def coherent_in(mode: int, n_modes: int,
                    amplitude: complex | None = None) -> "ProductState":
        """Coherent in one mode, vacuum elsewhere."""
        states = [Vacuum()] * n_modes
        states[mode] = Coherent(amplitude)
        return ProductState(tuple(states))

    def amplitudes(self, default: complex = 1.0) -> tuple:
        """Numeric amplitude per mode: coherent value (or default), else 0."""
        out = []
        for m in self.modes:
            if isinstance(m, Coherent):
                out.append(default if m.amplitude is None else complex(m.amplitude))
            else:
                out.append(0j)
        return tuple(out)


# -- expectation series ------------------------------------------------------

AmpPowers = tuple  # per-mode (conjugate power, plain power)


@dataclass(frozen=True)
class ExpectationSeries:
    """Power series in (gt) with exact coefficients in amplitude symbols.

    ``terms`` is a sorted tuple of (grade, amplitude powers, coefficient);
    amplitude powers hold one (conjugate, plain) pair per mode, identically
    (0, 0) for non-coherent modes.
    """

    n_modes: int
    max_order: int
    terms: tuple

    @staticmethod
    def zero(n_modes: int, max_order: int) -> "ExpectationSeries":
        return ExpectationSeries(n_modes, max_order, ())

    @staticmethod
    def one(n_modes: int, max_order: int) -> "ExpectationSeries":
        return _series_from_dict(n_modes, max_order,
                                 {(0, ((0, 0),) * n_modes): CR_ONE})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "ExpectationSeries") -> "ExpectationSeries":
        _check_series(self, other)
        acc = {(g, a): c for g, a, c in self.terms}
        for g, a, c in other.terms:
            acc[(g, a)] = acc.get((g, a), CR_ZERO) + c
        return _series_from_dict(self.n_modes, self.max_order, acc)

    def __sub__(self, other: "ExpectationSeries") -> "ExpectationSeries":
        return self + other.scaled(-1)

    def scaled(self, factor) -> "ExpectationSeries":
        acc = {}
        for g, a, c in self.terms:
            value = c * factor
            if not value.is_zero:
                acc[(g, a)] = value
        return _series_from_dict(self.n_modes, self.max_order, acc)

    def __mul__(self, other: "ExpectationSeries") -> "ExpectationSeries":
        _check_series(self, other)
        acc: dict = {}
        for g1, a1, c1 in self.terms:
            for g2, a2, c2 in other.terms:
                grade = g1 + g2
                if grade > self.max_order:
                    continue
                amps = tuple(
                    (p1 + p2, q1 + q2)
                    for (p1, q1), (p2, q2) in zip(a1, a2)
                )
                key = (grade, amps)
                acc[key] = acc.get(key, CR_ZERO) + c1 * c2
        return _series_from_dict(self.n_modes, self.max_order, acc)

    def __pow__(self, k: int) -> "ExpectationSeries":
        if k < 0:
            raise ValueError("negative series powers are not defined")
        result = ExpectationSeries.one(self.n_modes, self.max_order)
        for _ in range(k):
            result = result * self
        return result

    def conjugated(self) -> "ExpectationSeries":
        """Complex conjugate: coefficients conjugated, amplitude powers swapped."""
        acc = {}
        for g, a, c in self.terms:
            swapped = tuple((q, p) for p, q in a)
            acc[(g, swapped)] = c.conjugate()
        return _series_from_dict(self.n_modes, self.max_order, acc)

    @property
    def is_real(self) -> bool:
        return self == self.conjugated()

    def evaluate(self, amplitudes: Sequence[complex], gt: float) -> complex:
        if len(amplitudes) != self.n_modes:
            raise ModeSetError("amplitude count differs from mode count")
        total = 0j
        for g, a, c in self.terms:
            value = complex(c) * (gt ** g)
            for amp, (p, q) in zip(amplitudes, a):
                if p:
                    value *= complex(amp).conjugate() ** p
                if q:
                    value *= complex(amp) ** q
            total += value
        return total

    def grade_value(self, grade: int, amplitudes: Sequence[complex]) -> complex:
        """Coefficient of (gt)^grade after numeric amplitude substitution."""
        total = 0j
        for g, a, c in self.terms:
            if g != grade:
                continue
            value = complex(c)
            for amp, (p, q) in zip(amplitudes, a):
                if p:
                    value *= complex(amp).conjugate() ** p
                if q:
                    value *= complex(amp) ** q
            total += value
        return total

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(
            _series_term_text(g, a, c) for g, a, c in self.terms
        )

    def __str__(self) -> str:
        return self.to_text()


def _check_series(x: ExpectationSeries, y: ExpectationSeries) -> None:
    if x.n_modes != y.n_modes:
        raise ModeSetError(f"mode count mismatch: {x.n_modes} vs {y.n_modes}")
    if x.max_order != y.max_order:
        raise ModeSetError(f"truncation mismatch: {x.max_order} vs {y.max_order}")


def _series_from_dict(n_modes: int, max_order: int, acc: dict) -> ExpectationSeries:
    terms = tuple(
        (grade, amps, coeff)
        for (grade, amps), coeff in sorted(acc.items())
        if not coeff.is_zero and grade <= max_order
    )
    return ExpectationSeries(n_modes, max_order, terms)


def _series_term_text(grade: int, amps, coeff: ComplexRational) -> str:
    parts = [str(coeff)]
    if grade == 1:
        parts.append("(gt)")
    elif grade > 1:
        parts.append(f"(gt)^{grade}")
    for k, (p, q) in enumerate(amps):
        sym = AMPLITUDE_SYMBOLS[k] if k < len(AMPLITUDE_SYMBOLS) else f"z{k}"
        if p == q:
            if p:
                parts.append(f"|{sym}|^{2 * p}")
        else:
            if p:
                parts.append(f"{sym}*" + (f"^{p}" if p > 1 else ""))
            if q:
                parts.append(f"{sym}" + (f"^{q}" if q > 1 else ""))
    return "·".join(parts)


# -- expectation of an operator polynomial -----------------------------------


def expect(x: OperatorPolynomial, state: ProductState) -> ExpectationSeries:
    """Expectation of a normal-ordered polynomial over a product state."""
    if x.n_modes != state.n_modes:
        raise ModeSetError(
            f"operator has {x.n_modes} modes, state has {state.n_modes}"
        )
    acc: dict = {}
    for term in x.terms:
        coeff = term.coeff
        amps = []
        dead = False
        for mode_state, (p, q) in zip(state.modes, term.exps):
            if isinstance(mode_state, Coherent):
                amps.append((p, q))
                continue
            amps.append((0, 0))
            if isinstance(mode_state, Vacuum):
                if p or q:
                    dead = True
                    break
            else:  # Fock level n: nonzero only for p == q <= n
                if p != q:
                    dead = True
                    break
                if q > mode_state.n:
                    dead = True
                    break
                falling = math.factorial(mode_state.n) // math.factorial(mode_state.n - q)
                coeff = coeff * falling
        if dead:
            continue
        key = (term.grade, tuple(amps))
        acc[key] = acc.get(key, CR_ZERO) + coeff
    return _series_from_dict(x.n_modes, x.max_order, acc)


def moment_series(spec: InteractionSpec, mode: int, k: int, state: ProductState,
                  order: int = 2) -> ExpectationSeries:
    """Series for the k-th factorial moment of the evolved number operator."""
    ev = evolve_mode(spec, mode, order)
    return expect(factorial_moment_operator(ev, k), state)


def hoa_d(spec: InteractionSpec, mode: int, l: int, state: ProductState,
          order: int = 2) -> ExpectationSeries:
    """Antibunching witness d(l) = <N^(l+1)(t)> - <N(t)>^(l+1).

    The power of the mean series is expanded with the same grade cutoff as
    the moment, so grade-0 parts cancel exactly for coherent inputs.
    A negative series signals l-th order antibunching.
    """
    if l < 1:
        raise ValueError("criterion order l must be >= 1")
    moment = moment_series(spec, mode, l + 1, state, order)
    mean = moment_series(spec, mode, 1, state, order)
    return moment - mean ** (l + 1)


# -- numeric criteria ---------------------------------------------------------


@dataclass(frozen=True)
class NumericPoint:
    """Numeric substitution point: one amplitude per mode plus gt."""

    amplitudes: tuple
    gt: float

    def __post_init__(self):
        object.__setattr__(
            self, "amplitudes", tuple(complex(a) for a in self.amplitudes)
        )


def _real_moment(spec, mode, k, state, point, order):
    if k == 0:
        return 1.0
    series = moment_series(spec, mode, k, state, order)
    value = series.evaluate(point.amplitudes, point.gt)
    return value.real


def lee_R(spec: InteractionSpec, mode: int, l: int, m: int, state: ProductState,
          point: NumericPoint, order: int = 2) -> float:
    """Lee's ratio criterion R(l, m); negative values signal antibunching.

    R = <N^(l+1)><N^(m-1)> / (<N^(l)><N^(m)>) - 1 with <N^(0)> = 1,
    evaluated numerically from the truncated moment series.
    """
    if not l >= m >= 1:
        raise ValueError("need l >= m >= 1")
    num = _real_moment(spec, mode, l + 1, state, point, order) \
        * _real_moment(spec, mode, m - 1, state, point, order)
    den = _real_moment(spec, mode, l, state, point, order) \
        * _real_moment(spec, mode, m, state, point, order)
    if abs(den) < DEGENERATE_FLOOR:
        raise DegenerateStateError(
            "moment denominator vanished; the state carries no photons"
        )
    return num / den - 1.0


def ba_an_A(spec: InteractionSpec, mode: int, l: int, state: ProductState,
            point: NumericPoint, order: int = 2) -> float:
    """Ba An's criterion A_{x,l} = <N^(l+1)> / (<N^(l)><N>) - 1."""
    if l < 1:
        raise ValueError("criterion order l must be >= 1")
    num = _real_moment(spec, mode, l + 1, state, point, order)
    den = _real_moment(spec, mode, l, state, point, order) \
        * _real_moment(spec, mode, 1, state, point, order)
    if abs(den) < DEGENERATE_FLOOR:
        raise DegenerateStateError(
            "moment denominator vanished; the state carries no photons"
        )
    return num / den - 1.0


class Classification(Enum):
    ANTIBUNCHED = "antibunched"
    COHERENT = "coherent"
    BUNCHED = "bunched"


CLASSIFY_TOL = 1e-12


def classify(d: ExpectationSeries,
             amplitudes: Sequence[complex]) -> Classification:
    """Sign of the lowest-grade nonvanishing coefficient of a d series."""
    for grade in range(d.max_order + 1):
        value = d.grade_value(grade, amplitudes)
        if abs(value.imag) > CLASSIFY_TOL:
            raise ValueError(f"d series is not real at grade {grade}: {value}")
        if abs(value.real) > CLASSIFY_TOL:
            return (Classification.ANTIBUNCHED if value.real < 0
                    else Classification.BUNCHED)
    return Classification.COHERENT
