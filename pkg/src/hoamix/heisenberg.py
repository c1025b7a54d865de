"""Interaction Hamiltonians and graded short-time Heisenberg solutions.

An interaction pattern assigns each mode an exponent and a role (created or
annihilated).  The rotating-frame Hamiltonian is g(G + G†) with
G = prod created adag^e * prod annihilated a^e; free rotation cancels out of
every mode derivative, so only the interaction part is kept and a single
integer grade tracks powers of (g t).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache

from .algebra import (
    CR_I,
    CR_ONE,
    ModeSetError,
    OperatorPolynomial,
    adjoint,
    commutator,
    multiply,
)

__all__ = [
    "EvolvedOperator",
    "InteractionSpec",
    "ModeCoupling",
    "PRESETS",
    "ResonanceError",
    "Role",
    "evolve_mode",
    "factorial_moment_operator",
    "heisenberg_derivative",
    "interaction_hamiltonian",
    "spec_from_dict",
    "spec_to_dict",
]

RESONANCE_RTOL = 1e-12


class ResonanceError(ValueError):
    """Supplied mode frequencies violate the multiwave resonance condition."""


class Role(str, Enum):
    CREATED = "created"
    ANNIHILATED = "annihilated"


@dataclass(frozen=True)
class ModeCoupling:
    mode: int
    exponent: int
    role: Role
    omega: float | None = None

    def __post_init__(self):
        if self.mode < 0:
            raise ValueError("mode index must be non-negative")
        if self.exponent < 1:
            raise ValueError("interaction exponent must be a positive integer")
        if self.omega is not None and self.omega <= 0:
            raise ValueError("mode frequency must be positive")


@dataclass(frozen=True)
class InteractionSpec:
    """Exponent pattern defining H_int = g(G + G†)."""

    couplings: tuple

    def __post_init__(self):
        object.__setattr__(self, "couplings", tuple(self.couplings))
        modes = sorted(c.mode for c in self.couplings)
        if modes != list(range(len(modes))):
            raise ValueError("mode indices must be contiguous starting at 0")
        roles = {c.role for c in self.couplings}
        if Role.CREATED not in roles or Role.ANNIHILATED not in roles:
            raise ValueError("need at least one created and one annihilated mode")
        omegas = [c.omega for c in self.couplings]
        if any(w is not None for w in omegas):
            if any(w is None for w in omegas):
                raise ValueError("frequencies must be given for all modes or none")
            self._check_resonance()

    def _check_resonance(self):
        created = sum(c.exponent * c.omega for c in self.couplings
                      if c.role is Role.CREATED)
        annihilated = sum(c.exponent * c.omega for c in self.couplings
                          if c.role is Role.ANNIHILATED)
        scale = max(abs(created), abs(annihilated))
        if abs(created - annihilated) > RESONANCE_RTOL * scale:
            raise ResonanceError(
                "resonance violated: sum(created e*omega) = "
                f"{created!r} differs from sum(annihilated e*omega) = "
                f"{annihilated!r}"
            )

    @property
    def n_modes(self) -> int:
        return len(self.couplings)

    def coupling(self, mode: int) -> ModeCoupling:
        for c in self.couplings:
            if c.mode == mode:
                return c
        raise ValueError(f"mode {mode} not part of this interaction")

    def monomial_exponents(self) -> tuple:
        """Per-mode (p, q) of G, ordered by mode index."""
        exps = [(0, 0)] * self.n_modes
        for c in self.couplings:
            exps[c.mode] = (c.exponent, 0) if c.role is Role.CREATED \
                else (0, c.exponent)
        return tuple(exps)


@dataclass(frozen=True)
class EvolvedOperator:
    """Graded Taylor solution X(t) for one mode's annihilation operator."""

    mode: int
    series: OperatorPolynomial
    order: int


def _pattern(*entries) -> InteractionSpec:
    return InteractionSpec(tuple(
        ModeCoupling(i, e, r) for i, (e, r) in enumerate(entries)
    ))


PRESETS: dict = {
    "sixwave-321": _pattern((3, Role.CREATED), (2, Role.ANNIHILATED), (1, Role.ANNIHILATED)),
    "sixwave-231": _pattern((2, Role.CREATED), (3, Role.ANNIHILATED), (1, Role.ANNIHILATED)),
    "fourwave-211": _pattern((2, Role.CREATED), (1, Role.ANNIHILATED), (1, Role.ANNIHILATED)),
    "shg-21": _pattern((2, Role.CREATED), (1, Role.ANNIHILATED)),
    "fivewave-32": _pattern((3, Role.CREATED), (2, Role.ANNIHILATED)),
    "thg-31": _pattern((3, Role.CREATED), (1, Role.ANNIHILATED)),
    "trilinear-111": _pattern((1, Role.CREATED), (1, Role.ANNIHILATED), (1, Role.ANNIHILATED)),
}


def spec_to_dict(spec: InteractionSpec) -> dict:
    """JSON-compatible form of an interaction pattern."""
    return {
        "modes": [
            {"mode": c.mode, "role": c.role.value, "exponent": c.exponent,
             **({"omega": c.omega} if c.omega is not None else {})}
            for c in spec.couplings
        ]
    }


def spec_from_dict(data: dict) -> InteractionSpec:
    """Parse the structured-text schema used by config files."""
    entries = data["modes"]
    couplings = []
    for entry in entries:
        couplings.append(ModeCoupling(
            mode=int(entry["mode"]),
            exponent=int(entry["exponent"]),
            role=Role(entry["role"]),
            omega=float(entry["omega"]) if "omega" in entry else None,
        ))
    return InteractionSpec(tuple(couplings))


@lru_cache(maxsize=None)
def interaction_hamiltonian(spec: InteractionSpec,
                            max_order: int = 2) -> OperatorPolynomial:
    """G + G† at grade 1 (rotating frame, free terms removed)."""
    g_part = OperatorPolynomial.monomial(
        CR_ONE, 1, spec.monomial_exponents(), max_order
    )
    return g_part + adjoint(g_part)


def heisenberg_derivative(h: OperatorPolynomial,
                          x: OperatorPolynomial) -> OperatorPolynomial:
    """i[H, X]; raises the grade by the Hamiltonian's grade (one)."""
    return commutator(h, x).scaled(CR_I)


@lru_cache(maxsize=None)
def evolve_mode(spec: InteractionSpec, mode: int, order: int) -> EvolvedOperator:
    """Taylor solution X(t) = sum_k (1/k!) D^k(x) with D = i[H_int, .].

    Each application of D carries one power of (g t), absorbed into the
    grade, so the k-th term needs no explicit t^k factor.
    """
    if order < 0:
        raise ValueError("order must be non-negative")
    if not 0 <= mode < spec.n_modes:
        raise ModeSetError(f"mode {mode} not in the interaction's mode set")
    x = OperatorPolynomial.ladder(mode, spec.n_modes, order)
    total = x
    if order >= 1:
        h = interaction_hamiltonian(spec, order)
        current = x
        for k in range(1, order + 1):
            current = heisenberg_derivative(h, current)
            total = total + current.scaled(Fraction(1, math.factorial(k)))
    return EvolvedOperator(mode=mode, series=total, order=order)


@lru_cache(maxsize=None)
def factorial_moment_operator(ev: EvolvedOperator, k: int) -> OperatorPolynomial:
    """adjoint(X(t))^k X(t)^k, normal-ordered and truncated at ev.order.

    k = 1 is the evolved number operator.
    """
    if k < 1:
        raise ValueError("moment order k must be >= 1")
    dag = adjoint(ev.series)
    result = dag
    for _ in range(k - 1):
        result = multiply(result, dag)
    for _ in range(k):
        result = multiply(result, ev.series)
    return result
