"""Exact numerical evolution in a truncated multimode Fock basis.

This is the independent ground truth for the symbolic pipeline: operators
are materialized as dense matrices over a tensor-product basis (mode 0
slowest), states evolve by Hermitian eigendecomposition, and short-time
leading coefficients are extracted by Richardson extrapolation.

Every public function is pure apart from an internal, lock-protected cache
of eigendecompositions, so concurrent evaluations are safe.
"""

from __future__ import annotations

import math
import threading
from collections import OrderedDict
from dataclasses import dataclass

import numpy as np

from .algebra import OperatorPolynomial
from .heisenberg import InteractionSpec, interaction_hamiltonian
from .statistics import Coherent, Fock, ProductState, Vacuum

__all__ = [
    "FockDimensionError",
    "TruncationSpec",
    "WindowTooLargeError",
    "coherent_state",
    "default_truncation",
    "evolve",
    "ladder_matrix",
    "leading_coefficient",
    "materialize",
    "numeric_d",
    "numeric_mode_mean",
    "state_vector",
    "weighted_number_expectation",
]

DEFAULT_DIMENSION_CAP = 200_000
COHERENT_TAIL_TOL = 1e-10
HERMITICITY_TOL = 1e-12
NORM_DRIFT_TOL = 1e-10
WINDOW_RTOL = 0.05
ZERO_COEFF_ATOL = 1e-10


class FockDimensionError(ValueError):
    """A truncation is too small (or too large for the dimension cap)."""

    def __init__(self, message: str, suggested_dim: int | None = None):
        super().__init__(message)
        self.suggested_dim = suggested_dim


class WindowTooLargeError(RuntimeError):
    """Short-time extrapolation did not converge; shrink the time window."""


@dataclass(frozen=True)
class TruncationSpec:
    """Per-mode Fock dimensions, capped in total product size."""

    dims: tuple
    cap: int = DEFAULT_DIMENSION_CAP

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        if any(d < 2 for d in self.dims):
            raise FockDimensionError("every mode needs at least 2 Fock levels")
        if self.total_dim > self.cap:
            raise FockDimensionError(
                f"product dimension {self.total_dim} exceeds cap {self.cap}"
            )

    @property
    def total_dim(self) -> int:
        return math.prod(self.dims)


def ladder_matrix(dim: int):
    """(annihilation, creation) matrices on a dim-level Fock space."""
    if dim < 2:
        raise FockDimensionError("ladder matrices need dim >= 2")
    a = np.zeros((dim, dim), dtype=complex)
    ns = np.arange(1, dim)
    a[ns - 1, ns] = np.sqrt(ns)
    return a, a.conj().T


def _mode_operator(dim: int, p: int, q: int) -> np.ndarray:
    """Matrix of adag^p a^q on a single mode."""
    a, adag = ladder_matrix(dim)
    out = np.eye(dim, dtype=complex)
    for _ in range(p):
        out = adag @ out
    for _ in range(q):
        out = out @ a
    return out


def materialize(x: OperatorPolynomial, trunc: TruncationSpec,
                gt: float = 1.0) -> np.ndarray:
    """Dense matrix of a polynomial with (gt)^grade substituted numerically."""
    if x.n_modes != len(trunc.dims):
        raise FockDimensionError(
            f"operator has {x.n_modes} modes, truncation has {len(trunc.dims)}"
        )
    total = trunc.total_dim
    out = np.zeros((total, total), dtype=complex)
    cache: dict = {}
    for term in x.terms:
        factor = None
        for dim, (p, q) in zip(trunc.dims, term.exps):
            key = (dim, p, q)
            if key not in cache:
                cache[key] = _mode_operator(dim, p, q)
            factor = cache[key] if factor is None else np.kron(factor, cache[key])
        out += complex(term.coeff) * (gt ** term.grade) * factor
    return out


def suggested_coherent_dim(alpha: complex, tol: float = COHERENT_TAIL_TOL) -> int:
    """Smallest Fock dimension holding all but ``tol`` of a coherent state."""
    nbar = abs(alpha) ** 2
    log_term = -nbar  # log of e^-nbar * nbar^n / n!
    cumulative = math.exp(log_term)
    dim = 1
    while 1.0 - cumulative >= tol:
        log_term += math.log(nbar) - math.log(dim) if nbar > 0 else -math.inf
        cumulative += math.exp(log_term)
        dim += 1
        if dim > 10_000:
            raise FockDimensionError("coherent amplitude too large to truncate")
    return max(dim, 2)


def coherent_state(alpha: complex, dim: int) -> np.ndarray:
    """Truncated coherent-state vector, renormalized to unit norm.

    Raises when the truncated tail mass is not below 1e-10, suggesting a
    large-enough dimension instead.
    """
    alpha = complex(alpha)
    ns = np.arange(dim)
    log_fact = np.cumsum(np.concatenate(([0.0], np.log(np.arange(1, dim)))))
    magnitude = np.exp(-abs(alpha) ** 2 / 2 + ns * np.log(abs(alpha)) - log_fact / 2) \
        if alpha != 0 else (ns == 0).astype(float)
    phase = np.exp(1j * ns * np.angle(alpha)) if alpha != 0 else np.ones(dim)
    vec = magnitude * phase
    tail = 1.0 - float(np.sum(magnitude ** 2))
    if tail >= COHERENT_TAIL_TOL:
        raise FockDimensionError(
            f"coherent tail mass {tail:.3e} >= {COHERENT_TAIL_TOL:g} at dim {dim}",
            suggested_dim=suggested_coherent_dim(alpha),
        )
    return vec / np.linalg.norm(vec)


def state_vector(state: ProductState, trunc: TruncationSpec) -> np.ndarray:
    """Tensor-product state vector (mode 0 slowest)."""
    if state.n_modes != len(trunc.dims):
        raise FockDimensionError("state and truncation mode counts differ")
    vec = None
    for mode_state, dim in zip(state.modes, trunc.dims):
        if isinstance(mode_state, Vacuum):
            local = np.zeros(dim, dtype=complex)
            local[0] = 1.0
        elif isinstance(mode_state, Fock):
            if mode_state.n >= dim:
                raise FockDimensionError(
                    f"Fock level {mode_state.n} needs dim > {mode_state.n}",
                    suggested_dim=mode_state.n + 2,
                )
            local = np.zeros(dim, dtype=complex)
            local[mode_state.n] = 1.0
        else:
            if mode_state.amplitude is None:
                raise ValueError("numeric coherent amplitude required")
            local = coherent_state(mode_state.amplitude, dim)
        vec = local if vec is None else np.kron(vec, local)
    return vec


def _check_hermitian(h: np.ndarray) -> None:
    scale = max(1.0, float(np.max(np.abs(h))) if h.size else 1.0)
    deviation = float(np.max(np.abs(h - h.conj().T)))
    if deviation > HERMITICITY_TOL * scale:
        raise ValueError(f"matrix is not Hermitian (deviation {deviation:.3e})")


def evolve(h: np.ndarray, psi0: np.ndarray, t: float) -> np.ndarray:
    """exp(-i H t) psi0 via Hermitian eigendecomposition."""
    _check_hermitian(h)
    w, v = np.linalg.eigh(h)
    psi_t = v @ (np.exp(-1j * w * t) * (v.conj().T @ psi0))
    drift = abs(float(np.linalg.norm(psi_t)) - float(np.linalg.norm(psi0)))
    if drift > NORM_DRIFT_TOL:
        raise RuntimeError(f"evolution norm drift {drift:.3e}")
    return psi_t


# -- cached evolution engine --------------------------------------------------


class _System:
    """Eigendecomposed interaction Hamiltonian on one truncation."""

    def __init__(self, spec: InteractionSpec, trunc: TruncationSpec):
        self.spec = spec
        self.trunc = trunc
        h = materialize(interaction_hamiltonian(spec, 1), trunc, gt=1.0)
        _check_hermitian(h)
        self.eigvals, self.eigvecs = np.linalg.eigh(h)
        self._mode_numbers: dict = {}

    def evolve_state(self, psi0: np.ndarray, gt: float) -> np.ndarray:
        v = self.eigvecs
        psi_t = v @ (np.exp(-1j * self.eigvals * gt) * (v.conj().T @ psi0))
        drift = abs(float(np.linalg.norm(psi_t)) - 1.0)
        if drift > NORM_DRIFT_TOL:
            raise RuntimeError(f"evolution norm drift {drift:.3e}")
        return psi_t

    def mode_moment_matrix(self, mode: int, k: int) -> np.ndarray:
        """Full-space matrix of adag^k a^k on one mode."""
        key = (mode, k)
        if key not in self._mode_numbers:
            factor = None
            for m, dim in enumerate(self.trunc.dims):
                local = _mode_operator(dim, k, k) if m == mode \
                    else np.eye(dim, dtype=complex)
                factor = local if factor is None else np.kron(factor, local)
            self._mode_numbers[key] = factor
        return self._mode_numbers[key]


_SYSTEM_CACHE: OrderedDict = OrderedDict()
_SYSTEM_CACHE_MAX = 8
_SYSTEM_LOCK = threading.Lock()


def _system(spec: InteractionSpec, trunc: TruncationSpec) -> _System:
    key = (spec, trunc)
    with _SYSTEM_LOCK:
        if key in _SYSTEM_CACHE:
            _SYSTEM_CACHE.move_to_end(key)
            return _SYSTEM_CACHE[key]
    built = _System(spec, trunc)
    with _SYSTEM_LOCK:
        _SYSTEM_CACHE[key] = built
        while len(_SYSTEM_CACHE) > _SYSTEM_CACHE_MAX:
            _SYSTEM_CACHE.popitem(last=False)
    return built


def _expectation(op: np.ndarray, psi: np.ndarray) -> float:
    value = np.vdot(psi, op @ psi)
    return float(value.real)


def default_truncation(spec: InteractionSpec, state: ProductState,
                       l_max: int = 2) -> TruncationSpec:
    """Per-mode dimensions sized for short-time gains of a few quanta."""
    dims = []
    for coupling in spec.couplings:
        mode_state = state.modes[coupling.mode]
        e = coupling.exponent
        if isinstance(mode_state, Coherent):
            if mode_state.amplitude is None:
                raise ValueError("numeric coherent amplitude required")
            nbar = abs(mode_state.amplitude) ** 2
            dims.append(max(20, math.ceil(nbar + 8 * math.sqrt(nbar) + l_max * e)))
        elif isinstance(mode_state, Fock):
            dims.append(mode_state.n + 2 * e + 4)
        else:
            dims.append(2 * e + 4)
    return TruncationSpec(tuple(dims))


def numeric_d(spec: InteractionSpec, mode: int, l: int, state: ProductState,
              trunc: TruncationSpec, g: float, t: float) -> float:
    """Exact-in-truncation d(l) = <adag^(l+1) a^(l+1)> - <adag a>^(l+1)."""
    if l < 1:
        raise ValueError("criterion order l must be >= 1")
    system = _system(spec, trunc)
    psi_t = system.evolve_state(state_vector(state, trunc), g * t)
    moment = _expectation(system.mode_moment_matrix(mode, l + 1), psi_t)
    mean = _expectation(system.mode_moment_matrix(mode, 1), psi_t)
    return moment - mean ** (l + 1)


def numeric_mode_mean(spec: InteractionSpec, mode: int, state: ProductState,
                      trunc: TruncationSpec, g: float, t: float) -> float:
    system = _system(spec, trunc)
    psi_t = system.evolve_state(state_vector(state, trunc), g * t)
    return _expectation(system.mode_moment_matrix(mode, 1), psi_t)


def weighted_number_expectation(spec: InteractionSpec, weights,
                                state: ProductState, trunc: TruncationSpec,
                                g: float, t: float) -> float:
    """sum_k w_k <N_k>(t); constant in t for conserved weight vectors."""
    system = _system(spec, trunc)
    psi_t = system.evolve_state(state_vector(state, trunc), g * t)
    return sum(
        w * _expectation(system.mode_moment_matrix(k, 1), psi_t)
        for k, w in enumerate(weights)
        if w
    )


def leading_coefficient(spec: InteractionSpec, mode: int, l: int,
                        state: ProductState, trunc: TruncationSpec, g: float,
                        t1: float, t2: float, quantity: str = "d",
                        window_rtol: float = WINDOW_RTOL) -> float:
    """Richardson estimate of lim_{t->0} value/(gt)^2.

    Fits value = c (gt)^2 + c4 (gt)^4 through two sample times and returns
    c.  ``quantity`` selects the witness d(l) or the mode's mean photon gain.
    Raises WindowTooLargeError when the two naive estimates disagree by more
    than ``window_rtol`` relative, which signals higher-order contamination.
    """
    if not 0 < t1 < t2:
        raise ValueError("need 0 < t1 < t2")

    if quantity == "d":
        def sample(t):
            return numeric_d(spec, mode, l, state, trunc, g, t)
    elif quantity == "mean":
        base = numeric_mode_mean(spec, mode, state, trunc, g, 0.0)

        def sample(t):
            return numeric_mode_mean(spec, mode, state, trunc, g, t) - base
    else:
        raise ValueError(f"unknown quantity {quantity!r}")

    d1, d2 = sample(t1), sample(t2)
    x1, x2 = (g * t1) ** 2, (g * t2) ** 2
    c = (d1 * x2 ** 2 - d2 * x1 ** 2) / (x1 * x2 ** 2 - x2 * x1 ** 2)
    naive1, naive2 = d1 / x1, d2 / x2
    if abs(c) > ZERO_COEFF_ATOL and abs(naive1 - naive2) > window_rtol * abs(c):
        raise WindowTooLargeError(
            f"estimates {naive1:.6g} and {naive2:.6g} disagree beyond "
            f"{window_rtol:.0%}; shrink the (t1, t2) window"
        )
    return c
