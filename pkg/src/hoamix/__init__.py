"""hoamix: higher-order antibunching analysis for multiwave mixing.

Exact normal-ordered ladder-operator algebra, graded short-time Heisenberg
solutions, antibunching criteria over product initial states, and a
truncated-Fock numerical oracle that cross-checks every symbolic result.
"""

from .algebra import (
    CR_I,
    CR_ONE,
    CR_ZERO,
    ComplexRational,
    ModeSetError,
    NormalMonomial,
    OperatorPolynomial,
    add,
    adjoint,
    commutator,
    multiply,
    normal_order_product,
)
from .heisenberg import (
    EvolvedOperator,
    InteractionSpec,
    ModeCoupling,
    PRESETS,
    ResonanceError,
    Role,
    evolve_mode,
    factorial_moment_operator,
    heisenberg_derivative,
    interaction_hamiltonian,
    spec_from_dict,
    spec_to_dict,
)
from .statistics import (
    Classification,
    Coherent,
    DegenerateStateError,
    ExpectationSeries,
    Fock,
    NumericPoint,
    ProductState,
    Vacuum,
    ba_an_A,
    classify,
    expect,
    hoa_d,
    lee_R,
    moment_series,
)
from .fock import (
    FockDimensionError,
    TruncationSpec,
    WindowTooLargeError,
    coherent_state,
    default_truncation,
    evolve,
    ladder_matrix,
    leading_coefficient,
    materialize,
    numeric_d,
    state_vector,
)

__version__ = "0.1.0"
