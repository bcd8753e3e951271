"""Spectral analysis of the Swanson oscillator ``w (a^dagger a + 1/2) + alpha a^2 + beta (a^dagger)^2``."""

__version__ = "0.1.0"

from .errors import *  # noqa: E402,F401,F403
from .fock_matrix import (  # noqa: E402
    FockMatrix,
    SpectrumResult,
    TruncationReport,
    convergence_study,
    eigenvalues,
    materialize,
)
from .model import (  # noqa: E402
    SpectrumClass,
    SwansonParams,
    build_swanson,
    case2_hermitian,
    classify,
    exact_energy,
    hermitian_equivalent_case1,
)
from .perturbation import (  # noqa: E402
    PerturbSeries,
    closed_form_order2,
    closed_form_order4,
    convergence_diagnostic,
    matrix_element,
    rs_corrections,
)
from .quad_ops import (  # noqa: E402
    CONVENTION,
    PhaseQuadratic,
    QuadraticOperator,
    conjugate_by_gaussian,
    conjugate_by_ladder_squeeze,
    exact_spectrum,
    formal_omega_squared,
    is_hermitian,
    to_ladder_basis,
    to_phase_basis,
)
from .transforms import (  # noqa: E402
    TransformChain,
    case1_hermitize,
    case2_chain,
    verify_isospectral,
)
