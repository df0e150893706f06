"""Eigenvalue-multiset calculus for representations of compact quantum
groups: spectra of positive operators attached to unitary representations,
power-sum functionals, symmetry decisions, fusion-ring decomposition and
tensor-power growth measurement."""

__version__ = "0.1.0"

from .analysis import (
    CounterexampleReport,
    GrowthTable,
    RateEstimate,
    TheoremAudit,
    b_growth,
    build_counterexample,
    counterexample_ring,
    estimate_rate,
    growth_table,
    p_growth,
    theorem_audit,
)
from .config import GroupConfig, load_config, parse_config
from .errors import (
    CatalogMismatchError,
    ConvergenceError,
    InternalInvariantError,
    MultisetMismatchError,
    ParseError,
    QdimError,
    ResourceGuardError,
    TheoremViolationError,
    ValidationError,
)
from .fusion import (
    Decomposition,
    FreeAbelianDualRing,
    FreeGroupDualRing,
    FreeUnitaryRing,
    FusionRing,
    Guards,
    TemperleyLiebRing,
    conjugate_label,
    decompose_power,
    fuse,
    irrep_spectrum,
    tl_dimension,
)
from .numerics import (
    ComplexScalar,
    HermitianMatrix,
    Scalar,
    as_complex,
    as_scalar,
    eigenvalues_hermitian,
    get_precision,
    precision,
    scalar_sqrt,
    set_precision,
    solve_quadratic_positive,
    tolerance,
)
from .repexpr import evaluate, parse_rep, to_text
from .spectra import (
    DtProfile,
    RhoSpectrum,
    SymmetryVerdict,
    d_t,
    direct_sum,
    inverse_spectrum,
    is_symmetric,
    multiset_subtract,
    newton_equal,
    newton_reconstruct,
    power_sums,
    rho_from_F,
    symmetric_by_newton,
    tensor,
)
