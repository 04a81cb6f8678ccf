"""Decoherence, fermionic concurrence and entanglement persistence of two
indistinguishable fermions with four single-particle levels."""

__version__ = "0.1.0"

from .adc import (
    ADCParams,
    KrausPair,
    adc_asymptotic,
    adc_evolve,
    adc_evolve_pure,
    kraus_pair,
    p_of_t,
)
from .dephasing import (
    L_SPECTRUM,
    ZERO_T,
    BathFunctions,
    BathParams,
    asymptotic_coherence,
    asymptotic_concurrence,
    asymptotic_state,
    bath_functions,
    delta_of_t,
    dephasing_factor,
    evolve,
    evolve_series,
    gamma_of_t,
    persistence,
    theta_of_t,
    time_grid,
    time_series,
)
from .errors import (
    BadLength,
    BadProbability,
    FermidecoError,
    MalformedStateFile,
    NonPhysical,
    QuadratureFailure,
    ZeroInitialEntanglement,
    ZeroNorm,
)
from .measures import (
    FLIP_MATRIX,
    ConcurrenceBreakdown,
    coherence,
    concurrence,
    concurrence_pure,
    purity,
    von_neumann_entropy,
)
from .sampling import (
    PersistenceRecord,
    SamplerConfig,
    asymptotic_concurrence_xyz,
    random_real_state,
    run_atlas,
    xyz_map,
)
from .states import (
    U,
    AngMomState,
    BasisTag,
    DensityMatrix6,
    SlaterState,
    SubspaceLabel,
    change_basis,
    classify_subspace,
    density_from_pure,
    from_slater,
    load_state,
    make_state,
    save_state,
    to_slater,
)
