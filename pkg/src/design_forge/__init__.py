"""Construct, verify and classify conical 2-designs and (mutually unbiased) GETFs."""
from .basis import BasisPartition, OrthonormalHermitianSet, gell_mann_set, partition_set, random_rotated_set
from .conical import (
    ConicalFit,
    EquivalenceReport,
    ProfileCheck,
    TraceProfile,
    Verdict,
    choi_map_residual,
    conical_to_getf,
    conical_to_mu_getf,
    equivalence_report,
    fit_kappas,
    tensor_sum,
    trace_profile,
    validate_profile,
)
from .corpus import (
    Fixture,
    fixture,
    fixture_names,
    random_getf,
    random_inhomogeneous_conical_qubit,
    random_mu_getf,
    random_perturbed_mu_getf,
)
from .errors import DesignError, Violation
from .getf import (
    FrameParams,
    Getf,
    Sign,
    Variant,
    b_range,
    build_h_operators,
    construct_getf,
    getf_params,
    max_feasible_tau,
    verify_getf,
)
from .linalg import flip_operator, frobenius_distance_sq, hermitian, hs_inner, is_psd, kron
from .mugetf import (
    CoincidenceReport,
    MuGetfFamily,
    NotEquidistant,
    RankReport,
    construct_mu_getf,
    equidistance,
    index_of_coincidence,
    reduced_linear_independence,
    s_range,
    verify_mu_getf,
)

__version__ = "0.1.0"
