"""Reconstruction of real symmetric matrices from the spectra of their nested
main minors, with banded, degenerate and sliding-window variants."""

from .banded import (
    AlphaWitness,
    CandidateSet,
    ConicForm,
    FeasibilityReport,
    Hyperplane,
    alpha_condition,
    banded_step,
    column_signs_of,
    conic_forms,
    feasibility_certificate,
    hyperplanes,
    penta_conics_step,
    penta_degenerate_residual,
    penta_lines_step,
    reconstruct_banded,
)
from .cauchy import (
    CauchyPair,
    cauchy_identity_suite,
    cauchy_inverse,
    cauchy_matrix,
    consistency_residual,
    eigvec_last_entry_sq,
    signed_log_prod,
    vandermonde,
    vandermonde_inverse,
    xi_squared,
)
from .degenerate import Case, DegeneracyBlock, classify_degeneracy, degenerate_step
from .errors import *  # noqa: F401,F403
from .oracle import (
    InstanceSpec,
    alpha_condition_instance,
    brute_force_step,
    degenerate_instance,
    gen_random_banded,
    penta_degenerate_instance,
)
from .sliding import (
    SlidingSigns,
    SlidingSpectralData,
    data_counts,
    extract_sliding,
    extract_sliding_signs,
    reconstruct_sliding_minimal,
    reconstruct_sliding_optimal,
)
from .spectral import (
    EigDecomp,
    Gauge,
    RegularityReport,
    SignIndicators,
    SpectralData,
    StepScalars,
    SymmetricMatrix,
    check_regular,
    eig_sym,
    extract_sign_indicators,
    extract_spectral_data,
    step_scalars,
)
from .telescopic import (
    StepResult,
    reconstruct_full,
    signs_2to3,
    telescopic_step,
)

__version__ = "0.1.0"
