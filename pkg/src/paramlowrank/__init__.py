"""Optimal low-rank approximation of parameter-dependent matrices and ensembles."""

# Version based on .git/refs/tags - make a tag/release locally, or on GitHub (and pull)
try:
    from paramlowrank._repo_version import version as __version__  # noqa:F401
except ImportError:  # pragma: no cover
    __version__ = "0.1.0"

from paramlowrank.errors import (  # noqa: F401
    DegenerateGapError,
    NonFiniteError,
    NumericalError,
    ParamLowRankError,
    ParamLowRankValueError,
    RankDeficiencyError,
    ShapeMismatchError,
    SweepError,
    VerificationError,
)
from paramlowrank.families import (  # noqa: F401
    AnalyticFamily,
    ConjugatedSpectrumFamily,
    GridFamily,
    ParamFamily,
    builtin_family,
    cubic_objective,
    family_from_dict,
    family_from_json,
    load_family,
)
from paramlowrank.grid import GridSpec  # noqa: F401
from paramlowrank.linalg_core import (  # noqa: F401
    SvdFactors,
    SymEig,
    frobenius_norm,
    hs_inner,
    operator_norm,
    read_matrix_csv,
    schatten_norm,
    svd,
    sym_eig,
    write_matrix_csv,
)
from paramlowrank.lowrank import (  # noqa: F401
    RankNApprox,
    best_approximation,
    capped_simplex_max,
    frame_energy,
    singular_value,
    truncate,
    von_neumann_slack,
)
from paramlowrank.parametric import (  # noqa: F401
    SweepResult,
    align_frames,
    argmin_path,
    eval_family,
    gap_report,
    grid_argmin,
    kkl_path,
    projector_path,
    reduce_rank,
    sweep_pod,
    sweep_svd,
)
from paramlowrank.printer import Printer  # noqa: F401
from paramlowrank.stochastic import (  # noqa: F401
    CoupledEnsemble,
    Ensemble,
    PodBasis,
    covariance,
    covariance_perturbation,
    kkl_coefficients,
    pod,
    projection_error,
)
from paramlowrank.surrogate import (  # noqa: F401
    CertReport,
    SurrogateModel,
    certify,
    eval_factors,
    eval_projector,
    evaluate,
    fit_factors,
    fit_projector,
    retract,
)
