"""Cross-society survey ingestion, transcultural-factor simulation and
weighted-similarity clustering of agent populations."""

from .errors import CulturalityError
from .model import (
    FactorCoefficients,
    FactorInputs,
    NoiseSpec,
    Trajectory,
    fixed_point,
    step_factor,
    trajectory,
)
from .report import (
    HdiConfig,
    load_hdi,
    rank_cohorts,
    render_cluster_map,
    score_transculturality,
)
from .sim import (
    Agent,
    Population,
    Shift,
    SimConfig,
    SimResult,
    apply_paradigm_shift,
    run,
    synthesize_population,
)
from .similarity import (
    Clustering,
    attr_similarity,
    auto_k,
    cluster_kmedoids,
    purity,
    silhouette,
    similarity_matrix,
    weighted_similarity,
)
from .survey import (
    AttributeDef,
    AttributeSchema,
    CohortObservation,
    SurveyTable,
    cohort_vector,
    default_schema,
    load_schema,
    load_survey,
    save_survey,
    validate,
)

__version__ = "0.1.0"

__all__ = [
    "CulturalityError",
    "FactorCoefficients",
    "FactorInputs",
    "NoiseSpec",
    "Trajectory",
    "fixed_point",
    "step_factor",
    "trajectory",
    "HdiConfig",
    "load_hdi",
    "rank_cohorts",
    "render_cluster_map",
    "score_transculturality",
    "Agent",
    "Population",
    "Shift",
    "SimConfig",
    "SimResult",
    "apply_paradigm_shift",
    "run",
    "synthesize_population",
    "Clustering",
    "attr_similarity",
    "auto_k",
    "cluster_kmedoids",
    "purity",
    "silhouette",
    "similarity_matrix",
    "weighted_similarity",
    "AttributeDef",
    "AttributeSchema",
    "CohortObservation",
    "SurveyTable",
    "cohort_vector",
    "default_schema",
    "load_schema",
    "load_survey",
    "save_survey",
    "validate",
]
