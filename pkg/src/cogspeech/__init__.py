"""cogspeech: speech-and-language cognitive markers.

Parses dependency-annotated transcripts, computes the 14 per-task linguistic
features and the 42-dim participant vector, pools file-level audio
embeddings, trains voted ensembles for 3-class diagnosis and MMSE
regression, and evaluates with macro precision/recall/F1 and RMSE.
"""

from .dataset import CLASSIFICATION, LABELS, REGRESSION, Dataset
from .embeddings import EmbeddingMatrix, PooledEmbedding, join_embeddings, load_embedding, pool
from .ensembles import (
    SubmissionConfig,
    build_submission_config,
    fit_ensemble,
    vote_hard,
    vote_regress,
    vote_soft,
)
from .evaluation import EvalReport, confusion_matrix, macro_metrics, rmse
from .features import (
    FEATURE_NAMES,
    FeatureConfig,
    LinguisticCounts,
    PARTICIPANT_COLUMNS,
    ParticipantFeatureVector,
    TaskFeatureVector,
    assemble_participant_vector,
    compute_features,
    extract_counts,
    extract_task_features,
    read_feature_table,
    write_feature_table,
)
from .learners import (
    TrainedModel,
    fit_adaboost,
    fit_dnn,
    fit_gradient_boosting_model,
    fit_model,
    fit_random_forest,
    load_model,
    predict,
    predict_labels,
    save_model,
)
from .manifest import CohortManifest, parse_manifest, validate_cohort
from .model_selection import FoldPlan, grid_search, make_folds
from .pipeline import RunOptions, run_cv, run_pipeline
from .synthetic import CohortSpec, gen_cohort, gen_regression_signal
from .transcripts import (
    AnnotatedSentence,
    AnnotatedToken,
    AnnotatedTranscript,
    Task,
    parse_transcript,
    to_conllu,
)

__version__ = "0.1.0"
