"""Multilingual multi-label emotion detection: representations, reduction, learning.

The package is organized as a three-stage pipeline. Documents become feature
matrices (counts, TF-IDF, or pooled word vectors), optionally pass through
row normalization and PCA, and feed multi-label classifiers trained from
scratch. An experiment runner executes representation x reduction x
classifier matrices per language and emits CSV reports, and a fallback
protocol maps languages without vector files onto supported ones.
"""

from .corpus import (
    EMOTIONS,
    ROLES,
    DatasetSplit,
    LabeledDocument,
    LabelSummary,
    load_split,
    save_split,
    summarize,
)
from .dense_features import (
    DEFAULT_PROMPT_TEMPLATE,
    EmbeddingTable,
    FallbackPolicy,
    LlmBackendConfig,
    OovReport,
    embed_documents,
    load_precomputed_embeddings,
    load_word_vectors,
    parse_reply,
    render_prompt,
    resolve_language,
)
from .errors import (
    AlignmentError,
    ConfigError,
    DataError,
    FormatError,
    PolyemoError,
    ResolutionError,
    SchemaError,
    ShapeError,
    TransportError,
)
from .evaluate import (
    ConfusionRates,
    EvalReport,
    TimingRecord,
    confusion_rates,
    f1_macro,
    time_run,
)
from .learn import (
    CLASSIFIER_KINDS,
    DEFAULT_MLP_GRID,
    ClassifierSpec,
    DecisionTree,
    KNearestNeighbors,
    LinearSvm,
    Mlp,
    RandomForest,
    VotingEnsemble,
    default_voting_spec,
    fit,
    gradient_check,
    grid_search_mlp,
    predict,
    predict_scores,
)
from .pipeline import PipelineModel, read_predictions, write_predictions
from .reduce import (
    PcaModel,
    ReductionConfig,
    fit_pca,
    inverse_transform_pca,
    normalize_rows,
    transform_pca,
)
from .runner import (
    ExperimentConfig,
    ReportTable,
    cell_seed,
    enumerate_cells,
    load_config,
    parse_config,
    predict_file,
    run_ablation,
    run_matrix,
)
from .serialize import load_model, save_model
from .sparse_features import (
    TfidfModel,
    Vocabulary,
    compute_idf,
    fit_bow,
    fit_tfidf,
    transform_bow,
    transform_tfidf,
)
from .tokenize import TokenizerSpec, Tokenizer, TokenSequence, tokenize

__version__ = "0.1.0"

__all__ = [
    "AlignmentError",
    "CLASSIFIER_KINDS",
    "ClassifierSpec",
    "ConfigError",
    "ConfusionRates",
    "DEFAULT_MLP_GRID",
    "DEFAULT_PROMPT_TEMPLATE",
    "DataError",
    "DatasetSplit",
    "DecisionTree",
    "EMOTIONS",
    "EmbeddingTable",
    "EvalReport",
    "ExperimentConfig",
    "FallbackPolicy",
    "FormatError",
    "KNearestNeighbors",
    "LabelSummary",
    "LabeledDocument",
    "LinearSvm",
    "LlmBackendConfig",
    "Mlp",
    "OovReport",
    "PcaModel",
    "PipelineModel",
    "PolyemoError",
    "ROLES",
    "RandomForest",
    "ReductionConfig",
    "ReportTable",
    "ResolutionError",
    "SchemaError",
    "ShapeError",
    "TfidfModel",
    "TimingRecord",
    "TokenSequence",
    "Tokenizer",
    "TokenizerSpec",
    "TransportError",
    "Vocabulary",
    "VotingEnsemble",
    "cell_seed",
    "compute_idf",
    "confusion_rates",
    "default_voting_spec",
    "embed_documents",
    "enumerate_cells",
    "f1_macro",
    "fit",
    "fit_bow",
    "fit_pca",
    "fit_tfidf",
    "gradient_check",
    "grid_search_mlp",
    "inverse_transform_pca",
    "load_config",
    "load_model",
    "load_precomputed_embeddings",
    "load_split",
    "load_word_vectors",
    "normalize_rows",
    "parse_config",
    "parse_reply",
    "predict",
    "predict_file",
    "predict_scores",
    "read_predictions",
    "render_prompt",
    "resolve_language",
    "run_ablation",
    "run_matrix",
    "save_model",
    "save_split",
    "summarize",
    "time_run",
    "tokenize",
    "transform_bow",
    "transform_pca",
    "transform_tfidf",
    "write_predictions",
]
