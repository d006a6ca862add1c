"""Matrix-form kernel SVM for multiclass and multilabel classification."""

from .bench import ExperimentConfig, ExperimentReport, emit_report, run_experiment
from .data import (
    Dataset,
    DatasetManifest,
    encode_multiclass,
    kfold_split,
    load_dataset,
    normalize_features,
    read_manifest,
    subsample,
)
from .exceptions import (
    ConfigError,
    DataError,
    DegenerateLabelError,
    DimensionError,
    MatSVMError,
    NumericError,
    ParameterError,
)
from .kernel import KernelSpec, augmented_gram, gram
from .metrics import (
    MetricReport,
    average_precision,
    evaluate,
    exact_match,
    hamming_loss,
    macro_f1,
    micro_f1,
)
from .model import (
    TrainedModel,
    decision_scores,
    fit_br_svm,
    fit_ls_matrix_svm,
    fit_matrix_svm,
    kkt_report,
    load_model,
    multiclass_signs,
    predict_multiclass,
    predict_multilabel,
    primal_diagnostics,
    save_model,
)
from .solver import (
    DualProblem,
    DualSolution,
    SolverOptions,
    agd_solve,
    dual_gradient,
    dual_objective,
    lipschitz_constant,
    project_box,
)

__version__ = "0.1.0"
