"""deacs: feature selection driven by per-class-label conditional
dependence scores ranked with super-efficiency DEA, with MI baselines,
MDL discretization, and a cross-validation benchmark harness."""

from .dataset import (
    CutPoints,
    Dataset,
    FoldAssignment,
    RawTable,
    encode,
    fit_cut_points,
    load_csv,
    mdl_discretize,
    stratified_kfold,
)
from .dea import (
    DeaInstance,
    EfficiencyScore,
    ccr_score,
    feature_eval_score,
    sup_dea_max,
    super_efficiency_score,
)
from .harness import (
    AccuracyCurve,
    ClassifierKind,
    emit_report,
    evaluate_curve,
    k_nearest,
    knn_predict,
    naive_bayes,
    nbc_fit_predict,
)
from .infotheory import (
    BlockPartition,
    ScoreMatrix,
    ScoreVector,
    binary_collapse,
    conditional_mi,
    entropy,
    local_mi,
    mutual_information,
    r_scores,
    refine_partition,
)
from .lp import LinearProgram, LpSolution, solve
from .selector import (
    CriterionConfig,
    SelectionTrace,
    dea_cs_select,
    disr_select,
    mim_select,
    mrmr_select,
    relieff_select,
    relieff_weights,
    unified_select,
)

__version__ = "0.1.0"

__all__ = [
    "AccuracyCurve",
    "BlockPartition",
    "ClassifierKind",
    "CriterionConfig",
    "CutPoints",
    "Dataset",
    "DeaInstance",
    "EfficiencyScore",
    "FoldAssignment",
    "LinearProgram",
    "LpSolution",
    "RawTable",
    "ScoreMatrix",
    "ScoreVector",
    "SelectionTrace",
    "binary_collapse",
    "ccr_score",
    "conditional_mi",
    "dea_cs_select",
    "disr_select",
    "emit_report",
    "encode",
    "entropy",
    "evaluate_curve",
    "feature_eval_score",
    "fit_cut_points",
    "k_nearest",
    "knn_predict",
    "load_csv",
    "local_mi",
    "mdl_discretize",
    "mim_select",
    "mrmr_select",
    "mutual_information",
    "naive_bayes",
    "nbc_fit_predict",
    "r_scores",
    "refine_partition",
    "relieff_select",
    "relieff_weights",
    "solve",
    "stratified_kfold",
    "sup_dea_max",
    "super_efficiency_score",
    "unified_select",
]
