from .ablation import BASELINE, AblationResult, run_ablation, write_ablation_csv
from .metrics import (
    EvalReport,
    ReliabilityBin,
    accuracy,
    auc,
    brier,
    ece,
    ece_from_bins,
    evaluate,
    reliability_bins,
    write_reliability_csv,
)

__all__ = [
    "BASELINE", "AblationResult", "run_ablation", "write_ablation_csv",
    "EvalReport", "ReliabilityBin", "accuracy", "auc", "brier", "ece", "ece_from_bins",
    "evaluate", "reliability_bins", "write_reliability_csv",
]
