from .assemble import (
    DEFAULT_GROUPS,
    FEATURE_GROUPS,
    GROUP_TIER,
    FeatureTables,
    MatchupSample,
    assemble_features,
    build_matrix,
    feature_names,
    group_columns,
    seed_diff,
)
from .box import BoxAverages, compute_box_table, season_box_averages
from .elo import EloConfig, compute_elo, elo_expected, elo_update
from .quality import ConvergenceError, conjugate_gradient, fit_glm_quality, fit_season_quality
from .scaling import MatchupScaler

__all__ = [
    "DEFAULT_GROUPS", "FEATURE_GROUPS", "GROUP_TIER", "FeatureTables", "MatchupSample",
    "assemble_features", "build_matrix", "feature_names", "group_columns", "seed_diff",
    "BoxAverages", "compute_box_table", "season_box_averages",
    "EloConfig", "compute_elo", "elo_expected", "elo_update",
    "ConvergenceError", "conjugate_gradient", "fit_glm_quality", "fit_season_quality",
    "MatchupScaler",
]
