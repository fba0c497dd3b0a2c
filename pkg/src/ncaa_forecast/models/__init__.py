from .checkpoint import ModelCheckpoint, predict_proba, symmetric_predict, symmetric_probs
from .estimators import (
    FORECASTERS,
    LSTMForecaster,
    TransformerForecaster,
    forecaster_from_checkpoint,
    make_forecaster,
)
from .networks import (
    LstmConfig,
    LstmNetwork,
    TransformerConfig,
    TransformerNetwork,
    build_lstm,
    build_network,
    build_transformer,
)
from .training import HISTORY_COLUMNS, TrainConfig, TrainingError, TrainingHistory, train

__all__ = [
    "ModelCheckpoint", "predict_proba", "symmetric_predict", "symmetric_probs",
    "FORECASTERS", "LSTMForecaster", "TransformerForecaster", "forecaster_from_checkpoint",
    "make_forecaster", "LstmConfig", "LstmNetwork", "TransformerConfig", "TransformerNetwork",
    "build_lstm", "build_network", "build_transformer",
    "HISTORY_COLUMNS", "TrainConfig", "TrainingError", "TrainingHistory", "train",
]
