from .gradcheck import grad_check, numerical_gradient, relative_error
from .layers import (
    LSTM,
    Dense,
    Dropout,
    Flatten,
    Layer,
    LayerNorm,
    MultiHeadAttention,
    PositionalEmbedding,
    ReLU,
    Sigmoid,
    glorot_uniform,
    softmax,
)
from .losses import LOSSES, bce_loss, brier_loss, get_loss
from .optim import Adam, EarlyStopping, ReduceLROnPlateau

__all__ = [
    "grad_check", "numerical_gradient", "relative_error",
    "LSTM", "Dense", "Dropout", "Flatten", "Layer", "LayerNorm", "MultiHeadAttention",
    "PositionalEmbedding", "ReLU", "Sigmoid", "glorot_uniform", "softmax",
    "LOSSES", "bce_loss", "brier_loss", "get_loss",
    "Adam", "EarlyStopping", "ReduceLROnPlateau",
]
