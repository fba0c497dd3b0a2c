"""NCAA tournament forecasting: feature engineering, LSTM/Transformer forecasters, calibration metrics."""

__version__ = "0.1.0"
