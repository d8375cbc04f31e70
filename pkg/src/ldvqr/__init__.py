"""ldvqr: quantile regression for censored and binary dependent variables."""

__version__ = "0.1.0"
