"""Privacy-audit workbench for similarity-tested synthetic data releases."""

__version__ = "0.1.0"
