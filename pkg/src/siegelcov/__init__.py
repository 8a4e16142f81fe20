"""Vector-valued Siegel modular forms of degree 2 from covariants of binary sextics."""

__version__ = "0.1.0"
