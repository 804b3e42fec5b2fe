"""Exact series, Coefficient GFs and asymptotic expansions for dense graph families."""

__version__ = "0.1.0"
