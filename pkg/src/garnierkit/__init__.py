"""Exact verification and numerical integration of the two-variable Garnier system."""

__version__ = "0.1.0"
