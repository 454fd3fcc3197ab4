"""Exact experiments with quadratic Dirichlet L-functions over F_q[x]."""

from .gfpoly import FieldError, check_q
from .quadext import QuadExt

__all__ = ["FieldError", "QuadExt", "check_q"]
__version__ = "0.1.0"
