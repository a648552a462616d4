"""Exact and numeric computation on noncommutative surfaces of rotation."""
from .scalars import DEFAULT_PARAMS, ScalarExpr, SqrtRational

__all__ = ["DEFAULT_PARAMS", "ScalarExpr", "SqrtRational"]
__version__ = "0.1.0"
