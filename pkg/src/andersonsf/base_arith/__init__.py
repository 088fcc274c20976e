"""Exact arithmetic in F_{q^m} and in the truncated model of C_inf."""

from .cinf import INF, CinfNum, PrecisionError, kth_root, lambda_theta
from .field import FieldParams, FiniteField, finite_field
from .render import cinf_from_json, cinf_to_json, cinf_to_text

__all__ = [
    "INF",
    "CinfNum",
    "FieldParams",
    "FiniteField",
    "PrecisionError",
    "cinf_from_json",
    "cinf_to_json",
    "cinf_to_text",
    "finite_field",
    "kth_root",
    "lambda_theta",
]
