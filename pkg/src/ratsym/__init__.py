"""Exact symmetry groups of rational functions and of their iterates."""
from .dynamics import aut_infinity, iterate_group, sigma_infinity
from .parser import parse_expression
from .symmetry import group_of

__version__ = "0.1.0"

__all__ = ["aut_infinity", "group_of", "iterate_group", "parse_expression", "sigma_infinity"]
