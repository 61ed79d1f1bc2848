"""Local search for SMT over linear and multilinear real arithmetic."""

from .search import SearchConfig, SolveResult, solve
from .smtlib import clausify, parse_script, print_model, validate_model

__version__ = "0.1.0"

__all__ = ["SearchConfig", "SolveResult", "clausify", "parse_script", "print_model", "solve", "validate_model"]
