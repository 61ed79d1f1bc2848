from .cnf import ClausalFormula, clausify, cnf_transform
from .desugar import AtomLit, BoolLit, desugar, normalize_atom, to_polynomial
from .model import evaluate, format_rational, print_model, validate_model
from .parser import Script, parse_model, parse_script

__all__ = [
    "AtomLit",
    "BoolLit",
    "ClausalFormula",
    "Script",
    "clausify",
    "cnf_transform",
    "desugar",
    "evaluate",
    "format_rational",
    "normalize_atom",
    "parse_model",
    "parse_script",
    "print_model",
    "to_polynomial",
    "validate_model",
]
