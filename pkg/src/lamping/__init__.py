"""Light-logic typed lambda terms evaluated by local graph rewriting.

Pipeline: check an EAL/LAL sequent derivation, build its proof-net,
translate to a sharing graph under a depth-compatible fan labelling,
normalize with the abstract rewrite rules, and read the beta-normal
form back through the context-semantics token machine.
"""

from .terms import Term, Var, Abs, App, parse_term, show_term, alpha_eq, beta_normalize
from .derivations import Derivation, check_derivation, derivation_subject
from .pipeline import run_pipeline

__all__ = [
    "Term", "Var", "Abs", "App", "parse_term", "show_term", "alpha_eq",
    "beta_normalize", "Derivation", "check_derivation", "derivation_subject",
    "run_pipeline",
]
