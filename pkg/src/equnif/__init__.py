"""Unification modulo equational theories under restricted and unrestricted preorders."""
from .terms import (App, FreshSupply, Permutation, Signature, Substitution, Symbol, Var,
                    apply_subst, compose_subst, parse_term, permutation_from_renaming,
                    print_term, restrict_subst)
from .errors import Refusal, Undecided

__version__ = "0.1.0"
