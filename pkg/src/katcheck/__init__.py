"""Decision procedure for Kleene algebra with tests.

Decides equivalence and inclusion of KAT expressions by building a
bisimulation over partial derivatives. It returns shortest guarded-string
counterexamples, eliminates hypotheses of the reducible shapes, and embeds
while programs and Hoare triples.
"""

from katcheck.equiv import StateLimitExceeded, Verdict, equivalent, included
from katcheck.hyp import classify, hkat_check
from katcheck.semantics import GuardedString, bounded_language, gs_member, rel_eval
from katcheck.syntax import (
    BoolExpr,
    Equation,
    KatExpr,
    Signature,
    mk_dot,
    mk_plus,
    mk_star,
)
from katcheck.textual import parse_expr, parse_goal, print_guarded_string
from katcheck.whilelang import HoareTriple, embed, hoare_check, prog_equiv

__version__ = "0.1.0"

__all__ = [
    "BoolExpr",
    "Equation",
    "GuardedString",
    "HoareTriple",
    "KatExpr",
    "Signature",
    "StateLimitExceeded",
    "Verdict",
    "bounded_language",
    "classify",
    "embed",
    "equivalent",
    "gs_member",
    "hkat_check",
    "hoare_check",
    "included",
    "mk_dot",
    "mk_plus",
    "mk_star",
    "parse_expr",
    "parse_goal",
    "print_guarded_string",
    "prog_equiv",
    "rel_eval",
]
