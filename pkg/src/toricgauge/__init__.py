"""Exact combinatorics of torus GIT quotients and their gauged-map moduli."""

__version__ = "0.1.0"

from .gitq import WeightSystem, chamber_signature, is_ss_support, max_unstable_supports, quotient_report, stable_eq_ss
from .ratlin import cone_member, snf

__all__ = [
    "WeightSystem",
    "chamber_signature",
    "cone_member",
    "is_ss_support",
    "max_unstable_supports",
    "quotient_report",
    "snf",
    "stable_eq_ss",
]
