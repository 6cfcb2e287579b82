"""Exact q-series and partition-injection checks for product-side partition inequalities."""

from .qseries import ProductSpec, QPoly, ZQPoly, expand, first_negative
from .partitions import Constraints, MModularDiagram, Partition, enumerate_partitions
from .injections import PairParams, Report, T11Params, phiL, phik, verify_injection
from .inequalities import CheckResult, TheoremParams, run_check

__version__ = "0.1.0"

__all__ = [
    "ProductSpec",
    "QPoly",
    "ZQPoly",
    "expand",
    "first_negative",
    "Constraints",
    "MModularDiagram",
    "Partition",
    "enumerate_partitions",
    "PairParams",
    "Report",
    "T11Params",
    "phiL",
    "phik",
    "verify_injection",
    "CheckResult",
    "TheoremParams",
    "run_check",
]
