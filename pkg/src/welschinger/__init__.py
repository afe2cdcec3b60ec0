"""Exact floor-diagram counts of relative Gromov-Witten and Welschinger invariants.

Two independent routes to the same numbers:

* :mod:`welschinger.diagram` enumerates marked floor diagrams and sums their
  complex or real multiplicities (slow, but close to the definitions);
* :mod:`welschinger.recursion` evaluates the Caporaso-Harris type recursions
  with exact rational accumulation over a shared memo cache.

:mod:`welschinger.invariants` ties them together.
"""
from .cache import CacheConflictError, CacheFormatError, CycleError, MemoCache
from .diagram import (
    FloorDiagram,
    InconsistencyError,
    MarkedDiagram,
    MarkingType,
    complex_mult,
    enumerate_floor_diagrams,
    enumerate_marked,
    oracle_C,
    oracle_N,
    real_mult,
)
from .invariants import (
    InvariantReport,
    congruence_report,
    crosscheck,
    gw,
    w3,
    welschinger2,
    welschinger_table,
)
from .natvec import NatSeq, ZERO, format_natseq, parse_natseq, unit
from .recursion import (
    Engine,
    InvalidKeyError,
    NonIntegralError,
    TerminationError,
    C_rec,
    N_rec,
    W3_rec,
)

__version__ = "0.1.0"

__all__ = [
    "C_rec",
    "CacheConflictError",
    "CacheFormatError",
    "CycleError",
    "Engine",
    "FloorDiagram",
    "InconsistencyError",
    "InvalidKeyError",
    "InvariantReport",
    "MarkedDiagram",
    "MarkingType",
    "MemoCache",
    "N_rec",
    "NatSeq",
    "NonIntegralError",
    "TerminationError",
    "W3_rec",
    "ZERO",
    "complex_mult",
    "congruence_report",
    "crosscheck",
    "enumerate_floor_diagrams",
    "enumerate_marked",
    "format_natseq",
    "gw",
    "oracle_C",
    "oracle_N",
    "parse_natseq",
    "real_mult",
    "unit",
    "w3",
    "welschinger2",
    "welschinger_table",
]
