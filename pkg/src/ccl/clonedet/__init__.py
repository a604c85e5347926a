"""Clone pair detection: fragment types, detector and fragment metrics.

The numeric kernels (suffix array, LCP, repetition marking) run in a
compiled extension when it is built, with a pure-Python fallback selected
at import time; see ``ccl.clonedet.backend``.
"""

from .backend import BACKEND as KERNEL_BACKEND
from .engine import (
    TYPE1,
    TYPE2,
    CloneFragment,
    ClonePair,
    DetectorParams,
    build_clone_sets,
    compute_rnr,
    compute_tks,
    detect_clone_pairs,
)

__all__ = [
    "KERNEL_BACKEND",
    "TYPE1",
    "TYPE2",
    "CloneFragment",
    "ClonePair",
    "DetectorParams",
    "build_clone_sets",
    "compute_rnr",
    "compute_tks",
    "detect_clone_pairs",
]
