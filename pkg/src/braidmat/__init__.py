"""Realizing crossing-number matrices of pure braids.

Braid words and their pair-count matrices, the T0 condition, ladder diagrams
with their moves, formation families, T-structures, and certified realizers
for CN, OU and crossing matrices.
"""

from __future__ import annotations

from .braid import (
    DiagramWord,
    Over,
    PairCountMatrix,
    ProjectionWord,
    cn_matrix,
    concat,
    crossing_matrix,
    embed,
    forget,
    is_pure,
    mirror,
    ou_matrix,
    permutation,
)
from .errors import BraidMatError, NotT0, SumNotT0
from .matrices import UpperMask, count_t0, enumerate_t0, is_t0, m02, t0_violation
from .realizer import (
    Certificate,
    realize_cn,
    realize_crossing,
    realize_ou,
    verify_certificate,
    verify_theorem,
    verify_theorem_n6,
)

__all__ = [
    "BraidMatError",
    "Certificate",
    "DiagramWord",
    "NotT0",
    "Over",
    "PairCountMatrix",
    "ProjectionWord",
    "SumNotT0",
    "UpperMask",
    "cn_matrix",
    "concat",
    "count_t0",
    "crossing_matrix",
    "embed",
    "enumerate_t0",
    "forget",
    "is_pure",
    "is_t0",
    "m02",
    "mirror",
    "ou_matrix",
    "permutation",
    "realize_cn",
    "realize_crossing",
    "realize_ou",
    "t0_violation",
    "verify_certificate",
    "verify_theorem",
    "verify_theorem_n6",
]
