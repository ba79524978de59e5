"""Exact deficiency and formality computations for homogeneous spaces SU(n)/H."""

__version__ = "0.1.0"

from .engine import (  # noqa: E402
    FormalityReport,
    SpaceSpec,
    analyze,
    deficiency_via_invariants,
    deficiency_via_torus,
    verify_top_invariant,
    verify_coxeter_relocation,
    verify_family,
)
from .lie_a import BlockDecomposition, TorusEmbedding  # noqa: E402

__all__ = [
    "BlockDecomposition",
    "FormalityReport",
    "SpaceSpec",
    "TorusEmbedding",
    "analyze",
    "deficiency_via_invariants",
    "deficiency_via_torus",
    "verify_top_invariant",
    "verify_coxeter_relocation",
    "verify_family",
]
