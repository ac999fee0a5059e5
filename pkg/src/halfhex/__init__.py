"""Exact sampling and verification for the half-hexagon dimer model."""

__version__ = "0.1.0"

from .tableau import StaircaseTableau, GTPattern, validate, to_gt, from_gt, volume  # noqa: E402
from .rng import BitStream, FixedBits  # noqa: E402
from .shuffle import (  # noqa: E402
    shuffle_forward, shuffle_reverse, sample, forward_probability, reverse_probability,
    verify_adjointness, verify_uniform_preservation,
)

__all__ = [
    "StaircaseTableau", "GTPattern", "validate", "to_gt", "from_gt", "volume",
    "BitStream", "FixedBits",
    "shuffle_forward", "shuffle_reverse", "sample", "forward_probability",
    "reverse_probability", "verify_adjointness", "verify_uniform_preservation",
]
