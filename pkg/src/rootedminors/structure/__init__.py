"""Structural deciders and certified generators."""

from .webs import Certificate, ConstructionError, WebSpec, generate_class, random_instance
from .obstructions import ObstructionWitness, W4Verdict, cycle_through_roots, decide_w4_by_obstructions

__all__ = [
    "Certificate",
    "ConstructionError",
    "WebSpec",
    "generate_class",
    "random_instance",
    "ObstructionWitness",
    "W4Verdict",
    "cycle_through_roots",
    "decide_w4_by_obstructions",
]
