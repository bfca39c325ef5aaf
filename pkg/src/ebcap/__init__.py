"""Capacity regions of entanglement-breaking channels with unreliable entanglement assistance."""

__version__ = "0.1.0"

from .channels import (  # noqa: E402
    EBVerdict,
    KrausChannel,
    MeasurePrepareChannel,
    depolarizing,
    is_entanglement_breaking_qubit,
)
from .depol import DepolParams, closed_form_point, ea_capacity, spc_frontier, unassisted_capacity  # noqa: E402
from .hull import RateFrontier, convex_hull_upper  # noqa: E402
from .region import EncodingEnsemble, RatePoint, rate_triple, rectangle_corner  # noqa: E402
from .sweep import SweepConfig, frontier_sweep  # noqa: E402

__all__ = [
    "DepolParams",
    "EBVerdict",
    "EncodingEnsemble",
    "KrausChannel",
    "MeasurePrepareChannel",
    "RateFrontier",
    "RatePoint",
    "SweepConfig",
    "closed_form_point",
    "convex_hull_upper",
    "depolarizing",
    "ea_capacity",
    "frontier_sweep",
    "is_entanglement_breaking_qubit",
    "rate_triple",
    "rectangle_corner",
    "spc_frontier",
    "unassisted_capacity",
]
