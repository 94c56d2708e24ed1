"""Circle bin packing: constructive tangent-placement greedy (TOA) and
adaptive simulated annealing with greedy search (ASA-GS)."""

from .model import (  # noqa: F401
    BinState,
    Instance,
    Item,
    Metrics,
    Placement,
    Solution,
    compact,
    density,
    objective,
    validate,
)

__version__ = "0.1.0"
