"""Fuzzy classification aggregation: rules, axiom checkers, weight recovery
and an exhaustive check of the crisp impossibility result."""

__version__ = "0.1.0"

from .model import (  # noqa: E402
    Profile,
    Setting,
    Weights,
    embed_crisp,
    permute_voters,
    restrict,
    validate_classification,
)
from .aggregate import (  # noqa: E402
    Aggregator,
    arithmetic_mean,
    h_aggregate_2x2,
    odd_power_mean,
    star_wam,
    wam_aggregate,
)

__all__ = [
    "Aggregator",
    "Profile",
    "Setting",
    "Weights",
    "arithmetic_mean",
    "embed_crisp",
    "h_aggregate_2x2",
    "odd_power_mean",
    "permute_voters",
    "restrict",
    "star_wam",
    "validate_classification",
    "wam_aggregate",
]
