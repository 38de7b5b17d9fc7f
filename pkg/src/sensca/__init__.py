"""Cellular-automaton sensitivity toolkit.

Dimension-generic sparse CA engine, Turing-machine-to-CA reduction
compilers (1D and 2D), a blocking-word prover/falsifier, and the
twin-prime showcase automaton.
"""

from sensca.core import (
    Configuration,
    Layer,
    Neighborhood,
    RuleTable,
    Word,
    contains,
    distance,
    embed,
    evolve,
    shift,
    slice_lift,
    step,
)

__version__ = "0.1.0"

__all__ = [
    "Configuration",
    "Layer",
    "Neighborhood",
    "RuleTable",
    "Word",
    "contains",
    "distance",
    "embed",
    "evolve",
    "shift",
    "slice_lift",
    "step",
    "__version__",
]
