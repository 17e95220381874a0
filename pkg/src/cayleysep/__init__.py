"""Cayley-graph separation profiles, balanced separators and hyperbolicity probes."""

__version__ = "0.1.0"

from .errors import (
    ConfigurationError,
    GraphFormatError,
    ResourceBudgetError,
    UnsupportedPresentationError,
)
from .graphs import Graph
from .groups import Ball, GeneratorAlphabet, GroupModel, Presentation, catalog_group

__all__ = [
    "Ball",
    "ConfigurationError",
    "GeneratorAlphabet",
    "Graph",
    "GraphFormatError",
    "GroupModel",
    "Presentation",
    "ResourceBudgetError",
    "UnsupportedPresentationError",
    "catalog_group",
    "__version__",
]
