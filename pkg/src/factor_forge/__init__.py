"""Construct and verify resolvable cycle decompositions of lambda K_n and lambda K_{n x m}."""
from __future__ import annotations

from .model import Decomposition, GraphSpec

__version__ = "0.1.0"

__all__ = ["Decomposition", "GraphSpec", "__version__"]
