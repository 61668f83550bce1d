"""peerhol: an interactive theorem proving engine with versioned contexts."""

from .engine import Engine

__version__ = "0.1.0"

__all__ = ["Engine", "__version__"]
