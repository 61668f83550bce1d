"""Immutable context tree over the entity store."""

from .tree import KINDS, Context, ContextTree

__all__ = ["KINDS", "Context", "ContextTree"]
