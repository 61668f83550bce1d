"""Stable references to stored contexts."""

from typing import NamedTuple


class ContextRef(NamedTuple):
    """Position of one context: entity key plus index into its chain."""

    entity: str
    index: int

    def __str__(self):
        return f"{self.entity}/{self.index}"

    @classmethod
    def parse(cls, text):
        entity, _, idx = text.partition("/")
        if not entity or not idx.isdigit():
            raise ValueError(f"malformed context reference {text!r}")
        return cls(entity, int(idx))
