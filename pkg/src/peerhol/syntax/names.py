"""Name environments: how surface names meet de Bruijn indices.

A NameEnvironment carries the cumulative constant list of a context, newest
first.  Shadowed names are reached with the `name#k` notation: k counts how
many more recent bindings of the same name sit in front.
"""

from ..errors import UnknownNameError

# Surface names reserved for the built-in nullary constants; contexts may not
# rebind them, which keeps printing unambiguous.
RESERVED_TERM_NAMES = frozenset({"true", "false"})


class NameEnvironment:
    """Constant names and types of one context, newest first."""

    __slots__ = ("entries",)

    def __init__(self, entries=()):
        self.entries = tuple(entries)

    @property
    def stack(self):
        return tuple(ty for _, ty in self.entries)

    @property
    def names(self):
        return {name for name, _ in self.entries}

    def resolve(self, name, disamb, binders):
        """Return (index, type or None) for a surface name.

        `binders` is the list of enclosing lambda binder names, innermost
        first.  Indices count binders first, then constants.  Raises
        UnknownNameError for unbound names or too-large disambiguators.
        """
        seen = 0
        for i, b in enumerate(binders):
            if b == name:
                if seen == disamb:
                    return i, None
                seen += 1
        depth = len(binders)
        for pos, (n, ty) in enumerate(self.entries):
            if n == name:
                if seen == disamb:
                    return depth + pos, ty
                seen += 1
        if seen:
            raise UnknownNameError(
                f"{name}#{disamb} is out of range: only {seen} binding(s) of "
                f"{name!r} are visible"
            )
        raise UnknownNameError(f"unknown identifier {name!r}")

    def name_at(self, pos, binders):
        """Printed form of the constant at stack position pos.

        Appends #k when more recent bindings (constants or binders) shadow
        the name.
        """
        name, _ = self.entries[pos]
        k = sum(1 for b in binders if b == name)
        k += sum(1 for n, _ in self.entries[:pos] if n == name)
        return name if k == 0 else f"{name}#{k}"
