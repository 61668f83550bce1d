"""Cold-path index bookkeeping used by the context-move machinery."""

from .terms import App, Const, Lam, Var


def const_positions(t, depth=0, out=None):
    """Stack positions (index minus lambda depth) of all constants t mentions."""
    if out is None:
        out = set()
    if isinstance(t, Var):
        if t.index >= depth:
            out.add(t.index - depth)
    elif isinstance(t, Lam):
        const_positions(t.body, depth + 1, out)
    elif isinstance(t, App):
        const_positions(t.fun, depth, out)
        const_positions(t.arg, depth, out)
    return out


def remap_free(t, f, depth=0):
    """Rewrite every constant reference through position map f.

    A Var of index i at lambda depth d refers to stack position i - d; the
    result references position f(i - d) instead.  Lambda-bound variables are
    untouched.
    """
    if isinstance(t, Var):
        if t.index < depth:
            return t
        return Var(depth + f(t.index - depth))
    if isinstance(t, Const):
        return t
    if isinstance(t, Lam):
        return Lam(t.domain, remap_free(t.body, f, depth + 1))
    return App(remap_free(t.fun, f, depth), remap_free(t.arg, f, depth))
