#!/usr/bin/env python3
"""Compare the compiled term-operation core against the pure-Python twin.

Both modules expose the same five operations over the same term objects, so
each workload runs on identical inputs.  Results are wall-clock medians.

    python3 benchmarks/bench_kernel.py [--repeat N] [--scale N]
"""

import argparse
import statistics
import time

from peerhol.kernel import _pure
from peerhol.kernel.consts import SIGNATURE
from peerhol.kernel.terms import App, Const, Lam, Var
from peerhol.kernel.types import PROP, Fun

try:
    from peerhol.kernel import _speedup
except ImportError:
    _speedup = None

NOT_T = Const("not")
TRUE_T = Const("true")
PP = Fun(PROP, PROP)


def church(n):
    """λf. λx. f (f ... (f x))  at type (prop→prop)→prop→prop."""
    body = Var(0)
    for _ in range(n):
        body = App(Var(1), body)
    return Lam(PP, Lam(PROP, body))


def add(a, b):
    # λm. λn. λf. λx. m f (n f x)
    plus = Lam(
        Fun(PP, PP),
        Lam(
            Fun(PP, PP),
            Lam(PP, Lam(PROP, App(App(Var(3), Var(1)),
                                  App(App(Var(2), Var(1)), Var(0))))),
        ),
    )
    return App(App(plus, a), b)


def deep_implies(n):
    t = TRUE_T
    imp = Const("implies")
    for _ in range(n):
        t = App(App(imp, TRUE_T), t)
    return t


def wide_not_tower(n):
    t = TRUE_T
    for _ in range(n):
        t = App(NOT_T, t)
    return t


def workloads(scale):
    church_sum = add(church(6 * scale), church(6 * scale))
    redex = App(App(church_sum, NOT_T), TRUE_T)
    deep = deep_implies(400 * scale)
    tower = wide_not_tower(600 * scale)
    stack = [PROP] * 8
    return [
        ("normalize church-sum", "normalize", (redex,)),
        ("normalize ¬-tower", "normalize", (tower,)),
        ("typecheck deep ⟶", "typecheck", (deep, stack)),
        ("shift +5 deep ⟶", "shift_constants", (deep, 5)),
        ("equal_terms church", "equal_terms",
         (App(App(church_sum, NOT_T), TRUE_T), wide_not_tower(12 * scale))),
        ("substitute into deep", "substitute",
         (Lam(PROP, deep_implies(200 * scale)), TRUE_T)),
    ]


def bench(module, fn_name, args, repeat):
    fn = getattr(module, fn_name)
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=7)
    parser.add_argument("--scale", type=int, default=1)
    args = parser.parse_args()

    if _speedup is None:
        print("compiled core not built; showing pure-Python numbers only")

    rows = []
    for label, fn_name, fn_args in workloads(args.scale):
        pure_t = bench(_pure, fn_name, fn_args, args.repeat)
        if _speedup is not None:
            fast_t = bench(_speedup, fn_name, fn_args, args.repeat)
            rows.append((label, pure_t, fast_t, pure_t / fast_t))
        else:
            rows.append((label, pure_t, None, None))

    width = max(len(r[0]) for r in rows)
    print(f"{'workload':<{width}}  {'pure':>10}  {'compiled':>10}  {'speedup':>8}")
    for label, pure_t, fast_t, ratio in rows:
        if fast_t is None:
            print(f"{label:<{width}}  {pure_t * 1e3:>8.2f}ms  {'-':>10}  {'-':>8}")
        else:
            print(
                f"{label:<{width}}  {pure_t * 1e3:>8.2f}ms  "
                f"{fast_t * 1e3:>8.2f}ms  {ratio:>7.2f}x"
            )


if __name__ == "__main__":
    main()
