"""Benchmark harness comparing the formula routes.

Times each route over a range of n and reports wall time together with an
approximate count of big-integer coefficient multiplications (collected by
the polynomial/series kernels).  The numbers are informational: the routes
are all exact and cross-validated elsewhere; this table only shows what
each formula costs.
"""
from __future__ import annotations

import time
from dataclasses import dataclass

from . import metrics
from .classes import CLASS_FORMULAS

__all__ = ["BenchRow", "run_bench", "format_table"]


@dataclass(frozen=True)
class BenchRow:
    route: str
    n_max: int
    ms: int
    ops: int


def run_bench(n_max: int = 20, routes: list[str] | None = None) -> list[BenchRow]:
    """Compute every class 3..n_max with each route, timing each route.

    The shared Stirling triangles are warmed up front so the two routes
    that read them are compared on formula cost, not table construction.
    Times are per-process: the generating-function oracle memoizes its
    coefficients, so only its first sweep in a process does real work.
    """
    from .combinat import stirling_first, stirling_second

    stirling_first(3 * n_max - 6, 0)
    stirling_second(3 * n_max - 6, 0)
    rows = []
    for name in routes or list(CLASS_FORMULAS):
        fn = CLASS_FORMULAS[name]
        metrics.enable()
        t0 = time.perf_counter()
        for n in range(3, n_max + 1):
            fn(n)
        elapsed = time.perf_counter() - t0
        ops = metrics.snapshot()
        metrics.disable()
        rows.append(BenchRow(name, n_max, int(elapsed * 1000), ops))
    return rows


def format_table(rows: list[BenchRow]) -> str:
    head = f"{'route':<10} {'n range':<10} {'wall ms':>9} {'coeff mults':>13}"
    lines = [head, "-" * len(head)]
    for r in rows:
        lines.append(f"{r.route:<10} {'3..' + str(r.n_max):<10} {r.ms:>9} {r.ops:>13}")
    return "\n".join(lines)
