"""Approximate big-integer operation counter for the benchmark harness.

Polynomial and series multiplications report their coefficient-product
counts here.  The counter is informational only (races under free-threaded
readers merely lose ticks) and costs one integer add per bulk operation.
"""
from __future__ import annotations

_count = 0
_enabled = False


def enable() -> None:
    global _enabled, _count
    _enabled = True
    _count = 0


def disable() -> None:
    global _enabled
    _enabled = False


def count(n: int) -> None:
    global _count
    if _enabled:
        _count += n


def snapshot() -> int:
    return _count
