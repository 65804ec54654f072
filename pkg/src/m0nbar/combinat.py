"""Exact combinatorial number suppliers.

Signed Stirling numbers of the first kind, Stirling numbers of the second
kind, Bernoulli numbers, Faulhaber power sums, and generalized binomial
coefficients, backed by grow-only memo tables.

Convention: Bernoulli numbers use B_1 = +1/2 throughout this package (most
references use -1/2; the two conventions differ only in the sign of B_1).
Faulhaber's formula in this convention reads, for i >= 1,

    sum_{j=0..N} j^i = (1/(i+1)) * sum_{j=0..i} C(i+1,j) B_j N^(i-j+1).
"""
from __future__ import annotations

import math
import threading

from .rationals import Rat
from .series import Poly

__all__ = [
    "stirling_first",
    "stirling_second",
    "bernoulli",
    "faulhaber_sum",
    "faulhaber_poly",
    "binomial",
    "falling_factorial",
]


class MemoTable:
    """Grow-only caches for Stirling triangles and Bernoulli numbers.

    Entries are immutable once computed; extension happens under a single
    lock (single writer), after which rows may be read concurrently.
    """

    def __init__(self):
        self._lock = threading.Lock()
        self._s1 = [[1]]  # signed first kind, row n = [s(n,0..n)]
        self._s2 = [[1]]  # second kind, row n = [S(n,0..n)]
        self._bern: list = [Rat(1)]

    def stirling1_row(self, n: int) -> list:
        if n >= len(self._s1):
            with self._lock:
                while len(self._s1) <= n:
                    r = len(self._s1)
                    prev = self._s1[r - 1]
                    # s(r, k) = s(r-1, k-1) - (r-1) s(r-1, k)
                    row = [0] * (r + 1)
                    for k in range(1, r + 1):
                        row[k] = prev[k - 1] - (r - 1) * (prev[k] if k <= r - 1 else 0)
                    row[0] = -(r - 1) * prev[0]
                    self._s1.append(row)
        return self._s1[n]

    def stirling2_row(self, n: int) -> list:
        if n >= len(self._s2):
            with self._lock:
                while len(self._s2) <= n:
                    r = len(self._s2)
                    prev = self._s2[r - 1]
                    # S(r, k) = S(r-1, k-1) + k S(r-1, k)
                    row = [0] * (r + 1)
                    for k in range(1, r + 1):
                        row[k] = prev[k - 1] + k * (prev[k] if k <= r - 1 else 0)
                    self._s2.append(row)
        return self._s2[n]

    def bernoulli(self, j: int):
        if j >= len(self._bern):
            with self._lock:
                while len(self._bern) <= j:
                    m = len(self._bern)
                    # plus convention: sum_{i=0..m} C(m+1, i) B_i = m + 1
                    acc = Rat(m + 1)
                    for i in range(m):
                        acc -= math.comb(m + 1, i) * self._bern[i]
                    self._bern.append(acc / (m + 1))
        return self._bern[j]


_TABLE = MemoTable()


def stirling_first(n: int, k: int) -> int:
    """Signed Stirling number s(n, k): sum_j s(n,j) x^j = x(x-1)...(x-n+1)."""
    if n < 0 or k < 0:
        raise ValueError("indices must be nonnegative")
    if k > n:
        return 0
    return _TABLE.stirling1_row(n)[k]


def stirling_second(n: int, k: int) -> int:
    """Stirling number of the second kind S(n, k) (set partitions)."""
    if n < 0 or k < 0:
        raise ValueError("indices must be nonnegative")
    if k > n:
        return 0
    return _TABLE.stirling2_row(n)[k]


def bernoulli(j: int):
    """Bernoulli number B_j with the plus convention B_1 = +1/2."""
    if j < 0:
        raise ValueError("index must be nonnegative")
    return _TABLE.bernoulli(j)


def falling_factorial(a: int, b: int) -> int:
    """a (a-1) ... (a-b+1), the empty product 1 for b = 0."""
    out = 1
    for i in range(b):
        out *= a - i
    return out


def binomial(a: int, b: int) -> int:
    """Generalized binomial coefficient for integer a (possibly negative)."""
    if b < 0:
        raise ValueError("lower index must be nonnegative")
    if 0 <= a:
        if b > a:
            return 0
        return math.comb(a, b)
    num = falling_factorial(a, b)
    q, r = divmod(num, math.factorial(b))
    assert r == 0
    return q


def faulhaber_sum(N: int, i: int) -> int:
    """Power sum 0^i + 1^i + ... + N^i, for i >= 1.

    Computed both by direct summation and by the Bernoulli-number formula;
    the two routes are asserted to agree.  N < 0 yields the empty sum 0.
    """
    if i < 1:
        raise ValueError("exponent must be >= 1")
    if N < 0:
        return 0
    direct = sum(j ** i for j in range(N + 1))
    viaB = Rat(0)
    for j in range(i + 1):
        viaB += math.comb(i + 1, j) * bernoulli(j) * N ** (i - j + 1)
    viaB = viaB / (i + 1)
    assert viaB == direct, f"Faulhaber mismatch at N={N}, i={i}"
    return direct


def faulhaber_poly(i: int, var: str = "ell") -> Poly:
    """The power sum 0^i + ... + (x-1)^i as an exact polynomial in x.

    Expressing the sum with upper limit x-1 in powers of x flips the sign
    of the odd Bernoulli term, hence the (-1)^j below.
    """
    if i < 1:
        raise ValueError("exponent must be >= 1")
    coeffs = [Rat(0)] * (i + 2)
    for j in range(i + 1):
        coeffs[i - j + 1] = Rat(math.comb(i + 1, j), i + 1) * (-1) ** j * bernoulli(j)
    p = Poly(coeffs, var)
    assert all(p(n) == faulhaber_sum(n - 1, i) for n in (0, 1, 2, 5))
    return p
