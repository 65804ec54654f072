"""Dense exact polynomials and truncated formal power series.

Two value types, both immutable and variable-tagged:

* :class:`Poly` -- a dense polynomial in one named variable, trailing zeros
  stripped (canonical degree).  Coefficients may be rational scalars or,
  recursively, other ``Poly`` / ``TruncSeries`` values, so nested objects
  such as "polynomial in z whose coefficients are polynomials in ell" are
  ordinary instances.

* :class:`TruncSeries` -- a power series truncated at an explicit order.
  Arithmetic never silently extends the order: binary operations require
  matching variable tags and return the minimum of the operand orders.

On top of these, the module provides formal exp/log, powers with rational
(or polynomial) exponents, powers with an exponent of the shape a/v + b,
composition, series inversion, and Lagrange inversion.  All arithmetic is
exact; there are no floating-point code paths.
"""
from __future__ import annotations

import math
from typing import Iterable, Sequence

from . import metrics
from .rationals import Rat, format_exact, is_scalar

__all__ = [
    "Poly",
    "TruncSeries",
    "lpoly",
    "ellpoly",
    "zpoly",
    "series_exp",
    "series_log",
    "series_inverse",
    "pow_int",
    "pow_rational",
    "pow_pole_exponent",
    "compose",
    "lagrange_invert",
]


def _is_zero(c) -> bool:
    return c == 0


def _zero_like(c):
    if isinstance(c, (Poly, TruncSeries)):
        return c.zero_like()
    return 0


def _one_like(c):
    if isinstance(c, (Poly, TruncSeries)):
        return c.one_like()
    return 1


class Poly:
    """Dense polynomial in one named variable, canonical (no trailing zeros).

    The zero polynomial has an empty coefficient tuple and degree -1.
    """

    __slots__ = ("var", "coeffs")

    def __init__(self, coeffs: Iterable = (), var: str = "x"):
        cs = list(coeffs)
        while cs and _is_zero(cs[-1]):
            cs.pop()
        object.__setattr__(self, "var", var)
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, *a):  # immutability
        raise AttributeError("Poly is immutable")

    # -- constructors ------------------------------------------------------
    @classmethod
    def constant(cls, c, var: str = "x") -> "Poly":
        return cls((c,), var)

    @classmethod
    def variable(cls, var: str = "x") -> "Poly":
        return cls((0, 1), var)

    @classmethod
    def monomial(cls, c, k: int, var: str = "x") -> "Poly":
        return cls((0,) * k + (c,), var)

    def zero_like(self) -> "Poly":
        return Poly((), self.var)

    def one_like(self) -> "Poly":
        return Poly((1,), self.var)

    # -- inspection --------------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coefficient(self, k: int):
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self):
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    # -- arithmetic --------------------------------------------------------
    def _coerce(self, other):
        """Return other's coefficient list if compatible, else None."""
        if isinstance(other, Poly):
            if other.var == self.var or other.is_constant() or self.is_constant():
                return other.coeffs
            raise ValueError(f"variable mismatch: {self.var!r} vs {other.var!r}")
        if isinstance(other, TruncSeries):
            return None
        return (other,)

    def __add__(self, other):
        cs = self._coerce(other)
        if cs is None:
            return NotImplemented
        var = self.var
        if isinstance(other, Poly) and self.is_constant() and not other.is_constant():
            var = other.var
        n = max(len(self.coeffs), len(cs))
        out = [0] * n
        for i, c in enumerate(self.coeffs):
            out[i] = c
        for i, c in enumerate(cs):
            out[i] = out[i] + c
        return Poly(out, var)

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs], self.var)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Poly) and not other.is_constant() and not self.is_constant():
            if other.var != self.var:
                raise ValueError(f"variable mismatch: {self.var!r} vs {other.var!r}")
        if isinstance(other, Poly):
            a, b = self.coeffs, other.coeffs
            if not a or not b:
                return Poly((), self.var)
            metrics.count(len(a) * len(b))
            out = [0] * (len(a) + len(b) - 1)
            for i, x in enumerate(a):
                if _is_zero(x):
                    continue
                for j, y in enumerate(b):
                    out[i + j] = out[i + j] + x * y
            return Poly(out, self.var if not self.is_constant() else other.var)
        if isinstance(other, TruncSeries):
            return NotImplemented
        return self.scale(other)

    def __rmul__(self, other):
        if isinstance(other, (Poly, TruncSeries)):
            return NotImplemented
        return self.scale(other)

    def scale(self, c) -> "Poly":
        """Multiply every coefficient by ``c`` (an element of the coefficient ring)."""
        if _is_zero(c):
            return Poly((), self.var)
        metrics.count(len(self.coeffs))
        return Poly([c * x for x in self.coeffs], self.var)

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise ValueError("Poly powers must be nonnegative integers")
        result = self.one_like()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    def shift(self, k: int) -> "Poly":
        """Multiply by var**k."""
        if self.is_zero():
            return self
        return Poly((0,) * k + self.coeffs, self.var)

    def derivative(self) -> "Poly":
        return Poly([i * c for i, c in enumerate(self.coeffs)][1:], self.var)

    def __call__(self, x):
        """Evaluate by Horner; ``x`` may be a scalar, a Poly, or a TruncSeries."""
        if not self.coeffs:
            return _zero_like(x) if isinstance(x, (Poly, TruncSeries)) else 0
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * x + c
        return acc

    # -- comparison / hashing ---------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Poly):
            if self.var != other.var and not (self.is_constant() and other.is_constant()):
                return False
            return self.coeffs == other.coeffs
        if isinstance(other, TruncSeries):
            return NotImplemented
        if is_scalar(other):
            if _is_zero(other):
                return not self.coeffs
            return len(self.coeffs) == 1 and self.coeffs[0] == other
        return NotImplemented

    def __hash__(self):
        return hash((self.var, self.coeffs))

    # -- rendering ---------------------------------------------------------
    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if _is_zero(c):
                continue
            if isinstance(c, (Poly, TruncSeries)):
                term = f"({c})"
            else:
                term = format_exact(c)
            if k == 0:
                parts.append(term)
            else:
                v = self.var if k == 1 else f"{self.var}^{k}"
                if term == "1":
                    parts.append(v)
                elif term == "-1":
                    parts.append(f"-{v}")
                else:
                    parts.append(f"{term}*{v}")
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    def __repr__(self):
        return f"Poly({self.var!r}: {self})"


def lpoly(*coeffs) -> Poly:
    """Polynomial in the Lefschetz class L."""
    return Poly(coeffs, "L")


def ellpoly(*coeffs) -> Poly:
    """Polynomial in the integer parameter ell."""
    return Poly(coeffs, "ell")


def zpoly(*coeffs) -> Poly:
    """Polynomial in z."""
    return Poly(coeffs, "z")


class TruncSeries:
    """Power series truncated at an explicit order (inclusive).

    Coefficients for exponents 0..order are stored; everything above is
    unknown, not zero.  Binary operations require matching variable tags
    and return the minimum order of the operands.
    """

    __slots__ = ("var", "order", "coeffs")

    def __init__(self, coeffs: Sequence, var: str, order: int | None = None):
        cs = list(coeffs)
        if order is None:
            order = len(cs) - 1
        if order < 0:
            raise ValueError("order must be >= 0")
        if len(cs) < order + 1:
            cs.extend([0] * (order + 1 - len(cs)))
        else:
            cs = cs[: order + 1]
        object.__setattr__(self, "var", var)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, *a):
        raise AttributeError("TruncSeries is immutable")

    # -- constructors ------------------------------------------------------
    @classmethod
    def constant(cls, c, var: str, order: int) -> "TruncSeries":
        return cls([c], var, order)

    @classmethod
    def variable(cls, var: str, order: int) -> "TruncSeries":
        return cls([0, 1], var, order)

    @classmethod
    def from_poly(cls, p: Poly, var: str, order: int) -> "TruncSeries":
        return cls(list(p.coeffs), var, order)

    def zero_like(self) -> "TruncSeries":
        return TruncSeries([], self.var, self.order)

    def one_like(self) -> "TruncSeries":
        return TruncSeries([1], self.var, self.order)

    # -- inspection --------------------------------------------------------
    def coefficient(self, k: int):
        if k > self.order:
            raise IndexError(f"coefficient {k} beyond truncation order {self.order}")
        return self.coeffs[k]

    def is_zero(self) -> bool:
        return all(_is_zero(c) for c in self.coeffs)

    def valuation(self) -> int | None:
        """Index of the first nonzero coefficient, or None if all zero."""
        for i, c in enumerate(self.coeffs):
            if not _is_zero(c):
                return i
        return None

    # -- arithmetic --------------------------------------------------------
    def _check(self, other) -> None:
        if other.var != self.var:
            raise ValueError(f"variable mismatch: {self.var!r} vs {other.var!r}")

    def __add__(self, other):
        if isinstance(other, TruncSeries):
            self._check(other)
            n = min(self.order, other.order)
            return TruncSeries(
                [self.coeffs[i] + other.coeffs[i] for i in range(n + 1)], self.var, n
            )
        cs = list(self.coeffs)
        cs[0] = cs[0] + other
        return TruncSeries(cs, self.var, self.order)

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries([-c for c in self.coeffs], self.var, self.order)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, TruncSeries):
            self._check(other)
            n = min(self.order, other.order)
            out = [None] * (n + 1)
            metrics.count((n + 1) * (n + 2) // 2)
            for k in range(n + 1):
                acc = None
                for i in range(k + 1):
                    a = self.coeffs[i]
                    b = other.coeffs[k - i]
                    if _is_zero(a) or _is_zero(b):
                        continue
                    t = a * b
                    acc = t if acc is None else acc + t
                out[k] = acc if acc is not None else 0
            return TruncSeries(out, self.var, n)
        if isinstance(other, Poly) and not other.is_constant():
            raise ValueError(
                f"cannot multiply series in {self.var!r} by polynomial in {other.var!r};"
                " use scale() for coefficient-domain scalars"
            )
        return self.scale(other)

    def __rmul__(self, other):
        if isinstance(other, TruncSeries):
            return NotImplemented
        return self.scale(other)

    def scale(self, c) -> "TruncSeries":
        """Multiply every coefficient by ``c`` (a coefficient-ring element)."""
        if _is_zero(c):
            return self.zero_like()
        metrics.count(self.order + 1)
        return TruncSeries([c * x for x in self.coeffs], self.var, self.order)

    def shift(self, k: int) -> "TruncSeries":
        """Multiply by var**k, keeping the truncation order."""
        if k == 0:
            return self
        if k > self.order:
            return self.zero_like()
        return TruncSeries([0] * k + list(self.coeffs[: self.order + 1 - k]),
                           self.var, self.order)

    def divide_by_variable(self) -> "TruncSeries":
        """Exact division by the variable; requires a vanishing constant term.

        The result is honest about what is known: its order drops by one.
        """
        if not _is_zero(self.coeffs[0]):
            raise ValueError("constant term must vanish for division by the variable")
        if self.order == 0:
            raise ValueError("cannot divide an order-0 series by its variable")
        return TruncSeries(list(self.coeffs[1:]), self.var, self.order - 1)

    def truncate(self, order: int) -> "TruncSeries":
        if order > self.order:
            raise ValueError(f"cannot extend order {self.order} to {order}")
        return TruncSeries(list(self.coeffs[: order + 1]), self.var, order)

    def derivative(self) -> "TruncSeries":
        if self.order == 0:
            raise ValueError("derivative of an order-0 series is unknown")
        return TruncSeries(
            [i * self.coeffs[i] for i in range(1, self.order + 1)], self.var, self.order - 1
        )

    def as_poly(self) -> Poly:
        """Forget the truncation, keeping the computed coefficients."""
        return Poly(self.coeffs, self.var)

    # -- comparison / rendering ---------------------------------------------
    def __eq__(self, other):
        if isinstance(other, TruncSeries):
            return (
                self.var == other.var
                and self.order == other.order
                and all(a == b for a, b in zip(self.coeffs, other.coeffs))
            )
        if is_scalar(other) or isinstance(other, Poly):
            return self.coeffs[0] == other and all(_is_zero(c) for c in self.coeffs[1:])
        return NotImplemented

    def __hash__(self):
        return hash((self.var, self.order, self.coeffs))

    def __str__(self):
        return f"{Poly(self.coeffs, self.var)} + O({self.var}^{self.order + 1})"

    def __repr__(self):
        return f"TruncSeries({self})"


# ---------------------------------------------------------------------------
# transcendental operations
# ---------------------------------------------------------------------------

def _exp_constant(c):
    if _is_zero(c):
        return None  # means "one"
    if isinstance(c, TruncSeries):
        return series_exp(c)
    raise ValueError("series_exp requires a vanishing (or exp-able) constant term")


def series_exp(s: TruncSeries) -> TruncSeries:
    """Formal exponential, via the differential-equation recursion E' = S'E.

    The constant term must be zero, or itself a series whose exponential
    exists (used for nested series such as exp(a*z + ...L...)).
    """
    e0 = _exp_constant(s.coeffs[0])
    out = [e0 if e0 is not None else _one_like(s.coeffs[1] if s.order else 1)]
    for m in range(1, s.order + 1):
        acc = None
        for i in range(1, m + 1):
            si = s.coeffs[i]
            if _is_zero(si):
                continue
            t = (i * si) * out[m - i]
            acc = t if acc is None else acc + t
        out.append(Rat(1, m) * acc if acc is not None else _zero_like(out[0]))
    return TruncSeries(out, s.var, s.order)


def series_log(s: TruncSeries) -> TruncSeries:
    """Formal logarithm; requires constant term exactly 1."""
    if not s.coeffs[0] == 1:
        raise ValueError("series_log requires constant term 1")
    out = [_zero_like(s.coeffs[0]) if isinstance(s.coeffs[0], (Poly, TruncSeries)) else 0]
    for m in range(1, s.order + 1):
        acc = s.coeffs[m]
        for i in range(1, m):
            li = out[i]
            sm = s.coeffs[m - i]
            if _is_zero(li) or _is_zero(sm):
                continue
            acc = acc - Rat(1, m) * ((i * li) * sm)
        out.append(acc)
    return TruncSeries(out, s.var, s.order)


def series_inverse(s: TruncSeries) -> TruncSeries:
    """Multiplicative inverse; requires constant term exactly 1."""
    if not s.coeffs[0] == 1:
        raise ValueError("series_inverse requires constant term 1")
    one = _one_like(s.coeffs[0])
    out = [one]
    for m in range(1, s.order + 1):
        acc = None
        for i in range(1, m + 1):
            si = s.coeffs[i]
            if _is_zero(si):
                continue
            t = si * out[m - i]
            acc = t if acc is None else acc + t
        out.append(-acc if acc is not None else _zero_like(one))
    return TruncSeries(out, s.var, s.order)


def pow_int(s: TruncSeries, e: int) -> TruncSeries:
    """Integer power; negative exponents require constant term 1."""
    if e < 0:
        return pow_int(series_inverse(s), -e)
    result = TruncSeries.constant(_one_like(s.coeffs[0]), s.var, s.order)
    base = s
    while e:
        if e & 1:
            result = result * base
        e >>= 1
        if e:
            base = base * base
    return result


def pow_rational(s: TruncSeries, e) -> TruncSeries:
    """``s ** e`` for a series with constant term 1.

    The exponent may be any exact scalar or a polynomial over the
    coefficient domain; the result is exp(e * log s).
    """
    return series_exp(series_log(s).scale(e))


def pow_pole_exponent(s: TruncSeries, a, b) -> TruncSeries:
    """``s ** (a/v + b)`` where v is the series variable of ``s``.

    Computed as exp(a * (log s)/v + b * log s).  log(s) always has zero
    constant term, so the term-shift division is exact; the order drops by
    one, and the shifted exponent must itself be exponentiable (its new
    constant term is a * [v^1] log s).
    """
    lg = series_log(s)
    exponent = lg.divide_by_variable().scale(a) + lg.scale(b)
    return series_exp(exponent)


def compose(outer: TruncSeries, inner: TruncSeries) -> TruncSeries:
    """Formal composition outer(inner); inner must have zero constant term.

    The result lives in inner's variable, at the minimum of both orders.
    """
    if not _is_zero(inner.coeffs[0]):
        raise ValueError("compose requires inner constant term 0")
    n = min(outer.order, inner.order)
    inner = inner.truncate(n) if inner.order > n else inner
    acc = TruncSeries.constant(outer.coeffs[n], inner.var, n)
    for k in range(n - 1, -1, -1):
        acc = acc * inner + outer.coeffs[k]
    return acc


def lagrange_invert(g: TruncSeries, n: int):
    """n-th inversion coefficient of a series g with g(0)=0, g'(0)=1.

    Returns a_n = (n-1)! * [v^(n-1)] (v/g)^n, the exponential-generating
    coefficient of the compositional inverse of g.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not _is_zero(g.coeffs[0]):
        raise ValueError("lagrange_invert requires zero constant term")
    unit = g.divide_by_variable()
    if not unit.coeffs[0] == 1:
        raise ValueError("lagrange_invert requires unit linear coefficient")
    if unit.order < n - 1:
        raise ValueError(f"need g to order {n}, have {g.order}")
    phi = series_inverse(unit.truncate(n - 1))
    return math.factorial(n - 1) * pow_int(phi, n).coefficient(n - 1)
