"""Grothendieck classes and Betti numbers of the genus-0 moduli spaces.

Every route to the class of the n-pointed space is implemented
independently and cross-validated:

* :func:`keel_oracle` -- the Keel/Manin differential-equation recursion for
  the generating function; the designated ground truth.
* :func:`class_stirling` / :func:`betti_stirling` -- the closed Stirling-number
  formula and the per-Betti-number triple sum it implies.
* :func:`class_ell_sum` -- the infinite sum of rational-exponent power
  series whose tails vanish degree by degree.
* :func:`betti_bernoulli` -- Betti numbers from exponentiated log-coefficient
  series whose inputs are power sums / Bernoulli numbers.
* :func:`class_getzler` -- Lagrange inversion of the functional inverse of
  the generating function, following Getzler's formula.
* :func:`stirling_trace` -- shifted trace of the conjugated Stirling-matrix
  product.

The classes carry positive integer coefficients, degree n-3, constant term
1 and are palindromic; all of that is validated on construction.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass

from .combinat import bernoulli, faulhaber_sum, stirling_first, stirling_second
from .rationals import Rat, as_integer
from .report import VerifyReport
from .series import (
    Poly,
    TruncSeries,
    pow_int,
    pow_pole_exponent,
    series_exp,
    series_log,
)

__all__ = [
    "GrothendieckClass",
    "MHatSeries",
    "keel_oracle",
    "class_keel",
    "class_stirling",
    "betti_stirling",
    "class_ell_sum",
    "betti_bernoulli",
    "class_getzler",
    "stirling_trace",
    "class_trace",
    "functional_equation_residual",
    "mhat_closed_form",
    "euler_char",
    "chi_series",
    "CLASS_FORMULAS",
]


@dataclass(frozen=True)
class GrothendieckClass:
    """The class of the n-pointed space as a polynomial in the Lefschetz class L.

    Coefficients are the even Betti numbers; the polynomial is validated to
    have degree n-3, positive integer coefficients, constant term 1, and to
    be palindromic (Poincare duality -- used as an extra cross-check).
    """

    n: int
    poly: Poly

    def __post_init__(self):
        if self.n < 3:
            raise ValueError("n must be >= 3")
        cs = [as_integer(c) for c in self.poly.coeffs]
        if len(cs) != self.n - 2:
            raise ValueError(f"expected degree {self.n - 3}, got {self.poly.degree}")
        if cs[0] != 1:
            raise ValueError("constant term must be 1")
        if any(c <= 0 for c in cs):
            raise ValueError("coefficients must be positive")
        if cs != cs[::-1]:
            raise ValueError("class is not palindromic")
        object.__setattr__(self, "poly", Poly(cs, "L"))

    def betti(self, ell: int) -> int:
        """Rank of H^(2 ell)."""
        c = self.poly.coefficient(ell)
        return int(c) if ell <= self.poly.degree else 0

    def coefficients(self) -> list[int]:
        return [int(c) for c in self.poly.coeffs]

    def euler(self) -> int:
        return sum(self.coefficients())

    def __str__(self):
        return str(self.poly)


@dataclass(frozen=True)
class MHatSeries:
    """Truncation of the exponential generating function of the classes.

    ``coeffs[r]`` is the z^r coefficient, a polynomial in L; the class of
    the n-pointed space is (n-1)! times coeffs[n-1].  ``L_order`` of None
    means the coefficients are exact polynomials.
    """

    z_order: int
    L_order: int | None
    coeffs: tuple

    def coefficient(self, r: int) -> Poly:
        return self.coeffs[r]

    def class_of(self, n: int) -> GrothendieckClass:
        if self.L_order is not None and self.L_order < n - 3:
            raise ValueError("L truncation too small to recover the class")
        return GrothendieckClass(n, self.coeffs[n - 1].scale(math.factorial(n - 1)))

    def matrix(self, z_order: int, L_order: int) -> tuple:
        """Coefficient grid [r][t] for z^r L^t, truncated."""
        return tuple(
            tuple(self.coeffs[r].coefficient(t) for t in range(L_order + 1))
            for r in range(z_order + 1)
        )


# ---------------------------------------------------------------------------
# the differential-equation oracle
# ---------------------------------------------------------------------------

_oracle_lock = threading.Lock()
_oracle_coeffs: list[Poly] = [Poly((1,), "L"), Poly((1,), "L")]  # m_0, m_1


def _oracle_extend(z_order: int) -> None:
    with _oracle_lock:
        m = _oracle_coeffs
        while len(m) <= z_order:
            r = len(m) - 1
            # (r+1) m_{r+1} = (1 - L r) m_r + L sum_{i+j=r, i<r} (i+1) m_{i+1} m_j.
            # The i = r self-term has already cancelled the (1+L) factor on the
            # left; this exact cancellation is what keeps coefficients polynomial.
            acc = m[r] - m[r].shift(1).scale(r)
            for i in range(r):
                acc = acc + (m[i + 1] * m[r - i]).shift(1).scale(i + 1)
            m.append(acc.scale(Rat(1, r + 1)))


def keel_oracle(n_max: int, L_order: int | None = None) -> MHatSeries:
    """Solve the generating-function ODE as an exact coefficient recursion.

    Returns the series through z^(n_max - 1); with L_order None (or at
    least n_max - 3) the coefficients are exact and every class with
    n <= n_max can be read off.
    """
    if n_max < 3:
        raise ValueError("n_max must be >= 3")
    z_order = n_max - 1
    _oracle_extend(z_order)
    cs = _oracle_coeffs[: z_order + 1]
    if L_order is not None:
        cs = [Poly(p.coeffs[: L_order + 1], "L") for p in cs]
    return MHatSeries(z_order, L_order, tuple(cs))


def class_keel(n: int) -> GrothendieckClass:
    """The class of the n-pointed space straight from the ODE oracle."""
    return keel_oracle(n).class_of(n)


# ---------------------------------------------------------------------------
# Stirling-number formula
# ---------------------------------------------------------------------------

def _one_minus_L_pow(e: int) -> Poly:
    return Poly([(-1) ** k * math.comb(e, k) for k in range(e + 1)], "L")


def class_stirling(n: int) -> GrothendieckClass:
    """Closed formula: (1-L)^(n-1) times a Stirling-number double series.

    The j-sum is finite (second-kind numbers vanish for j > n-2).  The
    k-sum is truncated at K = 2n-5: discarded terms only touch powers
    above K >= n-3, and the computed part of the product is asserted to
    vanish strictly above degree n-3.
    """
    if n < 3:
        raise ValueError("n must be >= 3")
    K = max(2 * n - 5, n - 3)
    series = [0] * (K + 1)
    for k in range(K + 1):
        for j in range(min(n - 2, K - k) + 1):
            series[k + j] += stirling_first(k + n - 1, k + n - 1 - j) * stirling_second(
                k + n - 1 - j, k + 1
            )
    prod = (Poly(series, "L") * _one_minus_L_pow(n - 1)).coeffs[: K + 1]
    tail = prod[n - 2 :]
    assert all(c == 0 for c in tail), "tail of the Stirling sum failed to cancel"
    return GrothendieckClass(n, Poly(prod[: n - 2], "L"))


def betti_stirling(n: int, ell: int) -> int:
    """Individual Betti number as the explicit triple Stirling sum."""
    if n < 3:
        raise ValueError("n must be >= 3")
    if ell < 0:
        raise ValueError("ell must be >= 0")
    total = 0
    for j in range(ell + 1):
        for k in range(ell - j + 1):
            total += (
                (-1) ** (ell - j - k)
                * math.comb(n - 1, ell - j - k)
                * stirling_first(k + n - 1, k + n - 1 - j)
                * stirling_second(k + n - 1 - j, k + 1)
            )
    return total


# ---------------------------------------------------------------------------
# the ell-indexed sum of rational-exponent series
# ---------------------------------------------------------------------------

def class_ell_sum(n: int) -> tuple[GrothendieckClass, list[TruncSeries]]:
    """Sum of the ell-indexed series route; also returns each summand.

    Each summand is expanded as an L-series to order n-3.  The summand with
    index ell is divisible by L^ell (asserted), so indices above n-3
    contribute nothing to the class.
    """
    if n < 3:
        raise ValueError("n must be >= 3")
    order = n - 3
    summands = []
    total = TruncSeries.constant(0, "L", order)
    L = TruncSeries.variable("L", order + 2)
    one_minus_L2 = 1 - L * L
    inv_one_plus_L = pow_int(1 + L, -(n - 1))
    for ell in range(order + 1):
        # (1-L^2)^((ell+1)/L - ell) / (1+L)^(n-1) * prod_{j<=ell+n-2}(1 - jL/(ell+1))
        body = pow_pole_exponent(one_minus_L2, ell + 1, -ell) * inv_one_plus_L.truncate(
            order + 1
        )
        prod = Poly((1,), "L")
        for j in range(ell + n - 1):
            prod = prod * Poly((1, Rat(-j, ell + 1)), "L")
        body = body * TruncSeries(list(prod.coeffs), "L", order + 1)
        scale = Rat((ell + 1) ** (ell + n - 1), math.factorial(ell + 1))
        summand = body.scale(scale).shift(ell).truncate(order)
        assert all(summand.coeffs[i] == 0 for i in range(ell)), (
            f"summand ell={ell} fails to vanish below L^{ell}"
        )
        summands.append(summand)
        total = total + summand
    cls = GrothendieckClass(n, Poly(total.coeffs, "L"))
    return cls, summands


# ---------------------------------------------------------------------------
# Bernoulli-number route to Betti numbers
# ---------------------------------------------------------------------------

def _c_coefficient(n: int, k: int, i: int):
    """Log-expansion coefficient C_{n,k,i}, computed by two routes.

    The direct route uses the power sum 0^i + ... + (k+n-2)^i; the second
    expresses that sum through Bernoulli numbers (with the argument k+n-1,
    which is the minus-convention reading, i.e. (-1)^j B_j here).
    """
    head = Rat((-1) ** i * (2 * k * i + n * i + k + n - 1) + k - i, i * (i + 1))
    direct = head - Rat(faulhaber_sum(k + n - 2, i), i * (k + 1) ** i)
    acc = Rat(0)
    for j in range(i + 1):
        acc += math.comb(i + 1, j) * (-1) ** j * bernoulli(j) * (k + n - 1) ** (i - j + 1)
    via_bern = head - acc / (i * (i + 1) * (k + 1) ** i)
    assert direct == via_bern, f"C coefficient mismatch at (n,k,i)=({n},{k},{i})"
    return direct


def _compositions_sum(c: list, r: int):
    """sum_m (1/m!) sum_{i_1+...+i_m=r} c[i_1]...c[i_m], positive parts.

    Exponential enumeration; retained as a self-check of the series
    exponential for small r.
    """
    if r == 0:
        return Rat(1)
    total = Rat(0)
    stack = [((), r)]
    while stack:
        prefix, rem = stack.pop()
        for i in range(1, rem + 1):
            parts = prefix + (i,)
            if i == rem:
                prod = Rat(1)
                for p in parts:
                    prod *= c[p]
                total += prod / math.factorial(len(parts))
            else:
                stack.append((parts, rem - i))
    return total


def betti_bernoulli(n: int, ell: int) -> int:
    """Betti number from exponentiated log-coefficient series.

    For n in {1, 2} the formula degenerates to 1 for ell = 0 and 0
    otherwise.
    """
    if n < 1 or ell < 0:
        raise ValueError("need n >= 1 and ell >= 0")
    if n < 3:
        return 1 if ell == 0 else 0
    total = Rat(0)
    for k in range(ell + 1):
        r = ell - k
        cs = [None] + [_c_coefficient(n, k, i) for i in range(1, r + 1)]
        if r == 0:
            coeff = Rat(1)
        else:
            expo = series_exp(TruncSeries([0] + cs[1:], "L", r))
            coeff = expo.coefficient(r)
        if r <= 6:
            assert coeff == _compositions_sum(cs, r), (
                f"composition enumeration disagrees at (n,ell,k)=({n},{ell},{k})"
            )
        total += Rat((k + 1) ** (k + n - 1), math.factorial(k + 1)) * coeff
    return as_integer(total)


# ---------------------------------------------------------------------------
# Getzler inversion route
# ---------------------------------------------------------------------------

def _getzler_ratio(order: int) -> TruncSeries:
    """The unit x-series L(L-1)x / (1 + L^2 x - (1+x)^L) over L-polynomials.

    The denominator's x-linear coefficient is L^2 - L, and every higher
    binomial coefficient of (1+x)^L is divisible by L(L-1), so the ratio
    has polynomial coefficients: it is 1/(1 - h) with
    h = sum_{j>=1} (L-2)(L-3)...(L-j) / (j+1)! x^j.
    """
    h = [Poly((), "L")]
    fall = Poly((1,), "L")
    for j in range(1, order + 1):
        if j >= 2:
            fall = fall * Poly((-j, 1), "L")
        h.append(fall.scale(Rat(1, math.factorial(j + 1))))
    one = TruncSeries.constant(Poly((1,), "L"), "x", order)
    return pow_int(one - TruncSeries(h, "x", order), -1)


def class_getzler(n: int) -> GrothendieckClass:
    """(n-2)! times the x^(n-2) coefficient of the inversion ratio's (n-1)-st power."""
    if n < 3:
        raise ValueError("n must be >= 3")
    ratio = _getzler_ratio(n - 2)
    coeff = pow_int(ratio, n - 1).coefficient(n - 2)
    if not isinstance(coeff, Poly):
        coeff = Poly((coeff,), "L")
    return GrothendieckClass(n, coeff.scale(math.factorial(n - 2)))


# ---------------------------------------------------------------------------
# Stirling-matrix trace route
# ---------------------------------------------------------------------------

def stirling_trace(n: int, L_order: int) -> TruncSeries:
    """Sum of the (n-2)-nd subdiagonal of the conjugated Stirling product.

    The (a, b) entry of the matrix is sum_c s(a,c) S(c,b) L^(a+b-c-1);
    along the subdiagonal a = k+n-1, b = k+1, only finitely many entries
    touch each power of L, so the trace is a well-defined L-series.
    """
    if n < 3:
        raise ValueError("n must be >= 3")
    if L_order < n - 3:
        raise ValueError("L_order must be at least n-3")
    out = [0] * (L_order + 1)
    for k in range(L_order + 1):
        a, b = k + n - 1, k + 1
        for c in range(max(b, a + b - 1 - L_order), a + 1):
            out[a + b - 1 - c] += stirling_first(a, c) * stirling_second(c, b)
    return TruncSeries(out, "L", L_order)


def class_trace(n: int, L_order: int | None = None) -> GrothendieckClass:
    """(1-L)^(n-1) times the shifted trace, reduced to the class.

    With L_order above n-3 the reduction is over-determined and the excess
    coefficients are asserted to vanish.
    """
    if L_order is None:
        L_order = max(2 * n - 5, n - 3)
    tr = stirling_trace(n, L_order)
    prod = tr * TruncSeries(list(_one_minus_L_pow(n - 1).coeffs), "L", L_order)
    assert all(prod.coeffs[t] == 0 for t in range(n - 2, L_order + 1)), (
        "trace reduction has nonzero terms above degree n-3"
    )
    return GrothendieckClass(n, Poly(prod.coeffs[: n - 2], "L"))


# ---------------------------------------------------------------------------
# functional equation and the closed-form expansion
# ---------------------------------------------------------------------------

def functional_equation_residual(n_max: int, mhat: MHatSeries | None = None) -> VerifyReport:
    """Check MHat^L = L^2 MHat + (1-L)(1 + (z+1)L) through z^(n_max - 1).

    The L-th power is exp(L log MHat), well-defined because the z-constant
    term of the series is 1.  Reports the first offending coefficient on
    failure (a perturbed series can be passed in to exercise that path).
    """
    if mhat is None:
        mhat = keel_oracle(max(n_max, 3))
    z_order = min(n_max - 1, mhat.z_order) if n_max >= 1 else mhat.z_order
    s = TruncSeries([c for c in mhat.coeffs[: z_order + 1]], "z", z_order)
    powered = series_exp(series_log(s).scale(Poly((0, 1), "L")))
    L2 = Poly((0, 0, 1), "L")
    rhs_const = Poly((1, 0, -1), "L")  # (1-L)(1+L) at z^0
    rhs_lin = Poly((0, 1, -1), "L")  # (1-L) L at z^1
    residual = powered - s.scale(L2) - (
        TruncSeries([rhs_const, rhs_lin], "z", z_order)
    )
    for r in range(z_order + 1):
        c = residual.coefficient(r)
        if not c == 0:
            p = c if isinstance(c, Poly) else Poly((c,), "L")
            t = next(t for t, v in enumerate(p.coeffs) if not v == 0)
            return VerifyReport(
                "functional_equation", (n_max,), False,
                witness=f"z^{r} L^{t}: {p.coefficient(t)}",
            )
    return VerifyReport("functional_equation", (n_max,), True)


def mhat_closed_form(z_order: int, L_order: int) -> MHatSeries:
    """Expand the closed-form generating function to (z^z_order, L^L_order).

    Summand ell is ((ell+1)^ell / (ell+1)!) times
    ((1-L)(1+(z+1)L))^((ell+1)/L - ell) times prod_{j<ell}(1 - jL/(ell+1)),
    shifted by L^ell.  The base has L-linear coefficient z, so the shifted
    exponent is exponentiated inside the z-series coefficient ring.
    """
    zero_z = TruncSeries.constant(0, "z", z_order)
    one_z = TruncSeries.constant(1, "z", z_order)
    z_z = TruncSeries.variable("z", z_order)
    # (1-L)(1+(z+1)L) = 1 + zL - (z+1)L^2
    base = TruncSeries([one_z, z_z, -(z_z + 1)], "L", L_order + 1)
    total = TruncSeries.constant(zero_z, "L", L_order)
    for ell in range(L_order + 1):
        body = pow_pole_exponent(base, ell + 1, -ell)
        prod = Poly((1,), "L")
        for j in range(ell):
            prod = prod * Poly((1, Rat(-j, ell + 1)), "L")
        body = body * TruncSeries([one_z.scale(c) for c in prod.coeffs], "L", L_order)
        scale = Rat((ell + 1) ** ell, math.factorial(ell + 1))
        total = total + body.scale(scale).shift(ell).truncate(L_order)
    coeffs = []
    for r in range(z_order + 1):
        coeffs.append(Poly([total.coefficient(t).coefficient(r) for t in range(L_order + 1)], "L"))
    return MHatSeries(z_order, L_order, tuple(coeffs))


# ---------------------------------------------------------------------------
# Euler characteristics
# ---------------------------------------------------------------------------

def euler_char(n: int) -> int:
    """Euler characteristic: the class evaluated at L = 1."""
    return class_keel(n).euler()


_chi_lock = threading.Lock()
_chi_coeffs: list = [Rat(1)]


def chi_series(n_max: int) -> TruncSeries:
    """Exponential generating function of the Euler characteristics.

    Solves d(chi)/dz = chi / (2 + z - chi), chi(0) = 1, as a coefficient
    recursion (the self-term cancellation mirrors the class oracle).
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    order = n_max - 1
    with _chi_lock:
        c = _chi_coeffs
        while len(c) <= order:
            r = len(c) - 1
            acc = (1 - r) * c[r]
            for i in range(r):
                acc += (i + 1) * c[i + 1] * c[r - i]
            c.append(Rat(acc, r + 1))
        out = list(c[: order + 1])
    return TruncSeries(out, "z", order)


CLASS_FORMULAS = {
    "keel": class_keel,
    "stirling": class_stirling,
    "ellsum": lambda n: class_ell_sum(n)[0],
    "getzler": class_getzler,
    "trace": class_trace,
}
