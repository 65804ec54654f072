"""Tree-function machinery and trace-diagonal polynomials.

The tree function T(t) = sum n^(n-1) t^n / n! (minus the principal Lambert
W branch at -t) satisfies T = t e^T.  Substituting T = T(e^z L) turns the
generating function of the classes into a finite-looking sum

    (T/L) * sum_m (-1)^m F_m(z, T) / (1-T)^(2m-1) L^m

with F_m an honest polynomial: degree 2m in z, degree < 3m in tau.  This
module computes the F_m from the p-polynomial family, reconstructs the
generating function that way, and checks it against the class oracle.

Also here: the sigma_a numerator polynomials of the Stirling column
generating functions sum_N S(N+a, N+1) x^N = sigma_a(x)/(1-x)^(2a-1), and
the polynomials a_n(k) whose values are the shifted-trace coefficients,
with leading coefficient chi/(n-2)!.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass

from .classes import MHatSeries, euler_char, keel_oracle, stirling_trace
from .ppoly import p_polynomial
from .rationals import Rat
from .report import VerifyReport
from .series import Poly, TruncSeries, pow_int, pow_rational, series_exp

__all__ = [
    "tree_series",
    "FmPoly",
    "f_m_polynomial",
    "mhat_from_tree",
    "sigma_poly",
    "check_sigma_generating",
    "a_n_polynomial",
]


def tree_series(order: int) -> TruncSeries:
    """The tree function as a t-series: coefficient of t^n is n^(n-1)/n!.

    The defining relation T = t e^T is asserted to the truncation order.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    t = [Rat(0)] + [Rat(n ** (n - 1), math.factorial(n)) for n in range(1, order + 1)]
    T = TruncSeries(t, "t", order)
    relation = T - TruncSeries.variable("t", order) * series_exp(T)
    assert relation.is_zero(), "tree series does not satisfy T = t exp(T)"
    return T


@dataclass(frozen=True)
class FmPoly:
    """F_m(z, tau): z-major bivariate polynomial, z-degree 2m, tau-degree < 3m.

    The index-0 member is the designated special value 1/(1-tau), kept as a
    flag (poly is None) rather than a polynomial.
    """

    m: int
    poly: Poly | None

    def __post_init__(self):
        if self.m == 0:
            if self.poly is not None:
                raise ValueError("index 0 is the reciprocal flag, not a polynomial")
            return
        if self.poly.degree > 2 * self.m:
            raise AssertionError(f"F_{self.m} exceeds z-degree {2*self.m}")
        for c in self.poly.coeffs:
            if isinstance(c, Poly) and c.degree > 3 * self.m - 1:
                raise AssertionError(f"F_{self.m} exceeds tau-degree {3*self.m - 1}")

    def z_coefficient(self, j: int) -> Poly:
        c = self.poly.coefficient(j)
        return c if isinstance(c, Poly) else Poly((c,), "tau")


_fm_lock = threading.Lock()
_fm_cache: dict[int, FmPoly] = {}


def f_m_polynomial(m: int, pad: int | None = None) -> FmPoly:
    """Compute F_m from the congruence characterization.

    Expands sum_{ell} p_m^(m+ell)(z) (1-tau)^(2m-1) e^(-(ell+1)tau) tau^ell
    as a tau-series well beyond degree 3m-1 and asserts that every computed
    coefficient from tau^(3m) on vanishes: this termination is exactly what
    makes F_m a polynomial.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    with _fm_lock:
        if m in _fm_cache and pad is None:
            return _fm_cache[m]
    order = (3 * m - 1) + (pad if pad is not None else m + 1)
    one_minus = pow_int(
        TruncSeries([1, -1], "tau", order), 2 * m - 1
    )
    total = TruncSeries.constant(0, "tau", order)
    for ell in range(order + 1):
        p = p_polynomial(m + ell, m).poly
        e_series = TruncSeries(
            [Rat((-(ell + 1)) ** r, math.factorial(r)) for r in range(order + 1)],
            "tau", order,
        )
        term = (one_minus * e_series).scale(p).shift(ell)
        total = total + term
    for r in range(3 * m, order + 1):
        assert total.coefficient(r) == 0, (
            f"F_{m} series fails to terminate: tau^{r} coefficient {total.coefficient(r)}"
        )
    # transpose to z-major: coefficient of z^j is a tau-polynomial
    zdeg = max((c.degree if isinstance(c, Poly) else 0) for c in total.coeffs[: 3 * m])
    zcoeffs = []
    for j in range(zdeg + 1):
        taucs = []
        for r in range(3 * m):
            c = total.coefficient(r)
            taucs.append(c.coefficient(j) if isinstance(c, Poly) else (c if j == 0 else 0))
        zcoeffs.append(Poly(taucs, "tau"))
    fm = FmPoly(m, Poly(zcoeffs, "z"))
    with _fm_lock:
        _fm_cache.setdefault(m, fm)
    return fm


def _tree_of_exp_z(n_max: int, L_order: int) -> TruncSeries:
    """T(e^z L) as an L-series with z-series coefficients."""
    z_order = n_max - 1
    coeffs: list = [TruncSeries.constant(0, "z", z_order)]
    for n in range(1, L_order + 1):
        c = Rat(n ** (n - 1), math.factorial(n))
        coeffs.append(
            TruncSeries([c * Rat(n**r, math.factorial(r)) for r in range(z_order + 1)],
                        "z", z_order)
        )
    return TruncSeries(coeffs, "L", L_order)


def _mhat_tree_sum(n_max: int, L_ord: int, m_max: int) -> MHatSeries:
    if L_ord < 1:
        raise ValueError("need L order >= 1")
    z_order = n_max - 1
    T = _tree_of_exp_z(n_max, L_ord)
    one_minus_T = 1 - T
    one_z = TruncSeries.constant(1, "z", z_order)

    def lift(c) -> TruncSeries:
        """Scalar -> constant L-series over z-series."""
        return TruncSeries.constant(one_z.scale(c), "L", L_ord)

    total = lift(1)
    for m in range(1, m_max + 1):
        fm = f_m_polynomial(m)
        fm_at_T = lift(0)
        for j in range(fm.poly.degree + 1):
            tau_poly = fm.z_coefficient(j)
            if tau_poly.is_zero():
                continue
            val = lift(tau_poly.coefficient(tau_poly.degree))
            for r in range(tau_poly.degree - 1, -1, -1):
                val = val * T + tau_poly.coefficient(r)
            zpow = TruncSeries([0] * j + [1], "z", z_order)
            fm_at_T = fm_at_T + val.scale(zpow)
        term = fm_at_T * pow_rational(one_minus_T, -(2 * m - 1))
        total = total + (term if m % 2 == 0 else -term).shift(m)
    mhat = T.divide_by_variable() * total.truncate(L_ord - 1)
    coeffs = []
    for r in range(z_order + 1):
        coeffs.append(
            Poly([mhat.coefficient(t).coefficient(r) for t in range(mhat.order + 1)], "L")
        )
    return MHatSeries(z_order, mhat.order, tuple(coeffs))


def mhat_from_tree(
    n_max: int, L_order: int, m_max: int | None = None
) -> tuple[MHatSeries, VerifyReport]:
    """Reconstruct the class generating function through the tree function.

    Uses F_m for m <= m_max (default L_order + 1) and compares the result
    with the differential-equation oracle through (z^(n_max-1),
    L^(L_order-1)).  The m-sum is asserted stable: raising m_max by one
    must not change any retained coefficient.
    """
    if L_order < 1:
        raise ValueError("L_order must be >= 1")
    if m_max is None:
        m_max = L_order + 1
    if m_max < L_order:
        raise ValueError("m_max must be at least L_order")
    built = _mhat_tree_sum(n_max, L_order + 1, m_max)
    bumped = _mhat_tree_sum(n_max, L_order + 1, m_max + 1)
    if built.coeffs != bumped.coeffs:
        return built, VerifyReport(
            "mhat_from_tree", (n_max, L_order, m_max), False,
            witness="m-sum not stable under m_max + 1",
        )
    oracle = keel_oracle(n_max)
    for r in range(built.z_order + 1):
        for t in range(built.L_order + 1):
            got = built.coeffs[r].coefficient(t)
            want = oracle.coeffs[r].coefficient(t)
            if not got == want:
                return built, VerifyReport(
                    "mhat_from_tree", (n_max, L_order, m_max), False,
                    witness=f"z^{r} L^{t}: got {got}, oracle {want}",
                )
    return built, VerifyReport("mhat_from_tree", (n_max, L_order, m_max), True)


_sigma_lock = threading.Lock()
_sigma: list[Poly] = [None, Poly((1,), "x")]  # 1-indexed


def sigma_poly(a: int) -> Poly:
    """Numerator of the Stirling column generating function.

    sigma_1 = 1; thereafter
    sigma_a = (1-x)(sigma_{a-1} + x sigma'_{a-1}) + (2a-3) x sigma_{a-1}.
    Degree a-2 with leading coefficient (a-1)! and positive integer
    coefficients (counts of Stirling permutations by descents).
    """
    if a < 1:
        raise ValueError("a must be >= 1")
    with _sigma_lock:
        while len(_sigma) <= a:
            b = len(_sigma)
            prev = _sigma[b - 1]
            one_minus_x = Poly((1, -1), "x")
            nxt = one_minus_x * (prev + prev.derivative().shift(1)) + prev.shift(1).scale(
                2 * b - 3
            )
            if b >= 2:
                assert nxt.degree == b - 2, f"sigma_{b} degree {nxt.degree}"
                assert nxt.leading() == math.factorial(b - 1)
            assert all(isinstance(c, int) and c > 0 for c in nxt.coeffs)
            _sigma.append(nxt)
        return _sigma[a]


def check_sigma_generating(a: int, order: int = 30) -> VerifyReport:
    """sigma_a against its generating identity.

    (1-x)^(2a-1) sum_{N<=order} S(N+a, N+1) x^N must agree with sigma_a(x)
    through x^(order - 2a); the leading coefficient (a-1)! is re-asserted.
    """
    from .combinat import stirling_second

    if a < 1 or order <= 2 * a:
        raise ValueError("need a >= 1 and order > 2a")
    sig = sigma_poly(a)
    col = TruncSeries([stirling_second(N + a, N + 1) for N in range(order + 1)], "x", order)
    prod = col * pow_int(TruncSeries([1, -1], "x", order), 2 * a - 1)
    keep = order - 2 * a
    want = TruncSeries(list(sig.coeffs), "x", keep)
    got = prod.truncate(keep)
    if got == want and (a == 1 or sig.leading() == math.factorial(a - 1)):
        return VerifyReport("sigma_generating", (a, order), True)
    bad = next(i for i in range(keep + 1) if got.coeffs[i] != want.coeffs[i])
    return VerifyReport(
        "sigma_generating", (a, order), False,
        witness=f"x^{bad}: {got.coeffs[bad]} != {want.coeffs[bad]}",
    )


def a_n_polynomial(n: int) -> Poly:
    """Polynomial a_n(k) whose values are the shifted-trace coefficients.

    Expand the class in the basis (1-L)^ell; then
    a_n(k) = sum_ell b_ell C(k+n-ell-2, n-ell-2), of degree n-2 with
    leading coefficient chi/(n-2)!.  Checked against the trace series at
    k = 0..6.
    """
    if n < 3:
        raise ValueError("n must be >= 3")
    cls = keel_oracle(n).class_of(n)
    # substitute L -> 1 - y:  coefficients of y^ell are the b_ell
    b = cls.poly(Poly((1, -1), "y"))
    if not isinstance(b, Poly):
        b = Poly((b,), "y")
    assert b.coefficient(0) == euler_char(n), "basis expansion disagrees with chi"
    out = Poly((), "k")
    for ell in range(n - 2):
        c = n - ell - 2
        binom_poly = Poly((1,), "k")
        for i in range(1, c + 1):
            binom_poly = binom_poly * Poly((i, 1), "k")
        out = out + binom_poly.scale(Rat(b.coefficient(ell), math.factorial(c)))
    assert out.degree == n - 2
    assert out.leading() == Rat(euler_char(n), math.factorial(n - 2))
    tr = stirling_trace(n, 6)
    for k in range(7):
        assert out(k) == tr.coefficient(k), f"a_{n}({k}) != trace coefficient"
    return out
