"""Polynomial families behind the Betti-number generating functions.

For each fixed m, the generating function of the 2k-th Betti numbers is
controlled by polynomials p_m^(k)(z) of degree 2m whose coefficients are
values of universal polynomials Gamma_mj at ell = k - m:

    c_mj^(k) = (k-m+1)^(k-2m+j) / (k-m+1)!  *  Gamma_mj(k-m).

Gamma is the convolution of two families computed here symbolically in ell:

* Delta_mj -- coefficients of the exponential of an explicit bivariate
  log-series with positive coefficients (degree 2m-j, positive);
* beta_m   -- the u^m coefficient of prod_{j<ell}(1+ju), a polynomial in
  ell of degree 2m via Faulhaber power sums.

Gamma_mj takes positive values at every integer ell >= 0, but its
*coefficients* may be negative for large m (first at m = 21), so only
value-positivity is asserted.  Ultra-log-concavity of the whole family
p_m^(m+ell), ell >= 0, reduces to nonnegativity of finitely many
certificate polynomials in ell, decided exactly by a root bound plus
integer evaluation.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field

from .classes import keel_oracle
from .combinat import faulhaber_poly, falling_factorial
from .rationals import Rat, as_integer
from .report import VerifyReport
from .series import Poly, TruncSeries, pow_pole_exponent, series_exp

__all__ = [
    "DeltaPoly",
    "BetaPoly",
    "GammaPoly",
    "PPoly",
    "delta_poly",
    "beta_poly",
    "gamma_poly",
    "p_polynomial",
    "alpha_check",
    "betti_gamma",
    "PositivityCertificate",
    "positivity_certificate",
    "UlcReport",
    "ulc_certify",
    "ulc_certificate_poly",
    "gamma_generating",
    "p_generating_slice",
    "VALUE_POSITIVITY_STRESS",
]

VALUE_POSITIVITY_STRESS = 50  # default integer range for value-positivity asserts


def _ell(*coeffs) -> Poly:
    return Poly(coeffs, "ell")


def _delta_log_term(i: int) -> Poly:
    """The u^i coefficient of the Delta log-series: a z-polynomial over ell.

    Closed form by cases; every entry has positive coefficients and degree
    i+1-j in ell for the z^j slice.
    """
    ell1 = _ell(1, 1)  # ell + 1
    zcoeffs = []
    if i % 2 == 1:
        head = (ell1 ** (i + 1)).scale(Rat(2, i + 1))
    else:
        head = (ell1 ** i * _ell(0, 1)).scale(Rat(2, i))
    zcoeffs.append(head)
    for j in range(1, i + 1):
        body = ell1 ** (i - j) * _ell(i, 2 * i - j + 1)  # (ell+1)^(i-j) (i + (2i-j+1) ell)
        zcoeffs.append(body.scale(Rat(math.comb(i + 1, j), i * (i + 1))))
    zcoeffs.append(_ell(Rat(1, i + 1)))
    return Poly(zcoeffs, "z")


class _DeltaTable:
    """Grow-only table of the exponentiated Delta series, symbolic in ell.

    ``d[m]`` is a z-polynomial with ell-polynomial coefficients; its z^j
    coefficient is Delta_mj(ell).  Extension is incremental in m.
    """

    def __init__(self):
        self._lock = threading.Lock()
        self._log: list[Poly] = [Poly((), "z")]
        self._d: list[Poly] = [Poly((_ell(1),), "z")]

    def ensure(self, m_max: int) -> None:
        if m_max < len(self._d):
            return
        with self._lock:
            while len(self._d) <= m_max:
                m = len(self._d)
                self._log.append(_delta_log_term(m))
                acc = Poly((), "z")
                for i in range(1, m + 1):
                    acc = acc + (self._log[i].scale(i)) * self._d[m - i]
                dm = acc.scale(Rat(1, m))
                assert dm.degree <= 2 * m, f"Delta series exceeds z-degree 2m at m={m}"
                self._d.append(dm)

    def delta(self, m: int, j: int) -> Poly:
        self.ensure(m)
        c = self._d[m].coefficient(j)
        return c if isinstance(c, Poly) else _ell(c)


_DELTA = _DeltaTable()

_beta_lock = threading.Lock()
_beta: list[Poly] = [_ell(1)]


def _beta_extend(m_max: int) -> None:
    """Extend the beta table: u-exponential of alternating power-sum terms."""
    with _beta_lock:
        if m_max < len(_beta):
            return
        n = m_max
        log_terms = [0] + [
            faulhaber_poly(i).scale(Rat((-1) ** (i + 1), i)) for i in range(1, n + 1)
        ]
        expo = series_exp(TruncSeries(log_terms, "u", n))
        new = [c if isinstance(c, Poly) else _ell(c) for c in expo.coeffs]
        # direct product expansion pins the degree-2m polynomial at 2m+4 points
        for m in range(len(_beta), n + 1):
            for ell in range(2 * m + 4):
                direct = [1] + [0] * m
                for j in range(ell):
                    direct = [
                        direct[t] + (j * direct[t - 1] if t else 0) for t in range(m + 1)
                    ]
                assert new[m](ell) == direct[m], f"beta mismatch at m={m}, ell={ell}"
        _beta.clear()
        _beta.extend(new)


@dataclass(frozen=True)
class DeltaPoly:
    """Delta_mj(ell): degree 2m-j, positive coefficients."""

    m: int
    j: int
    poly: Poly

    def __post_init__(self):
        if not (0 <= self.j <= 2 * self.m):
            raise ValueError("need 0 <= j <= 2m")
        if self.poly.degree != 2 * self.m - self.j:
            raise AssertionError(
                f"Delta({self.m},{self.j}) degree {self.poly.degree} != {2*self.m - self.j}"
            )
        if not all(c > 0 for c in self.poly.coeffs):
            raise AssertionError(f"Delta({self.m},{self.j}) has nonpositive coefficients")


@dataclass(frozen=True)
class BetaPoly:
    """beta_m(ell) = [u^m] prod_{j<ell}(1+ju): degree 2m in ell."""

    m: int
    poly: Poly

    def __post_init__(self):
        if self.m > 0 and self.poly.degree != 2 * self.m:
            raise AssertionError(f"beta_{self.m} degree {self.poly.degree} != {2*self.m}")


@dataclass(frozen=True)
class GammaPoly:
    """Gamma_mj(ell): degree 2m-j, positive *values* at integers >= 0."""

    m: int
    j: int
    poly: Poly


@dataclass(frozen=True)
class PPoly:
    """p_m^(k)(z): degree 2m, positive coefficients."""

    k: int
    m: int
    poly: Poly

    def __post_init__(self):
        if not (0 <= self.m <= self.k):
            raise ValueError("need 0 <= m <= k")
        if self.poly.degree != 2 * self.m:
            raise AssertionError(f"p({self.k},{self.m}) degree != {2*self.m}")
        if any(c <= 0 for c in self.poly.coeffs):
            raise AssertionError(f"p({self.k},{self.m}) has nonpositive coefficients")
        if self.m == 0:
            expected = Rat((self.k + 1) ** self.k, math.factorial(self.k + 1))
            if not self.poly.coefficient(0) == expected:
                raise AssertionError("p with m=0 must equal (k+1)^k/(k+1)!")


def delta_poly(m: int, j: int) -> DeltaPoly:
    """Delta_mj as an exact polynomial in ell (symbolic exponentiation)."""
    if not (0 <= j <= 2 * m):
        raise ValueError("need 0 <= j <= 2m")
    return DeltaPoly(m, j, _DELTA.delta(m, j))


def beta_poly(m: int) -> BetaPoly:
    """beta_m via Faulhaber power sums, cross-checked against direct products."""
    if m < 0:
        raise ValueError("m must be >= 0")
    _beta_extend(m)
    return BetaPoly(m, _beta[m])


_gamma_lock = threading.Lock()
_gamma_cache: dict[tuple[int, int], Poly] = {}


def gamma_poly(m: int, j: int, stress: int = VALUE_POSITIVITY_STRESS) -> GammaPoly:
    """Gamma_mj = sum over m1+m2=m of Delta_{m1,j} beta_{m2}.

    Asserts degree 2m-j and positivity of values at integer ell in
    [0, stress].  Coefficient positivity is deliberately NOT asserted: it
    fails for the first time at m = 21.
    """
    if not (0 <= j <= 2 * m):
        raise ValueError("need 0 <= j <= 2m")
    with _gamma_lock:
        cached = _gamma_cache.get((m, j))
    if cached is None:
        _DELTA.ensure(m)
        _beta_extend(m)
        acc = Poly((), "ell")
        for m1 in range(m + 1):
            if j > 2 * m1:
                continue
            d = _DELTA.delta(m1, j)
            if d.is_zero():
                continue
            acc = acc + d * _beta[m - m1]
        assert acc.degree == 2 * m - j, (
            f"Gamma({m},{j}) degree {acc.degree} != {2*m - j}"
        )
        with _gamma_lock:
            _gamma_cache[(m, j)] = acc
        cached = acc
    for ell in range(stress + 1):
        v = cached(ell)
        assert v > 0, f"Gamma({m},{j}) not positive at ell={ell}: {v}"
    return GammaPoly(m, j, cached)


def p_polynomial(k: int, m: int) -> PPoly:
    """Assemble p_m^(k) from Gamma evaluations at ell = k - m."""
    if not (0 <= m <= k):
        raise ValueError("need 0 <= m <= k")
    ell = k - m
    base = Rat(k - m + 1)
    fact = math.factorial(k - m + 1)
    coeffs = []
    for j in range(2 * m + 1):
        g = gamma_poly(m, j, stress=0).poly
        coeffs.append(base ** (k - 2 * m + j) / fact * g(ell))
    return PPoly(k, m, Poly(coeffs, "z"))


def _exp_series(c: int, order: int) -> TruncSeries:
    return TruncSeries([Rat(c**r, math.factorial(r)) for r in range(order + 1)], "z", order)


def alpha_check(k: int, n_max: int) -> VerifyReport:
    """Reassemble the 2k-th Betti numbers from the p-polynomials.

    Expands e^z sum_m (-1)^m p_m^(k)(z) e^((k-m)z) and compares the
    (n-1)!-scaled coefficients with the oracle classes for n <= n_max
    (degenerating to 1/0 for n < 3).
    """
    order = n_max - 1
    total = TruncSeries.constant(0, "z", order)
    for m in range(k + 1):
        p = p_polynomial(k, m).poly
        term = _exp_series(k - m + 1, order) * TruncSeries(list(p.coeffs), "z", order)
        total = total + (term if m % 2 == 0 else -term)
    oracle = keel_oracle(max(n_max, 3))
    for n in range(1, n_max + 1):
        got = total.coefficient(n - 1) * math.factorial(n - 1)
        if n < 3:
            want = 1 if k == 0 else 0
        else:
            want = oracle.class_of(n).betti(k)
        if not got == want:
            return VerifyReport(
                "alpha_check", (k, n_max), False,
                witness=f"n={n}: got {got}, oracle {want}",
            )
    return VerifyReport("alpha_check", (k, n_max), True)


def betti_gamma(n: int, ell: int) -> int:
    """Betti number from Gamma values with falling-factorial weights.

    Valid for every ell >= 0; above the dimension n-3 the alternating sum
    collapses to 0, one more identity satisfied by the Gamma family.
    """
    if n < 3 or ell < 0:
        raise ValueError("need n >= 3 and ell >= 0")
    total = Rat(0)
    for m in range(ell + 1):
        k = ell - m
        inner = Rat(0)
        for j in range(2 * m + 1):
            inner += falling_factorial(n - 1, j) * gamma_poly(m, j, stress=0).poly(k)
        total += (-1) ** m * Rat(k + 1) ** (n - 2 + k - m) / math.factorial(k) * inner
    return as_integer(total)


# ---------------------------------------------------------------------------
# exact positivity over the nonnegative integers
# ---------------------------------------------------------------------------

def _ceil_rat(x) -> int:
    return -((-x.numerator) // x.denominator)


def _nth_root_ceil(x: int, n: int) -> int:
    """Smallest integer s >= 0 with s**n >= x."""
    if x <= 0:
        return 0
    s = max(1, math.isqrt(x) if n == 2 else int(round(x ** (1.0 / n))))
    while s**n < x:
        s += 1
    while s > 0 and (s - 1) ** n >= x:
        s -= 1
    return s


@dataclass(frozen=True)
class PositivityCertificate:
    """Decision of q(ell) >= 0 for all integers ell >= 0."""

    nonneg: bool
    bound: int
    failures: tuple[int, ...] = ()
    unbounded: bool = False  # negative leading coefficient: fails for all large ell


def positivity_certificate(q: Poly) -> PositivityCertificate:
    """Exact nonnegativity of a rational polynomial over the integers >= 0.

    Fast path: all coefficients nonnegative.  Otherwise evaluate at every
    integer up to a root bound B (the smaller of the Cauchy bound
    1 + max|a_i/a_d| and the Fujiwara bound 2 max |a_i/a_d|^(1/(d-i))),
    beyond which the sign is that of the leading coefficient.
    """
    if q.is_zero():
        raise ValueError("zero polynomial")
    if all(c >= 0 for c in q.coeffs):
        return PositivityCertificate(True, 0)
    lead = q.leading()
    d = q.degree
    cauchy = 1 + max(abs(Rat(c) / lead) for c in q.coeffs[:-1])
    fuji = 2 * max(
        _nth_root_ceil(_ceil_rat(abs(Rat(c) / lead)), d - i)
        for i, c in enumerate(q.coeffs[:-1])
        if not c == 0
    )
    bound = min(_ceil_rat(cauchy), fuji)
    failures = tuple(ell for ell in range(bound + 1) if q(ell) < 0)
    if lead < 0:
        probe = bound + 1
        assert q(probe) < 0
        return PositivityCertificate(False, bound, failures + (probe,), unbounded=True)
    return PositivityCertificate(not failures, bound, failures)


@dataclass(frozen=True)
class UlcReport:
    """Ultra-log-concavity of the family p_m^(m+ell) over all ell >= 0.

    ``exceptional_ell`` lists the ell (equivalently k = m + ell) where some
    certificate polynomial goes negative; the family is ULC at every other
    index.
    """

    m: int
    passed: bool
    exceptional_ell: tuple[int, ...]
    certificates: dict[int, PositivityCertificate] = field(repr=False, default_factory=dict)


def ulc_certificate_poly(m: int, j: int) -> Poly:
    """The j-th ULC certificate: j(2m-j) G_mj^2 - (j+1)(2m-j+1) G_{m,j-1} G_{m,j+1}."""
    g = lambda jj: gamma_poly(m, jj, stress=0).poly
    return (g(j) * g(j)).scale(j * (2 * m - j)) - (g(j - 1) * g(j + 1)).scale(
        (j + 1) * (2 * m - j + 1)
    )


def ulc_certify(m: int, stress: int = VALUE_POSITIVITY_STRESS) -> UlcReport:
    """Decide ultra-log-concavity of p_m^(m+ell) for every ell >= 0 at once."""
    if m < 1:
        raise ValueError("m must be >= 1")
    gamma_poly(m, 0, stress=stress)  # value-positivity stress assert, once per m
    certs: dict[int, PositivityCertificate] = {}
    bad: set[int] = set()
    for j in range(1, 2 * m):
        cert = positivity_certificate(ulc_certificate_poly(m, j))
        certs[j] = cert
        bad.update(cert.failures)
    return UlcReport(m, not bad, tuple(sorted(bad)), certs)


# ---------------------------------------------------------------------------
# generating-function cross-checks (numeric ell)
# ---------------------------------------------------------------------------

def gamma_generating(ell: int, z_order: int, u_order: int) -> TruncSeries:
    """Generating series whose z^j u^m coefficient is Gamma_mj(ell), at integer ell.

    e^(-z) ((1+(ell+1)u)(1-(z+ell+1)u))^(-1/u - ell) prod_{j<ell}(1+ju),
    expanded with u outermost.
    """
    one_z = TruncSeries.constant(1, "z", z_order)
    z = TruncSeries.variable("z", z_order)
    # (1+(ell+1)u)(1-(z+ell+1)u) = 1 - z u - (ell+1)(z+ell+1) u^2
    base = TruncSeries([one_z, -z, (z + ell + 1).scale(-(ell + 1))], "u", u_order + 1)
    body = pow_pole_exponent(base, -1, -ell)
    exp_neg_z = TruncSeries([Rat((-1) ** r, math.factorial(r)) for r in range(z_order + 1)],
                            "z", z_order)
    out = body.scale(exp_neg_z)
    prod = Poly((1,), "u")
    for j in range(ell):
        prod = prod * Poly((1, j), "u")
    return out * TruncSeries([one_z.scale(c) for c in prod.coeffs], "u", u_order)


def p_generating_slice(ell: int, z_order: int, u_order: int) -> TruncSeries:
    """The t^ell slice of the three-variable p-generating function.

    ((ell+1)^ell/(ell+1)!) e^(-(ell+1)z)
    ((1+u)(1-u(z+1)))^(-(1+ell(u+1))/u) prod_{j<ell}(1 + ju/(ell+1)),
    whose u^m coefficient is the z-expansion of p_m^(m+ell).
    """
    one_z = TruncSeries.constant(1, "z", z_order)
    z = TruncSeries.variable("z", z_order)
    # (1+u)(1-u(z+1)) = 1 - z u - (z+1) u^2 ; exponent -(1+ell)/u - ell
    base = TruncSeries([one_z, -z, -(z + 1)], "u", u_order + 1)
    body = pow_pole_exponent(base, -(1 + ell), -ell)
    e_neg = TruncSeries(
        [Rat((-(ell + 1)) ** r, math.factorial(r)) for r in range(z_order + 1)], "z", z_order
    )
    out = body.scale(e_neg).scale(Rat((ell + 1) ** ell, math.factorial(ell + 1)))
    prod = Poly((1,), "u")
    for j in range(ell):
        prod = prod * Poly((1, Rat(j, ell + 1)), "u")
    return out * TruncSeries([one_z.scale(c) for c in prod.coeffs], "u", u_order)
