"""Constants of the first-moment asymptotic, with certified error bounds.

Every Euler product over monic irreducibles P is grouped by degree: all
pi_q(n) primes of degree n contribute the same factor.  Products are summed
in log form up to ``cutoff`` and the remaining degrees are bounded by a
geometric majorant using pi_q(n) <= q^n / n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np

from . import gfpoly as gp
from .charsums import prime_power_gauss
from .quadext import sqrt_power

DPS = 60
ctx = mpmath.MPContext()
ctx.dps = DPS
mpf = ctx.mpf

DEFAULT_CUTOFF = 120
ERROR_EXPONENT = 0.55  # residual dashboard scale q^(0.55 g); no claim about the true constant


def _round(x) -> "mpmath.mpf":
    return abs(x) * ctx.eps * 8


@dataclass(frozen=True)
class BoundedReal:
    """A real ``value`` with the certified enclosure |true - value| <= ``bound``."""

    value: object
    bound: object = field(default_factory=lambda: mpf(0))
    exact: Fraction | None = None

    def __post_init__(self):
        object.__setattr__(self, "value", mpf(self.value))
        object.__setattr__(self, "bound", mpf(self.bound))
        if self.bound < 0 or not ctx.isfinite(self.bound):
            raise ValueError("bound must be finite and nonnegative")

    @classmethod
    def of(cls, x) -> "BoundedReal":
        if isinstance(x, BoundedReal):
            return x
        if isinstance(x, (int, Fraction)):
            v = mpf(x.numerator) / x.denominator if isinstance(x, Fraction) else mpf(x)
            return cls(v, _round(v) if isinstance(x, Fraction) else 0, Fraction(x))
        v = mpf(x)
        return cls(v, _round(v))

    @property
    def lo(self):
        return self.value - self.bound

    @property
    def hi(self):
        return self.value + self.bound

    def contains(self, x) -> bool:
        return abs(mpf(x) - self.value) <= self.bound

    def __add__(self, other):
        o = BoundedReal.of(other)
        v = self.value + o.value
        ex = self.exact + o.exact if self.exact is not None and o.exact is not None else None
        return BoundedReal(v, self.bound + o.bound + _round(v), ex)

    __radd__ = __add__

    def __neg__(self):
        return BoundedReal(-self.value, self.bound, None if self.exact is None else -self.exact)

    def __sub__(self, other):
        return self + (-BoundedReal.of(other))

    def __rsub__(self, other):
        return BoundedReal.of(other) - self

    def __mul__(self, other):
        o = BoundedReal.of(other)
        v = self.value * o.value
        b = abs(self.value) * o.bound + abs(o.value) * self.bound + self.bound * o.bound + _round(v)
        ex = self.exact * o.exact if self.exact is not None and o.exact is not None else None
        return BoundedReal(v, b, ex)

    __rmul__ = __mul__

    def reciprocal(self) -> "BoundedReal":
        if abs(self.value) <= self.bound:
            raise ZeroDivisionError("interval contains zero")
        v = 1 / self.value
        b = self.bound / (abs(self.value) * (abs(self.value) - self.bound)) + _round(v)
        return BoundedReal(v, b, None if self.exact is None else 1 / self.exact)

    def __truediv__(self, other):
        return self * BoundedReal.of(other).reciprocal()

    def __rtruediv__(self, other):
        return BoundedReal.of(other) * self.reciprocal()

    def __float__(self):
        return float(self.value)

    def to_json(self) -> dict:
        return {"value": ctx.nstr(self.value, 30), "bound": ctx.nstr(self.bound, 6)}

    def __repr__(self):
        return f"BoundedReal({ctx.nstr(self.value, 20)} ± {ctx.nstr(self.bound, 3)})"


def exp_bounded(log_value, log_bound) -> BoundedReal:
    """exp of an enclosure: |e^(x+t) - e^x| <= e^x (e^|t| - 1)."""
    v = ctx.exp(log_value)
    return BoundedReal(v, v * ctx.expm1(log_bound) + _round(v))


# ---------------------------------------------------------------------------
# zeta of F_q[x]
# ---------------------------------------------------------------------------

def zeta_q(s, q: int) -> BoundedReal:
    """zeta(s) = 1 / (1 - q^(1-s)); exact when 1 - s is an integer."""
    s = Fraction(s)
    if s == 1:
        raise ValueError("zeta has a pole at s = 1")
    e = 1 - s
    if e.denominator == 1:
        return BoundedReal.of(1 / (1 - Fraction(q) ** int(e)))
    t = ctx.power(q, mpf(e.numerator) / e.denominator)
    return BoundedReal.of(1 / (1 - t))


def _pi(n: int, q: int) -> int:
    return gp.irreducible_count(n, q)


def _cbrt_q(q: int):
    return ctx.cbrt(mpf(q))


# ---------------------------------------------------------------------------
# Euler products
# ---------------------------------------------------------------------------

def constant_C1(q: int, cutoff: int) -> BoundedReal:
    """C(1) = prod_P (1 - 1/((|P|+1)|P|))."""
    if cutoff < 1:
        raise ValueError("cutoff must be positive")
    L = mpf(0)
    for n in range(1, cutoff + 1):
        Q = mpf(q) ** n
        L += _pi(n, q) * ctx.log1p(-1 / ((Q + 1) * Q))
    # |log(1-a)| <= 2a for a <= 1/2, and pi(n) a_n <= q^-n / n
    tail = 2 * mpf(q) ** -(cutoff + 1) / ((cutoff + 1) * (1 - mpf(1) / q))
    return exp_bounded(L, tail + _round(L) * cutoff)


def constant_CprimeC_over_logq(q: int, cutoff: int) -> BoundedReal:
    """(C'/C)(1) / log q = sum_n pi(n) n / ((q^n+1) q^n - 1).

    Differentiating log(1 - x_P) with x_P = 1/((|P|+1)|P|^s) in s gives
    d(P) log q * x_P / (1 - x_P) at each prime.
    """
    if cutoff < 1:
        raise ValueError("cutoff must be positive")
    S = mpf(0)
    for n in range(1, cutoff + 1):
        Q = mpf(q) ** n
        S += _pi(n, q) * n / ((Q + 1) * Q - 1)
    tail = mpf(q) ** -(cutoff + 1) / (1 - mpf(1) / q)
    return BoundedReal(S, tail + _round(S) * cutoff)


def dproduct_factor(n: int, q: int):
    """1 - (Q^(4/3) + Q^(2/3) + Q^(1/3) + 1) / (Q^(4/3) + Q)^2 at Q = q^n."""
    c = _cbrt_q(q) ** n
    Q = mpf(q) ** n
    return 1 - (c**4 + c**2 + c + 1) / (c**4 + Q) ** 2


def dproduct_special(q: int, cutoff: int) -> BoundedReal:
    """prod_P D_P(q^(-4/3), q^(-1/3)) in its closed form."""
    if cutoff < 1:
        raise ValueError("cutoff must be positive")
    L = mpf(0)
    for n in range(1, cutoff + 1):
        L += _pi(n, q) * ctx.log(dproduct_factor(n, q))
    # a_n <= 4 Q^(-4/3), so pi(n) |log(1-a_n)| <= 8 q^(-n/3) / n
    r = mpf(q) ** (-mpf(1) / 3)
    tail = 8 * r ** (cutoff + 1) / ((cutoff + 1) * (1 - r))
    return exp_bounded(L, tail + _round(L) * cutoff)


def dlog_term(n: int, q: int):
    c = _cbrt_q(q) ** n
    Q = mpf(q) ** n
    return n * (Q - 1) * (c + 1) / ((c - 1) * (c**4 + Q) ** 2)


def dlog_sum_special(q: int, cutoff: int) -> BoundedReal:
    """-sum_P d(P)(|P|-1)(|P|^(1/3)+1) / ((|P|^(1/3)-1)(|P|^(4/3)+|P|)^2)."""
    if cutoff < 1:
        raise ValueError("cutoff must be positive")
    S = mpf(0)
    for n in range(1, cutoff + 1):
        S += _pi(n, q) * dlog_term(n, q)
    # beyond n = 1, (c+1)/(c-1) <= 3 and pi(n) * term <= 3 Q^(-2/3)
    r = mpf(q) ** (-mpf(2) / 3)
    tail = 3 * r ** (cutoff + 1) / (1 - r)
    return BoundedReal(-S, tail + _round(S) * cutoff)


def dlog_derivative_term(n: int, q: int):
    """z d/dz log D_P(z, qz) at z = q^(-4/3) for d(P) = n, differentiated directly.

    Obtained by symbolic differentiation of the local factor; it does not agree
    with ``-dlog_term`` (see the tests), so it is kept as a diagnostic only.
    """
    c = _cbrt_q(q) ** n
    num = c**3 + c**2 + 4 * c + 3
    den = (c - 1) * (c + 1) * (c**5 + 2 * c**4 + c**3 + c**2 + c + 1)
    return -n * num / den


def dlog_derivative_special(q: int, cutoff: int) -> BoundedReal:
    """z d/dz log prod_P D_P(z, qz) at z = q^(-4/3), summed by degree."""
    if cutoff < 1:
        raise ValueError("cutoff must be positive")
    S = mpf(0)
    for n in range(1, cutoff + 1):
        S += _pi(n, q) * dlog_derivative_term(n, q)
    # |term| <= 2 n Q^(-4/3) once Q >= 125, so pi(n) |term| <= 2 q^(-n/3)
    r = mpf(q) ** (-mpf(1) / 3)
    tail = 2 * r ** (cutoff + 1) / (1 - r)
    return BoundedReal(S, tail + _round(S) * cutoff)


# ---------------------------------------------------------------------------
# the secondary polynomial and the prediction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RPolynomial:
    """R(x) = slope * x + intercept."""

    slope: BoundedReal
    intercept: BoundedReal

    def __call__(self, x) -> BoundedReal:
        return self.slope * BoundedReal.of(x) + self.intercept


@lru_cache(maxsize=32)
def r_polynomial(q: int, cutoff: int = DEFAULT_CUTOFF, dlog: str = "closed_form") -> RPolynomial:
    """Coefficients of R(x).

    ``dlog`` picks the log-derivative value: the closed-form sum
    (default) or the direct derivative of the local factors.
    """
    if dlog == "closed_form":
        dl = dlog_sum_special(q, cutoff)
    elif dlog == "derivative":
        dl = dlog_derivative_special(q, cutoff)
    else:
        raise ValueError(f"unknown dlog variant {dlog!r}")
    c = BoundedReal.of(_cbrt_q(q))  # q^(1/3)
    z43, z53, z73 = (zeta_q(Fraction(k, 3), q) for k in (4, 5, 7))
    q23, q43 = c * c, c * c * c * c
    prefactor = z53 * z73 / (9 * q23 * z43 * z43) * dproduct_special(q, cutoff)
    bracket_const = z73 / q43 * (Fraction(-5, 2) - 2 * c - 2 * q + q43 * Fraction(1, 2))
    bracket_const = bracket_const - 2 / q43 * dl
    return RPolynomial(prefactor * Fraction(1, 2), prefactor * bracket_const)


@dataclass(frozen=True)
class Prediction:
    q: int
    g: int
    main: BoundedReal
    secondary: BoundedReal
    error_scale: float

    @property
    def total(self) -> BoundedReal:
        return self.main + self.secondary


def main_term(q: int, g: int, cutoff: int = DEFAULT_CUTOFF) -> BoundedReal:
    C1 = constant_C1(q, cutoff)
    cc = constant_CprimeC_over_logq(q, cutoff)
    bracket = (2 * g + 2) + 4 * cc
    return C1 / (2 * zeta_q(2, q)) * (q ** (2 * g + 1)) * bracket


def predict_moment(q: int, g: int, cutoff: int = DEFAULT_CUTOFF) -> Prediction:
    gp.check_q(q)
    if g < 1:
        raise ValueError("g must be at least 1")
    R = r_polynomial(q, cutoff)
    scale = BoundedReal.of(ctx.power(q, mpf(2 * g + 1) / 3))
    return Prediction(q, g, main_term(q, g, cutoff), scale * R(2 * g + 1), float(q) ** (g / 2))


def constants_report(q: int, cutoff: int) -> dict:
    R = r_polynomial(q, cutoff)
    zetas = {s: zeta_q(Fraction(s), q) for s in ("2", "4/3", "5/3", "7/3")}
    return {
        "q": q,
        "cutoff": cutoff,
        "C1": constant_C1(q, cutoff).to_json(),
        "CprimeC_over_logq": constant_CprimeC_over_logq(q, cutoff).to_json(),
        "dproduct": dproduct_special(q, cutoff).to_json(),
        "dlogsum": dlog_sum_special(q, cutoff).to_json(),
        "zeta": {s: z.to_json() for s, z in zetas.items()},
        "R_coeffs": {"slope": R.slope.to_json(), "intercept": R.intercept.to_json()},
    }


# ---------------------------------------------------------------------------
# the generating function B(z, w)
# ---------------------------------------------------------------------------

def local_d_factor(n: int, q: int, z, w):
    """D_P(z, w) for a prime of degree n (all powers taken as X^(d(P)))."""
    Q = q**n
    zn, wn = z**n, w**n
    inner = (
        -(wn**2) - wn**3 / Q + wn / (Q**2 * zn) + Q * wn**2 * zn + wn**2 * zn
        - Q**2 * wn * zn**2 + wn**3 * zn - Q**2 * wn**2 * zn**2
    )
    return 1 + inner / ((Q**2 * zn - 1) * (1 + wn))


def local_b_factor(n: int, q: int, z, w):
    """B_P(z, w) for a prime of degree n."""
    Q = q**n
    zn, wn = z**n, w**n
    num = wn - (wn**2 * zn) * Q**2 - (wn * zn**2) * Q**2 + (wn**3 * zn**2) * Q**2 + (wn**2 * zn) * Q - (wn**3 * zn) * Q
    return 1 + num / (zn * Q**2 - 1)


def _grouped_product(factor, q: int, trunc: int, z, w) -> float:
    total = 0.0
    for n in range(1, trunc + 1):
        total += _pi(n, q) * math.log(factor(n, q, z, w))
    return math.exp(total)


def in_bzw_region(z: float, w: float, q: int) -> bool:
    return abs(z) > q**-2 and abs(w) < q * abs(z) and abs(w) < q**-0.5 and abs(w * z) < 1 / q


def bzw_rhs(z: float, w: float, trunc: int, q: int) -> float:
    Z = lambda u: 1 / (1 - q * u)  # noqa: E731
    return Z(z) * Z(w) * Z(q * w * w * z) * _grouped_product(local_b_factor, q, trunc, z, w)


def _trunc_mul(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    T = A.shape[0]
    out = np.zeros_like(A)
    for i in range(T):
        for j in range(T):
            a = A[i, j]
            if a:
                out[i:, j:] += a * B[: T - i, : T - j]
    return out


def _trunc_pow(A: np.ndarray, e: int) -> np.ndarray:
    out = np.zeros_like(A)
    out[0, 0] = 1.0
    while e:
        if e & 1:
            out = _trunc_mul(out, A)
        e >>= 1
        if e:
            A = _trunc_mul(A, A)
    return out


def _local_gauss_ratio(P, i: int, beta: int, q: int) -> float:
    """G(l^2, chi_{P^i}) / |P|^(i/2) when P^beta || l (the value depends on nothing else)."""
    V = gp.poly_pow(P, 2 * beta, q)
    return float(prime_power_gauss(P, i, V, q) * sqrt_power(q, -(len(P) - 1) * i))


def bzw_lhs(z: float, w: float, trunc: int, q: int) -> float:
    """The double sum over f, l in M_{<= trunc}, evaluated exactly up to rounding.

    The summand h(f) G(l^2, chi_f)/sqrt|f| factors over primes into pieces
    that depend only on (d(P), v_P(f), v_P(l)).  Grouping the pi_q(d) primes of
    each degree and multiplying bivariate polynomials truncated at degree
    ``trunc`` in both f and l reproduces the truncated double sum term for
    term, without listing q^trunc polynomials.
    """
    T = trunc + 1
    acc = np.zeros((T, T))
    acc[0, 0] = 1.0
    for d in range(1, trunc + 1):
        P = gp.first_irreducible(d, q)
        h = 1 / (1 - 1 / ((q * q * z) ** d))
        local = np.zeros((T, T))
        for i in range(0, trunc // d + 1):
            for beta in range(0, trunc // d + 1):
                val = 1.0 if i == 0 else h * _local_gauss_ratio(P, i, beta, q)
                local[i * d, beta * d] = val * (w ** (i * d)) * (z ** (beta * d))
        acc = _trunc_mul(acc, _trunc_pow(local, _pi(d, q)))
    return float(acc.sum())


def bzw_lhs_bruteforce(z: float, w: float, trunc: int, q: int) -> float:
    """Literal double sum over f, l in M_{<= trunc}; only for tiny ``trunc``."""
    from .charsums import gauss_sum_fast

    total = 0.0
    for f in gp.monics_upto(trunc, q):
        h = 1.0
        for P in gp.factorize(f, q).primes:
            h /= 1 - 1 / ((q * q * z) ** (len(P) - 1))
        nf = len(f) - 1
        for l in gp.monics_upto(trunc, q):
            V = gp.mul(l, l, q)
            G = gauss_sum_fast(V, f, q) * sqrt_power(q, -nf) if nf else 1
            total += (w**nf) * (z ** (len(l) - 1)) * h * float(G)
    return total


@dataclass(frozen=True)
class BzwResult:
    z: float
    w: float
    trunc: int
    lhs: float
    rhs: float

    @property
    def delta(self) -> float:
        return abs(self.lhs - self.rhs)


def bzw_identity_check(z: float, w: float, trunc: int, q: int) -> BzwResult:
    if trunc < 4:
        raise ValueError("trunc must be at least 4")
    if not in_bzw_region(z, w, q):
        raise ValueError(f"(z, w) = ({z}, {w}) is outside the convergence region")
    return BzwResult(z, w, trunc, bzw_lhs(z, w, trunc, q), bzw_rhs(z, w, trunc, q))
