"""Quadratic characters, the Hayes exponential and generalized Gauss sums.

For monic f the character ``chi_f`` is ``V -> jacobi_symbol(V, f)``.  Gauss
sums are carried exactly: the direct route accumulates integer weights on
the q-th roots of unity (``CycloInt``) and the prime-power route assembles
the value prime power by prime power in ``QuadExt``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from . import gfpoly as gp
from .gfpoly import Poly
from .quadext import QuadExt, sqrt_power


def legendre(c: int, q: int) -> int:
    """(c | q) for prime q, as -1, 0 or 1."""
    c %= q
    if c == 0:
        return 0
    return 1 if pow(c, (q - 1) // 2, q) == 1 else -1


def jacobi_symbol(f: Poly, Q: Poly, q: int) -> int:
    """The Jacobi symbol (f / Q) for monic nonconstant Q.

    Runs the Euclidean-style reciprocity loop; no factorization.  A constant
    c contributes ``legendre(c)**deg(Q)`` and, because q = 1 (mod 4), monic
    coprime A and B satisfy (A/B) = (B/A).
    """
    if not gp.is_monic(Q) or len(Q) < 2:
        raise ValueError("modulus must be monic of positive degree")
    acc = 1
    a, m = gp.mod(f, Q, q), Q
    while True:
        if not a:
            return 0  # gcd(f, Q) is nonconstant
        c, a = gp.monic_part(a, q)
        if c != 1 and (len(m) - 1) % 2 == 1:
            acc *= legendre(c, q)
        if len(a) == 1:
            return acc
        a, m = gp.mod(m, a, q), a


def jacobi_by_factorization(f: Poly, Q: Poly, q: int) -> int:
    """(f / Q) from the definition: product over P^e || Q of f^((|P|-1)/2) mod P."""
    out = 1
    for P, e in gp.factorize(Q, q).factors:
        r = gp.powmod(f, (q ** (len(P) - 1) - 1) // 2, P, q)
        if not r:
            return 0
        s = 1 if r == (1,) else -1
        if r not in ((1,), (q - 1,)):
            raise ArithmeticError(f"Euler criterion gave {r} mod {P}")
        out *= s**e
    return out


def chi(Q: Poly, V: Poly, q: int) -> int:
    """chi_Q(V) = (V / Q), with the empty product 1 when Q = 1."""
    if Q == (1,):
        return 1
    return jacobi_symbol(V, Q, q)


def exp_eval(A: Poly, H: Poly, q: int) -> int:
    """Index j with e(A/H) = exp(2 pi i j / q).

    For R = A mod H of degree < d = deg H, the Laurent expansion of R/H in
    1/x begins ``(r_{d-1} / h_d) x^{-1}``; the polynomial part of A/H has no
    1/x term.  So the coefficient a_1 is read off the remainder directly.
    """
    if not H:
        raise ZeroDivisionError("exponential with zero denominator")
    d = len(H) - 1
    if d == 0:
        return 0
    R = gp.mod(A, H, q)
    if len(R) < d:
        return 0
    return R[d - 1] * pow(H[-1], -1, q) % q


# ---------------------------------------------------------------------------
# Z[zeta_q]
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CycloInt:
    """sum_j counts[j] * zeta_q^j, compared modulo the all-ones vector."""

    counts: tuple[int, ...]

    @classmethod
    def zero(cls, q: int) -> "CycloInt":
        return cls((0,) * q)

    @property
    def q(self) -> int:
        return len(self.counts)

    def _normal(self) -> tuple[int, ...]:
        c0 = self.counts[0]
        return tuple(c - c0 for c in self.counts)

    def __add__(self, other: "CycloInt") -> "CycloInt":
        return CycloInt(tuple(a + b for a, b in zip(self.counts, other.counts, strict=True)))

    def __neg__(self) -> "CycloInt":
        return CycloInt(tuple(-a for a in self.counts))

    def __sub__(self, other: "CycloInt") -> "CycloInt":
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, CycloInt):
            return NotImplemented
        return self.q == other.q and self._normal() == other._normal()

    def __hash__(self):
        return hash(self._normal())

    def to_complex(self) -> complex:
        import cmath

        q = self.q
        return sum(c * cmath.exp(2j * cmath.pi * j / q) for j, c in enumerate(self.counts))


class NotInQuadraticSpan(ArithmeticError):
    pass


def reduce_to_quadext(c: CycloInt) -> QuadExt:
    """Write c as a + b*sqrt(q) using sqrt(q) = sum_j (j|q) zeta^j.

    c - a*e_0 - b*legendre_vector must be a multiple of the all-ones vector,
    so c is constant on residues and on non-residues separately.
    """
    q = c.q
    res = {c.counts[j] for j in range(1, q) if legendre(j, q) == 1}
    non = {c.counts[j] for j in range(1, q) if legendre(j, q) == -1}
    if len(res) != 1 or len(non) != 1:
        raise NotInQuadraticSpan(f"{c.counts} is not in Q + Q*sqrt({q})")
    r, n = res.pop(), non.pop()
    t = Fraction(r + n, 2)
    return QuadExt(c.counts[0] - t, Fraction(r - n, 2), q)


# ---------------------------------------------------------------------------
# Gauss sums
# ---------------------------------------------------------------------------

def residues(f: Poly, q: int):
    """All polynomials of degree < deg f (every class mod f once)."""
    n = len(f) - 1
    for k in range(q**n):
        c = []
        for _ in range(n):
            k, r = divmod(k, q)
            c.append(r)
        yield gp.norm(c, q)


@lru_cache(maxsize=4096)
def _char_table(f: Poly, q: int) -> tuple[tuple[Poly, int], ...]:
    return tuple((W, jacobi_symbol(W, f, q)) for W in residues(f, q))


def gauss_sum_direct(V: Poly, f: Poly, q: int) -> CycloInt:
    """G(V, chi_f) = sum over W mod f of chi_f(W) e(VW/f), exactly."""
    if len(f) < 2:
        raise ValueError("modulus must have positive degree")
    counts = [0] * q
    for W, s in _char_table(f, q):
        if s:
            counts[exp_eval(gp.mul(V, W, q), f, q)] += s
    return CycloInt(tuple(counts))


def prime_power_gauss(P: Poly, i: int, V: Poly, q: int) -> QuadExt:
    """G(V, chi_{P^i}) by the five-case prime-power evaluation."""
    normP = q ** (len(P) - 1)
    if i == 0:
        return QuadExt.one(q)
    alpha, V1 = 0, V
    if V:
        while True:
            quot, rem = gp.divmod_poly(V1, P, q)
            if rem:
                break
            V1, alpha = quot, alpha + 1
    else:
        alpha = i  # V = 0 is divisible by every power
    if i <= alpha:
        return QuadExt(normP ** (i - 1) * (normP - 1), 0, q) if i % 2 == 0 else QuadExt.zero(q)
    if i == alpha + 1:
        if i % 2 == 0:
            return QuadExt(-(normP ** (i - 1)), 0, q)
        # |P|^(i-1) * |P|^(1/2) = q^(d(P)(2i-1)/2)
        return jacobi_symbol(V1, P, q) * sqrt_power(q, (len(P) - 1) * (2 * i - 1))
    return QuadExt.zero(q)


def gauss_sum_fast(V: Poly, f: Poly, q: int) -> QuadExt:
    """G(V, chi_f) via multiplicativity over the factorization of f."""
    if len(f) < 2:
        raise ValueError("modulus must have positive degree")
    out = QuadExt.one(q)
    for P, e in gp.factorize(f, q).factors:
        out = out * prime_power_gauss(P, e, V, q)
        if not out:
            break
    return out


# ---------------------------------------------------------------------------
# Poisson summation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PoissonResult:
    f: Poly
    m: int
    lhs: QuadExt
    rhs: QuadExt

    @property
    def equal(self) -> bool:
        return self.lhs == self.rhs


def char_sum(f: Poly, m: int, q: int) -> int:
    """sum over monic g of degree m of chi_f(g), by enumeration."""
    return sum(chi(f, g, q) for g in gp.enumerate_polys("monic", m, q))


def _gauss_total(f: Poly, degrees: Sequence[int], q: int) -> QuadExt:
    total = QuadExt.zero(q)
    for d in degrees:
        for V in gp.enumerate_polys("monic", d, q):
            total = total + gauss_sum_fast(V, f, q)
    return total


def poisson_rhs(f: Poly, m: int, q: int) -> QuadExt:
    n = len(f) - 1
    pref = Fraction(q**m, q**n)
    if n % 2 == 0:
        body = gauss_sum_fast((), f, q)
        body = body + (q - 1) * _gauss_total(f, range(0, n - m - 1), q)
        body = body - _gauss_total(f, [n - m - 1] if n - m - 1 >= 0 else [], q)
        return pref * body
    body = _gauss_total(f, [n - m - 1] if n - m - 1 >= 0 else [], q)
    return pref * QuadExt.sqrt(q) * body


def poisson_check(f: Poly, m: int, q: int) -> PoissonResult:
    """Both sides of the even/odd Poisson summation formula for chi_f over M_m."""
    if len(f) < 2 or not gp.is_monic(f):
        raise ValueError("f must be monic of positive degree")
    if m < 0:
        raise ValueError("m must be nonnegative")
    lhs = QuadExt(char_sum(f, m, q), 0, q)
    return PoissonResult(f, m, lhs, poisson_rhs(f, m, q))
