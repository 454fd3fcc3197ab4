"""L-polynomials of quadratic characters chi_D and their central values.

Two independent routes produce the coefficients S_n of L(u, chi_D):

* character sums, S_n = sum_{f in M_n} chi_D(f), with the top half filled in
  from the functional equation unless ``direct=True``;
* point counts on y^2 = D(x) over F_{q^r}, turned into S_n by Newton's
  identities (no symmetry used).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np

from . import gfpoly as gp
from .charsums import chi
from .gfpoly import Poly
from .quadext import QuadExt, sqrt_power

log = logging.getLogger(__name__)


class NotInEnsemble(ValueError):
    """D is not monic, squarefree and of odd degree."""


@dataclass(frozen=True)
class LPolynomial:
    coeffs: tuple[int, ...]
    genus: int

    def __call__(self, u):
        return sum(c * u**n for n, c in enumerate(self.coeffs))


def genus_of(D: Poly, q: int) -> int:
    n = len(D) - 1
    if not gp.is_monic(D) or n < 1 or n % 2 == 0 or not gp.is_squarefree(D, q):
        raise NotInEnsemble(f"{gp.format_poly(D)} is not in H_(2g+1)")
    return (n - 1) // 2


def coeff_sum(D: Poly, n: int, q: int) -> int:
    """S_n = sum over monic f of degree n of chi_D(f) = (D / f)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return sum(chi(f, D, q) for f in gp.enumerate_polys("monic", n, q))


def l_polynomial_charsum(D: Poly, q: int, direct: bool = False) -> LPolynomial:
    g = genus_of(D, q)
    top = 2 * g if direct else g
    S = [coeff_sum(D, n, q) for n in range(top + 1)]
    for n in range(top + 1, 2 * g + 1):
        S.append(q ** (n - g) * S[2 * g - n])
    return LPolynomial(tuple(S), g)


# ---------------------------------------------------------------------------
# extension fields, vectorized over all elements
# ---------------------------------------------------------------------------

class ExtensionField:
    """F_{q^r} = F_q[t]/(m) with m the first monic irreducible of degree r.

    Elements are length-r coefficient vectors; ``index`` packs a vector as
    sum v_j q^j.  Tables cover every element at once, so evaluating a
    polynomial at all points of the field is a handful of array operations.
    """

    def __init__(self, q: int, r: int):
        self.q, self.r = q, r
        self.modulus = gp.first_irreducible(r, q)
        self.size = q**r
        self.weights = q ** np.arange(r, dtype=np.int64)
        k = np.arange(self.size, dtype=np.int64)
        self.elements = (k[:, None] // self.weights[None, :]) % q  # (size, r)
        self.eta = self._quadratic_character()

    def mul(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        q, r = self.q, self.r
        prod = np.zeros(A.shape[:-1] + (2 * r - 1,), dtype=np.int64)
        for i in range(r):
            prod[..., i : i + r] += A[..., i : i + 1] * B
        prod %= q
        m = self.modulus
        for top in range(2 * r - 2, r - 1, -1):
            c = prod[..., top : top + 1].copy()
            prod[..., top - r : top] -= c * np.asarray(m[:r], dtype=np.int64)
            prod[..., top] = 0
            prod %= q
        return prod[..., :r]

    def index(self, A: np.ndarray) -> np.ndarray:
        return A @ self.weights

    def _quadratic_character(self) -> np.ndarray:
        e = (self.size - 1) // 2
        base = self.elements
        acc = np.zeros_like(base)
        acc[:, 0] = 1
        while e:
            if e & 1:
                acc = self.mul(acc, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        idx = self.index(acc)
        eta = np.where(idx == 1, 1, -1).astype(np.int64)
        eta[0] = 0
        if not np.all((idx == 1) | (idx == self.q - 1) | (np.arange(self.size) == 0)):
            raise ArithmeticError("Euler criterion produced a non-sign")
        return eta

    @lru_cache(maxsize=None)
    def powers(self, max_deg: int) -> np.ndarray:
        """x^i for every element x and 0 <= i <= max_deg: shape (max_deg+1, size, r)."""
        out = np.zeros((max_deg + 1, self.size, self.r), dtype=np.int64)
        out[0, :, 0] = 1
        for i in range(1, max_deg + 1):
            out[i] = self.mul(out[i - 1], self.elements)
        return out

    def character_sums(self, coeffs: np.ndarray) -> np.ndarray:
        """sum over x in F_{q^r} of eta(D(x)) for each row of ``coeffs``.

        ``coeffs`` has shape (batch, deg+1), lowest degree first.
        """
        pw = self.powers(coeffs.shape[1] - 1)
        vals = np.einsum("bi,ixr->bxr", coeffs, pw) % self.q
        return self.eta[self.index(vals)].sum(axis=1)


@lru_cache(maxsize=None)
def extension_field(q: int, r: int) -> ExtensionField:
    return ExtensionField(q, r)


def newton_coefficients(power_sums, n_max: int) -> list[int]:
    """Coefficients S_0..S_{n_max} of exp(sum_r a_r u^r / r) (exact integer division)."""
    S = [1]
    for n in range(1, n_max + 1):
        acc = sum(int(power_sums[r - 1]) * S[n - r] for r in range(1, n + 1))
        if acc % n:
            raise ArithmeticError(f"Newton step {n} not integral: {acc}/{n}")
        S.append(acc // n)
    return S


def point_counts(D: Poly, q: int, r_max: int) -> list[int]:
    """N_r for r = 1..r_max on y^2 = D(x), including the point at infinity."""
    row = np.asarray([D], dtype=np.int64)
    return [q**r + 1 + int(extension_field(q, r).character_sums(row)[0]) for r in range(1, r_max + 1)]


def l_polynomial_pointcount(D: Poly, q: int) -> LPolynomial:
    g = genus_of(D, q)
    a = [N - q ** (r + 1) - 1 for r, N in enumerate(point_counts(D, q, 2 * g))]
    return LPolynomial(tuple(newton_coefficients(a, 2 * g)), g)


# ---------------------------------------------------------------------------
# central value, functional equation, Riemann hypothesis
# ---------------------------------------------------------------------------

def half_weights(g: int, q: int) -> list[QuadExt]:
    """w_n with L(1/2) = sum_{n<=g} w_n S_n: twice q^(-n/2) below g, once at g."""
    return [(2 if n < g else 1) * sqrt_power(q, -n) for n in range(g + 1)]


def l_half_from_coeffs(S, g: int, q: int) -> QuadExt:
    out = QuadExt.zero(q)
    for w, s in zip(half_weights(g, q), S):
        out = out + w * int(s)
    return out


def l_half(D: Poly, q: int) -> QuadExt:
    """L(1/2, chi_D) exactly, from the two short character sums."""
    g = genus_of(D, q)
    return l_half_from_coeffs([coeff_sum(D, n, q) for n in range(g + 1)], g, q)


def evaluate_at_half(L: LPolynomial, q: int) -> QuadExt:
    """L(u) at u = q^(-1/2), summing all 2g+1 coefficients."""
    out = QuadExt.zero(q)
    for n, s in enumerate(L.coeffs):
        out = out + s * sqrt_power(q, -n)
    return out


def fe_check(L: LPolynomial, q: int) -> bool:
    g, S = L.genus, L.coeffs
    if len(S) != 2 * g + 1:
        return False
    return all(S[2 * g - n] * q**n == q**g * S[n] for n in range(2 * g + 1))


def _qpoly_divmod(a: list, b: list) -> tuple[list, list]:
    """Division of rational polynomials (lists, lowest degree first)."""
    a = list(a)
    quot = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    while len(a) >= len(b) and any(a):
        c = a[-1] / b[-1]
        shift = len(a) - len(b)
        quot[shift] = c
        for i, x in enumerate(b):
            a[shift + i] -= c * x
        a.pop()
        while a and a[-1] == 0:
            a.pop()
    return quot, a


def squarefree_part(coeffs) -> list[Fraction]:
    """coeffs / gcd(coeffs, coeffs'): same roots, all simple."""
    f = [Fraction(c) for c in coeffs]
    while f and f[-1] == 0:
        f.pop()
    a, b = f, [i * c for i, c in enumerate(f)][1:]
    while b and any(b):
        a, b = b, _qpoly_divmod(a, b)[1]
    return _qpoly_divmod(f, a)[0] if len(a) > 1 else f


def l_roots(L: LPolynomial, dps: int = 50):
    """Distinct roots of L(u); repeated factors are removed exactly first."""
    with mpmath.workdps(dps):
        coeffs = [mpmath.mpf(c.numerator) / c.denominator for c in reversed(squarefree_part(L.coeffs))]
        while coeffs and coeffs[0] == 0:
            coeffs.pop(0)
        if len(coeffs) <= 1:
            return []
        return mpmath.polyroots(coeffs, maxsteps=400, extraprec=2 * dps)


def rh_check(L: LPolynomial, q: int, tol: float = 1e-9) -> bool:
    """True iff every root of L(u) has modulus within ``tol`` of q^(-1/2)."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    try:
        roots = l_roots(L)
    except mpmath.libmp.NoConvergence:
        log.warning("root finder did not converge for %s", L.coeffs)
        return False
    target = mpmath.mpf(q) ** mpmath.mpf(-0.5)
    return all(abs(abs(z) - target) <= tol for z in roots)


def l_value_report(D: Poly, q: int, tol: float = 1e-9) -> dict:
    L = l_polynomial_charsum(D, q)
    val = l_half(D, q)
    return {
        "q": q,
        "D": gp.format_poly(D),
        "genus": L.genus,
        "S": list(L.coeffs),
        "L_half": {"a": str(val.a), "b": str(val.b), "decimal": f"{val.to_decimal(30):.15g}"},
        "fe": fe_check(l_polynomial_charsum(D, q, direct=True), q),
        "rh": rh_check(L, q, tol),
    }

