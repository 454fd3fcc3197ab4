"""Arithmetic and enumeration in F_q[x] for prime q = 1 (mod 4).

Polynomials are tuples of ints in [0, q), lowest degree first, with no
trailing zeros; the zero polynomial is ``()``.  Field scalars are plain ints.
Every function takes the field size ``q`` explicitly, so all values are
immutable and safe to share between workers.

Monic polynomials of degree n are indexed by ``k = sum(c_i * q**i)`` over
their non-leading coefficients; enumeration follows increasing ``k``.  That
index is what "coefficient-lexicographic order" means throughout the package,
and contiguous index ranges are the unit of parallel partitioning.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

Poly = tuple

NEG_INF = float("-inf")

KINDS = ("monic", "monic_squarefree", "monic_irreducible")


class FieldError(ValueError):
    """Raised for a field size outside the supported family."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13):
        if n % p == 0:
            return n == p
    return all(n % d for d in range(17, math.isqrt(n) + 1, 2))


def check_q(q: int) -> int:
    if not (isinstance(q, int) and is_prime(q) and q % 4 == 1):
        raise FieldError(f"q must be a prime ≡ 1 mod 4 (got {q!r})")
    return q


# ---------------------------------------------------------------------------
# basic arithmetic
# ---------------------------------------------------------------------------

def norm(coeffs: Sequence[int], q: int) -> Poly:
    c = [x % q for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def degree(f: Poly):
    """Degree of f; the zero polynomial has degree ``NEG_INF``."""
    return len(f) - 1 if f else NEG_INF


def is_monic(f: Poly) -> bool:
    return bool(f) and f[-1] == 1


def add(a: Poly, b: Poly, q: int) -> Poly:
    if len(a) < len(b):
        a, b = b, a
    c = list(a)
    for i, x in enumerate(b):
        c[i] = (c[i] + x) % q
    return norm(c, q) if len(a) == len(b) else tuple(c)


def neg(a: Poly, q: int) -> Poly:
    return tuple((-x) % q for x in a)


def sub(a: Poly, b: Poly, q: int) -> Poly:
    return add(a, neg(b, q), q)


def scale(a: Poly, c: int, q: int) -> Poly:
    c %= q
    if c == 0:
        return ()
    return tuple(x * c % q for x in a)


def mul(a: Poly, b: Poly, q: int) -> Poly:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return tuple(v % q for v in out)  # leading term is a product of units


def divmod_poly(a: Poly, b: Poly, q: int) -> tuple[Poly, Poly]:
    """Return ``(quot, rem)`` with ``a = quot*b + rem`` and ``deg rem < deg b``."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    db = len(b) - 1
    if len(a) <= db:
        return (), a
    inv = pow(b[-1], -1, q)
    r = list(a)
    quot = [0] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = r[i] * inv % q
        if c:
            quot[i - db] = c
            for j in range(db):
                r[i - db + j] = (r[i - db + j] - c * b[j]) % q
        r[i] = 0
    return norm(quot, q), norm(r[:db], q)


def mod(a: Poly, b: Poly, q: int) -> Poly:
    return divmod_poly(a, b, q)[1]


def monic_part(f: Poly, q: int) -> tuple[int, Poly]:
    """Split nonzero f as ``c * m`` with m monic."""
    c = f[-1]
    if c == 1:
        return 1, f
    return c, scale(f, pow(c, -1, q), q)


def gcd(a: Poly, b: Poly, q: int) -> Poly:
    """Monic gcd of a and b (not both zero)."""
    if not a and not b:
        raise ValueError("gcd of two zero polynomials is undefined")
    while b:
        a, b = b, mod(a, b, q)
    return monic_part(a, q)[1]


def derivative(f: Poly, q: int) -> Poly:
    return norm([i * c for i, c in enumerate(f)][1:], q)


def powmod(base: Poly, e: int, m: Poly, q: int) -> Poly:
    result: Poly = (1,)
    base = mod(base, m, q)
    while e:
        if e & 1:
            result = mod(mul(result, base, q), m, q)
        e >>= 1
        if e:
            base = mod(mul(base, base, q), m, q)
    return mod(result, m, q)


def poly_pow(f: Poly, e: int, q: int) -> Poly:
    out: Poly = (1,)
    for _ in range(e):
        out = mul(out, f, q)
    return out


def evaluate(f: Poly, x: int, q: int) -> int:
    acc = 0
    for c in reversed(f):
        acc = (acc * x + c) % q
    return acc


# ---------------------------------------------------------------------------
# text format: "1,0,3" is 3x^2 + 1
# ---------------------------------------------------------------------------

def parse_poly(text: str, q: int) -> Poly:
    text = text.strip()
    if not text:
        return ()
    return norm([int(tok) for tok in text.split(",")], q)


def format_poly(f: Poly) -> str:
    return ",".join(str(c) for c in f) if f else "0"


def pretty(f: Poly) -> str:
    if not f:
        return "0"
    terms = []
    for i in range(len(f) - 1, -1, -1):
        c = f[i]
        if not c:
            continue
        mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
        coef = str(c) if (c != 1 or i == 0) else ""
        terms.append(coef + mono)
    return " + ".join(terms)


# ---------------------------------------------------------------------------
# predicates
# ---------------------------------------------------------------------------

def is_squarefree(f: Poly, q: int) -> bool:
    if not f:
        raise ValueError("zero polynomial")
    if len(f) == 1:
        return True
    df = derivative(f, q)
    if not df:
        # f' = 0 with deg f > 0: f is a p-th power since q is prime
        return False
    return gcd(f, df, q) == (1,)


def _prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible(f: Poly, q: int) -> bool:
    """Rabin's test."""
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    f = monic_part(f, q)[1]
    x = (0, 1)
    if powmod(x, q**n, f, q) != mod(x, f, q):
        return False
    for p in _prime_factors(n):
        h = sub(powmod(x, q ** (n // p), f, q), x, q)
        if gcd(f, h, q) != (1,):
            return False
    return True


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------

def monic_from_index(k: int, n: int, q: int) -> Poly:
    c = []
    for _ in range(n):
        k, r = divmod(k, q)
        c.append(r)
    c.append(1)
    return tuple(c)


def monic_index(f: Poly, q: int) -> int:
    return sum(c * q**i for i, c in enumerate(f[:-1]))


def chunk_bounds(total: int, parts: int, index: int) -> tuple[int, int]:
    """Half-open range of the ``index``-th of ``parts`` contiguous chunks."""
    if not 0 <= index < parts:
        raise ValueError("chunk index out of range")
    base, extra = divmod(total, parts)
    start = index * base + min(index, extra)
    return start, start + base + (1 if index < extra else 0)


def enumerate_polys(kind: str, n: int, q: int, chunk: tuple[int, int] | None = None) -> Iterator[Poly]:
    """Yield monic polynomials of degree n of the given kind, in index order.

    ``chunk=(i, k)`` restricts to the i-th of k contiguous index ranges; the
    k chunks are disjoint and concatenate to the full stream.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    if n < 0:
        raise ValueError("degree must be nonnegative")
    start, stop = (0, q**n) if chunk is None else chunk_bounds(q**n, chunk[1], chunk[0])
    for k in range(start, stop):
        f = monic_from_index(k, n, q)
        if kind == "monic_squarefree" and not is_squarefree(f, q):
            continue
        if kind == "monic_irreducible" and not is_irreducible(f, q):
            continue
        yield f


def monics_upto(n: int, q: int) -> Iterator[Poly]:
    for d in range(n + 1):
        yield from enumerate_polys("monic", d, q)


@lru_cache(maxsize=None)
def irreducibles(n: int, q: int) -> tuple[Poly, ...]:
    return tuple(enumerate_polys("monic_irreducible", n, q))


@lru_cache(maxsize=None)
def first_irreducible(n: int, q: int) -> Poly:
    """First monic irreducible of degree n in enumeration order."""
    return next(enumerate_polys("monic_irreducible", n, q))


def mobius(n: int) -> int:
    out = 1
    for p in _prime_factors(n):
        if n % (p * p) == 0:
            return 0
        out = -out
    return out


@lru_cache(maxsize=None)
def irreducible_count(n: int, q: int) -> int:
    """Number of monic irreducibles of degree n over F_q."""
    if n < 1:
        raise ValueError("degree must be positive")
    total = sum(mobius(d) * q ** (n // d) for d in range(1, n + 1) if n % d == 0)
    return total // n


# ---------------------------------------------------------------------------
# factorization
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Factorization:
    unit: int
    factors: tuple[tuple[Poly, int], ...]

    def expand(self, q: int) -> Poly:
        out: Poly = (self.unit,)
        for p, e in self.factors:
            out = mul(out, poly_pow(p, e, q), q)
        return out

    @property
    def primes(self) -> tuple[Poly, ...]:
        return tuple(p for p, _ in self.factors)


def _sort_key(p: Poly) -> tuple:
    return (len(p), tuple(reversed(p)))


@lru_cache(maxsize=1 << 16)
def factorize(f: Poly, q: int) -> Factorization:
    """Factor f into monic irreducibles by trial division.

    Degrees in this package stay small, so trial division against the cached
    irreducible lists beats anything cleverer.  Output is sorted by degree,
    then by coefficients from the top down.
    """
    if not f:
        raise ValueError("cannot factor the zero polynomial")
    unit, g = monic_part(f, q)
    found: dict[Poly, int] = {}
    d = 1
    while 2 * d <= len(g) - 1:
        for p in irreducibles(d, q):
            while True:
                quot, rem = divmod_poly(g, p, q)
                if rem:
                    break
                found[p] = found.get(p, 0) + 1
                g = quot
            if 2 * d > len(g) - 1:
                break
        d += 1
    if len(g) > 1:
        found[g] = found.get(g, 0) + 1
    return Factorization(unit, tuple(sorted(found.items(), key=lambda t: _sort_key(t[0]))))


def radical(f: Poly, q: int) -> Poly:
    out: Poly = (1,)
    for p in factorize(f, q).primes:
        out = mul(out, p, q)
    return out


def euler_phi(f: Poly, q: int) -> int:
    """|(F_q[x]/f)^*|."""
    out = 1
    for p, e in factorize(f, q).factors:
        np_ = q ** (len(p) - 1)
        out *= np_ ** (e - 1) * (np_ - 1)
    return out


def is_square(f: Poly, q: int) -> bool:
    """True iff the monic f is the square of a monic polynomial."""
    return all(e % 2 == 0 for _, e in factorize(f, q).factors)
