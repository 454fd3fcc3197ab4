"""Exhaustive sweeps over the hyperelliptic ensemble H_{2g+1}.

Moments are accumulated exactly.  The default route vectorizes the point
count of each curve over F_{q^r}, r <= g, and recovers S_0..S_g with Newton's
identities; the ``charsum`` route sums Jacobi symbols in pure Python and is
kept as an independent cross-check for small g.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import gfpoly as gp
from .charsums import char_sum, chi
from .gfpoly import Poly
from .lfunc import extension_field, l_half, l_half_from_coeffs
from .quadext import QuadExt

DEFAULT_CEILING = 10**9
BATCH = 2048


class InfeasibleSweep(ValueError):
    pass


@dataclass(frozen=True)
class MomentResult:
    q: int
    g: int
    k: int
    count: int
    moment_exact: QuadExt
    wall_time: float

    @property
    def moment_decimal(self):
        return self.moment_exact.to_decimal(30)


def ensemble_size(q: int, g: int) -> int:
    return q ** (2 * g) * (q - 1)


def _newton_batch(a: np.ndarray, g: int) -> np.ndarray:
    """Rows of S_0..S_g from rows of power sums a_1..a_g (exact in int64)."""
    S = np.zeros((a.shape[0], g + 1), dtype=np.int64)
    S[:, 0] = 1
    for n in range(1, g + 1):
        acc = sum(a[:, r - 1] * S[:, n - r] for r in range(1, n + 1))
        if np.any(acc % n):
            raise ArithmeticError("non-integral Newton step")
        S[:, n] = acc // n
    return S


def _squarefree_rows(q: int, g: int, start: int, stop: int):
    n = 2 * g + 1
    rows = []
    for k in range(start, stop):
        f = gp.monic_from_index(k, n, q)
        if gp.is_squarefree(f, q):
            rows.append(f)
            if len(rows) == BATCH:
                yield rows
                rows = []
    if rows:
        yield rows


def _sweep_chunk(args) -> tuple[int, tuple[int, ...], QuadExt]:
    """Partial sums over one contiguous index range.

    Returns (count, column totals of S_0..S_g, sum of L(1/2)^k).  The column
    totals are only filled on the pointcount route; for k = 1 they determine
    the moment and the QuadExt sum is left at zero.
    """
    q, g, k, start, stop, route = args
    count = 0
    totals = [0] * (g + 1)
    value_sum = QuadExt.zero(q)
    for rows in _squarefree_rows(q, g, start, stop):
        count += len(rows)
        if route == "pointcount":
            coeffs = np.asarray(rows, dtype=np.int64)
            a = np.stack([extension_field(q, r).character_sums(coeffs) for r in range(1, g + 1)], axis=1)
            S = _newton_batch(a, g)
            totals = [t + int(S[:, n].sum()) for n, t in enumerate(totals)]
            if k > 1:
                for srow in S.tolist():
                    value_sum = value_sum + l_half_from_coeffs(srow, g, q) ** k
        elif route == "charsum":
            for D in rows:
                value_sum = value_sum + l_half(D, q) ** k
        else:
            raise ValueError(f"unknown route {route!r}")
    return count, tuple(totals), value_sum


def first_moment(
    q: int,
    g: int,
    k: int = 1,
    workers: int = 1,
    chunks: int | None = None,
    route: str = "pointcount",
    ceiling: int = DEFAULT_CEILING,
) -> MomentResult:
    """sum over D in H_{2g+1} of L(1/2, chi_D)^k, exactly.

    The sweep is cut into ``chunks`` contiguous index ranges (default: four
    per worker); partial sums merge by exact addition, so the result does not
    depend on ``workers`` or ``chunks``.
    """
    gp.check_q(q)
    if g < 1:
        raise ValueError("g must be at least 1")
    if k < 1:
        raise ValueError("k must be at least 1")
    if q ** (2 * g) > ceiling:
        raise InfeasibleSweep(f"q^(2g) = {q ** (2 * g)} exceeds the ceiling {ceiling}")
    t0 = time.perf_counter()
    total = q ** (2 * g + 1)
    parts = chunks or max(1, 4 * workers)
    jobs = [(q, g, k) + gp.chunk_bounds(total, parts, i) + (route,) for i in range(parts)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            partials = list(pool.map(_sweep_chunk, jobs))
    else:
        partials = [_sweep_chunk(j) for j in jobs]

    count = sum(p[0] for p in partials)
    if k == 1 and route == "pointcount":
        cols = [sum(p[1][n] for p in partials) for n in range(g + 1)]
        moment = l_half_from_coeffs(cols, g, q)
    else:
        moment = sum((p[2] for p in partials), QuadExt.zero(q))
    return MomentResult(q, g, k, count, moment, time.perf_counter() - t0)


# ---------------------------------------------------------------------------
# the square-free sieve identity
# ---------------------------------------------------------------------------

@lru_cache(maxsize=16)
def ensemble(q: int, g: int) -> tuple[Poly, ...]:
    return tuple(gp.enumerate_polys("monic_squarefree", 2 * g + 1, q))


def smooth_multiples(f: Poly, max_deg: int, q: int) -> list[Poly]:
    """Monic C with every prime factor dividing f and deg C <= max_deg."""
    primes = gp.factorize(f, q).primes
    out: list[Poly] = []

    def rec(i: int, acc: Poly):
        if i == len(primes):
            out.append(acc)
            return
        P = primes[i]
        cur = acc
        while len(cur) - 1 <= max_deg:
            rec(i + 1, cur)
            cur = gp.mul(cur, P, q)

    rec(0, (1,))
    return sorted(out, key=lambda c: (len(c), tuple(reversed(c))))


def firstpoint_sides(f: Poly, g: int, q: int) -> tuple[int, int]:
    """Both sides of the square-free sieve identity for sum_{D in H_{2g+1}} chi_D(f)."""
    if not gp.is_monic(f) or len(f) < 2:
        raise ValueError("f must be monic of positive degree")
    lhs = sum(chi(f, D, q) for D in ensemble(q, g))
    sums: dict[int, int] = {}

    def S(m: int) -> int:
        if m < 0:
            return 0
        if m not in sums:
            sums[m] = char_sum(f, m, q)
        return sums[m]

    rhs = 0
    for C in smooth_multiples(f, g, q):
        dC = len(C) - 1
        rhs += S(2 * g + 1 - 2 * dC) - q * S(2 * g - 1 - 2 * dC)
    return lhs, rhs


def firstpoint_check(f: Poly, g: int, q: int) -> bool:
    lhs, rhs = firstpoint_sides(f, g, q)
    return lhs == rhs

