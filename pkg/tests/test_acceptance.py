"""Acceptance gate: one test per criterion, each recording a PASS/FAIL line.

The lines are printed in the terminal summary (see conftest.py).  Tolerances
and sample sets are the stated ones; nothing here is relaxed to make a
criterion pass.
"""

import os
import random
import time

import pytest

from conftest import ACCEPTANCE
from hyperell import asymptotics as asy
from hyperell import charsums as cs
from hyperell import ensemble as ens
from hyperell import gfpoly as gp
from hyperell import lfunc as lf

Q = 5

# exact first moments at q = 5 (anchors for criteria 6 and 9)
MOMENTS = {1: 200, 2: 7096, 3: 229232}


def record(n, ok, detail):
    ACCEPTANCE[n] = (bool(ok), detail)
    assert ok, detail


def test_criterion_1_symbol_oracle():
    t0 = time.perf_counter()
    primes = [P for n in (1, 2, 3) for P in gp.irreducibles(n, Q)]
    fs = [()] + [f for n in range(0, 4) for f in _all_polys(n)]
    bad = [(f, P) for P in primes for f in fs if cs.jacobi_symbol(f, P, Q) != cs.jacobi_by_factorization(f, P, Q)]
    dt = time.perf_counter() - t0
    record(1, not bad and dt < 5, f"{len(primes) * len(fs)} pairs, {len(bad)} mismatches, {dt:.1f}s")


def _all_polys(n):
    """Every polynomial of exact degree n (any leading coefficient)."""
    for lead in range(1, Q):
        for f in gp.enumerate_polys("monic", n, Q):
            yield gp.scale(f, lead, Q)


def test_criterion_2_gauss_dual_oracle():
    t0 = time.perf_counter()
    total, bad = 0, []
    for n in (1, 2, 3):
        for f in gp.enumerate_polys("monic", n, Q):
            for V in cs.residues(f, Q):
                total += 1
                if cs.reduce_to_quadext(cs.gauss_sum_direct(V, f, Q)) != cs.gauss_sum_fast(V, f, Q):
                    bad.append((f, V))
    dt = time.perf_counter() - t0
    record(2, not bad and dt < 60, f"{total} (V, f) pairs, {len(bad)} mismatches, {dt:.1f}s")


def test_criterion_3_poisson():
    t0 = time.perf_counter()
    total, bad = 0, []
    for n in (1, 2, 3, 4):
        for f in gp.enumerate_polys("monic", n, Q):
            for m in range(n):
                total += 1
                if not cs.poisson_check(f, m, Q).equal:
                    bad.append((f, m))
    dt = time.perf_counter() - t0
    record(3, not bad and dt < 120, f"{total} (f, m) cases, {len(bad)} unequal, {dt:.1f}s")


def sample_h5(count=200, seed=1):
    rng = random.Random(seed)
    seen, out = set(), []
    while len(out) < count:
        k = rng.randrange(Q**5)
        f = gp.monic_from_index(k, 5, Q)
        if k not in seen and gp.is_squarefree(f, Q):
            seen.add(k)
            out.append(f)
    return out


def test_criterion_4_l_function_dual_oracle():
    t0 = time.perf_counter()
    ds = list(gp.enumerate_polys("monic_squarefree", 3, Q)) + sample_h5()
    bad = []
    for D in ds:
        direct = lf.l_polynomial_charsum(D, Q, direct=True)
        ok = (
            lf.l_polynomial_charsum(D, Q) == direct == lf.l_polynomial_pointcount(D, Q)
            and lf.fe_check(direct, Q)
            and lf.rh_check(direct, Q, 1e-9)
            and lf.l_half(D, Q) >= 0
        )
        if not ok:
            bad.append(D)
    dt = time.perf_counter() - t0
    record(4, len(ds) == 300 and not bad and dt < 120, f"{len(ds)} discriminants, {len(bad)} failures, {dt:.1f}s")


def test_criterion_5_square_free_sieve():
    t0 = time.perf_counter()
    total, bad = 0, []
    for g in (1, 2):
        for n in (1, 2, 3):
            for f in gp.enumerate_polys("monic", n, Q):
                total += 1
                if not ens.firstpoint_check(f, g, Q):
                    bad.append((f, g))
    dt = time.perf_counter() - t0
    record(5, not bad and dt < 600, f"{total} (f, g) cases, {len(bad)} failures, {dt:.1f}s")


def test_criterion_6_trend():
    t0 = time.perf_counter()
    rel, notes, exact = [], [], True
    for g in (1, 2, 3):
        res = ens.first_moment(Q, g, workers=8)
        exact &= res.moment_exact == MOMENTS[g]
        pred = asy.predict_moment(Q, g)
        M = asy.BoundedReal.of(res.moment_exact.a).value
        rel.append(abs(M / pred.main.value - 1))
        if g == 3:
            without = abs(M - pred.main.value)
            with_sec = abs(M - pred.main.value - pred.secondary.value)
            notes.append(f"secondary {'reduces' if with_sec < without else 'does not reduce'} "
                         f"|residual| at g=3 ({float(without):.3f} -> {float(with_sec):.3f})")
    dt = time.perf_counter() - t0
    decreasing = all(b < a for a, b in zip(rel, rel[1:]))
    ok = exact and decreasing and rel[-1] <= 0.02 and dt < 300
    rels = ", ".join(f"{float(r):.3e}" for r in rel)
    record(6, ok, f"|M/T-1| = {rels}; {'; '.join(notes)}; {dt:.1f}s")


@pytest.mark.skipif(not os.environ.get("HYPERELL_G4"), reason="set HYPERELL_G4=1 for the ~1.5M discriminant sweep")
def test_criterion_6_optional_genus_four():
    res = ens.first_moment(Q, 4, workers=8)
    pred = asy.predict_moment(Q, 4)
    M = asy.BoundedReal.of(res.moment_exact.a).value
    without = abs(M - pred.main.value)
    with_sec = abs(M - pred.main.value - pred.secondary.value)
    print(f"g=4: M={res.moment_exact}, |M-T|={float(without):.4f}, with secondary {float(with_sec):.4f}")
    assert res.count == ens.ensemble_size(Q, 4)


def test_criterion_7_constants_convergence():
    t0 = time.perf_counter()
    parts, ok = [], True
    for f in (asy.constant_C1, asy.constant_CprimeC_over_logq, asy.dproduct_special, asy.dlog_sum_special):
        a, b = f(Q, 20), f(Q, 40)
        diff = abs(a.value - b.value)
        honored = diff <= a.bound + b.bound and b.contains(b.value)
        good = diff <= asy.mpf(10) ** -12 and honored
        ok &= good
        parts.append(f"{f.__name__}: diff {asy.ctx.nstr(diff, 3)} bound {asy.ctx.nstr(a.bound, 3)}"
                     f"{'' if good else ' (FAIL)'}")
    dt = time.perf_counter() - t0
    record(7, ok and dt < 1, "; ".join(parts) + f"; {dt:.2f}s")


def test_criterion_8_bzw_sample_points():
    t0 = time.perf_counter()
    points = [(Q**-1.5, Q**-0.75), (Q**-1.2, Q**-0.9)]
    parts, ok = [], True
    for z, w in points:
        d10 = asy.bzw_identity_check(z, w, 10, Q).delta
        d12 = asy.bzw_identity_check(z, w, 12, Q).delta
        good = d10 <= 1e-6 and d12 <= 1e-6 and d12 < d10
        ok &= good
        parts.append(f"(z,w)=({z:.4g},{w:.4g}): delta10 {d10:.3g}, delta12 {d12:.3g}")
    dt = time.perf_counter() - t0
    record(8, ok and dt < 60, "; ".join(parts) + f"; {dt:.1f}s")


def test_criterion_9_determinism():
    t0 = time.perf_counter()
    seen = {}
    for workers in (1, 4, 8):
        seen[workers] = tuple(ens.first_moment(Q, g, workers=workers).moment_exact for g in (1, 2, 3))
    same = len(set(seen.values())) == 1 and seen[1] == tuple(MOMENTS[g] for g in (1, 2, 3))
    dt = time.perf_counter() - t0
    record(9, same, f"moments {[str(m) for m in seen[1]]} identical across workers 1/4/8; {dt:.1f}s")
