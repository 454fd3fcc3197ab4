"""Convergence of the Euler-product constants in the cutoff.

Prints value, certified bound and the change from the previous cutoff for
each constant, plus both readings of the log-derivative term in R.
"""

import argparse

from hyperell import asymptotics as asy

FUNCS = [
    asy.constant_C1,
    asy.constant_CprimeC_over_logq,
    asy.dproduct_special,
    asy.dlog_sum_special,
    asy.dlog_derivative_special,
]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--q", type=int, default=5)
    ap.add_argument("--cutoffs", default="10,20,40,60,80,120")
    args = ap.parse_args(argv)
    cutoffs = [int(c) for c in args.cutoffs.split(",")]
    nstr = asy.ctx.nstr

    print("constant,cutoff,value,bound,change")
    for f in FUNCS:
        prev = None
        for c in cutoffs:
            v = f(args.q, c)
            change = "" if prev is None else nstr(abs(v.value - prev.value), 3)
            print(f"{f.__name__},{c},{nstr(v.value, 25)},{nstr(v.bound, 3)},{change}")
            prev = v

    print()
    print("dlog,slope,intercept,R(7)")
    for variant in ("closed_form", "derivative"):
        R = asy.r_polynomial(args.q, dlog=variant)
        print(f"{variant},{nstr(R.slope.value, 15)},{nstr(R.intercept.value, 15)},{nstr(R(7).value, 15)}")


if __name__ == "__main__":
    main()
