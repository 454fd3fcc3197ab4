"""lhs, rhs and their gap for the B(z, w) identity as the truncation grows.

The lhs double sum only converges absolutely for |qz| < 1 and |qw| < 1, so
points outside that box show a growing lhs while the product side stays put.
"""

import argparse

from hyperell import asymptotics as asy
from hyperell.cli import parse_point

POINTS = ["5^-1.5,5^-0.75", "5^-1.2,5^-0.9", "5^-1.5,5^-1.5", "5^-1.8,5^-2", "5^-1.9,5^-2.2"]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--q", type=int, default=5)
    ap.add_argument("--point", action="append")
    ap.add_argument("--truncs", default="4,6,8,10,12")
    args = ap.parse_args(argv)
    truncs = [int(t) for t in args.truncs.split(",")]

    print("z,w,qz,qw,trunc,lhs,rhs,delta")
    for text in args.point or POINTS:
        z, w = parse_point(text)
        for t in truncs:
            r = asy.bzw_identity_check(z, w, t, args.q)
            print(f"{z:.6g},{w:.6g},{args.q * z:.4g},{args.q * w:.4g},{t},{r.lhs:.12g},{r.rhs:.12g},{r.delta:.3e}")


if __name__ == "__main__":
    main()
