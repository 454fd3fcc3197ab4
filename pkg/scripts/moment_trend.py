"""Measured first moments against the predicted main and secondary terms.

    python scripts/moment_trend.py --g 1..3 --out results/trend.csv
    python scripts/moment_trend.py --g 4 --threads 8      # ~1.5M discriminants
"""

import argparse
import sys
from pathlib import Path

from hyperell import asymptotics as asy
from hyperell import ensemble as ens
from hyperell.cli import moment_row, parse_g, report_row, _rows_text


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--q", type=int, default=5)
    ap.add_argument("--g", type=parse_g, default=[1, 2, 3])
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--out", type=Path)
    args = ap.parse_args(argv)

    rows = []
    for g in args.g:
        res = ens.first_moment(args.q, g, workers=args.threads, ceiling=10**12)
        pred = asy.predict_moment(args.q, g)
        row = report_row(args.q, g, res.moment_exact.to_decimal(40), pred)
        M = asy.BoundedReal.of(res.moment_exact.a).value
        without = abs(M - pred.main.value)
        with_sec = abs(M - pred.main.value - pred.secondary.value)
        row["secondary_helps"] = bool(with_sec < without)
        row["moment_exact"] = moment_row(res)["moment_a_num"]
        row["wall_seconds"] = f"{res.wall_time:.1f}"
        rows.append(row)
        print(row, file=sys.stderr, flush=True)
    text = _rows_text(rows, "csv")
    if args.out:
        args.out.parent.mkdir(parents=True, exist_ok=True)
        args.out.write_text(text, encoding="utf-8")
    sys.stdout.write(text)


if __name__ == "__main__":
    main()
