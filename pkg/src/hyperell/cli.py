"""Command line entry point.

Exit codes: 0 when everything ran and every check held, 1 when a
verification failed (a failure manifest goes to stderr and, with --out, to a
``.failures.json`` file next to the output), 2 for configuration errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from pathlib import Path

from . import asymptotics as asy
from . import charsums as cs
from . import ensemble as ens
from . import gfpoly as gp
from . import lfunc as lf

THREADS_ENV = "HYPERELL_THREADS"
DIGITS = 15
SUITES = ("fe", "rh", "poisson", "firstpoint", "bzw", "gauss")
DEFAULT_BZW_POINTS = ("5^-1.5,5^-0.75", "5^-1.2,5^-0.9")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    q: int = 5
    g: list[int] = field(default_factory=lambda: [1])
    k: int = 1
    threads: int = 1
    cutoff: int = asy.DEFAULT_CUTOFF
    tol: float | None = None
    out: Path | None = None
    format: str = "csv"
    suite: str | None = None
    D: str | None = None
    max_deg: int = 3
    trunc: list[int] = field(default_factory=lambda: [10, 12])
    points: list[tuple[float, float]] = field(default_factory=list)

    def validate(self) -> "RunConfig":
        try:
            gp.check_q(self.q)
        except gp.FieldError as exc:
            raise ConfigError(
                f"q must be a prime ≡ 1 mod 4 (got {self.q}); the quadratic reciprocity "
                "used throughout assumes this hypothesis"
            ) from exc
        if not self.g or min(self.g) < 1:
            raise ConfigError("g must be at least 1")
        if self.k < 1:
            raise ConfigError("k must be at least 1")
        if self.threads < 1:
            raise ConfigError("threads must be at least 1")
        if self.cutoff < 1:
            raise ConfigError("cutoff must be positive")
        if self.tol is not None and self.tol <= 0:
            raise ConfigError("tol must be positive")
        if self.format not in ("csv", "json"):
            raise ConfigError("format must be csv or json")
        if self.command == "verify" and self.suite not in SUITES:
            raise ConfigError(f"unknown suite {self.suite!r}")
        if self.command == "lvalue" and not self.D:
            raise ConfigError("lvalue needs --D")
        if self.max_deg < 1:
            raise ConfigError("max-deg must be at least 1")
        return self


# ---------------------------------------------------------------------------
# formatting
# ---------------------------------------------------------------------------

def dec(x, digits: int = DIGITS) -> Decimal:
    """Round a number (Decimal, Fraction, int, float or mpf) to ``digits`` significant digits."""
    if isinstance(x, Decimal):
        d = x
    elif hasattr(x, "numerator") and hasattr(x, "denominator"):
        with localcontext() as c:
            c.prec = digits + 20
            d = Decimal(x.numerator) / Decimal(x.denominator)
    else:
        d = Decimal(asy.ctx.nstr(asy.mpf(x), digits + 5, strip_zeros=False))
    with localcontext() as c:
        c.prec = digits
        return +d


def fmt(x) -> str:
    return f"{dec(x):g}"


def parse_g(text: str) -> list[int]:
    text = text.strip()
    if ".." in text:
        a, b = text.split("..")
        return list(range(int(a), int(b) + 1))
    return [int(t) for t in text.split(",")]


def parse_real(text: str) -> float:
    text = text.strip()
    if "^" in text:
        base, exp = text.split("^")
        return float(base) ** float(exp)
    return float(text)


def parse_point(text: str) -> tuple[float, float]:
    z, w = text.split(",")
    return parse_real(z), parse_real(w)


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.out is None:
        sys.stdout.write(text)
    else:
        cfg.out.parent.mkdir(parents=True, exist_ok=True)
        cfg.out.write_text(text, encoding="utf-8")


def _rows_text(rows: list[dict], fmt_: str) -> str:
    if fmt_ == "json":
        return json.dumps(rows, indent=2, ensure_ascii=False) + "\n"
    buf = io.StringIO()
    if rows:
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    return buf.getvalue()


def _manifest(cfg: RunConfig, failures: list[dict]) -> None:
    doc = {"command": cfg.command, "suite": cfg.suite, "q": cfg.q, "failures": failures}
    text = json.dumps(doc, indent=2, ensure_ascii=False)
    sys.stderr.write(f"{len(failures)} failure(s)\n{text}\n")
    if cfg.out is not None:
        cfg.out.with_suffix(".failures.json").write_text(text + "\n", encoding="utf-8")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_constants(cfg: RunConfig) -> int:
    _emit(cfg, json.dumps(asy.constants_report(cfg.q, cfg.cutoff), indent=2, ensure_ascii=False) + "\n")
    return 0


def cmd_lvalue(cfg: RunConfig) -> int:
    D = gp.parse_poly(cfg.D, cfg.q)
    try:
        report = lf.l_value_report(D, cfg.q, cfg.tol or 1e-9)
    except lf.NotInEnsemble as exc:
        raise ConfigError(str(exc)) from exc
    _emit(cfg, json.dumps(report, indent=2, ensure_ascii=False) + "\n")
    if not (report["fe"] and report["rh"]):
        _manifest(cfg, [{"D": report["D"], "fe": report["fe"], "rh": report["rh"]}])
        return 1
    return 0


def moment_row(res: ens.MomentResult) -> dict:
    m = res.moment_exact
    return {
        "q": res.q,
        "g": res.g,
        "k": res.k,
        "count": res.count,
        "moment_a_num": m.a.numerator,
        "moment_a_den": m.a.denominator,
        "moment_b_num": m.b.numerator,
        "moment_b_den": m.b.denominator,
        "moment_decimal": fmt(res.moment_decimal),
        "wall_seconds": f"{res.wall_time:.3f}",
    }


def cmd_moment(cfg: RunConfig) -> int:
    rows = []
    for g in cfg.g:
        try:
            res = ens.first_moment(cfg.q, g, cfg.k, workers=cfg.threads)
        except ens.InfeasibleSweep as exc:
            raise ConfigError(str(exc)) from exc
        rows.append(moment_row(res))
    _emit(cfg, _rows_text(rows, cfg.format))
    return 0


def cmd_predict(cfg: RunConfig) -> int:
    rows = []
    for g in cfg.g:
        p = asy.predict_moment(cfg.q, g, cfg.cutoff)
        rows.append({
            "q": cfg.q,
            "g": g,
            "main": fmt(p.main.value),
            "main_bound": asy.ctx.nstr(p.main.bound, 3),
            "secondary": fmt(p.secondary.value),
            "secondary_bound": asy.ctx.nstr(p.secondary.bound, 3),
            "error_scale": fmt(p.error_scale),
        })
    _emit(cfg, _rows_text(rows, cfg.format))
    return 0


def report_row(q: int, g: int, measured, pred: asy.Prediction) -> dict:
    """One report line; ``residual`` is exact in the rounded decimals shown."""
    m = dec(measured)
    main = dec(pred.main.value)
    sec = dec(pred.secondary.value)
    with localcontext() as c:
        c.prec = 60
        residual = m - main - sec
        scaled = residual / dec(asy.ctx.power(q, asy.ERROR_EXPONENT * g), 30)
        ratio = m / main
    return {
        "g": g,
        "measured": f"{m:g}",
        "predicted_main": f"{main:g}",
        "predicted_secondary": f"{sec:g}",
        "residual": f"{residual:g}",
        f"residual_over_q^{asy.ERROR_EXPONENT}g": fmt(scaled),
        "ratio": fmt(ratio),
    }


def cmd_report(cfg: RunConfig) -> int:
    rows = []
    for g in cfg.g:
        try:
            res = ens.first_moment(cfg.q, g, 1, workers=cfg.threads)
        except ens.InfeasibleSweep as exc:
            raise ConfigError(str(exc)) from exc
        rows.append(report_row(cfg.q, g, res.moment_exact.to_decimal(40), asy.predict_moment(cfg.q, g, cfg.cutoff)))
    _emit(cfg, _rows_text(rows, cfg.format))
    return 0


def _suite_rows(cfg: RunConfig):
    q = cfg.q
    if cfg.suite in ("fe", "rh"):
        tol = cfg.tol or 1e-9
        for g in cfg.g:
            for D in ens.ensemble(q, g):
                if cfg.suite == "fe":
                    L = lf.l_polynomial_charsum(D, q, direct=True)
                    ok = lf.fe_check(L, q) and L == lf.l_polynomial_pointcount(D, q)
                else:
                    ok = lf.rh_check(lf.l_polynomial_pointcount(D, q), q, tol)
                yield {"D": gp.format_poly(D), "g": g, "ok": ok}
    elif cfg.suite == "poisson":
        for n in range(1, cfg.max_deg + 1):
            for f in gp.enumerate_polys("monic", n, q):
                for m in range(n):
                    r = cs.poisson_check(f, m, q)
                    yield {
                        "f": gp.format_poly(f), "m": m,
                        "lhs_a": str(r.lhs.a), "lhs_b": str(r.lhs.b),
                        "rhs_a": str(r.rhs.a), "rhs_b": str(r.rhs.b),
                        "equal": r.equal,
                    }
    elif cfg.suite == "firstpoint":
        for g in cfg.g:
            for n in range(1, cfg.max_deg + 1):
                for f in gp.enumerate_polys("monic", n, q):
                    lhs, rhs = ens.firstpoint_sides(f, g, q)
                    yield {"f": gp.format_poly(f), "g": g, "lhs": lhs, "rhs": rhs, "equal": lhs == rhs}
    elif cfg.suite == "gauss":
        for n in range(1, cfg.max_deg + 1):
            for f in gp.enumerate_polys("monic", n, q):
                for V in cs.residues(f, q):
                    direct = cs.reduce_to_quadext(cs.gauss_sum_direct(V, f, q))
                    fast = cs.gauss_sum_fast(V, f, q)
                    yield {
                        "f": gp.format_poly(f), "V": gp.format_poly(V),
                        "direct_a": str(direct.a), "direct_b": str(direct.b),
                        "fast_a": str(fast.a), "fast_b": str(fast.b),
                        "equal": direct == fast,
                    }
    elif cfg.suite == "bzw":
        tol = cfg.tol or 1e-6
        points = cfg.points or [parse_point(p) for p in DEFAULT_BZW_POINTS]
        for z, w in points:
            try:
                results = [asy.bzw_identity_check(z, w, t, q) for t in cfg.trunc]
            except ValueError as exc:
                raise ConfigError(str(exc)) from exc
            for i, r in enumerate(results):
                shrinking = i == 0 or r.delta < results[i - 1].delta
                yield {
                    "z": repr(z), "w": repr(w), "trunc": r.trunc,
                    "lhs": fmt(r.lhs), "rhs": fmt(r.rhs), "delta": f"{r.delta:.6e}",
                    "ok": r.delta <= tol and shrinking,
                }


def cmd_verify(cfg: RunConfig) -> int:
    rows = list(_suite_rows(cfg))
    _emit(cfg, _rows_text(rows, cfg.format))
    key = "equal" if cfg.suite in ("poisson", "firstpoint", "gauss") else "ok"
    failures = [r for r in rows if not r[key]]
    if failures:
        _manifest(cfg, failures)
        return 1
    return 0


COMMANDS = {
    "constants": cmd_constants,
    "lvalue": cmd_lvalue,
    "moment": cmd_moment,
    "predict": cmd_predict,
    "report": cmd_report,
    "verify": cmd_verify,
}


def run(cfg: RunConfig) -> int:
    cfg.validate()
    return COMMANDS[cfg.command](cfg)


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _default_threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", type=int, default=5)
    common.add_argument("--g", type=parse_g, default=None, help="genus, list '1,2' or range '1..3'")
    common.add_argument("--threads", type=int, default=_default_threads(),
                        help=f"worker processes (default from ${THREADS_ENV}, else 1)")
    common.add_argument("--cutoff", type=int, default=asy.DEFAULT_CUTOFF)
    common.add_argument("--tol", type=float, default=None)
    common.add_argument("--out", type=Path, default=None)
    common.add_argument("--format", choices=("csv", "json"), default=None)

    ap = argparse.ArgumentParser(prog="hyperell", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("constants", parents=[common], help="Euler-product constants as JSON")
    p = sub.add_parser("lvalue", parents=[common], help="L-polynomial and L(1/2) of one D")
    p.add_argument("--D", required=True, help="coefficients, lowest degree first, e.g. 1,1,0,1")
    p = sub.add_parser("moment", parents=[common], help="exact moment sweep over H_{2g+1}")
    p.add_argument("--k", type=int, default=1)
    sub.add_parser("predict", parents=[common], help="predicted main and secondary terms")
    sub.add_parser("report", parents=[common], help="measured vs predicted first moment")
    p = sub.add_parser("verify", parents=[common], help="exhaustive verification suites")
    p.add_argument("suite", choices=SUITES)
    p.add_argument("--max-deg", type=int, default=3)
    p.add_argument("--trunc", type=parse_g, default=[10, 12])
    p.add_argument("--point", action="append", default=None, help="z,w (accepts 5^-1.5 style)")
    return ap


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    if ns.command in ("constants", "lvalue"):
        fmt_ = "json"
    else:
        fmt_ = ns.format or "csv"
    default_g = {"report": [1, 2, 3], "verify": [1, 2]}.get(ns.command, [1])
    return RunConfig(
        command=ns.command,
        q=ns.q,
        g=ns.g or default_g,
        k=getattr(ns, "k", 1),
        threads=ns.threads,
        cutoff=ns.cutoff,
        tol=ns.tol,
        out=ns.out,
        format=fmt_,
        suite=getattr(ns, "suite", None),
        D=getattr(ns, "D", None),
        max_deg=getattr(ns, "max_deg", 3),
        trunc=getattr(ns, "trunc", [10, 12]),
        points=[parse_point(p) for p in (getattr(ns, "point", None) or [])],
    )


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    ns = ap.parse_args(argv)
    try:
        cfg = config_from_args(ns)
        return run(cfg)
    except ConfigError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
