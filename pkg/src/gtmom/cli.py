"""Command-line interface: ``gtmom <command> [options]``.

Results go to stdout as JSON (default), CSV or plain ``key=value`` lines; logs
go to stderr.  Exit codes: 0 success, 1 verification failure, 2 budget
exceeded, 3 accuracy target missed, 64 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import time
from fractions import Fraction
from typing import Any, Sequence

from . import __version__
from .count import DEFAULT_ENUMERATION_BUDGET, BudgetExceededError, dp_count, enumerate_count, iter_members
from .gt import (
    ConstrainedArray,
    ParamTriple,
    ValidationError,
    array_to_gt,
    gt_to_tableau,
    validate_array,
    validate_gt_constraints,
    validate_tableau_constraints,
)
from .gtvolume import assemble_c_formula, c2_slice_integral
from .painleve import AccuracyError, c2_fourier, hankel_det, sigma_h, sigma_pv_residual
from .poly import ConsistencyError, interpolate_mom, leading_coefficient
from .region import RegionSpec, mc_volume
from . import verify as _verify

log = logging.getLogger("gtmom")

EXIT_OK, EXIT_VERIFY, EXIT_BUDGET, EXIT_ACCURACY, EXIT_USAGE = 0, 1, 2, 3, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse exits with 2 by default
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _frac(c: Fraction) -> str:
    return f"{c.numerator}/{c.denominator}"


def _sweep(text: str) -> range:
    try:
        lo, hi = (int(v) for v in text.split(".."))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a..b, got {text!r}") from None
    if lo < 0 or hi < lo:
        raise argparse.ArgumentTypeError(f"bad range {text!r}")
    return range(lo, hi + 1)


# --------------------------------------------------------------------------
# commands; each returns a list of flat result records
# --------------------------------------------------------------------------

def cmd_count(a) -> list[dict]:
    Ns = a.sweep if a.sweep is not None else [a.n]
    out = []
    for N in Ns:
        p = ParamTriple(N, a.k, a.beta)
        if a.method == "enumerate":
            res = enumerate_count(p, budget=a.budget)
        else:
            res = dp_count(p)
        out.append(
            {"command": "count", **p.as_dict(), "count": str(res.count), "method": "exact", "algorithm": res.method}
        )
    return out


def cmd_poly(a) -> list[dict]:
    poly = interpolate_mom(a.k, a.beta)
    return [
        {
            "command": "poly",
            "k": a.k,
            "beta": a.beta,
            "degree": poly.degree,
            "coefficients": [_frac(c) for c in poly.coeffs],
            "method": "exact",
        }
    ]


def cmd_coeff(a) -> list[dict]:
    c = leading_coefficient(interpolate_mom(a.k, a.beta))
    return [
        {
            "command": "coeff",
            "k": a.k,
            "beta": a.beta,
            "coefficient": _frac(c),
            "value": float(c),
            "method": "exact",
        }
    ]


def cmd_volume(a) -> list[dict]:
    base = {"command": "volume", "k": a.k, "beta": a.beta, "mode": a.mode}
    if a.mode == "mc":
        est = mc_volume(RegionSpec(a.k, a.beta), a.samples, a.seed, workers=a.threads)
        return [{**base, **est.to_json()}]
    if a.mode == "assemble":
        est = assemble_c_formula(a.k, a.beta, samples=a.samples, seed=a.seed, workers=a.threads)
        return [{**base, **est.to_json()}]
    if a.k != 2:
        raise UsageError(f"--mode {a.mode} needs --k 2")
    if a.mode == "slice":
        return [{**base, "value": c2_slice_integral(a.beta), "stderr": 0.0, "method": "quadrature"}]
    res = c2_fourier(a.beta, U=a.U, tol=a.tol)
    return [{**base, **res.to_json()}]


def cmd_painleve(a) -> list[dict]:
    out = []
    for t in a.t:
        out.append(
            {
                "command": "painleve",
                "beta": a.beta,
                "t": t,
                "D": hankel_det(a.beta, t).real,
                "H": sigma_h(a.beta, t),
                "residual": sigma_pv_residual(a.beta, t, h=a.h),
                "method": "finite-difference",
            }
        )
    return out


def cmd_bijection_demo(a) -> list[dict]:
    p = ParamTriple(a.n, a.k, a.beta)
    for idx, rows in enumerate(iter_members(p)):
        if idx == a.index:
            break
    else:
        raise UsageError(f"index {a.index} is out of range")
    x = ConstrainedArray(p, rows)
    g = array_to_gt(x)
    t = gt_to_tableau(g)
    return [
        {
            "command": "bijection-demo",
            **p.as_dict(),
            "index": a.index,
            "array": x.to_json()["matrix"],
            "pattern": g.to_json(),
            "tableau": t.to_json()["rows"],
            "array_valid": validate_array(x),
            "pattern_valid": validate_gt_constraints(g, p),
            "tableau_valid": validate_tableau_constraints(t, p),
        }
    ]


def cmd_verify(a) -> list[dict]:
    out = []
    for r in _verify.run(a.level):
        rec = {"command": "verify", "level": a.level, **r.to_json()}
        if not a.timing:  # keep output reproducible
            del rec["seconds"]
        out.append(rec)
    return out


COMMANDS = {
    "count": cmd_count,
    "poly": cmd_poly,
    "coeff": cmd_coeff,
    "volume": cmd_volume,
    "painleve": cmd_painleve,
    "bijection-demo": cmd_bijection_demo,
    "verify": cmd_verify,
}


def build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "plain"), default="json")
    common.add_argument("--threads", type=int, default=1, help="worker count for Monte Carlo")
    common.add_argument("--out", help="also write the JSON result to this file")
    common.add_argument("--config", help="JSON file of option defaults; flags override")
    common.add_argument("--timing", action="store_true", help="include elapsed milliseconds")
    common.add_argument("-v", "--verbose", action="count", default=0)

    parser = _Parser(prog="gtmom", description="Moments of moments via constrained GT patterns.")
    parser.add_argument("--version", action="version", version=f"gtmom {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    subs = {}

    def add(name, help_):
        sp = sub.add_parser(name, help=help_, parents=[common])
        subs[name] = sp
        return sp

    def kb(sp):
        sp.add_argument("--k", type=int, required=True)
        sp.add_argument("--beta", type=int, required=True)

    sp = add("count", "exact MoM_N(k, beta)")
    which = sp.add_mutually_exclusive_group(required=True)
    which.add_argument("--n", type=int)
    which.add_argument("--sweep", type=_sweep, help="range of N, e.g. 0..12")
    kb(sp)
    sp.add_argument("--method", choices=("dp", "enumerate"), default="dp")
    sp.add_argument("--budget", type=int, default=DEFAULT_ENUMERATION_BUDGET)

    sp = add("poly", "exact polynomial in N")
    kb(sp)
    sp = add("coeff", "exact leading coefficient")
    kb(sp)

    sp = add("volume", "leading coefficient as a volume")
    kb(sp)
    sp.add_argument("--mode", choices=("mc", "slice", "assemble", "fourier"), default="mc")
    sp.add_argument("--samples", type=int, default=10**6)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--U", type=float, default=None, help="Fourier truncation (default 50/beta)")
    sp.add_argument("--tol", type=float, default=1e-6, help="Fourier tail tolerance")

    sp = add("painleve", "sigma-form Painleve V residuals")
    sp.add_argument("--beta", type=int, required=True)
    sp.add_argument("--t", type=float, nargs="+", default=[0.5, 1.0, 2.0])
    sp.add_argument("--h", type=float, default=None, help="finite-difference step")

    sp = add("bijection-demo", "show one member in all three encodings")
    sp.add_argument("--n", type=int, required=True)
    kb(sp)
    sp.add_argument("--index", type=int, default=0)

    sp = add("verify", "cross-verification suite")
    sp.add_argument("--level", choices=_verify.LEVELS, default="quick")
    return parser, subs


def _config_path(argv: Sequence[str]) -> str | None:
    for i, tok in enumerate(argv):
        if tok == "--config" and i + 1 < len(argv):
            return argv[i + 1]
        if tok.startswith("--config="):
            return tok.split("=", 1)[1]
    return None


def _parse(argv: Sequence[str] | None) -> argparse.Namespace:
    parser, subs = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    path = _config_path(argv)
    command = next((tok for tok in argv if tok in subs), None)
    if path and command:
        try:
            with open(path) as fh:
                cfg = json.load(fh)
        except (OSError, ValueError) as exc:
            parser.error(f"cannot read config {path}: {exc}")
        if not isinstance(cfg, dict):
            parser.error("config file must hold a JSON object")
        sp = subs[command]
        known = {act.dest for act in sp._actions} - {"help", "config"}
        unknown = set(cfg) - known
        if unknown:
            parser.error(f"unknown config keys: {sorted(unknown)}")
        # required options may come from the config file
        for act in sp._actions:
            if act.dest in cfg:
                act.required = False
        for group in sp._mutually_exclusive_groups:
            if any(act.dest in cfg for act in group._group_actions):
                group.required = False
        sp.set_defaults(**cfg)
    return parser.parse_args(argv)


def _render(records: list[dict], fmt: str) -> str:
    if fmt == "json":
        body: Any = records[0] if len(records) == 1 else records
        return json.dumps(body, sort_keys=True)
    if fmt == "csv":
        buf = io.StringIO()
        keys = list(records[0])
        w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
        w.writeheader()
        for r in records:
            w.writerow({k: json.dumps(v) if isinstance(v, (list, dict)) else v for k, v in r.items()})
        return buf.getvalue().rstrip("\n")
    blocks = []
    for r in records:
        blocks.append("\n".join(f"{k}={v}" for k, v in r.items()))
    return "\n\n".join(blocks)


def _emit(records: list[dict], args) -> None:
    print(_render(records, args.format))
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(records[0] if len(records) == 1 else records, fh, sort_keys=True, indent=2)
            fh.write("\n")


def _error(kind: str, message: str, **extra) -> None:
    print(json.dumps({"error": kind, "message": message, **extra}, sort_keys=True))


def main(argv: Sequence[str] | None = None) -> int:
    args = _parse(argv)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    if args.threads < 1:
        _error("usage", "--threads must be positive")
        return EXIT_USAGE
    t0 = time.perf_counter()
    try:
        records = COMMANDS[args.command](args)
    except BudgetExceededError as exc:
        _error("budget", str(exc), estimate=str(exc.estimate), budget=str(exc.budget))
        return EXIT_BUDGET
    except AccuracyError as exc:
        partial = exc.partial.to_json() if exc.partial is not None else None
        _error("accuracy", str(exc), partial=partial)
        return EXIT_ACCURACY
    except ConsistencyError as exc:
        _error("consistency", str(exc))
        return EXIT_VERIFY
    except (UsageError, ValidationError, ValueError) as exc:
        _error("usage", str(exc))
        return EXIT_USAGE
    elapsed = (time.perf_counter() - t0) * 1000
    log.info("%s finished in %.1f ms", args.command, elapsed)
    if args.timing:
        for r in records:
            r["elapsed_ms"] = round(elapsed, 3)
    _emit(records, args)
    if args.command == "verify":
        failed = [r["name"] for r in records if not r["passed"]]
        if failed:
            print("failed checks: " + ", ".join(failed), file=sys.stderr)
            return EXIT_VERIFY
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
