"""Command line entry point: ``tcwalls <subcommand> ...``.

Exit codes: 0 success, 1 a verification failed (first counterexample is
printed), 2 usage or input error, 3 internal inconsistency between two
independent computation routes.

Budgets can be overridden from the environment with ``TCW_MAX_WORD_LENGTH``,
``TCW_MAX_DP_N`` and ``TCW_MAX_ORDER``.

CSV columns
-----------
count --table          n,k,value
series --format csv    exponent,coefficient
dist --emit csv        m,probability,fraction
dist --converge csv    param,n,r,moment,target,gap
verify --format csv    mode,key,passed,detail
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import platform
import sys
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from math import factorial

from . import __version__
from .errors import BudgetExceededError, ConsistencyError, InvalidInputError
from .laws import PARAMS, convergence_report, dist
from .paths import b_path_table, c_path_table
from .series import (b_k_series, c_k_series, default_order, dyck_series, e_series,
                     verify_gf_identities)
from .tableaux import Tableau, tc_count, verify_tableau_identity, word_to_tableau, y_count
from .words import CLASS_TAGS, DEFAULT_MAX_LENGTH, WordClassSpec, enumerate_words

ENV_PREFIX = "TCW_"

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INCONSISTENT = 0, 1, 2, 3

DEFAULT_BUDGETS = {
    "max_word_length": DEFAULT_MAX_LENGTH,
    "max_dp_n": 5000,
    "max_order": 2000,
}


@dataclass
class RunConfig:
    command: str
    args: dict
    fmt: str = "text"
    jobs: int = 1
    output: str | None = None
    manifest: str | None = None
    max_word_length: int = DEFAULT_BUDGETS["max_word_length"]
    max_dp_n: int = DEFAULT_BUDGETS["max_dp_n"]
    max_order: int = DEFAULT_BUDGETS["max_order"]
    timings: dict = field(default_factory=dict)

    def __post_init__(self):
        for name in DEFAULT_BUDGETS:
            if getattr(self, name) < 1:
                raise InvalidInputError(f"budget {name} must be positive")
        if self.jobs < 1:
            raise InvalidInputError("--jobs must be positive")

    def check_n(self, n: int, what: str = "n") -> None:
        if n > self.max_dp_n:
            raise BudgetExceededError(f"{what}={n} exceeds max_dp_n={self.max_dp_n}")

    def check_order(self, order: int) -> None:
        if order > self.max_order:
            raise BudgetExceededError(f"order {order} exceeds max_order={self.max_order}")


def _budget_from_env(name: str, flag_value: int | None) -> int:
    if flag_value is not None:
        return flag_value
    raw = os.environ.get(ENV_PREFIX + name.upper())
    if raw is None:
        return DEFAULT_BUDGETS[name]
    try:
        return int(raw)
    except ValueError:
        raise InvalidInputError(f"{ENV_PREFIX}{name.upper()}={raw!r} is not an integer") from None


def _int_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}") from None


def _coeff_str(c) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


# subcommands ---------------------------------------------------------------
# Each returns (text to print, exit code).

def cmd_enumerate(cfg: RunConfig, a) -> tuple[str, int]:
    spec = WordClassSpec(a.cls, a.n, a.k, h_all_letters=a.h_all_letters)
    words = enumerate_words(spec, cfg.max_word_length)
    if cfg.fmt == "json":
        obj = {"class": spec.class_tag, "n": spec.n, "k": spec.k, "count": len(words)}
        if a.list:
            obj["words"] = [str(w) for w in words]
        return _json_text(obj), EXIT_OK
    if a.list:
        return "".join(f"{w}\n" for w in words), EXIT_OK
    return f"{len(words)}\n", EXIT_OK


def _count_value(model: str, seq: str, n: int, k: int) -> int:
    if not 0 <= k <= n:
        raise InvalidInputError(f"need 0 <= k <= n, got n={n}, k={k}")
    if model == "tableaux":
        return y_count(n, n - k, k) if seq == "b" else y_count(k, 0, n)
    if model == "paths":
        return b_path_table(n, k)[n, k] if seq == "b" else c_path_table(n)[n][k]
    if seq == "b":
        return int(b_k_series(k, 2 * n + 1)[2 * n])
    return int(c_k_series(k, n - k + 2)[n - k + 1] * factorial(n - k + 1))


def cmd_count(cfg: RunConfig, a) -> tuple[str, int]:
    if a.table:
        max_n = a.max_n if a.max_n is not None else a.n
        if max_n is None:
            raise InvalidInputError("--table needs --max-n")
        cfg.check_n(max_n, "max-n")
        max_k = max_n if a.max_k is None else a.max_k
        rows = []
        if a.model == "paths" and a.seq == "b":
            table = b_path_table(max_n, max_k)
            rows = [(n, k, table[n, k]) for n in range(max_n + 1) for k in range(min(n, max_k) + 1)]
        elif a.model == "paths":
            grid = c_path_table(max_n)
            rows = [(n, k, grid[n][k]) for n in range(max_n + 1) for k in range(min(n, max_k) + 1)]
        else:
            rows = [(n, k, _count_value(a.model, a.seq, n, k))
                    for n in range(max_n + 1) for k in range(min(n, max_k) + 1)]
        if cfg.fmt == "json":
            return _json_text({"model": a.model, "seq": a.seq,
                               "rows": [{"n": n, "k": k, "value": v} for n, k, v in rows]}), EXIT_OK
        return _csv_text(["n", "k", "value"], rows), EXIT_OK
    if a.n is None or a.k is None:
        raise InvalidInputError("count needs --n and --k (or --table --max-n)")
    cfg.check_n(a.n)
    value = _count_value(a.model, a.seq, a.n, a.k)
    if cfg.fmt == "json":
        return _json_text({"model": a.model, "seq": a.seq, "n": a.n, "k": a.k, "value": value}), EXIT_OK
    return f"{value}\n", EXIT_OK


def cmd_tc(cfg: RunConfig, a) -> tuple[str, int]:
    cfg.check_n(a.n)
    value = tc_count(a.n, a.k)
    if cfg.fmt == "json":
        return _json_text({"n": a.n, "k": a.k, "value": value}), EXIT_OK
    return f"{value}\n", EXIT_OK


def cmd_verify(cfg: RunConfig, a) -> tuple[str, int]:
    results = []
    if a.mode in ("tableaux", "both"):
        cfg.check_n(a.max_n, "max-n")
        t0 = time.perf_counter()
        rep = verify_tableau_identity(a.max_n)
        cfg.timings["tableaux"] = round(time.perf_counter() - t0, 3)
        detail = f"{rep.checked} pairs (n,k) with n <= {a.max_n}"
        if rep.counterexample:
            n, k, lhs, rhs = rep.counterexample
            detail = f"counterexample n={n} k={k}: {lhs} != {rhs}"
        results.append({"mode": "tableaux", "key": f"n<={a.max_n}", "passed": rep.passed,
                        "detail": detail})
    if a.mode in ("series", "both"):
        order = a.order if a.order is not None else default_order(a.max_k)
        cfg.check_order(order)
        t0 = time.perf_counter()
        reps = verify_gf_identities(a.max_k, order)
        cfg.timings["series"] = round(time.perf_counter() - t0, 3)
        for rep in reps:
            detail = f"order {rep.order}"
            if not rep.passed:
                detail = f"first mismatch at z^{rep.first_mismatch}"
            results.append({"mode": "series", "key": f"k={rep.k}", "passed": rep.passed,
                            "detail": detail})
    ok = all(r["passed"] for r in results)
    code = EXIT_OK if ok else EXIT_FAIL
    if cfg.fmt == "json":
        return _json_text({"passed": ok, "results": results}), code
    if cfg.fmt == "csv":
        return _csv_text(["mode", "key", "passed", "detail"],
                         [[r["mode"], r["key"], r["passed"], r["detail"]] for r in results]), code
    lines = [f"{r['mode']:<9} {r['key']:<10} {'PASS' if r['passed'] else 'FAIL'}  {r['detail']}"
             for r in results]
    lines.append("all passed" if ok else "FAILED")
    return "\n".join(lines) + "\n", code


def cmd_tableau(cfg: RunConfig, a) -> tuple[str, int]:
    spec = WordClassSpec(a.cls, a.n, a.k)
    t = word_to_tableau(a.from_word, spec)
    if cfg.fmt == "json":
        return _json_text(t.to_json()), EXIT_OK
    return _render_tableau(t), EXIT_OK


def _render_tableau(t: Tableau) -> str:
    rows = t.to_json()["rows"]
    width = max(len(str(x)) for row in rows for x in row if x is not None)
    lines = []
    for row in reversed(rows):  # top row first
        lines.append(" ".join("." * width if x is None else str(x).rjust(width) for x in row))
    return "\n".join(lines) + "\n"


def _series_coeffs(which: str, k: int | None, order: int) -> list:
    if which == "D":
        return list(dyck_series(order).coeffs)
    if which == "E":
        return list(e_series(order).coeffs)
    if k is None:
        raise InvalidInputError(f"series {which} needs --k")
    if which == "B":
        return list(b_k_series(k, order).coeffs)
    return list(c_k_series(k, order).coeffs)


def cmd_series(cfg: RunConfig, a) -> tuple[str, int]:
    cfg.check_order(a.order)
    coeffs = _series_coeffs(a.which, a.k, a.order)
    var = "w" if a.which == "C" else "z"
    if cfg.fmt == "json":
        obj = {"which": a.which, "k": a.k, "order": a.order, "variable": var,
               "coefficients": [_coeff_str(c) for c in coeffs]}
        return _json_text(obj), EXIT_OK
    if cfg.fmt == "csv":
        return _csv_text(["exponent", "coefficient"],
                         [(i, _coeff_str(c)) for i, c in enumerate(coeffs)]), EXIT_OK
    terms = []
    for i, c in enumerate(coeffs):
        if c:
            mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
            cs = _coeff_str(c)
            terms.append(cs if not mono else (mono if cs == "1" else f"{cs}*{mono}"))
    body = " + ".join(terms) if terms else "0"
    return f"{body} + O({var}^{a.order})\n", EXIT_OK


def cmd_dist(cfg: RunConfig, a) -> tuple[str, int]:
    fmt = a.emit or cfg.fmt
    if a.converge:
        n_list = a.n_list or [125, 250, 500, 1000, 2000]
        cfg.check_n(max(n_list))
        rep = convergence_report(a.param, n_list, a.r_max)
        if fmt == "json":
            obj = {"param": a.param, "rows": [asdict(r) for r in rep.rows],
                   "extras": {str(n): v for n, v in rep.extras.items()},
                   "doubling": {str(r): rep.doubling_ok(r) for r in range(1, a.r_max + 1)}}
            return _json_text(obj), EXIT_OK
        if fmt == "csv":
            return _csv_text(["param", "n", "r", "moment", "target", "gap"], rep.csv_rows()), EXIT_OK
        lines = [f"{a.param} n={r.n:<6} r={r.r}  moment={r.moment:.6f}  target={r.target:.6f}  "
                 f"gap={r.gap:.2e}" for r in rep.rows]
        for n, ex in rep.extras.items():
            lines.append(f"{a.param} n={n:<6} " + "  ".join(f"{key}={val:.6f}" for key, val in ex.items()))
        return "\n".join(lines) + "\n", EXIT_OK
    if a.n is None:
        raise InvalidInputError("dist needs --n (or --converge)")
    cfg.check_n(a.n)
    d = dist(a.param, a.n)
    rows = [(m, f"{float(p):.12g}", _coeff_str(p)) for m, p in d.rows()]
    if fmt == "json":
        return _json_text({"param": a.param, "n": a.n, "total": d.total,
                           "masses": {str(m): frac for m, _, frac in rows}}), EXIT_OK
    if fmt == "csv":
        return _csv_text(["m", "probability", "fraction"], rows), EXIT_OK
    return "".join(f"{m}\t{dec}\t{frac}\n" for m, dec, frac in rows), EXIT_OK


# parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="fmt", choices=("text", "json", "csv"), default=None,
                        help="output format (default text)")
    common.add_argument("--jobs", type=int, default=None,
                        help="parallelism degree (default: available cores)")
    common.add_argument("--output", "-o", help="write output to this file instead of stdout")
    common.add_argument("--manifest", help="write a JSON run manifest to this path")
    common.add_argument("--max-word-length", type=int, default=None,
                        help=f"enumeration budget (env {ENV_PREFIX}MAX_WORD_LENGTH)")
    common.add_argument("--max-dp-n", type=int, default=None,
                        help=f"largest n for table and distribution runs (env {ENV_PREFIX}MAX_DP_N)")
    common.add_argument("--max-order", type=int, default=None,
                        help=f"largest series order (env {ENV_PREFIX}MAX_ORDER)")

    parser = argparse.ArgumentParser(
        prog="tcwalls", description=__doc__.split("\n\n")[0],
        epilog=__doc__.split("CSV columns", 1)[1].strip("-\n "),
        formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", parents=[common], help="enumerate a word class")
    p.add_argument("--class", dest="cls", choices=CLASS_TAGS, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--list", action="store_true", help="print the words, one per line")
    p.add_argument("--h-all-letters", action="store_true",
                   help="class H: require every letter (not only those seen) to occur twice")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("count", parents=[common], help="b_{n,k} or c_{n,k} from one model",
                       description="CSV columns for --table: n,k,value")
    p.add_argument("--model", choices=("paths", "tableaux", "series"), default="paths")
    p.add_argument("--seq", choices=("b", "c"), required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--table", action="store_true", help="emit all (n,k) up to --max-n as CSV")
    p.add_argument("--max-n", type=int)
    p.add_argument("--max-k", type=int)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("tc", parents=[common], help="tree-child network count TC_{n,k}")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_tc)

    p = sub.add_parser("verify", parents=[common], help="verify the counting identity",
                       description="CSV columns: mode,key,passed,detail")
    p.add_argument("what", choices=("identity",))
    p.add_argument("--mode", choices=("tableaux", "series", "both"), default="tableaux")
    p.add_argument("--max-n", type=int, default=150)
    p.add_argument("--max-k", type=int, default=20)
    p.add_argument("--order", type=int, help="series order (default 2*max_k + 40)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("tableau", parents=[common], help="map a word to its tableau")
    p.add_argument("--from-word", required=True)
    p.add_argument("--class", dest="cls", choices=CLASS_TAGS, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int)
    p.set_defaults(func=cmd_tableau)

    p = sub.add_parser("series", parents=[common], help="print a truncated generating function",
                       description="CSV columns: exponent,coefficient")
    p.add_argument("--which", choices=("D", "E", "B", "C"), required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--order", type=int, default=20)
    p.set_defaults(func=cmd_series)

    p = sub.add_parser("dist", parents=[common], help="exact distribution of X_n, Y_n or Z_n",
                       description="CSV columns: m,probability,fraction; with --converge "
                                   "param,n,r,moment,target,gap")
    p.add_argument("--param", choices=PARAMS, required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--emit", choices=("text", "json", "csv"))
    p.add_argument("--converge", action="store_true", help="moment convergence table")
    p.add_argument("--n-list", type=_int_list)
    p.add_argument("--r-max", type=int, default=4)
    p.set_defaults(func=cmd_dist)
    return parser


def _config(args) -> RunConfig:
    skip = {"func", "fmt", "jobs", "output", "manifest", "max_word_length", "max_dp_n", "max_order"}
    return RunConfig(
        command=args.command,
        args={k: v for k, v in sorted(vars(args).items()) if k not in skip},
        fmt=args.fmt or "text",
        jobs=args.jobs if args.jobs is not None else (os.cpu_count() or 1),
        output=args.output,
        manifest=args.manifest,
        max_word_length=_budget_from_env("max_word_length", args.max_word_length),
        max_dp_n=_budget_from_env("max_dp_n", args.max_dp_n),
        max_order=_budget_from_env("max_order", args.max_order),
    )


def _write_manifest(cfg: RunConfig, code: int, seconds: float) -> None:
    manifest = {
        "tool": "tcwalls",
        "version": __version__,
        "python": platform.python_version(),
        "platform": platform.platform(),
        "command": cfg.command,
        "inputs": cfg.args,
        "format": cfg.fmt,
        "jobs": cfg.jobs,
        "budgets": {name: getattr(cfg, name) for name in DEFAULT_BUDGETS},
        "exit_code": code,
        "seconds": round(seconds, 3),
        "timings": cfg.timings,
    }
    with open(cfg.manifest, "w", encoding="utf-8") as fh:
        fh.write(_json_text(manifest))


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    start = time.perf_counter()
    try:
        cfg = _config(args)
        text, code = args.func(cfg, args)
    except (InvalidInputError, BudgetExceededError) as exc:
        print(f"tcwalls: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConsistencyError as exc:
        print(f"tcwalls: INCONSISTENCY: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if cfg.manifest:
        _write_manifest(cfg, code, time.perf_counter() - start)
    return code


if __name__ == "__main__":
    sys.exit(main())
