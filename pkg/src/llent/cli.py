"""Command-line front end: single-point queries, sweeps, and oracle runs.

Subcommands
-----------
roots    ground-state rapidities and solver residual (JSON)
prob     one projection probability p(k)
entropy  spectrum data for one outcome k
report   full outcome table for one parameter point, with E_PP
sweep    coupling sweeps over a linear or logarithmic grid, plus a TG row
tg       exact impenetrable-boson counting distribution
oracle   Monte-Carlo / grid / quadrature validators

CSV rows always carry the full schema
``N,c,ell,k,p_k,S_A_bits,S_ub_bits,E_k,E_PP,is_TG,residual`` with floats
at 17 significant digits; unpopulated cells are left empty, and the TG
mode is flagged by an empty ``c`` with ``is_TG=1``.  The timestamp lives
only in a leading ``#`` comment, so re-running a command reproduces a
byte-identical CSV body.  Flags override an optional ``key=value`` config
file; ``LLENT_THREADS`` sets the default worker count.
"""
from __future__ import annotations

import argparse
import concurrent.futures
import json
import math
import os
import sys
import time
from datetime import datetime, timezone

import numpy as np

from . import __version__, simplex
from .bethe import TG, InvalidInputError, ModelParams, SolverError, bethe_roots
from .counting import counting_model
from .oracle import (
    grid_reduced_density,
    grid_trace,
    mc_projection_probability,
    quad_ordered_exp_integral,
)
from .projection import ProjectionError, entanglement_report

CSV_COLUMNS = ("N", "c", "ell", "k", "p_k", "S_A_bits", "S_ub_bits",
               "E_k", "E_PP", "is_TG", "residual")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3


def _fmt(x) -> str:
    """17-significant-digit serialization; None becomes an empty cell."""
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def _parse_coupling(text: str) -> float:
    if text.strip().lower() in ("tg", "inf", "infinity"):
        return TG
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"coupling must be a float or 'tg', got {text!r}")
    return value


def _parse_grid(text: str):
    """``log:start:stop:count`` or ``lin:start:stop:count`` -> ndarray."""
    parts = text.split(":")
    if len(parts) != 4 or parts[0] not in ("log", "lin"):
        raise argparse.ArgumentTypeError(
            f"grid must look like log:0.01:100:21 or lin:0:10:11, got {text!r}")
    kind, start, stop, count = parts[0], float(parts[1]), float(parts[2]), int(parts[3])
    if count < 1:
        raise argparse.ArgumentTypeError("grid count must be >= 1")
    if kind == "log":
        if start <= 0 or stop <= 0:
            raise argparse.ArgumentTypeError("log grid endpoints must be positive")
        return np.geomspace(start, stop, count)
    return np.linspace(start, stop, count)


def _default_threads() -> int:
    try:
        return max(1, int(os.environ.get("LLENT_THREADS", "1")))
    except ValueError:
        return 1


# ---------------------------------------------------------------------------
# row construction
# ---------------------------------------------------------------------------

def _report_rows(n: int, c: float, ell: float, ks=None) -> list:
    """Full-schema rows for one parameter point (one row per outcome k)."""
    params = ModelParams(n=n, c=c, ell=ell)
    roots = bethe_roots(params)
    rep = entanglement_report(roots)
    rows = []
    wanted = range(n + 1) if ks is None else ks
    for k in wanted:
        if not 0 <= k <= n:
            raise InvalidInputError(f"need 0 <= k <= N, got k={k}, N={n}")
    for k in wanted:
        out = rep.outcomes[k]
        rows.append({
            "N": n,
            "c": None if params.is_tg else c,
            "ell": ell,
            "k": k,
            "p_k": out.probability,
            "S_A_bits": out.spectrum.entropy_bits,
            "S_ub_bits": out.spectrum.upper_bound_bits,
            "E_k": out.weighted_bits,
            "E_PP": rep.epp_bits,
            "is_TG": 1 if params.is_tg else 0,
            "residual": roots.residual,
        })
    return rows


def _sweep_point(job) -> list:
    n, c, ell, ks = job
    return _report_rows(n, c, ell, ks)


# ---------------------------------------------------------------------------
# output plumbing
# ---------------------------------------------------------------------------

def _write_csv(rows: list, out_path: str | None) -> None:
    lines = [f"# llent {__version__} generated "
             f"{datetime.now(timezone.utc).isoformat(timespec='seconds')}"]
    lines.append(",".join(CSV_COLUMNS))
    for row in rows:
        lines.append(",".join(_fmt(row[col]) for col in CSV_COLUMNS))
    text = "\n".join(lines) + "\n"
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _envelope(params: dict, results: list, residual: float, t_start: float) -> dict:
    return {
        "params": params,
        "results": results,
        "diagnostics": {
            "residual": residual,
            "runtime_ms": 1000.0 * (time.perf_counter() - t_start),
            "cache_hits": simplex.cache_stats()["hits"],
        },
        "version": __version__,
    }


def _emit(rows: list, args, params: dict, residual: float, t_start: float) -> None:
    if args.format == "json":
        payload = json.dumps(_envelope(params, rows, residual, t_start), indent=2)
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(payload + "\n")
        else:
            print(payload)
    else:
        _write_csv(rows, args.out)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_roots(args) -> int:
    t0 = time.perf_counter()
    params = ModelParams(n=args.n, c=args.c, ell=args.ell)
    roots = bethe_roots(params)
    payload = _envelope(
        {"n": args.n, "c": None if params.is_tg else args.c, "ell": args.ell,
         "is_TG": params.is_tg},
        [{"quantum_numbers": roots.quantum_numbers.tolist(),
          "rapidities": roots.rapidities.tolist()}],
        roots.residual, t0)
    text = json.dumps(payload, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return EXIT_OK


def cmd_prob(args) -> int:
    t0 = time.perf_counter()
    rows = _report_rows(args.n, args.c, args.ell, ks=[args.k])
    if args.out or args.format == "json":
        _emit(rows, args, {"n": args.n, "c": rows[0]["c"], "ell": args.ell,
                           "k": args.k}, rows[0]["residual"], t0)
    else:
        print(_fmt(rows[0]["p_k"]))
    return EXIT_OK


def cmd_entropy(args) -> int:
    t0 = time.perf_counter()
    rows = _report_rows(args.n, args.c, args.ell, ks=[args.k])
    _emit(rows, args, {"n": args.n, "c": rows[0]["c"], "ell": args.ell,
                       "k": args.k}, rows[0]["residual"], t0)
    return EXIT_OK


def cmd_report(args) -> int:
    t0 = time.perf_counter()
    rows = _report_rows(args.n, args.c, args.ell)
    _emit(rows, args, {"n": args.n, "c": rows[0]["c"], "ell": args.ell},
          rows[0]["residual"], t0)
    return EXIT_OK


def cmd_sweep(args) -> int:
    t0 = time.perf_counter()
    grid = args.c_grid
    jobs = []
    for n in args.n:
        if args.k == "all":
            ks = list(range(n + 1))
        elif args.k == "half":
            ks = [n // 2]
        else:
            ks = [int(args.k)]
        for c in grid:
            jobs.append((n, float(c), args.ell, ks))
        if args.tg_row:
            jobs.append((n, TG, args.ell, ks))
    if args.threads > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=args.threads) as pool:
            per_job = list(pool.map(_sweep_point, jobs))
    else:
        per_job = [_sweep_point(job) for job in jobs]
    rows = [row for chunk in per_job for row in chunk]
    worst = max(row["residual"] for row in rows)
    _emit(rows, args, {"n": args.n, "c_grid": [float(c) for c in grid],
                       "ell": args.ell, "k": args.k, "tg_row": args.tg_row},
          worst, t0)
    return EXIT_OK


def cmd_tg(args) -> int:
    """Counting-statistics route only: exact p(k) at any N, no entropies."""
    t0 = time.perf_counter()
    model = counting_model(args.n, args.ell)
    rows = [{
        "N": args.n, "c": None, "ell": args.ell, "k": k,
        "p_k": float(model.pk[k]), "S_A_bits": None, "S_ub_bits": None,
        "E_k": None, "E_PP": None, "is_TG": 1, "residual": 0.0,
    } for k in range(args.n + 1)]
    _emit(rows, args, {"n": args.n, "c": None, "ell": args.ell,
                       "sigma2_asymptotic": model.sigma2}, 0.0, t0)
    return EXIT_OK


def cmd_oracle(args) -> int:
    t0 = time.perf_counter()
    if args.oracle_cmd == "mc":
        roots = bethe_roots(ModelParams(n=args.n, c=args.c, ell=args.ell))
        est = mc_projection_probability(roots, args.k, samples=args.samples,
                                        seed=args.seed)
        results = [{"kind": "mc", "k": args.k, "mean": est.mean,
                    "std_error": est.std_error, "samples": est.samples,
                    "seed": est.seed}]
        payload = _envelope({"n": args.n, "c": None if roots.params.is_tg else args.c,
                             "ell": args.ell}, results, roots.residual, t0)
    elif args.oracle_cmd == "grid":
        roots = bethe_roots(ModelParams(n=args.n, c=args.c, ell=args.ell))
        spec = grid_reduced_density(roots, args.k, points_per_dim=args.points)
        trace = grid_trace(roots, args.k, points_per_dim=args.points)
        results = [{"kind": "grid", "k": args.k,
                    "eigenvalues": spec.eigenvalues.tolist(),
                    "entropy_bits": spec.entropy_bits, "rank": spec.rank,
                    "raw_trace": trace, "points_per_dim": args.points}]
        payload = _envelope({"n": args.n, "c": None if roots.params.is_tg else args.c,
                             "ell": args.ell}, results, roots.residual, t0)
    else:
        mu = tuple(float(p) for p in args.mu.split(","))
        key = simplex.make_key(mu, args.a, args.b)
        quad = quad_ordered_exp_integral(key)
        exact = simplex.ordered_exp_integral(key)
        results = [{"kind": "quad", "mu": list(mu), "a": args.a, "b": args.b,
                    "quadrature": [quad.real, quad.imag],
                    "closed_form": [exact.real, exact.imag],
                    "abs_diff": abs(quad - exact)}]
        payload = _envelope({"mu": list(mu), "a": args.a, "b": args.b},
                            results, 0.0, t0)
    text = json.dumps(payload, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser assembly
# ---------------------------------------------------------------------------

def _add_common(sub, *, with_k=False):
    sub.add_argument("--n", type=int, required=True, help="particle number N")
    sub.add_argument("--c", type=_parse_coupling, required=True,
                     help="coupling strength (float >= 0, or 'tg' for the impenetrable mode)")
    sub.add_argument("--ell", type=float, default=0.5,
                     help="arc fraction of partition A (default 0.5)")
    if with_k:
        sub.add_argument("--k", type=int, required=True,
                         help="number of particles projected into the arc")
    _add_output(sub)


def _add_output(sub):
    sub.add_argument("--out", default=None, help="output file (default stdout)")
    sub.add_argument("--format", choices=("csv", "json"), default="csv",
                     help="output format (default csv)")
    sub.add_argument("--config", default=None,
                     help="key=value file supplying flag defaults (flags override)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="llent",
        description="Projection probabilities and entanglement of the "
                    "Lieb-Liniger ground state.")
    parser.add_argument("--version", action="version", version=f"llent {__version__}")
    parser.add_argument("--config", default=None,
                        help="key=value file supplying flag defaults (flags override)")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("roots", help="ground-state rapidities (JSON)")
    _add_common(p)

    p = subs.add_parser("prob", help="projection probability p(k)")
    _add_common(p, with_k=True)

    p = subs.add_parser("entropy", help="spectrum and entropy of one outcome")
    _add_common(p, with_k=True)

    p = subs.add_parser("report", help="all outcomes and E_PP at one point")
    _add_common(p)

    p = subs.add_parser("sweep", help="coupling sweep over a c grid")
    p.add_argument("--n", type=int, action="append", required=True,
                   help="particle number; repeat for several N")
    p.add_argument("--c-grid", type=_parse_grid, required=True,
                   help="coupling grid, log:start:stop:count or lin:start:stop:count")
    p.add_argument("--ell", type=float, default=0.5,
                   help="arc fraction of partition A (default 0.5)")
    p.add_argument("--k", default="half",
                   help="'half' (k=N/2, default), 'all', or an integer")
    p.add_argument("--tg-row", dest="tg_row", action=argparse.BooleanOptionalAction,
                   default=True, help="append the impenetrable-limit row (default on)")
    p.add_argument("--threads", type=int, default=_default_threads(),
                   help="worker processes (default LLENT_THREADS or 1); "
                        "rows are always written in input order")
    _add_output(p)

    p = subs.add_parser("tg", help="exact impenetrable-boson counting distribution")
    p.add_argument("--n", type=int, required=True, help="particle number N")
    p.add_argument("--ell", type=float, default=0.5,
                   help="arc fraction of partition A (default 0.5)")
    _add_output(p)

    p = subs.add_parser("oracle", help="independent validators")
    osubs = p.add_subparsers(dest="oracle_cmd", required=True)
    q = osubs.add_parser("mc", help="Monte-Carlo estimate of p(k)")
    _add_common(q, with_k=True)
    q.add_argument("--samples", type=int, default=1_000_000)
    q.add_argument("--seed", type=int, default=0)
    q = osubs.add_parser("grid", help="grid-discretized reduced density (N <= 3)")
    _add_common(q, with_k=True)
    q.add_argument("--points", type=int, default=100, help="grid points per dimension")
    q = osubs.add_parser("quad", help="spectral quadrature of a simplex integral")
    q.add_argument("--mu", required=True, help="comma-separated exponents")
    q.add_argument("--a", type=float, default=0.0)
    q.add_argument("--b", type=float, default=1.0)
    _add_output(q)
    return parser


def _all_parsers(parser: argparse.ArgumentParser):
    """The parser and every (nested) subcommand parser."""
    yield parser
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            for sub in action.choices.values():
                yield from _all_parsers(sub)


def _load_config(argv: list) -> dict:
    """Read the optional key=value config file named on the command line."""
    path = None
    for i, token in enumerate(argv):
        if token == "--config" and i + 1 < len(argv):
            path = argv[i + 1]
        elif token.startswith("--config="):
            path = token.split("=", 1)[1]
    if path is None:
        return {}
    overrides = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise InvalidInputError(f"config line is not key=value: {line!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            overrides[key.replace("-", "_")] = value
    return overrides


_CONFIG_PARSERS = {
    "n": int, "k": lambda s: int(s) if s.lstrip("-").isdigit() else s,
    "c": _parse_coupling, "ell": float,
    "threads": int, "samples": int, "seed": int, "points": int,
    "a": float, "b": float, "c_grid": _parse_grid,
}


def main(argv: list | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        config = _load_config(argv)
        defaults = {}
        for key, raw in config.items():
            conv = _CONFIG_PARSERS.get(key, str)
            defaults[key] = conv(raw)
        if defaults:
            # subparser defaults shadow top-level set_defaults, so push the
            # config values into every subcommand parser that knows the key
            for sub in _all_parsers(parser):
                known = {a.dest for a in sub._actions}
                sub.set_defaults(**{k: v for k, v in defaults.items() if k in known})
        args = parser.parse_args(argv)
    except (argparse.ArgumentTypeError, OSError, InvalidInputError) as exc:
        print(json.dumps({"error": "usage", "detail": str(exc)}), file=sys.stderr)
        return EXIT_USAGE
    handlers = {"roots": cmd_roots, "prob": cmd_prob, "entropy": cmd_entropy,
                "report": cmd_report, "sweep": cmd_sweep, "tg": cmd_tg,
                "oracle": cmd_oracle}
    try:
        return handlers[args.command](args)
    except InvalidInputError as exc:
        print(json.dumps({"error": "usage", "detail": str(exc)}), file=sys.stderr)
        return EXIT_USAGE
    except (SolverError, ProjectionError, ArithmeticError, ValueError) as exc:
        print(json.dumps({"error": "numerical", "type": type(exc).__name__,
                          "detail": str(exc)}), file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
