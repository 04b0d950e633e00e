"""Command-line entry point.

    bayesbounds report --posterior 0.25,0.25,0.25,0.25
    bayesbounds figure fig1 --output fig1.csv
    bayesbounds channel bsc.json
    bayesbounds ensemble --channel '{"type": "bsc", "p": 0.05}' -n 6 -m 64 --trials 200 --seed 7
    bayesbounds appendix1 --gamma 0.125

Exit codes: 0 success, 2 usage or validation error, 3 enumeration budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import bounds, channels, hypothesis_testing, random_coding
from .errors import BoundsError, BudgetExceeded, NumericallyUnstable
from .prob_core import make_pmf, make_posterior

FIGURES = ("fig1", "fig2", "fig3", "fig4a", "fig4b", "fig4c")


class UsageError(Exception):
    pass


def fmt(x):
    """17 significant digits: exact round trip for 64-bit floats."""
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def _csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def _json_text(payload):
    return json.dumps(payload, indent=2, sort_keys=True, allow_nan=False) + "\n"


def write_output(text, path):
    """Write to ``path`` through a temp file and rename, or to stdout."""
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _floats(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated numbers, got {text!r}") from None


def _load_spec(arg):
    path = Path(arg)
    if path.is_file():
        text = path.read_text()
    elif arg.lstrip().startswith("{"):
        text = arg
    else:
        raise UsageError(f"channel spec {arg!r} is neither a file nor inline JSON")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"channel spec is not valid JSON: {exc}") from None


# report -------------------------------------------------------------------

def cmd_report(args):
    post = make_posterior(_floats(args.posterior))
    betas = _floats(args.beta) if args.beta else [-1.0]
    rep = bounds.full_report(post, betas)
    data = rep.to_dict()
    if args.format == "csv":
        return _report_csv(data)
    payload = {
        "posterior": post.weights.tolist(),
        "bounds": data,
        "clamped": rep.clamped(),
        "violations": rep.violations(),
    }
    return _json_text(payload)


def _report_csv(data):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["bound", "value"])
    for k, v in data.items():
        w.writerow([k, fmt(v)])
    return buf.getvalue()


# figures ------------------------------------------------------------------

FIG1_COLUMNS = ["p", "exact", "harmonic_lo", "harmonic_hi", "bd_lo", "bd_hi",
                "quad_lo", "quad_hi", "renyi", "hr", "improved"]


def figure_fig1():
    rows = []
    for i in range(201):
        p = i * 0.005
        w = make_posterior([p, 1.0 - p]).weights
        exact = bounds.map_conditional_error(w)
        h_lo, h_hi = bounds.harmonic_pair(w)
        bd_lo, bd_hi = bounds.bd_bounds(w)
        q_lo, q_hi = bounds.quadratic_bounds(w)
        row = [p, exact, h_lo, h_hi, bd_lo, bd_hi, q_lo, q_hi,
               bounds.renyi_bound(w), bounds.hellman_raviv_bound(w),
               bounds.improved_equivocation_bound(w)]
        lows, highs = [h_lo, bd_lo, q_lo], [h_hi, bd_hi, q_hi] + row[8:]
        if max(lows) > exact + 1e-9 or min(highs) < exact - 1e-9:
            raise AssertionError(f"bound ordering violated at p={p}")
        rows.append(row)
    return FIG1_COLUMNS, rows


def figure_fig2():
    prob = hypothesis_testing.appendix1_problem(0.125)
    y = -20.0 + 0.01 * np.arange(4001)
    y[-1] = 20.0
    p1, p2 = prob.posteriors(y)
    rows = [[a, b, c] for a, b, c in zip(y, p1, p2)]
    boundaries = hypothesis_testing.decision_boundaries(prob)
    return ["y", "posterior1", "posterior2"], rows, boundaries


def figure_fig3(points=25, n_jobs=1):
    table = hypothesis_testing.gamma_sweep(hypothesis_testing.default_gammas(points), n_jobs=n_jobs)
    header = ["gamma", "p_lb", "p_ub", "chernoff", "chernoff_alpha", "bhattacharyya", "exact"]
    rows = [[r.gamma, r.p_lb, r.p_ub, r.chernoff, r.chernoff_alpha, r.bhattacharyya, r.exact]
            for r in table]
    return header, rows


def figure_fig4a():
    grid = np.linspace(0.0, 1.0, 101)
    return ["p", "capacity", "rho"], [[p, channels.capacity_bsc(p), channels.rho_bsc(p)] for p in grid]


def figure_fig4b():
    grid = np.linspace(0.0, 1.0, 101)
    return ["eps", "capacity", "rho"], [[e, channels.capacity_bec(e), channels.rho_bec(e)] for e in grid]


def figure_fig4c(points=101):
    rows = []
    for db in np.linspace(-10.0, 10.0, points):
        s2 = channels.BiAwgnChannel.from_ebn0_db(db).sigma2
        try:
            cap, unstable = channels.capacity_biawgn(s2), 0
        except NumericallyUnstable as exc:
            cap, unstable = exc.estimate, 1
        rows.append([db, s2, cap, unstable, channels.rho_biawgn(s2)])
    return ["ebn0_db", "sigma2", "capacity", "capacity_unstable", "rho"], rows


def _boundary_path(output):
    p = Path(output)
    return p.with_name(p.stem + "_boundaries" + (p.suffix or ".csv"))


def cmd_figure(args):
    name = args.name
    if name not in FIGURES:
        raise UsageError(f"unknown figure {name!r}; choose from {', '.join(FIGURES)}")
    sidecar = None
    if name == "fig2":
        header, rows, boundaries = figure_fig2()
        sidecar = boundaries
    elif name == "fig3":
        header, rows = figure_fig3(args.points or 25, args.jobs)
    elif name == "fig4c":
        header, rows = figure_fig4c(args.points or 101)
    else:
        header, rows = globals()[f"figure_{name}"]()

    if args.format == "json":
        payload = {"figure": name, "columns": header, "rows": [[float(v) for v in r] for r in rows]}
        if sidecar is not None:
            payload["boundaries"] = sidecar
        return _json_text(payload)
    if sidecar is not None and args.output not in (None, "-"):
        write_output(_csv_text(["boundary"], [[b] for b in sidecar]), _boundary_path(args.output))
    return _csv_text(header, rows)


# channel ------------------------------------------------------------------

def cmd_channel(args):
    spec = _load_spec(args.spec)
    ch = channels.channel_from_spec(spec)
    if isinstance(ch, channels.BiAwgnChannel):
        if args.px:
            raise UsageError("--px is fixed to uniform for the binary-input AWGN channel")
        out = {
            "rho": channels.rho_biawgn(ch.sigma2),
            "rho_max": channels.rho_biawgn(ch.sigma2),
            "px_star": [0.5, 0.5],
            "px": [0.5, 0.5],
            "ebn0": ch.ebn0,
        }
        try:
            out["C_closed_form"] = out["I"] = channels.capacity_biawgn(ch.sigma2)
        except NumericallyUnstable as exc:
            out["C_closed_form"] = out["I"] = exc.estimate
            out["capacity_unstable"] = True
        return _json_text(out)

    px = make_pmf(_floats(args.px)) if args.px else None
    px_star, rho_max = channels.capacity_upper_bound(ch)
    used = px.weights if px is not None else np.full(ch.n_inputs, 1.0 / ch.n_inputs)
    out = {
        "px": used.tolist(),
        "I": channels.mutual_information(ch, px),
        "rho": channels.rho_discrete(ch, px),
        "rho_max": rho_max,
        "px_star": px_star.weights.tolist(),
    }
    cap = channels.closed_form_capacity(spec)
    if cap is not None:
        out["C_closed_form"] = cap
    return _json_text(out)


# ensemble -----------------------------------------------------------------

def cmd_ensemble(args):
    ch = channels.channel_from_spec(_load_spec(args.channel))
    if not isinstance(ch, channels.Dmc):
        raise UsageError("ensemble simulation needs a discrete channel")
    px = make_pmf(_floats(args.px)) if args.px else make_pmf(np.full(ch.n_inputs, 1.0 / ch.n_inputs))
    try:
        params = random_coding.EnsembleParams(args.n, args.m, ch, px, args.trials, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    res = random_coding.simulate_ensemble(params, n_jobs=args.jobs)
    lb = random_coding.ensemble_error_lower_bound(params)
    out = res.to_dict()
    out.update({
        "params": {"N": params.n, "M": params.m, "R": params.rate, "trials": params.trials,
                   "seed": params.seed, "px": params.px.weights.tolist()},
        "rho": params.rho,
        "error_lower_bound_unclamped": lb.unclamped,
        "error_lower_bound_factorized": lb.factorized,
    })
    return _json_text(out)


# appendix1 ----------------------------------------------------------------

def cmd_appendix1(args):
    if not args.gamma > 0:
        raise UsageError("--gamma must be positive")
    prob = hypothesis_testing.appendix1_problem(args.gamma)
    lo, hi = hypothesis_testing.harmonic_risk_bounds(prob)
    alpha, ch = hypothesis_testing.chernoff_risk_bound(prob)
    out = {
        "gamma": args.gamma,
        "density1_mass": prob.integrate(hypothesis_testing.cos_laplace_density),
        "density1_variance": prob.integrate(
            lambda y: y * y * hypothesis_testing.cos_laplace_density(y)),
        "p_lb": lo,
        "p_ub": hi,
        "chernoff": ch,
        "chernoff_alpha": alpha,
        "bhattacharyya": hypothesis_testing.bhattacharyya_risk_bound(prob),
        "exact": hypothesis_testing.exact_bayes_risk(prob),
        "boundaries": hypothesis_testing.decision_boundaries(prob),
    }
    if args.mc_samples > 0:
        est, se = hypothesis_testing.monte_carlo_bayes_risk(prob, args.mc_samples, args.seed)
        out["monte_carlo"] = {"estimate": est, "standard_error": se,
                              "samples": args.mc_samples, "seed": args.seed,
                              "within_3se": abs(est - out["exact"]) <= 3 * se}
    return _json_text(out)


def build_parser():
    parser = argparse.ArgumentParser(prog="bayesbounds", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add_io(p, formats=("json", "csv"), default="json"):
        p.add_argument("--output", "-o", default=None, help="output file (default stdout)")
        p.add_argument("--format", choices=formats, default=default)

    p = sub.add_parser("report", help="every bound for one posterior")
    p.add_argument("--posterior", required=True, help="comma-separated posterior weights")
    p.add_argument("--beta", default=None, help="comma-separated negative power-mean exponents")
    add_io(p)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("figure", help="emit figure data")
    p.add_argument("name", help=", ".join(FIGURES))
    p.add_argument("--points", type=int, default=None, help="grid size for fig3/fig4c")
    p.add_argument("--jobs", type=int, default=1)
    add_io(p, default="csv")
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("channel", help="mutual information and rho bounds for a channel spec")
    p.add_argument("spec", help="path to a channel-spec JSON file, or inline JSON")
    p.add_argument("--px", default=None, help="comma-separated input distribution")
    add_io(p, formats=("json",))
    p.set_defaults(func=cmd_channel)

    p = sub.add_parser("ensemble", help="random-coding simulation against its analytic bounds")
    p.add_argument("--channel", required=True, help="channel-spec file or inline JSON")
    p.add_argument("-n", "--block-length", dest="n", type=int, required=True)
    p.add_argument("-m", "--codewords", dest="m", type=int, required=True)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--px", default=None)
    p.add_argument("--jobs", type=int, default=1)
    add_io(p, formats=("json",))
    p.set_defaults(func=cmd_ensemble)

    p = sub.add_parser("appendix1", help="bounds and exact risk for the cosine-Laplace example")
    p.add_argument("--gamma", type=float, default=0.125)
    p.add_argument("--mc-samples", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    add_io(p, formats=("json",))
    p.set_defaults(func=cmd_appendix1)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text = args.func(args)
        write_output(text, args.output)
    except BudgetExceeded as exc:
        print(f"error: BudgetExceeded: {exc}", file=sys.stderr)
        return 3
    except (BoundsError, UsageError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
