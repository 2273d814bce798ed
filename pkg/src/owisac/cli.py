"""Command-line experiment runner.

Each subcommand writes one CSV (``<out>/<kind>.csv``) whose first lines are
``#``-prefixed comments holding the CSV format version and the fully resolved
configuration, followed by a header row with unit-suffixed column names.
Values are written with ``repr`` so a fixed config and seed reproduce the same
bytes. Exit status: 0 on success, 1 on a config problem, 2 when a solver fails
to converge.
"""

import argparse
import csv
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from . import config as cfgmod
from .capacity import (
    asymptotic_gap,
    build_capacity_curve,
    max_variance,
    nsp_from_sigma,
    sigma_from_nsp,
)
from .envelope import design_high_snr, design_low_snr
from .errors import ConfigError, DomainError, InfeasibleConstraint, NonConvergence
from .fmcwsim import (
    FmcwConfig,
    NoiseSpec,
    TargetScenario,
    channel_gains,
    monte_carlo_sensing,
    sense_snr_db_to_sigma,
)
from .maxent import (
    EnvelopeConstraints,
    capacity_lower_bound,
    classify_case,
    CaseClassification,
    solve_max_entropy,
)

CSV_VERSION = "owisac-csv v1"
SENSING_COLUMNS = (
    "snr_db", "constellation", "trials", "mse_beat", "rmse_range_m",
    "rmse_velocity_mps", "seed",
)
LN2 = math.log(2.0)


class PointFailure(Exception):
    def __init__(self, point, cause):
        super().__init__(f"{point}: {cause}")
        self.point = point


def _constraint_sets(cfg):
    out = []
    for i, c in enumerate(cfg["constraints"]):
        a, b = c["a_min"], c["b_peak"]
        if "sigma_h" in c:
            s = c["sigma_h"]
        elif "nsp" in c:
            s = sigma_from_nsp(a, b, c["nsp"])
        else:
            raise ConfigError(f"field 'constraints/{i}': needs 'sigma_h' or 'nsp'")
        try:
            out.append(EnvelopeConstraints(a, b, s))
        except DomainError as err:
            raise ConfigError(f"field 'constraints/{i}': {err}") from None
    return out


def _nsp_or_blank(c):
    try:
        return nsp_from_sigma(c)
    except DomainError:
        return ""


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_csv(path, kind, cfg, columns, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(f"# {CSV_VERSION}\n# kind: {kind}\n")
        for key in sorted(cfg):
            fh.write(f"# {key} = {json.dumps(cfg[key], sort_keys=True)}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _plot(path, columns, rows, x_col, y_cols, xlabel, ylabel):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plt.rcParams["svg.hashsalt"] = "owisac"
    xi = columns.index(x_col)
    fig, ax = plt.subplots(figsize=(6, 4))
    for y in y_cols:
        yi = columns.index(y)
        pts = [(r[xi], r[yi]) for r in rows if r[yi] != ""]
        if pts:
            ax.plot(*zip(*pts), label=y)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def _unit(bits):
    return "bits" if bits else "nats"


def _conv(v, bits):
    return v / LN2 if bits else v


def _map_points(fn, points, workers):
    def guarded(p):
        try:
            return fn(p)
        except NonConvergence as err:
            raise PointFailure(p, err) from err

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(guarded, points))
    return [guarded(p) for p in points]


def run_maxent(cfg, bits):
    unit = _unit(bits)
    cols = ["a_min", "b_peak", "sigma_h", "nsp", "case", "eta_star", "mu_star",
            f"entropy_{unit}", f"asymptotic_gap_{unit}"]

    def point(c):
        case = classify_case(c)
        if case is CaseClassification.INFEASIBLE:
            return [c.a_min, c.b_peak, c.sigma_h, "", case.value, "", "", "", ""], True
        d = solve_max_entropy(c, cfg["tol_eta"])
        return [c.a_min, c.b_peak, c.sigma_h, _nsp_or_blank(c), case.value, d.eta_star,
                d.mu_star, _conv(d.entropy, bits),
                _conv(asymptotic_gap(c, d.eta_star), bits)], False

    res = _map_points(point, _constraint_sets(cfg), cfg["workers"])
    return cols, [r for r, _ in res], sum(inf for _, inf in res), None


def _designs(c, orders):
    out = [("2-PAM-low", design_low_snr(c))]
    out += [(f"{m}-PAM-high", design_high_snr(c, m)) for m in orders]
    return out


def run_pam(cfg, bits, out_dir):
    cols = ["a_min", "b_peak", "sigma_h", "design", "order", "level", "probability"]
    rows, skipped = [], 0
    for c in _constraint_sets(cfg):
        if not c.feasible:
            skipped += 1
            continue
        for label, p in _designs(c, cfg["pam_orders"]):
            fname = f"pam_{c.sigma_h!r}_{label}.csv"
            with open(os.path.join(out_dir, fname), "w", encoding="utf-8") as fh:
                fh.write(p.to_csv())
            for x, pr in zip(p.levels, p.probs):
                rows.append([c.a_min, c.b_peak, c.sigma_h, label, p.order, x, pr])
    return cols, rows, skipped, None


def run_capacity_curve(cfg, bits):
    unit = _unit(bits)
    grid = cfgmod.expand_grid(cfg["snr_db"])
    rows, skipped, labels = [], 0, None
    for c in _constraint_sets(cfg):
        if not c.feasible:
            skipped += len(grid)
            continue
        designs = _designs(c, cfg["pam_orders"])
        try:
            curve = build_capacity_curve(c, grid, designs, workers=cfg["workers"])
        except NonConvergence as err:
            raise PointFailure(f"constraints {c}", err) from err
        labels = [lbl for lbl, _ in designs]
        for i, snr in enumerate(curve.snr_db):
            vals = [curve.lower[i], curve.upper_low[i], curve.upper_high[i],
                    curve.upper[i], curve.asymptote_low[i], curve.asymptote_high[i]]
            vals += [curve.achievable[lbl][i] for lbl in labels]
            rows.append([c.a_min, c.b_peak, c.sigma_h, snr] + [_conv(v, bits) for v in vals])
    names = ["lower", "upper_low", "upper_high", "upper", "asymptote_low", "asymptote_high"]
    names += [f"rate_{lbl}" for lbl in (labels or [])]
    cols = ["a_min", "b_peak", "sigma_h", "snr_db"] + [f"{n}_{unit}" for n in names]
    plot = ("snr_db", cols[4:], "(B-A)/sigma [dB]", f"rate [{unit}]")
    return cols, rows, skipped, plot


def run_cdf(cfg, bits):
    orders = cfg["pam_orders"]
    cols = ["a_min", "b_peak", "sigma_h", "x", "maxent_cdf"] + [f"pam{m}_cdf" for m in orders]
    rows, skipped = [], 0
    n = cfg["cdf_points"]
    for c in _constraint_sets(cfg):
        if not c.feasible:
            skipped += 1
            continue
        d = solve_max_entropy(c, cfg["tol_eta"])
        pams = [design_high_snr(c, m) for m in orders]
        for i in range(n):
            x = c.a_min + (c.b_peak - c.a_min) * i / (n - 1)
            rows.append([c.a_min, c.b_peak, c.sigma_h, x, d.cdf(x)] + [p.cdf(x) for p in pams])
    return cols, rows, skipped, ("x", cols[4:], "envelope x", "CDF")


def run_sensing(cfg, kind):
    fm = FmcwConfig(**cfg["fmcw"])
    scen = TargetScenario(**cfg["scenario"])
    _, h_s = channel_gains(scen)
    grid = cfgmod.expand_grid(cfg["sense_snr_db"])
    rows, skipped = [], 0
    for c in _constraint_sets(cfg):
        if not c.feasible:
            skipped += 1
            continue
        for label, p in _designs(c, cfg["pam_orders"]):
            for snr in grid:
                noise = NoiseSpec(cfg["noise"]["sigma_comm"], sense_snr_db_to_sigma(h_s, snr), cfg["seed"])
                try:
                    r = monte_carlo_sensing(p, scen, fm, noise, cfg["trials"], workers=cfg["workers"])
                except NonConvergence as err:
                    raise PointFailure(f"{label} at {snr} dB", err) from err
                rows.append([snr, f"{c.sigma_h!r}:{label}", r.trials, r.mse_beat,
                             r.rmse_range_m, r.rmse_velocity_mps, cfg["seed"]])
    y = ["mse_beat"] if kind == "simulate-mse" else ["rmse_range_m", "rmse_velocity_mps"]
    return list(SENSING_COLUMNS), rows, skipped, ("snr_db", y, "h_s/sigma_s [dB]", y[0])


def run_tradeoff(cfg, bits, kind):
    unit = _unit(bits)
    chis = cfgmod.expand_grid(cfg["nsp"])
    high = kind == "tradeoff-high"
    value = f"asymptotic_gap_{unit}" if high else "max_variance"
    cols = ["a_min", "b_peak", "a_over_b", "nsp", "sigma_h", value]
    points = [(a, b, chi) for a, b in cfg["ab_pairs"] for chi in chis]

    def point(p):
        a, b, chi = p
        c = EnvelopeConstraints(a, b, sigma_from_nsp(a, b, chi))
        v = _conv(asymptotic_gap(c), bits) if high else max_variance(c).variance
        return [a, b, a / b, chi, c.sigma_h, v]

    try:
        rows = _map_points(point, points, cfg["workers"])
    except DomainError as err:
        raise ConfigError(f"field 'ab_pairs': {err}") from None
    return cols, rows, 0, ("nsp", [value], "NSP", value)


KINDS = ("maxent", "pam", "capacity-curve", "cdf", "simulate-mse", "simulate-rmse",
         "tradeoff-high", "tradeoff-low")


def run(kind, cfg, out_dir, bits=False, plot=False):
    """Run one experiment and return (csv_path, rows_written, skipped)."""
    os.makedirs(out_dir, exist_ok=True)
    if kind == "maxent":
        cols, rows, skipped, pl = run_maxent(cfg, bits)
    elif kind == "pam":
        cols, rows, skipped, pl = run_pam(cfg, bits, out_dir)
    elif kind == "capacity-curve":
        cols, rows, skipped, pl = run_capacity_curve(cfg, bits)
    elif kind == "cdf":
        cols, rows, skipped, pl = run_cdf(cfg, bits)
    elif kind in ("simulate-mse", "simulate-rmse"):
        cols, rows, skipped, pl = run_sensing(cfg, kind)
    elif kind in ("tradeoff-high", "tradeoff-low"):
        cols, rows, skipped, pl = run_tradeoff(cfg, bits, kind)
    else:
        raise ConfigError(f"unknown experiment kind {kind!r}")
    stem = kind.replace("-", "_")
    path = os.path.join(out_dir, f"{stem}.csv")
    resolved = dict(cfg, units=_unit(bits))
    write_csv(path, kind, resolved, cols, rows)
    if plot and pl is not None and rows:
        x_col, y_cols, xl, yl = pl
        _plot(os.path.join(out_dir, f"{stem}.svg"), cols, rows, x_col, y_cols, xl, yl)
    return path, len(rows), skipped


def build_parser():
    parser = argparse.ArgumentParser(
        prog="owisac", description="Capacity bounds, envelope design and FMCW sensing experiments."
    )
    sub = parser.add_subparsers(dest="kind", required=True)
    for kind in KINDS:
        p = sub.add_parser(kind)
        p.add_argument("--config", help="JSON experiment config")
        p.add_argument("--out", default="results", help="output directory (default: results)")
        p.add_argument("--seed", type=int, help="master RNG seed")
        p.add_argument("--trials", type=int, help="Monte-Carlo trials per point")
        p.add_argument("--workers", type=int, help="worker threads")
        p.add_argument("--bits", action="store_true", help="report rates in bits instead of nats")
        p.add_argument("--plot", action="store_true", help="also write an SVG line plot")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        raw = cfgmod.load(args.config) if args.config else {}
        cfg = cfgmod.resolve(raw, seed=args.seed, trials=args.trials, workers=args.workers)
        path, n, skipped = run(args.kind, cfg, args.out, bits=args.bits, plot=args.plot)
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return 1
    except PointFailure as err:
        print(f"solver did not converge at {err}", file=sys.stderr)
        return 2
    except InfeasibleConstraint as err:
        print(f"config error: {err}", file=sys.stderr)
        return 1
    print(f"{args.kind}: {n} rows computed, {skipped} infeasible skipped -> {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
