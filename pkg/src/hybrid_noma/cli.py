"""Command-line driver: single-instance reports, parameter sweeps, figure data.

Exit codes: 0 success, 1 numerical failure on some grid point, 2 usage error.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import io
import itertools
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .allocator import optimal_rate, optimal_split
from .analytic import (
    ConsistencyError,
    QuadratureError,
    p_breakdown,
    p_wn_asymptotic,
    p_wn_exact,
    p_wn_limit_fixed_rho_m,
    p_wn_limit_fixed_rho_n,
)
from .comparator import energy, hybrid_beats_oma, oma_rate
from .model import ChannelGains, InvalidParameterError, SystemParams, db_to_linear, linear_to_db, tau_m
from .montecarlo import McConfig, ergodic_rates, estimate_p_wn

EXIT_OK, EXIT_NUMERICAL, EXIT_USAGE = 0, 1, 2

PROB_ESTIMATORS = ("exact", "breakdown", "asymptotic", "limit_n", "limit_m", "montecarlo")
AXIS_KEYS = ("r0", "eta", "rho_db", "rho_n_db", "rho_m_db", "rho_n", "rho_m")
PARAM_COLUMNS = ["rho_n_db", "rho_m_db", "rho_n", "rho_m", "eta", "r0"]
ESTIMATOR_COLUMNS = {
    "exact": ["p_exact"],
    "breakdown": ["p1", "p2_1", "p2_2", "p3_1", "p3_2", "p_breakdown_total"],
    "asymptotic": ["p_asymptotic"],
    "limit_n": ["p_limit_fixed_rho_n"],
    "limit_m": ["p_limit_fixed_rho_m"],
    "montecarlo": ["p_mc", "p_mc_std_err", "mc_n"],
}
ERGODIC_COLUMNS = [
    "rate_hybrid",
    "rate_hybrid_std_err",
    "rate_oma",
    "rate_oma_std_err",
    "rate_gap",
    "rate_gap_std_err",
    "mc_n",
    "energy_hybrid",
    "energy_oma",
    "energy_ratio",
]

FIGURE_PRESETS = {
    "fig2": {
        "command": "prob",
        "axes": {"r0": [1.0, 2.0], "eta": [0.8], "rho_db": "0:40:2"},
        "estimators": ("exact", "asymptotic", "montecarlo"),
        "samples": 10**6,
        "notes": "eta = 0.8 and rho_n = rho_m as captioned; the curve family is assumed to vary R0 over {1, 2}.",
    },
    "fig3": {
        "command": "prob",
        "axes": {"r0": [1.0], "eta": [0.8], "rho_n_db": "0:60:5", "rho_m_db": "0:60:5"},
        "estimators": ("exact", "asymptotic", "limit_n", "limit_m"),
        "samples": 1,
        "notes": "eta = 0.8, R0 = 1 as captioned; surface over independent rho_n and rho_m axes.",
    },
    "fig4": {
        "command": "ergodic",
        "axes": {"r0": [1.0], "eta": [0.7, 0.8, 0.9, 1.0], "rho_db": "0:40:2"},
        "estimators": ("montecarlo",),
        "samples": 10**6,
        "notes": "rho_n = rho_m, R0 = 1 as captioned; eta values are not enumerated in the source and are chosen here.",
    },
}


class UsageError(Exception):
    pass


def parse_axis(text):
    """Parse ``start:stop:step`` (inclusive), ``v1,v2,...`` or a single number."""
    if isinstance(text, (list, tuple)):
        return [float(v) for v in text]
    text = str(text).strip()
    try:
        if ":" in text:
            start, stop, step = (float(v) for v in text.split(":"))
            if not step > 0:
                raise UsageError(f"axis step must be > 0 in {text!r}")
            if stop < start:
                raise UsageError(f"axis stop must be >= start in {text!r}")
            count = int(math.floor((stop - start) / step + 1e-9)) + 1
            return [round(start + i * step, 12) for i in range(count)]
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"cannot parse axis {text!r}: {exc}") from None
    if not values:
        raise UsageError(f"empty axis {text!r}")
    return values


@dataclass
class SweepSpec:
    """A Cartesian grid of system parameters and the estimators to evaluate."""

    axes: dict
    estimators: tuple = ("exact",)
    samples: int = 10**6
    seed: int = 0
    chunk_size: int = 2**16
    slot_T: float = 1.0
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        self.axes = {k: parse_axis(v) for k, v in self.axes.items()}
        unknown = set(self.axes) - set(AXIS_KEYS)
        if unknown:
            raise UsageError(f"unknown axis parameter(s): {sorted(unknown)}")
        for key in ("r0", "eta"):
            if key not in self.axes:
                raise UsageError(f"missing required parameter {key!r}")
        has_n = any(k in self.axes for k in ("rho_n_db", "rho_n"))
        has_m = any(k in self.axes for k in ("rho_m_db", "rho_m"))
        if "rho_db" in self.axes:
            if has_n or has_m:
                raise UsageError("rho_db (rho_n = rho_m) cannot be combined with separate rho_n / rho_m axes")
        elif not (has_n and has_m):
            raise UsageError("transmit powers missing: give rho_db, or both rho_n[_db] and rho_m[_db]")
        if ("rho_n_db" in self.axes and "rho_n" in self.axes) or ("rho_m_db" in self.axes and "rho_m" in self.axes):
            raise UsageError("give each transmit power in dB or linear form, not both")
        bad = [e for e in self.estimators if e not in PROB_ESTIMATORS]
        if bad or not self.estimators:
            raise UsageError(f"estimators must be a non-empty subset of {PROB_ESTIMATORS}, got {list(self.estimators)}")
        if int(self.samples) < 1:
            raise UsageError("samples must be >= 1")

    def points(self):
        """Grid points in deterministic order as ``(param_row, SystemParams)``."""
        keys = [k for k in AXIS_KEYS if k in self.axes]
        for combo in itertools.product(*(self.axes[k] for k in keys)):
            values = dict(zip(keys, combo))
            row = {}
            for user in ("n", "m"):
                if "rho_db" in values:
                    row[f"rho_{user}_db"] = values["rho_db"]
                    row[f"rho_{user}"] = db_to_linear(values["rho_db"])
                elif f"rho_{user}_db" in values:
                    row[f"rho_{user}_db"] = values[f"rho_{user}_db"]
                    row[f"rho_{user}"] = db_to_linear(values[f"rho_{user}_db"])
                else:
                    lin = values[f"rho_{user}"]
                    row[f"rho_{user}"] = lin
                    row[f"rho_{user}_db"] = linear_to_db(lin) if lin > 0 else float("nan")
            row["eta"] = values["eta"]
            row["r0"] = values["r0"]
            params = SystemParams(row["rho_n"], row["rho_m"], row["eta"], row["r0"], self.slot_T)
            yield row, params

    def mc_config(self):
        return McConfig(samples=int(self.samples), seed=int(self.seed), chunk_size=int(self.chunk_size))

    def describe(self):
        return {
            "axes": self.axes,
            "estimators": list(self.estimators),
            "samples": int(self.samples),
            "seed": int(self.seed),
            "chunk_size": int(self.chunk_size),
            "slot_T": self.slot_T,
        }


def prob_columns(spec: SweepSpec):
    cols = list(PARAM_COLUMNS)
    for est in PROB_ESTIMATORS:
        if est in spec.estimators:
            cols += ESTIMATOR_COLUMNS[est]
    return cols + ["status"]


def ergodic_columns(spec: SweepSpec):
    return list(PARAM_COLUMNS) + ERGODIC_COLUMNS + ["status"]


def _prob_row(spec, row, params):
    row = dict(row)
    try:
        if "exact" in spec.estimators:
            row["p_exact"] = p_wn_exact(params)
        if "breakdown" in spec.estimators:
            bd = p_breakdown(params)
            row.update(bd.components())
            row["p_breakdown_total"] = bd.total
        if "asymptotic" in spec.estimators:
            row["p_asymptotic"] = p_wn_asymptotic(params)
        if "limit_n" in spec.estimators:
            row["p_limit_fixed_rho_n"] = p_wn_limit_fixed_rho_n(params)
        if "limit_m" in spec.estimators:
            row["p_limit_fixed_rho_m"] = p_wn_limit_fixed_rho_m(params)
        if "montecarlo" in spec.estimators:
            est = estimate_p_wn(params, spec.mc_config())
            row.update(p_mc=est.mean, p_mc_std_err=est.std_err, mc_n=est.n)
        row["status"] = "ok"
    except (QuadratureError, ConsistencyError) as exc:
        row["status"] = f"error: {exc}"
    return row


def _ergodic_row(spec, row, params):
    row = dict(row)
    res = ergodic_rates(params, spec.mc_config())
    e_h, e_o = energy(params, "hybrid"), energy(params, "oma")
    row.update(
        rate_hybrid=res.hybrid.mean,
        rate_hybrid_std_err=res.hybrid.std_err,
        rate_oma=res.oma.mean,
        rate_oma_std_err=res.oma.std_err,
        rate_gap=res.gap.mean,
        rate_gap_std_err=res.gap.std_err,
        mc_n=res.hybrid.n,
        energy_hybrid=e_h,
        energy_oma=e_o,
        energy_ratio=e_h / e_o,
        status="ok",
    )
    return row


def run_sweep(spec: SweepSpec, kind: str, workers: int = 1):
    """Evaluate every grid point; rows come back in grid order."""
    evaluate = {"prob": _prob_row, "ergodic": _ergodic_row}[kind]
    points = list(spec.points())
    if workers > 1 and len(points) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda p: evaluate(spec, *p), points))
    return [evaluate(spec, *p) for p in points]


def _fmt(value):
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return "" if value is None else str(value)


def render_csv(rows, columns):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(row.get(c)) for c in columns])
    return buf.getvalue()


def _jsonable(value):
    if isinstance(value, (np.floating, float)):
        return None if not math.isfinite(value) else float(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    return value


def render_json(rows, columns):
    data = [{c: _jsonable(row.get(c)) for c in columns} for row in rows]
    return json.dumps(data, indent=2) + "\n"


def _emit(text, out):
    if out:
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, newline="")
    else:
        sys.stdout.write(text)


# -- argument handling -------------------------------------------------------


def _common_parent():
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--seed", type=int, default=None, help="Monte Carlo seed (default 0)")
    parent.add_argument("--json", action="store_true", help="emit JSON instead of CSV / text")
    parent.add_argument("--out", default=None, help="output file (directory for 'figure')")
    parent.add_argument("--workers", type=int, default=1, help="parallel workers for sweep points")
    parent.add_argument("--config", default=None, help="key = value file with sweep settings")
    return parent


def _add_sweep_args(p, with_estimators):
    p.add_argument("--rho-db", help="rho_n = rho_m in dB: start:stop:step or v1,v2,...")
    p.add_argument("--rho-n-db", help="rho_n in dB (axis)")
    p.add_argument("--rho-m-db", help="rho_m in dB (axis)")
    p.add_argument("--rho-n", help="rho_n linear (axis)")
    p.add_argument("--rho-m", help="rho_m linear (axis)")
    p.add_argument("--eta", help="energy budget fraction (axis)")
    p.add_argument("--r0", help="target rate of U_m in BPCU (axis)")
    p.add_argument("--slot-t", type=float, default=None, help="slot duration in seconds")
    p.add_argument("--samples", type=int, default=None, help="Monte Carlo sample count")
    p.add_argument("--chunk-size", type=int, default=None, help="Monte Carlo chunk size")
    if with_estimators:
        p.add_argument("--estimators", help=f"comma list from {','.join(PROB_ESTIMATORS)} (default exact)")


def build_parser():
    parent = _common_parent()
    parser = argparse.ArgumentParser(prog="hybrid-noma", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    alloc = sub.add_parser("allocate", parents=[parent], help="optimal split and OMA comparison for one realization")
    n_group = alloc.add_mutually_exclusive_group(required=True)
    n_group.add_argument("--rho-n-db", type=float)
    n_group.add_argument("--rho-n", type=float)
    m_group = alloc.add_mutually_exclusive_group(required=True)
    m_group.add_argument("--rho-m-db", type=float)
    m_group.add_argument("--rho-m", type=float)
    alloc.add_argument("--eta", type=float, required=True)
    alloc.add_argument("--r0", type=float, required=True)
    alloc.add_argument("--gm", type=float, required=True, help="|h_m|^2")
    alloc.add_argument("--gn", type=float, required=True, help="|h_n|^2")
    alloc.add_argument("--slot-t", type=float, default=1.0)

    prob = sub.add_parser("prob", parents=[parent], help="sweep the probability that hybrid NOMA loses to OMA")
    _add_sweep_args(prob, with_estimators=True)

    erg = sub.add_parser("ergodic", parents=[parent], help="sweep ergodic rates of hybrid NOMA and OMA")
    _add_sweep_args(erg, with_estimators=False)

    fig = sub.add_parser("figure", parents=[parent], help="write preset figure data (CSV + metadata)")
    fig.add_argument("which", choices=sorted(FIGURE_PRESETS))
    fig.add_argument("--samples", type=int, default=None)
    fig.add_argument("--chunk-size", type=int, default=None)
    return parser


def read_config(path):
    """Read ``key = value`` lines; keys are long flag names without dashes."""
    text = Path(path).read_text()
    if not text.lstrip().startswith("["):
        text = "[sweep]\n" + text
    cp = configparser.ConfigParser(inline_comment_prefixes=("#",))
    cp.read_string(text)
    if len(cp.sections()) != 1:
        raise UsageError(f"{path}: expected exactly one sweep section")
    return {k.replace("-", "_"): v for k, v in cp[cp.sections()[0]].items()}


def _merged(args, config, name, default=None):
    value = getattr(args, name, None)
    if value is None:
        value = config.get(name, default)
    return value


def spec_from_args(args, config=None, kind="prob"):
    config = config or {}
    axes = {}
    for key in AXIS_KEYS:
        value = _merged(args, config, key)
        if value is not None:
            axes[key] = value
    estimators = ("exact",)
    if kind == "prob":
        raw = _merged(args, config, "estimators")
        if raw:
            estimators = tuple(e.strip() for e in str(raw).split(",") if e.strip())
    else:
        estimators = ("montecarlo",)
    return SweepSpec(
        axes=axes,
        estimators=estimators,
        samples=int(_merged(args, config, "samples", 10**6)),
        seed=int(_merged(args, config, "seed", 0)),
        chunk_size=int(_merged(args, config, "chunk_size", 2**16)),
        slot_T=float(_merged(args, config, "slot_t", 1.0)),
    )


def cmd_allocate(args):
    rho_n = db_to_linear(args.rho_n_db) if args.rho_n_db is not None else args.rho_n
    rho_m = db_to_linear(args.rho_m_db) if args.rho_m_db is not None else args.rho_m
    params = SystemParams(rho_n, rho_m, args.eta, args.r0, args.slot_t)
    gains = ChannelGains(args.gm, args.gn)
    split = optimal_split(params, gains)
    report = {
        "rho_n": params.rho_n,
        "rho_m": params.rho_m,
        "eta": params.eta,
        "r0": params.r0,
        "epsilon0": params.eps0,
        "g_m": gains.g_m,
        "g_n": gains.g_n,
        "tau_m": tau_m(params, gains.g_m),
        "beta1": split.beta1,
        "beta2": split.beta2,
        "rate_hybrid": optimal_rate(params, gains),
        "rate_oma": oma_rate(params, gains.g_n),
        "hybrid_wins": hybrid_beats_oma(params, gains),
        "energy_hybrid": energy(params, "hybrid"),
        "energy_oma": energy(params, "oma"),
    }
    if args.json:
        text = json.dumps(report, indent=2) + "\n"
    else:
        width = max(len(k) for k in report)
        text = "".join(f"{k:<{width}}  {_fmt(v)}\n" for k, v in report.items())
    _emit(text, args.out)
    return EXIT_OK


def _sweep_command(args, kind):
    config = read_config(args.config) if args.config else {}
    spec = spec_from_args(args, config, kind)
    rows = run_sweep(spec, kind, workers=max(1, args.workers))
    columns = prob_columns(spec) if kind == "prob" else ergodic_columns(spec)
    _emit((render_json if args.json else render_csv)(rows, columns), args.out)
    return EXIT_OK if all(r["status"] == "ok" for r in rows) else EXIT_NUMERICAL


def figure_spec(which, samples=None, seed=0, chunk_size=None):
    preset = FIGURE_PRESETS[which]
    return SweepSpec(
        axes=dict(preset["axes"]),
        estimators=preset["estimators"],
        samples=int(samples if samples is not None else preset["samples"]),
        seed=int(seed),
        chunk_size=int(chunk_size if chunk_size is not None else 2**16),
    )


def write_figure(which, out_dir, samples=None, seed=0, workers=1, chunk_size=None):
    """Write ``<which>.csv`` and ``<which>.meta.json`` into ``out_dir``.

    Returns the list of rows. Output depends only on the arguments.
    """
    preset = FIGURE_PRESETS[which]
    spec = figure_spec(which, samples, seed, chunk_size)
    kind = preset["command"]
    rows = run_sweep(spec, kind, workers=workers)
    columns = prob_columns(spec) if kind == "prob" else ergodic_columns(spec)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / f"{which}.csv").write_text(render_csv(rows, columns), newline="")
    meta = {
        "figure": which,
        "command": kind,
        "columns": columns,
        "spec": spec.describe(),
        "seed": int(seed),
        "notes": preset["notes"],
        "tool": "hybrid_noma",
        "version": __version__,
    }
    (out / f"{which}.meta.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return rows


def cmd_figure(args):
    rows = write_figure(
        args.which,
        args.out or ".",
        samples=args.samples,
        seed=args.seed or 0,
        workers=max(1, args.workers),
        chunk_size=args.chunk_size,
    )
    return EXIT_OK if all(r["status"] == "ok" for r in rows) else EXIT_NUMERICAL


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "allocate": cmd_allocate,
        "prob": lambda a: _sweep_command(a, "prob"),
        "ergodic": lambda a: _sweep_command(a, "ergodic"),
        "figure": cmd_figure,
    }
    try:
        return handlers[args.command](args)
    except (UsageError, InvalidParameterError) as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"{parser.prog}: I/O error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
