"""Command-line front-end.

Subcommands write CSV tables (canonical), optional SVG figures and a
``manifest.json`` that ``randfb replay`` turns back into the same CSV bytes.

Signal specs::

    synth:impulse | synth:constant | synth:sine?cycles=K | synth:brownian?seed=S
    wav:PATH[?channel=first|mean]

Any spec also accepts ``?n=LENGTH`` in place of ``--n``.

Exit codes: 0 success, 2 configuration error, 3 I/O error, 4 numerical
convergence error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import os
import sys
import time
from pathlib import Path

from . import __version__, bounds, montecarlo, plotting
from .errors import ConvergenceError, DomainError, RandFBError
from .signals import autocorrelation, parse_signal_spec
from .spectrum import q_matrix, spectral_stats

log = logging.getLogger("randfb")

EXIT_CONFIG, EXIT_IO, EXIT_NUMERIC = 2, 3, 4

ENERGY_SAMPLE_COLUMNS = ["trial", "energy", "deviation"]
HISTOGRAM_COLUMNS = ["bin_lo", "bin_hi", "count"]
ENERGY_SUMMARY_COLUMNS = [
    "J", "T", "trials", "mean", "variance", "analytic_mean", "analytic_variance", "band_lo", "band_hi",
]
DEVIATION_COLUMNS = [
    "T", "mean_dev", "band_lo", "band_hi", "cantelli_alpha", "chernoff_alpha",
    "exceed_cantelli", "exceed_chernoff", "analytic_variance",
]
FRAMEBOUND_COLUMNS = [
    "T", "mean_A", "mean_B", "p2.5_A", "p97.5_B", "thm1_lo", "thm1_hi", "asym_lo", "asym_hi",
    "p97.5_A", "p2.5_B", "se_A", "se_B", "var_A", "var_B", "se_var_A", "se_var_B", "var_lo", "var_hi", "n",
]
CONDITION_COLUMNS = [
    "J", "T", "mean_kappa", "ratio_of_means", "cov_kA", "kappa_tilde", "exclusion_rate",
    "kappa_tilde_log2", "se_kappa", "se_cov_kA", "mean_A", "mean_B", "var_A", "var_B", "n", "trials",
]


class ConfigError(RandFBError, ValueError):
    pass


def fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return f"{v:.17g}"
    return str(v)


def write_csv(path: Path, columns, rows) -> Path:
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\r\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([fmt(row[c]) for c in columns])
    return path


def parse_int_list(text: str) -> list[int]:
    """``"8,16"`` or power-of-two ranges ``"2^3..2^10"`` (inclusive), comma-combined."""
    out = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        try:
            if ".." in item:
                a, b = item.split("..")
                if a.startswith("2^") and b.startswith("2^"):
                    out.extend(2**k for k in range(int(a[2:]), int(b[2:]) + 1))
                else:
                    out.extend(range(int(a), int(b) + 1))
            elif item.startswith("2^"):
                out.append(2 ** int(item[2:]))
            else:
                out.append(int(item))
        except ValueError as exc:
            raise ConfigError(f"cannot parse integer list item {item!r}") from exc
    if not out:
        raise ConfigError(f"empty integer list {text!r}")
    return out


def _resolve_seed(seed):
    if seed is not None:
        return int(seed)
    env = os.environ.get("RANDFB_SEED")
    if env:
        try:
            return int(env)
        except ValueError as exc:
            raise ConfigError(f"RANDFB_SEED must be an integer, got {env!r}") from exc
    return 0


def _experiment(opts) -> montecarlo.ExperimentConfig:
    return montecarlo.ExperimentConfig(
        signal=opts["signal"],
        n=opts["n"],
        J_list=tuple(opts["filters"]),
        T_list=tuple(opts["len"]),
        trials=opts["trials"],
        master_seed=opts["seed"],
        sigma_policy=opts.get("sigma", "normalized"),
        level=opts["level"],
        ambient=opts.get("ambient", "T"),
        extreme_trials=opts.get("extreme_trials", 100_000),
        bins=opts.get("bins", 50),
        threads=opts.get("threads", 1),
    )


# -- commands -----------------------------------------------------------------


def cmd_energy_hist(opts, out: Path) -> list[Path]:
    res = montecarlo.run_energy_histogram(_experiment(opts))
    d = res.distribution
    files = [
        write_csv(
            out / "energy_samples.csv",
            ENERGY_SAMPLE_COLUMNS,
            ({"trial": i, "energy": float(e), "deviation": float(e) - res.signal_energy} for i, e in enumerate(res.samples)),
        ),
        write_csv(
            out / "energy_histogram.csv",
            HISTOGRAM_COLUMNS,
            (
                {"bin_lo": float(res.edges[i]), "bin_hi": float(res.edges[i + 1]), "count": int(c)}
                for i, c in enumerate(res.counts)
            ),
        ),
        write_csv(
            out / "energy_summary.csv",
            ENERGY_SUMMARY_COLUMNS,
            [
                {
                    "J": d.J, "T": d.T, "trials": d.count, "mean": d.mean, "variance": d.variance,
                    "analytic_mean": res.analytic_mean, "analytic_variance": res.analytic_variance,
                    "band_lo": d.retained_lo, "band_hi": d.retained_hi,
                }
            ],
        ),
    ]
    if opts.get("svg"):
        plotting.energy_histogram(out / "energy_hist.svg", res)
        files.append(out / "energy_hist.svg")
    return files


def cmd_deviation(opts, out: Path) -> list[Path]:
    sweep = montecarlo.run_deviation_sweep(_experiment(opts))
    files = [write_csv(out / "deviation.csv", DEVIATION_COLUMNS, (r.__dict__ for r in sweep.rows))]
    if sweep.skipped:
        files.append(write_csv(out / "deviation_skipped.csv", ["T", "reason"], sweep.skipped))
    if opts.get("svg"):
        plotting.deviation(out / "deviation.svg", sweep)
        files.append(out / "deviation.svg")
    return files


def cmd_framebounds(opts, out: Path) -> list[Path]:
    rows = montecarlo.run_framebound_sweep(_experiment(opts))

    def as_row(r):
        d = dict(r.__dict__)
        d.update({"p2.5_A": r.lo_A, "p97.5_A": r.hi_A, "p2.5_B": r.lo_B, "p97.5_B": r.hi_B})
        return d

    files = [write_csv(out / "framebounds.csv", FRAMEBOUND_COLUMNS, (as_row(r) for r in rows))]
    if opts.get("svg"):
        plotting.framebounds(out / "framebounds.svg", rows)
        files.append(out / "framebounds.svg")
    return files


def cmd_condition(opts, out: Path) -> list[Path]:
    grid = montecarlo.run_condition_sweep(_experiment(opts))
    files = [
        write_csv(out / "condition.csv", CONDITION_COLUMNS, (c.__dict__ for c in grid.cells)),
        write_csv(out / "condition_diagonal.csv", CONDITION_COLUMNS, (c.__dict__ for c in grid.diagonal)),
    ]
    if opts.get("svg"):
        plotting.condition(out / "condition.svg", grid)
        files.append(out / "condition.svg")
    return files


def bounds_report(opts) -> dict:
    """Closed-form quantities for one signal and one ``(J, T)``; no sampling."""
    x = parse_signal_spec(opts["signal"], opts["n"])
    J, T = opts["filters"][0], opts["len"][0]
    if T > x.N:
        raise ConfigError(f"T={T} exceeds signal length N={x.N}")
    sigma_sq = 1.0 / (J * T)
    energy = x.energy
    p = 1.0 - opts["level"]
    R = autocorrelation(x, min(T + 1, x.N))
    V = bounds.energy_variance(J, sigma_sq, T, R)
    stats = spectral_stats(q_matrix(x, T))
    v_lo, v_hi = bounds.variance_bounds_AB(J, T)
    g_lo, g_hi = bounds.gaussian_extreme_asymptotics(J, T)
    M = opts.get("dense_rows") or J * T
    d_mean, d_var = bounds.dense_layer_moments(M, 1.0 / M, energy)

    def kt(base=None):
        try:
            return bounds.kappa_tilde(J, T, base=base)
        except DomainError:
            return None

    return {
        "signal": opts["signal"],
        "signal_digest": x.digest(),
        "N": x.N,
        "J": J,
        "T": T,
        "sigma_sq": sigma_sq,
        "probability": p,
        "energy": energy,
        "mean": bounds.expected_energy(J, T, sigma_sq, energy),
        "variance": V,
        "cantelli": {"alpha": bounds.cantelli_alpha(p, V, energy)},
        "chernoff": {
            "alpha": bounds.chernoff_alpha(p, J, T, stats, energy),
            "lambda_inf": stats.lambda_inf,
            "lambda_2_sq": stats.lambda_2_sq,
            "trace": stats.trace,
        },
        "variance_bounds_AB": {"lower": v_lo, "upper": v_hi},
        "kappa_tilde": kt(),
        "kappa_tilde_log2": kt(2),
        "gaussian_extremes": {"min_expect": g_lo, "max_expect": g_hi},
        "dense_layer": {"M": M, "sigma_sq": 1.0 / M, "mean": d_mean, "variance": d_var},
    }


def cmd_bounds(opts, out: Path) -> list[Path]:
    report = bounds_report(opts)
    path = out / "bounds.json"
    path.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    print(json.dumps(report, indent=2, sort_keys=True))
    return [path]


COMMANDS = {
    "energy-hist": cmd_energy_hist,
    "deviation": cmd_deviation,
    "framebounds": cmd_framebounds,
    "condition": cmd_condition,
    "bounds": cmd_bounds,
}

DEFAULTS = {
    "energy-hist": {"filters": "10", "len": "64", "n": 1024},
    "deviation": {"filters": "10", "len": "2^3..2^10", "n": 1024},
    "framebounds": {"filters": "40", "len": "2^3..2^10", "n": 1024, "signal": "synth:impulse"},
    "condition": {"filters": "4,5,6,7,8,9,10,20,40,80", "len": "2^4..2^10", "n": 1024, "signal": "synth:impulse"},
    "bounds": {"filters": "10", "len": "8", "n": 1024},
}


def run(command: str, opts: dict, out: Path) -> dict:
    """Run one command and write its manifest; returns the manifest."""
    out.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    files = COMMANDS[command](opts, out)
    manifest = {
        "command": command,
        "config": opts,
        "master_seed": opts["seed"],
        "version": __version__,
        "outputs": [p.name for p in files],
        "duration_s": time.perf_counter() - t0,
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return manifest


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="randfb",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p.add_argument("--version", action="version", version=f"randfb {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        d = DEFAULTS[name]
        sp = sub.add_parser(name, formatter_class=argparse.RawDescriptionHelpFormatter, description=__doc__)
        sp.add_argument("--signal", default=d.get("signal"), required="signal" not in d,
                        help="signal spec, e.g. synth:impulse or wav:path.wav")
        sp.add_argument("--n", type=int, default=d["n"], help="signal length N (default %(default)s)")
        sp.add_argument("--filters", default=d["filters"], help="J, or a comma list (default %(default)s)")
        sp.add_argument("--len", default=d["len"], help="T list, e.g. 64 or 2^3..2^10 (default %(default)s)")
        sp.add_argument("--level", type=float, default=0.95, help="retained fraction / 1 - probability (default 0.95)")
        sp.add_argument("--out", required=True, help="output directory")
        if name != "bounds":
            sp.add_argument("--trials", type=int, default=1000)
            sp.add_argument("--seed", type=int, default=None, help="master seed (fallback: $RANDFB_SEED, then 0)")
            sp.add_argument("--threads", type=int, default=1, help="concurrency cap; output does not depend on it")
            sp.add_argument("--svg", action="store_true", help="also write an SVG figure")
        if name == "energy-hist":
            sp.add_argument("--bins", type=int, default=50)
            sp.add_argument("--sigma", default="normalized", help="weight variance, or 'normalized' for 1/(JT)")
        if name in ("framebounds", "condition"):
            sp.add_argument("--ambient", default="T", help="frame analysis dimension: T, N, or an integer")
        if name == "framebounds":
            sp.add_argument("--extreme-trials", type=int, default=100_000,
                            help="Monte Carlo trials for the chi-squared order statistics")
        if name == "bounds":
            sp.add_argument("--dense-rows", type=int, default=None, help="rows M of the dense baseline (default J*T)")
    rp = sub.add_parser("replay", help="re-run a command from its manifest.json")
    rp.add_argument("manifest")
    rp.add_argument("--out", default=None, help="output directory (default: the manifest's directory)")
    rp.add_argument("--threads", type=int, default=None)
    return p


def _opts_from_args(args) -> dict:
    opts = {
        "signal": args.signal,
        "n": args.n,
        "filters": parse_int_list(args.filters),
        "len": parse_int_list(args.len),
        "level": args.level,
        "trials": getattr(args, "trials", 1),
        "seed": _resolve_seed(getattr(args, "seed", None)),
        "threads": getattr(args, "threads", 1),
        "svg": getattr(args, "svg", False),
    }
    if hasattr(args, "bins"):
        opts["bins"] = args.bins
    if hasattr(args, "sigma"):
        opts["sigma"] = args.sigma if args.sigma == "normalized" else float(args.sigma)
    if hasattr(args, "ambient"):
        a = args.ambient
        opts["ambient"] = a if a in ("T", "N") else int(a)
    if hasattr(args, "extreme_trials"):
        opts["extreme_trials"] = args.extreme_trials
    if hasattr(args, "dense_rows"):
        opts["dense_rows"] = args.dense_rows
    return opts


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        if args.command == "replay":
            path = Path(args.manifest)
            try:
                manifest = json.loads(path.read_text(encoding="utf-8"))
            except json.JSONDecodeError as exc:
                raise ConfigError(f"{path}: not a valid manifest ({exc})") from exc
            opts = manifest["config"]
            if args.threads is not None:
                opts["threads"] = args.threads
            out = Path(args.out) if args.out else path.parent
            run(manifest["command"], opts, out)
        else:
            try:
                opts = _opts_from_args(args)
            except ValueError as exc:
                raise ConfigError(str(exc)) from exc
            run(args.command, opts, Path(args.out))
    except ConvergenceError as exc:
        print(f"randfb: convergence error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"randfb: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (RandFBError, ValueError, KeyError) as exc:
        print(f"randfb: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return 0


if __name__ == "__main__":
    sys.exit(main())
