"""Command-line driver: construct, verdict, dual, constants, full.

Exit codes: 0 when the generator set is a frame, 2 when it is not, 1 on
any error.  JSON outputs use sorted keys and carry no NaN; unbounded
values are written as ``"infinite"``.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

import numpy as np

from .config import ConfigError, RunConfig, load_config, p_label
from .dual import (NotAFrameError, biorthogonality_matrix, build_dual, pframe_constants,
                   reconstruction_errors)
from .external import load_frequency_generators
from .generators import GeneratorSet, build_generators
from .gram import frame_verdict, gram_grid, rank_profile, verdict_from_profile

EXIT_FRAME, EXIT_ERROR, EXIT_NOT_FRAME = 0, 1, 2
INFINITE = "infinite"
SKIPPED = "skipped: not a frame"


def clean(obj):
    """Make ``obj`` JSON-safe: numpy scalars to Python, inf to a marker, NaN rejected."""
    if isinstance(obj, dict):
        return {str(k): clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [clean(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            raise ValueError("NaN reached a report")
        return INFINITE if math.isinf(x) else x
    if isinstance(obj, complex):
        return [clean(obj.real), clean(obj.imag)]
    return obj


def write_json(path, data) -> None:
    text = json.dumps(clean(data), sort_keys=True, indent=2, allow_nan=False)
    Path(path).write_text(text + "\n")


def _out(cfg: RunConfig) -> Path:
    path = Path(cfg.output_dir)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _generators(cfg: RunConfig) -> GeneratorSet:
    return build_generators(cfg.indices, cfg.spec, cfg.grid, sign=cfg.sign)


def _meta(cfg: RunConfig, gens: GeneratorSet) -> dict:
    return {
        "config": cfg.to_dict(),
        "grid": {"x0": gens.time_grid.x0, "dx": cfg.dx, "n": gens.time_grid.n},
        "convention": "F(h)(xi) = int exp(-i xi t) h(t) dt; generator k has transform theta(xi + sign*k*pi)",
        "diagnostics": gens.diagnostics,
    }


def cmd_construct(cfg: RunConfig) -> int:
    out = _out(cfg)
    gens = _generators(cfg)
    for k, g in zip(gens.labels, gens.time):
        g.to_csv(out / f"gen_{k}.csv")
        (out / f"gen_{k}.bin").write_bytes(g.to_bytes())
    write_json(out / "meta.json", _meta(cfg, gens))
    if cfg.figures:
        from .plotting import plot_generators
        plot_generators(gens, out / "generators.png")
    return EXIT_FRAME


def _verdict(cfg: RunConfig, gens: GeneratorSet, out: Path):
    prof = rank_profile(gens, cfg.m, cfg.tolerance)
    verdict = verdict_from_profile(gens, prof)
    if cfg.figures:
        from .plotting import plot_gram_eigenvalues, plot_rank_profile
        plot_rank_profile(prof, out / "rank_profile.png", title=f"indices {list(gens.labels)}")
        grid = gram_grid(gens, cfg.m)
        floor = (cfg.tolerance * prof.reference) ** 2
        plot_gram_eigenvalues(grid.xi, grid.eigenvalues(), out / "gram_eigenvalues.png", floor)
    return prof, verdict


def cmd_verdict(cfg: RunConfig, frequency_csv=None, J=None) -> int:
    out = _out(cfg)
    if frequency_csv:
        gens = load_frequency_generators(frequency_csv, J)
    else:
        gens = build_generators(cfg.indices, cfg.spec, sign=cfg.sign)
    _, verdict = _verdict(cfg, gens, out)
    data = verdict.to_dict()
    if frequency_csv and J is not None:
        data["J"] = J
        data["tail_mass"] = gens.diagnostics["tail_mass"]
    write_json(out / "verdict.json", data)
    print(f"verdict: {data['verdict']}  rank histogram: {verdict.rank_histogram}")
    return EXIT_FRAME if verdict.positive else EXIT_NOT_FRAME


def _dual_block(cfg, gens, duals) -> dict:
    B = biorthogonality_matrix(gens, duals)
    eye = np.eye(gens.r)
    recon = reconstruction_errors(gens, duals, cfg.n_trials, cfg.seed)
    recon_swapped = reconstruction_errors(gens, duals, cfg.n_trials, cfg.seed, swapped=True)
    return {
        "recon_error_max": float(recon.max()),
        "recon_error_swapped_max": float(recon_swapped.max()),
        "biorth_max_offdiag": float(np.abs(B - np.diag(np.diag(B))).max()),
        "biorth_max_deviation": float(np.abs(B - eye).max()),
        "biorth_diagonal": [float(v) for v in np.real(np.diag(B))],
        "diagnostics": duals.diagnostics,
    }


def _write_duals(out, gens, duals) -> None:
    for k, g in zip(gens.labels, duals.psi_time):
        g.to_csv(out / f"psi_{k}.csv")


def cmd_dual(cfg: RunConfig) -> int:
    out = _out(cfg)
    gens = _generators(cfg)
    duals = build_dual(gens, cfg.tolerance, strict=not cfg.force_dual, m=cfg.m)
    _write_duals(out, gens, duals)
    block = _dual_block(cfg, gens, duals)
    block["verdict"] = duals.verdict.to_dict()
    write_json(out / "dual.json", block)
    if cfg.figures:
        from .plotting import plot_generators
        plot_generators(gens, out / "duals.png", duals=duals)
    return EXIT_FRAME if duals.verdict.positive else EXIT_NOT_FRAME


def _constants(cfg, gens, duals, out):
    blocks, series = {}, {}
    for p in cfg.p_list:
        fc = pframe_constants(gens, p, cfg.mu, cfg.n_trials, cfg.seed, duals, adversarial=True,
                              tolerance=cfg.tolerance)
        blocks[p_label(p)] = fc.to_dict()
        series[p_label(p)] = fc
    with open(out / "ratios.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["p", "trial", "ratio"])
        for label, fc in series.items():
            for t, v in enumerate(fc.ratios):
                w.writerow([label, t, repr(float(v))])
    if cfg.figures:
        from .plotting import plot_ratios
        plot_ratios(series, out / "ratios.png")
    return blocks


def cmd_constants(cfg: RunConfig) -> int:
    out = _out(cfg)
    gens = _generators(cfg)
    verdict = frame_verdict(gens, cfg.m, cfg.tolerance)
    if not verdict.positive and not cfg.force_dual:
        write_json(out / "constants.json", {"constants": SKIPPED, "verdict": verdict.to_dict()})
        return EXIT_NOT_FRAME
    duals = build_dual(gens, cfg.tolerance, strict=False, m=cfg.m)
    blocks = _constants(cfg, gens, duals, out)
    write_json(out / "constants.json", {"constants": blocks, "verdict": verdict.to_dict()})
    return EXIT_FRAME if verdict.positive else EXIT_NOT_FRAME


def cmd_full(cfg: RunConfig) -> int:
    """Construct, verdict, dual, biorthogonality and constants in one report."""
    out = _out(cfg)
    cmd_construct(cfg)
    gens = _generators(cfg)
    _, verdict = _verdict(cfg, gens, out)
    write_json(out / "verdict.json", verdict.to_dict())
    report = {
        "config": cfg.to_dict(),
        "indices": list(gens.labels),
        "mu": cfg.mu.to_string(),
        "n_trials": cfg.n_trials,
        "seed": cfg.seed,
        "verdict": verdict.to_dict(),
        "forced_dual": bool(cfg.force_dual and not verdict.positive),
    }
    if verdict.positive or cfg.force_dual:
        duals = build_dual(gens, cfg.tolerance, strict=False, m=cfg.m)
        _write_duals(out, gens, duals)
        report["dual"] = _dual_block(cfg, gens, duals)
        report["recon_error_max"] = report["dual"]["recon_error_max"]
        report["biorth_max_offdiag"] = report["dual"]["biorth_max_offdiag"]
        report["constants"] = _constants(cfg, gens, duals, out)
    else:
        report["dual"] = SKIPPED
        report["constants"] = SKIPPED
        report["recon_error_max"] = SKIPPED
        report["biorth_max_offdiag"] = SKIPPED
    write_json(out / "report.json", report)
    print(f"verdict: {verdict.to_dict()['verdict']}  report: {out / 'report.json'}")
    return EXIT_FRAME if verdict.positive else EXIT_NOT_FRAME


COMMANDS = {"construct": cmd_construct, "verdict": cmd_verdict, "dual": cmd_dual,
            "constants": cmd_constants, "full": cmd_full}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="shiftinv", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON file with RunConfig fields")
        p.add_argument("--indices")
        p.add_argument("--epsilon", type=float)
        p.add_argument("--profile", choices=["exp", "poly"])
        p.add_argument("--normalized", action="store_const", const=True)
        p.add_argument("--time-window", dest="T", type=int)
        p.add_argument("--dx")
        p.add_argument("--m", type=int)
        p.add_argument("--tolerance", type=float)
        p.add_argument("--p-list", dest="p_list")
        p.add_argument("--mu", dest="mu_spec")
        p.add_argument("--n-trials", dest="n_trials", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--output-dir", dest="output_dir")
        p.add_argument("--sign", type=int, choices=[1, -1])
        p.add_argument("--force-dual", dest="force_dual", action="store_const", const=True,
                       help="build duals and constants even when the rank is not constant")
        p.add_argument("--no-figures", dest="figures", action="store_const", const=False)
        if name == "verdict":
            p.add_argument("--frequency-csv", nargs="+", help="one CSV (xi, re, im) per generator")
            p.add_argument("--J", type=int, help="periodization cut for tabulated data")
    return parser


def main(argv=None) -> int:
    args = vars(build_parser().parse_args(argv))
    command = args.pop("command")
    config_path = args.pop("config")
    extra = {k: args.pop(k) for k in ("frequency_csv", "J") if k in args}
    try:
        cfg = load_config(config_path, args)
        if command == "verdict":
            return cmd_verdict(cfg, extra.get("frequency_csv"), extra.get("J"))
        return COMMANDS[command](cfg)
    except (ConfigError, NotAFrameError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
