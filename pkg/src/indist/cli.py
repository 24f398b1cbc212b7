"""Command-line interface.

Exit codes: 0 success, 2 input error, 3 domain error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from .config import CONFIGURATIONS, ConfigError, ExperimentConfig, configuration_visibilities, load_config
from .core import IndistError, ModelInconsistent, OutOfRangeOverlap, OverlapGraph, validate_graph
from .homtest import InsufficientData, NonConvergence, fit_dip
from .inference import classical_bounds, product_bounds
from .inference.product import normalize_hint
from .io import (
    CSVFormatError,
    format_counts_csv,
    format_distribution_csv,
    read_counts_csv,
    read_dip_points,
    read_distribution_csv,
    write_text,
)
from .simulator import (
    DetectionSpec,
    EmptyPostselection,
    InterferometerSpec,
    NoConditionedEvents,
    SourceSpec,
    build_rho_source,
    estimate_overlaps_from_distribution,
    postselect,
    raw_distribution,
)
from .stats import DEFAULT_REPLICATES, EmptyCounts, normalize, propagate, propagate_gaussian, sample_counts, tvd
from .surfaces import BoxTooSmall, DelayAxes, GridTooCoarse, isosurface, nontrivial_region_volume, volume_ratio

EXIT_OK, EXIT_INPUT, EXIT_DOMAIN = 0, 2, 3
JSON_SCHEMA_VERSION = 1


class InputError(Exception):
    pass


class DomainError(Exception):
    pass


def _emit(text: str, out: str | None) -> None:
    if out:
        write_text(out, text)
    else:
        sys.stdout.write(text)


def _iv(x) -> dict:
    if isinstance(x, ModelInconsistent):
        return {"lo": None, "hi": None, "raw_lo": x.raw_lo, "raw_hi": x.raw_hi, "consistent": False, "clamped": False}
    raw_lo = x.lo if x.raw_lo is None else x.raw_lo
    raw_hi = x.hi if x.raw_hi is None else x.raw_hi
    return {"lo": x.lo, "hi": x.hi, "raw_lo": raw_lo, "raw_hi": raw_hi, "consistent": True, "clamped": x.was_clamped}


# ---------------------------------------------------------------- config


def _config(args) -> ExperimentConfig:
    if getattr(args, "config", None):
        return load_config(args.config)
    return ExperimentConfig(InterferometerSpec.measured(lossy=True), SourceSpec(), DetectionSpec(), (0.944, 0.835, 0.915))


def _model_from_args(args, cfg: ExperimentConfig):
    if args.visibilities is not None:
        vis = tuple(args.visibilities)
        if any(not (0.0 <= v <= 1.0) for v in vis):
            raise InputError(f"visibilities must lie in [0, 1]: {vis}")
    elif args.configuration is not None and not getattr(args, "config", None):
        vis = (1.0, 1.0, 1.0)  # ideal partition
    else:
        vis = cfg.visibilities
    if args.configuration is not None:
        vis = configuration_visibilities(args.configuration, vis)
    return build_rho_source(*vis)


def _spec_for_noise(cfg: ExperimentConfig, noise: str) -> InterferometerSpec:
    return cfg.interferometer if noise == "full" else cfg.interferometer.without_loss()


# ---------------------------------------------------------------- simulate


def cmd_simulate(args) -> int:
    cfg = _config(args)
    model = _model_from_args(args, cfg)
    spec = _spec_for_noise(cfg, args.noise)
    raw = raw_distribution(model, spec, cfg.source, cfg.detection, args.noise)
    clicks = args.noise == "full"
    if args.postselect:
        ps = postselect(raw, spec, cfg.source)
        dist, clicks = ps.distribution, False
        retained = ps.retained
    else:
        dist, retained = raw, None
    if args.events < 0:
        raise InputError("--events must be non-negative")
    if args.events:
        counts = sample_counts(dist, args.events, seed=args.seed)
        text = format_counts_csv(counts, len(next(iter(dist))) if dist else 6)
    else:
        text = format_distribution_csv(dist, clicks=clicks)
    _emit(text, args.out)
    if args.json:
        info = {"schema_version": JSON_SCHEMA_VERSION, "outcomes": len(dist), "retained_mass": retained}
        sys.stderr.write(json.dumps(info, sort_keys=True) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------- bounds


def bounds_document(graph: OverlapGraph, model: str, hint="general", replicates=DEFAULT_REPLICATES, seed=0) -> dict:
    """Machine-readable bounds report; sigmas by Monte-Carlo when edges carry them."""
    vals = graph.chain_values()
    sigs = graph.chain_sigmas()
    have_sig = any(s > 0 for s in sigs)
    doc: dict = {
        "schema_version": JSON_SCHEMA_VERSION,
        "overlaps": dict(zip(("AB", "BC", "CD"), vals)),
        "sigmas": dict(zip(("AB", "BC", "CD"), sigs)) if have_sig else None,
    }

    def section(report_fn):
        rep = report_fn(OverlapGraph.chain(*vals))
        out = {k: _iv(v) for k, v in rep.intervals().items()}
        if have_sig:
            names = list(rep.intervals())
            unc = propagate_gaussian(
                vals, sigs, lambda a, b, c: report_fn(OverlapGraph.chain(a, b, c)).endpoints(), replicates, seed
            )
            for i, n in enumerate(names):
                out[n]["sigma_lo"] = unc[2 * i].sigma
                out[n]["sigma_hi"] = unc[2 * i + 1].sigma
        return out

    if model in ("classical", "both"):
        doc["classical"] = section(classical_bounds)
    if model in ("product", "both"):
        doc["product"] = section(lambda g: product_bounds(g, hint))
        doc["product"]["dimension_hint"] = hint
    return doc


def _bounds_text(doc: dict) -> str:
    lines = ["overlaps " + " ".join(f"r_{k}={v:.4f}" for k, v in doc["overlaps"].items())]
    for model in ("classical", "product"):
        if model not in doc:
            continue
        sec = doc[model]
        title = model if model == "classical" else f"product ({sec['dimension_hint']})"
        lines.append(f"[{title}]")
        for name, iv in sec.items():
            if name == "dimension_hint":
                continue
            if not iv["consistent"]:
                lines.append(f"{name:5s} inconsistent (raw [{iv['raw_lo']:.4f}, {iv['raw_hi']:.4f}])")
                continue
            s = f"{name:5s} [{iv['lo']:.4f}, {iv['hi']:.4f}]"
            if "sigma_lo" in iv:
                s += f"  sigma [{iv['sigma_lo']:.4f}, {iv['sigma_hi']:.4f}]"
            lines.append(s)
    return "\n".join(lines) + "\n"


def cmd_bounds(args) -> int:
    sig = args.sigmas
    if sig is not None and any(s < 0 for s in sig):
        raise InputError("sigmas must be non-negative")
    try:
        g = OverlapGraph.chain(*args.overlaps, sigmas=sig)
        validate_graph(g)
        hint = normalize_hint(args.dimension)
    except (OutOfRangeOverlap, ValueError) as exc:
        raise InputError(str(exc)) from exc
    doc = bounds_document(g, args.model, hint, args.replicates, args.seed)
    _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n" if args.json else _bounds_text(doc), args.out)
    return EXIT_OK


# ---------------------------------------------------------------- counts


def cmd_counts(args) -> int:
    counts = read_counts_csv(args.counts)
    if counts.total < 1:
        raise InputError(f"{args.counts} contains no events")
    cfg = _config(args)
    spec = cfg.interferometer
    doc: dict = {"schema_version": JSON_SCHEMA_VERSION, "events": counts.total}
    lines = [f"events {counts.total}"]
    if not (args.estimate_overlaps or args.tvd):
        args.estimate_overlaps = True

    if args.estimate_overlaps:
        corr = {"auto": None, "on": True, "off": False}[args.correction]

        def graph(d):
            kept = postselect(d, spec, cfg.source).distribution
            return estimate_overlaps_from_distribution(kept, spec, cfg.source, correct_reflectivity=corr)

        def est(d):
            return [e.value for e in graph(d).edges]

        g0 = graph(normalize(counts))
        names = [e.name for e in g0.edges]
        point = [e.value for e in g0.edges]
        unc = propagate(counts, est, args.replicates, args.seed)
        doc["overlaps"] = {n: {"value": v, "sigma": u.sigma} for n, v, u in zip(names, point, unc)}
        lines += [f"r_{n} {v:.4f} ± {u.sigma:.4f}" for n, v, u in zip(names, point, unc)]

    if args.tvd:
        if args.expected:
            expected = read_distribution_csv(args.expected).normalized()
        else:
            model = _model_from_args(args, cfg)
            noise_spec = _spec_for_noise(cfg, args.noise)
            raw = raw_distribution(model, noise_spec, cfg.source, cfg.detection, args.noise)
            expected = postselect(raw, noise_spec, cfg.source).distribution
        keys = set(counts.entries)
        if any(len(k) != len(next(iter(expected))) for k in keys):
            raise InputError("counts and expected distribution use different outcome formats")
        value = tvd(normalize(counts), expected)
        unc = propagate(counts, lambda d: tvd(d, expected), args.replicates, args.seed)
        doc["tvd"] = {"value": value, "sigma": unc.sigma}
        lines.append(f"TVD {value:.4f} ± {unc.sigma:.4f}")

    _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n" if args.json else "\n".join(lines) + "\n", args.out)
    return EXIT_OK


# ---------------------------------------------------------------- surface / fit-dip


def cmd_surface(args) -> int:
    if args.grid < 32:
        raise InputError(f"--grid must be at least 32, got {args.grid}")
    vis_sets = args.visibilities or [[1.0, 1.0, 1.0]]
    axes = []
    for v in vis_sets:
        try:
            axes.append(DelayAxes(tuple(v), tuple(args.widths), args.box, args.grid))
        except (GridTooCoarse, ValueError) as exc:
            raise InputError(str(exc)) from exc
    doc: dict = {"schema_version": JSON_SCHEMA_VERSION, "volumes": []}
    lines = []
    for k, a in enumerate(axes):
        vol = nontrivial_region_volume(a, args.method, args.samples, args.seed)
        doc["volumes"].append({"visibilities": list(a.visibilities), "volume": vol.volume, "stderr": vol.stderr})
        lines.append(f"volume[{k}] V={a.visibilities} {vol.volume:.6f} ± {vol.stderr:.6f}")
        if args.out:
            path = Path(args.out)
            if len(axes) > 1:
                path = path.with_name(f"{path.stem}_{k}{path.suffix or '.mesh'}")
            isosurface(a).write(path)
            doc["volumes"][-1]["mesh"] = str(path)
    if len(axes) == 2:
        r = volume_ratio(axes[0], axes[1], args.method, args.samples, args.seed)
        doc["ratio"] = {"value": r.ratio, "stderr": r.stderr}
        lines.append(f"ratio {r.ratio:.4f} ± {r.stderr:.4f}")
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n" if args.json else "\n".join(lines) + "\n"
    sys.stdout.write(text)
    return EXIT_OK


def cmd_fit_dip(args) -> int:
    pts = read_dip_points(args.points)
    fit = fit_dip(pts)
    names = ["A", "B", "V", "x0", "sigma"]
    vals = fit.params.as_array()
    sig = fit.sigmas.as_array()
    if args.json:
        doc = {
            "schema_version": JSON_SCHEMA_VERSION,
            "params": {n: {"value": float(v), "sigma": float(s)} for n, v, s in zip(names, vals, sig)},
            "chi2": fit.chi2,
            "dof": fit.dof,
        }
        sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    else:
        for n, v, s in zip(names, vals, sig):
            sys.stdout.write(f"{n:5s} {v:.6g} ± {s:.2g}\n")
        sys.stdout.write(f"chi2/dof {fit.chi2:.4g}/{fit.dof}\n")
    return EXIT_OK


# ---------------------------------------------------------------- parser


def _add_model_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="experiment YAML file")
    p.add_argument("--configuration", choices=sorted(CONFIGURATIONS), type=str.upper)
    p.add_argument("--visibilities", nargs=3, type=float, metavar=("V_AB", "V_BC", "V_CD"))
    p.add_argument("--noise", choices=("none", "full"), default="none")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="indist", description="Multiphoton indistinguishability toolkit")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--json", action="store_true", help="machine-readable output")

    p = sub.add_parser("simulate", help="expected output distribution")
    _add_model_args(p)
    p.add_argument("--postselect", action="store_true")
    p.add_argument("--events", type=int, default=0, help="sample this many events and write counts")
    p.add_argument("--out")
    common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("bounds", help="bounds from measured chain overlaps")
    p.add_argument("--overlaps", nargs=3, type=float, required=True, metavar=("R_AB", "R_BC", "R_CD"))
    p.add_argument("--sigmas", nargs=3, type=float, metavar=("S_AB", "S_BC", "S_CD"))
    p.add_argument("--model", choices=("classical", "product", "both"), default="both")
    p.add_argument("--dimension", default="general", help="general, qubit, or an integer")
    p.add_argument("--replicates", type=int, default=DEFAULT_REPLICATES)
    p.add_argument("--out")
    common(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("counts", help="overlaps and TVD from measured counts")
    p.add_argument("counts", help="counts CSV (n1..n6,count)")
    p.add_argument("--expected", help="expected distribution CSV (n1..n6,probability)")
    _add_model_args(p)
    p.add_argument("--estimate-overlaps", action="store_true")
    p.add_argument("--tvd", action="store_true")
    p.add_argument("--correction", choices=("auto", "on", "off"), default="auto")
    p.add_argument("--replicates", type=int, default=DEFAULT_REPLICATES)
    p.add_argument("--out")
    common(p)
    p.set_defaults(func=cmd_counts)

    p = sub.add_parser("surface", help="delay-space region of non-trivial c1 bound")
    p.add_argument("--visibilities", nargs=3, type=float, action="append", metavar=("V_AB", "V_BC", "V_CD"))
    p.add_argument("--widths", nargs=3, type=float, default=[1.0, 1.0, 1.0])
    p.add_argument("--grid", type=int, default=128)
    p.add_argument("--box", type=float, default=4.0, help="half-width in units of 1/width")
    p.add_argument("--method", choices=("grid", "monte-carlo"), default="grid")
    p.add_argument("--samples", type=int, default=10_000_000)
    p.add_argument("--out", help="mesh file (suffixed per visibility set)")
    common(p)
    p.set_defaults(func=cmd_surface)

    p = sub.add_parser("fit-dip", help="fit a HOM dip scan")
    p.add_argument("points", help="CSV with delay,count[,sigma]")
    common(p)
    p.set_defaults(func=cmd_fit_dip)
    return parser


_INPUT_ERRORS = (InputError, ConfigError, CSVFormatError, EmptyCounts, InsufficientData, OutOfRangeOverlap, GridTooCoarse)
_DOMAIN_ERRORS = (DomainError, EmptyPostselection, NoConditionedEvents, NonConvergence, BoxTooSmall)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except _INPUT_ERRORS as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except _DOMAIN_ERRORS as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_DOMAIN
    except IndistError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_DOMAIN
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
