"""Command-line front end.

Commands: attractor | individual | slices | chaos | verify | render.
Configuration comes from an optional JSON file plus flag overrides (flags
win).  Exit codes: 0 success, 2 configuration error, 3 non-convergence,
4 assumption violation.  CHOICE_DYN_THREADS caps internal parallelism.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field, fields

from . import models, verify
from .restricted import enumerate_slices, save_slice_report, vertex_limits, verify_decomposition
from .setdyn import (
    AssumptionViolation,
    PointCloud,
    chaos_game,
    compute_K,
    directed_distance,
    individual_attractor,
)
from .sofic import SoficPresentation, builtin
from .svgplot import write_scatter
from .symbolic import parse_strategy

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NOCONV = 3
EXIT_ASSUMPTION = 4


class ConfigError(ValueError):
    pass


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON config file; flags override its entries")
    p.add_argument("--model", help=f"model name, one of {', '.join(models.MODEL_NAMES)}")
    p.add_argument(
        "--delta", type=float, help="grid resolution (default 0.01; discrete models use 0)"
    )
    p.add_argument("--tol", type=float, help="convergence tolerance (default: delta)")
    p.add_argument("--maxiter", type=int, help="iteration cap (default 1000)")
    p.add_argument("--strategy", help='strategy string "PRE(PER)", e.g. "(10)"')
    p.add_argument("--subshift", help="builtin presentation name or a graph text file")
    p.add_argument("--out", default="out", help="output directory (default ./out)")
    p.add_argument("--seed", type=int, help="RNG seed for the chaos game")
    p.add_argument("--only", help="run a single acceptance criterion, e.g. C3")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="choicedyn",
        description="Attractors for discrete-time dynamics with choice.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, doc in (
        ("attractor", "compute the global attractor cloud K and write k.csv/k.svg"),
        ("individual", "compute the individual attractor A_w for --strategy"),
        ("slices", "compute restricted-choice slices for --subshift"),
        ("chaos", "run the chaos game and report the observable average"),
        ("verify", "run the acceptance criteria and write verify.json"),
        ("render", "re-render a point-cloud CSV as an SVG scatter"),
    ):
        p = sub.add_parser(name, help=doc)
        _add_common(p)
        if name == "render":
            p.add_argument("csv", help="input CSV file")
    return parser


@dataclass
class RunConfig:
    """Run settings merged from a JSON config file and CLI flags (flags win)."""

    model: str = None
    params: dict = field(default_factory=dict)
    delta: float = None
    tol: float = None
    maxiter: int = 1000
    strategy: str = None
    subshift: str = None
    out: str = "out"
    seed: int = 0
    only: str = None
    probs: list = None
    steps: int = 100_000
    burnin: int = None
    window: int = None
    x0: list = None
    period_bound: int = 6

    @classmethod
    def load(cls, args) -> "RunConfig":
        data = {}
        if args.config:
            try:
                data = models.load_config(args.config)
            except (OSError, ValueError) as exc:
                raise ConfigError(f"cannot load config {args.config!r}: {exc}")
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config entries: {sorted(unknown)}")
        for key in ("model", "delta", "tol", "maxiter", "strategy", "subshift", "seed", "only"):
            val = getattr(args, key, None)
            if val is not None:
                data[key] = val
        if getattr(args, "out", None) is not None:
            data.setdefault("out", args.out)
            if args.out != "out":
                data["out"] = args.out
        return cls(**data)


def _model_from(cfg: RunConfig):
    if not cfg.model:
        raise ConfigError("no model selected; pass --model or a config file")
    try:
        model = models.build_model(cfg.model, cfg.params)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc))
    delta = cfg.delta
    if delta is None:
        delta = 0.0 if model.discrete else 0.01
    return model, float(delta)


def _subshift_from(cfg: RunConfig, n_symbols: int) -> SoficPresentation:
    name = cfg.subshift
    if not name:
        raise ConfigError("no subshift selected; pass --subshift NAME|PATH")
    if os.path.exists(name):
        with open(name, "r", encoding="utf-8") as fh:
            pres = SoficPresentation.from_text(fh.read(), n_symbols=n_symbols)
    else:
        try:
            pres = builtin(name, n_symbols=n_symbols)
        except ValueError as exc:
            raise ConfigError(str(exc))
    if pres.is_empty:
        raise ConfigError(f"subshift {name!r} is empty")
    return pres


def _plot_limits(model):
    if model.name.startswith("malaria"):
        return (0.0, 1.0), (0.0, 1.0)
    return None, None


def _write_cloud(out_dir: str, stem: str, cloud: PointCloud, model) -> None:
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, f"{stem}.csv"), "w", encoding="utf-8") as fh:
        fh.write(cloud.to_csv())
    xlim, ylim = _plot_limits(model)
    write_scatter(os.path.join(out_dir, f"{stem}.svg"), cloud.points, xlim=xlim, ylim=ylim)


def cmd_attractor(args) -> int:
    cfg = RunConfig.load(args)
    model, delta = _model_from(cfg)
    report = compute_K(model, delta, tol=cfg.tol, maxiter=cfg.maxiter)
    _write_cloud(cfg.out, "k", report.cloud, model)
    print(
        f"K: {report.cloud.n} points at delta={delta}, "
        f"{report.iterations} iterations, residual {report.residual:.3e}"
    )
    if not report.converged:
        print("attractor iteration did NOT converge", file=sys.stderr)
        return EXIT_NOCONV
    return EXIT_OK


def cmd_individual(args) -> int:
    cfg = RunConfig.load(args)
    model, delta = _model_from(cfg)
    if not cfg.strategy:
        raise ConfigError("individual needs --strategy")
    try:
        w = parse_strategy(str(cfg.strategy))
    except ValueError as exc:
        raise ConfigError(str(exc))
    report = individual_attractor(model, w, delta, burnin=cfg.burnin, window=cfg.window)
    _write_cloud(cfg.out, "a_w", report.cloud, model)
    print(
        f"A_{w}: {report.cloud.n} points, {report.iterations} steps, residual {report.residual:.3e}"
    )
    k_path = os.path.join(cfg.out, "k.csv")
    if os.path.exists(k_path):
        with open(k_path, "r", encoding="utf-8") as fh:
            K = PointCloud.from_csv(fh.read(), delta)
        print(f"containment residual A_w -> K: {directed_distance(report.cloud, K, model):.3e}")
    if not report.converged:
        print("tail cycle not found inside the window", file=sys.stderr)
        return EXIT_NOCONV
    return EXIT_OK


def cmd_slices(args) -> int:
    cfg = RunConfig.load(args)
    model, delta = _model_from(cfg)
    pres = _subshift_from(cfg, model.n_maps)
    family = vertex_limits(model, pres, delta, tol=cfg.tol, maxiter=cfg.maxiter)
    report = enumerate_slices(model, pres, family, period_bound=cfg.period_bound)
    save_slice_report(report, cfg.out)
    ok, residuals = verify_decomposition(report, model)
    print(f"distinct slices: {len(report.slices)}")
    print(
        f"decomposition residuals: union {residuals['union']:.3e}, mapped {residuals['mapped']:.3e}"
        f" ({'ok' if ok else 'FAILED'})"
    )
    if not family.all_converged:
        print("vertex family did NOT converge", file=sys.stderr)
        return EXIT_NOCONV
    return EXIT_OK


def cmd_chaos(args) -> int:
    cfg = RunConfig.load(args)
    model, delta = _model_from(cfg)
    probs = cfg.probs if cfg.probs is not None else [1.0 / model.n_maps] * model.n_maps
    steps = int(cfg.steps)
    burnin = int(cfg.burnin) if cfg.burnin is not None else min(1000, steps // 10)
    x0 = cfg.x0
    if x0 is None:
        x0 = [(lo + hi) / 2.0 for lo, hi in zip(model.lower, model.upper)]
    try:
        cloud, mean = chaos_game(
            model,
            probs=probs,
            x0=x0,
            steps=steps,
            burnin=burnin,
            rng_seed=int(cfg.seed),
            delta=delta,
        )
    except ValueError as exc:
        raise ConfigError(str(exc))
    _write_cloud(cfg.out, "chaos", cloud, model)
    print(f"chaos game: {cloud.n} distinct points, observable mean {mean!r}")
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = RunConfig.load(args)
    kwargs = {}
    if "pset0" in cfg.params:
        kwargs["pset0"] = models.MalariaParams(**cfg.params["pset0"], dt=cfg.params.get("dt", 0.05))
    if "pset1" in cfg.params:
        kwargs["pset1"] = models.MalariaParams(**cfg.params["pset1"], dt=cfg.params.get("dt", 0.05))
    try:
        ctx = verify.Context(**kwargs)
        results = verify.run(only=cfg.only, ctx=ctx, echo=print)
    except ValueError as exc:
        raise ConfigError(str(exc))
    os.makedirs(cfg.out, exist_ok=True)
    with open(os.path.join(cfg.out, "verify.json"), "w", encoding="utf-8") as fh:
        json.dump(verify.to_json(results), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return EXIT_OK if all(r.passed for r in results) else 1


def cmd_render(args) -> int:
    cfg = RunConfig.load(args)
    try:
        with open(args.csv, "r", encoding="utf-8") as fh:
            cloud = PointCloud.from_csv(fh.read(), cfg.delta if cfg.delta is not None else 0.0)
    except (OSError, ValueError) as exc:
        raise ConfigError(f"cannot read {args.csv!r}: {exc}")
    os.makedirs(cfg.out, exist_ok=True)
    stem = os.path.splitext(os.path.basename(args.csv))[0]
    out_path = os.path.join(cfg.out, f"{stem}.svg")
    write_scatter(out_path, cloud.points)
    print(f"wrote {out_path}")
    return EXIT_OK


_COMMANDS = {
    "attractor": cmd_attractor,
    "individual": cmd_individual,
    "slices": cmd_slices,
    "chaos": cmd_chaos,
    "verify": cmd_verify,
    "render": cmd_render,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = _COMMANDS[args.command]
    try:
        return handler(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except AssumptionViolation as exc:
        print(f"assumption violation: {exc}", file=sys.stderr)
        return EXIT_ASSUMPTION


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
