"""Command-line front end.

Exit codes: 0 ok, 2 validation failure, 3 join failure, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .annotation import instance_duration, read_dataset, write_dataset
from .errors import IoFailure, PedEvalError
from .metrics_weighted import TteWeightConfig
from .plot import plot_reports
from .predlog import read_predictions, write_predictions
from .report import (
    EvalConfig,
    dumps_report,
    evaluate,
    evaluate_agreement,
    per_class_csv,
    report_to_markdown,
    write_text,
)
from .risk_grid import RiskGridConfig
from .sampler import SamplerConfig, sample_dataset, write_samples
from .scenario import FACTORS, ScenarioBinning, agreement_to_csv, cross_slice, scenario_slice, slice_to_csv
from .synth import SynthSpec, synthesize

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib


def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(v) for v in text.split(",") if v.strip())


# (flag, dest, type, help); defaults come from the config dataclasses
_CONFIG_FLAGS = [
    ("--obs-len", "obs_len", int, "observation window length in frames"),
    ("--overlap-frac", "overlap_frac", float, "overlap between consecutive windows"),
    ("--tte-min", "tte_min", int, "smallest time-to-event kept for action samples (frames)"),
    ("--tte-max", "tte_max", int, "largest time-to-event kept for action samples (frames)"),
    ("--horizon", "horizon", int, "risk prediction horizon (frames)"),
    ("--intention-bins", "intention_bins", _floats, "two cut points splitting NCI/UI/CI"),
    ("--window-origin", "window_origin", str, "action/risk windows start at 'track' or 'exp_start'"),
    ("--region-width", "region_width", float, "risk region width in pixels"),
    ("--n-regions", "n_regions", int, "number of risk regions"),
    ("--sigma-r", "sigma_r", float, "risk weight bandwidth"),
    ("--sigma-a", "sigma_a", float, "time-to-event weight bandwidth"),
    ("--tte-max-ref", "tte_max_ref", float, "reference maximum time-to-event for weighting (frames)"),
    ("--scale-bins", "scale_bins", _floats, "scale cut points in pixels"),
    ("--speed-bins", "speed_bins", _floats, "ego-speed cut points in km/h"),
    ("--factors", "factors", lambda s: tuple(s.split(",")), f"scenario factors among {','.join(FACTORS)}"),
    ("--min-samples", "min_samples", int, "bins below this size are flagged low-confidence"),
    ("--join", "join_policy", str, "join policy: strict or inner"),
    ("--auc-average", "auc_average", str, "multi-class AUC reduction: macro or weighted"),
]
_BOOL_FLAGS = [
    ("--keep-long-tte", "keep_long_tte", "keep action samples with time-to-event above --tte-max"),
    ("--per-class", "per_class_delta", "report confidence deltas for every class"),
    ("--export-weights", "export_weights", "include per-sample weights in the report"),
    ("--scenario", "scenario", "add the scenario slice table to the report"),
]


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("configuration (override --config)")
    g.add_argument("--config", type=Path, help="TOML file with the same keys as the flags")
    for flag, dest, typ, help_ in _CONFIG_FLAGS:
        g.add_argument(flag, dest=dest, type=typ, default=None, help=help_)
    for flag, dest, help_ in _BOOL_FLAGS:
        g.add_argument(flag, dest=dest, action="store_true", default=None, help=help_)
    g.add_argument("--threads", type=int, default=None, help="worker threads (env PEDEVAL_THREADS)")


def _settings(args: argparse.Namespace) -> dict:
    values = {}
    if getattr(args, "config", None):
        try:
            with open(args.config, "rb") as fh:
                raw = tomllib.load(fh)
        except OSError as exc:
            raise IoFailure(f"cannot read {args.config}: {exc}") from exc
        values.update({k.replace("-", "_"): v for k, v in raw.items()})
    for _, dest, *_ in _CONFIG_FLAGS + _BOOL_FLAGS:
        v = getattr(args, dest, None)
        if v is not None:
            values[dest] = v
    return values


def build_config(args: argparse.Namespace) -> EvalConfig:
    v = _settings(args)

    def pick(cls, *names):
        return cls(**{n: (tuple(v[n]) if isinstance(v[n], list) else v[n]) for n in names if n in v})

    sampler = pick(
        SamplerConfig,
        "obs_len", "overlap_frac", "tte_min", "tte_max", "horizon",
        "intention_bins", "keep_long_tte", "window_origin",
    )
    grid = pick(RiskGridConfig, "region_width", "n_regions", "sigma_r")
    tte = pick(TteWeightConfig, "sigma_a", "tte_max_ref")
    binning_kw = {n: tuple(v[n]) for n in ("scale_bins", "speed_bins") if n in v}
    if "factors" in v:
        binning_kw["factors"] = frozenset(v["factors"])
    if "min_samples" in v:
        binning_kw["min_samples"] = v["min_samples"]
    threads = args.threads if getattr(args, "threads", None) is not None else int(os.environ.get("PEDEVAL_THREADS", "1"))
    return EvalConfig(
        sampler=sampler,
        grid=grid,
        tte=tte,
        binning=ScenarioBinning(**binning_kw),
        join_policy=v.get("join_policy", "strict"),
        auc_average=v.get("auc_average", "macro"),
        scenario=bool(v.get("scenario", False)),
        per_class_delta=bool(v.get("per_class_delta", False)),
        export_weights=bool(v.get("export_weights", False)),
        threads=max(1, threads),
    )


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        write_text(text, out)


def cmd_ingest_check(args) -> int:
    ds = read_dataset(args.dataset)
    n_frames = sum(instance_duration(i) for i in ds.instances)
    print(f"{ds.name} [{ds.split}]: {len(ds.videos)} videos, {len(ds.instances)} instances, {n_frames} frames")
    return 0


def cmd_sample(args) -> int:
    cfg = build_config(args)
    ds = read_dataset(args.dataset)
    samples = sample_dataset(ds, args.task, cfg.sampler, cfg.grid, threads=cfg.threads)
    if args.out is None:
        raise IoFailure("--out is required for sample")
    write_samples(samples, args.out)
    print(f"{len(samples)} {args.task} samples -> {args.out}")
    return 0


def cmd_evaluate(args) -> int:
    cfg = build_config(args)
    ds = read_dataset(args.dataset)
    preds = read_predictions(args.predictions, cfg.grid.n_regions)
    report = evaluate(ds, preds, args.task, cfg, model=args.model)
    _emit(dumps_report(report), args.out)
    if args.csv:
        write_text(per_class_csv(report), args.csv)
    if args.markdown:
        write_text(report_to_markdown(report), args.markdown)
    return 0


def cmd_scenario(args) -> int:
    from .predlog import join
    from .report import select_model

    cfg = build_config(args)
    ds = read_dataset(args.dataset)
    preds = read_predictions(args.predictions, cfg.grid.n_regions)
    _, preds = select_model(preds, args.task, args.model)
    samples = sample_dataset(ds, args.task, cfg.sampler, cfg.grid, threads=cfg.threads)
    rows, _ = join(samples, preds, cfg.join_policy)
    if args.experimental_cross:
        first, second = args.experimental_cross.split(",")
        table = {f"{first}x{second}": cross_slice(rows, first, second, cfg.binning)}
    else:
        table = scenario_slice(rows, cfg.binning)
    if args.format == "csv":
        _emit(slice_to_csv(table), args.out)
    else:
        _emit(dumps_report({"scenario": table, "config_echo": cfg.echo()}), args.out)
    return 0


def cmd_agreement(args) -> int:
    cfg = build_config(args)
    ds = read_dataset(args.dataset)
    preds = read_predictions(args.predictions, cfg.grid.n_regions)
    result = evaluate_agreement(ds, preds, cfg, model=args.model)
    if args.format == "csv":
        from .scenario import AgreementCell

        _emit(agreement_to_csv([AgreementCell(**c) for c in result["cells"]]), args.out)
    else:
        _emit(dumps_report(result), args.out)
    return 0


def cmd_synth(args) -> int:
    spec = SynthSpec(
        n_instances=args.n_instances,
        track_len_range=(args.min_len, args.max_len),
        crossing_frac=args.crossing_frac,
        intention_prob_law=args.intention_law,
        predictor=args.predictor,
        epsilon=args.epsilon,
        constant=args.constant,
        seed=args.seed,
        joint=args.joint,
    )
    ds, preds = synthesize(spec)
    write_dataset(ds, args.out_dataset)
    write_predictions(preds, args.out_predictions)
    print(f"{len(ds.instances)} instances -> {args.out_dataset}; {len(preds)} predictions -> {args.out_predictions}")
    return 0


def cmd_plot(args) -> int:
    for path in plot_reports(args.reports, args.out_dir):
        print(path)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pedeval", description="Pedestrian behaviour benchmark evaluation")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest-check", help="validate a dataset file")
    p.add_argument("dataset", type=Path)
    p.set_defaults(func=cmd_ingest_check)

    p = sub.add_parser("sample", help="export task samples as JSONL")
    p.add_argument("dataset", type=Path)
    p.add_argument("--task", required=True, choices=("intention", "action", "risk"))
    p.add_argument("--out", type=Path)
    _add_config_flags(p)
    p.set_defaults(func=cmd_sample)

    for name, func, help_ in (
        ("evaluate", cmd_evaluate, "compute the full metric report"),
        ("scenario", cmd_scenario, "metrics per scenario factor bin"),
    ):
        p = sub.add_parser(name, help=help_)
        p.add_argument("dataset", type=Path)
        p.add_argument("predictions", type=Path)
        p.add_argument("--task", required=True, choices=("intention", "action", "risk"))
        p.add_argument("--model")
        p.add_argument("--out", type=Path)
        _add_config_flags(p)
        p.set_defaults(func=func)
        if name == "evaluate":
            p.add_argument("--csv", type=Path, help="per-class table")
            p.add_argument("--markdown", type=Path, help="human-readable summary")
        else:
            p.add_argument("--format", choices=("json", "csv"), default="json")
            p.add_argument("--experimental-cross", metavar="F1,F2", help="two-factor cross product")

    p = sub.add_parser("agreement", help="intention/action joint correctness table")
    p.add_argument("dataset", type=Path)
    p.add_argument("predictions", type=Path)
    p.add_argument("--model")
    p.add_argument("--out", type=Path)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    _add_config_flags(p)
    p.set_defaults(func=cmd_agreement)

    p = sub.add_parser("synth", help="generate a seeded synthetic dataset and prediction log")
    p.add_argument("--out-dataset", type=Path, required=True)
    p.add_argument("--out-predictions", type=Path, required=True)
    p.add_argument("--n-instances", type=int, default=200)
    p.add_argument("--min-len", type=int, default=40)
    p.add_argument("--max-len", type=int, default=180)
    p.add_argument("--crossing-frac", type=float, default=0.3)
    p.add_argument("--intention-law", choices=("uniform", "bimodal"), default="bimodal")
    p.add_argument("--predictor", choices=("oracle", "noisy", "constant", "anti_oracle"), default="noisy")
    p.add_argument("--epsilon", type=float, default=0.3)
    p.add_argument("--constant", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--joint", action="store_true", help="also predict actions on intention windows")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("plot", help="per-class AP bar charts as SVG")
    p.add_argument("reports", type=Path, nargs="+")
    p.add_argument("--out-dir", type=Path, default=Path("."))
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except PedEvalError as exc:
        print(f"pedeval: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except ValueError as exc:
        print(f"pedeval: invalid configuration: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
