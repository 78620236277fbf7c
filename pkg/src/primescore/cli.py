"""Command line front end.

Every command is a thin client over the HTTP service: file parsing and
writing happen locally, computation happens behind the service routes. By
default the service is mounted in-process, so no server is needed; pass
``--server URL`` to target a running instance (see ``serve``).

Exit codes: 0 success, 1 data or runtime failure (unreadable or invalid
files, rejected datasets, failed training), 2 usage or configuration errors
(bad flags, bad config files, out-of-range options).

Options may also come from a ``--config`` file of ``key = value`` lines
(``#`` starts a comment); explicit flags win over config values, config
values win over defaults.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Any, Callable

from .client import ServiceClient, ServiceError
from .core import DatasetValidationError
from .dataio import (
    DATASET_FORMATS,
    FORMAT_VERSION,
    TOOL_VERSION,
    DatasetFormatError,
    build_report_document,
    percent_display,
    read_dataset,
    read_scores,
    write_dataset,
    write_ground_truth,
    write_profile,
    write_report,
    write_scores,
)
from .service.schemas import (
    DatasetModel,
    GroundTruthModel,
    ScoreSetModel,
    dataset_to_model,
    model_to_dataset,
    model_to_scores,
    scores_to_model,
)
from .synth import PRESETS, SynthGroundTruth

import numpy as np


class ConfigError(Exception):
    """A config file problem; reported as a usage error (exit code 2)."""


def _parse_seeds(text: str) -> list[int]:
    try:
        seeds = [int(part) for part in text.split(",") if part.strip() != ""]
    except ValueError:
        raise ValueError(f"seeds must be comma-separated integers, got {text!r}")
    if not seeds:
        raise ValueError("seeds must contain at least one integer")
    return seeds


def _choice_of(options: tuple[str, ...]) -> Callable[[str], str]:
    def parse(text: str) -> str:
        if text not in options:
            raise ValueError(f"must be one of {', '.join(options)}; got {text!r}")
        return text

    return parse


def _parse_config_file(path: str) -> dict[str, str]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value, got {raw!r}")
        key, _, value = line.partition("=")
        values[key.strip()] = value.strip()
    return values


def _resolve_options(
    args: argparse.Namespace,
    table: dict[str, tuple[Any, Callable[[str], Any]]],
) -> dict[str, Any]:
    """Merge flag values, config-file values and defaults, flags winning."""
    config = _parse_config_file(args.config) if getattr(args, "config", None) else {}
    unknown = set(config) - set(table)
    if unknown:
        raise ConfigError(
            f"unknown config keys: {', '.join(sorted(unknown))}; "
            f"known keys: {', '.join(sorted(table))}"
        )
    resolved: dict[str, Any] = {}
    for key, (default, parse) in table.items():
        flag_value = getattr(args, key, None)
        if flag_value is not None:
            resolved[key] = flag_value
        elif key in config:
            try:
                resolved[key] = parse(config[key])
            except ValueError as exc:
                raise ConfigError(f"config key {key}: {exc}") from exc
        else:
            resolved[key] = default
    return resolved


def _client(args: argparse.Namespace) -> ServiceClient:
    return ServiceClient(base_url=getattr(args, "server", None))


# ---------------------------------------------------------------------------
# commands


_SCORE_TABLE = {
    "input_format": ("csv", _choice_of(DATASET_FORMATS)),
    "tau": (0.1, float),
    "warmup": (None, int),
}


def cmd_score(args: argparse.Namespace) -> int:
    v = _resolve_options(args, _SCORE_TABLE)
    ds = read_dataset(args.input, format=v["input_format"])
    payload = {
        "dataset": dataset_to_model(ds).model_dump(),
        "options": {
            "temperature": v["tau"],
            "warmup_trials": v["warmup"],
        },
    }
    with _client(args) as client:
        resp = client.score(payload)
    aps = model_to_scores(ScoreSetModel(**resp["result"]))
    write_scores(aps, args.out)
    defined = int(aps.defined_mask.sum())
    print(
        f"scored {aps.n_points} points in {ds.n_trials} trials "
        f"(warmup={resp['warmup_trials_used']}, defined={defined})"
    )
    for trial in ds.trials:
        print(
            f"trial {trial.trial_index:>3} class={trial.label.name} "
            f"mean_aps={aps.per_trial_mean[trial.trial_index]:.6f}"
        )
    print(f"scores written to {args.out}")
    return 0


_EVALUATE_TABLE = {
    "input_format": ("csv", _choice_of(DATASET_FORMATS)),
    "train_trials": (None, int),
    "seeds": ([0, 1, 2, 3, 4], _parse_seeds),
    "tau": (0.1, float),
    "warmup": (None, int),
    "threshold": (0.7, float),
    "model": ("softmax_regression", _choice_of(("nearest_centroid", "softmax_regression"))),
    "learning_rate": (0.1, float),
    "weight_decay": (1e-5, float),
    "epochs": (1000, int),
}


def cmd_evaluate(args: argparse.Namespace) -> int:
    v = _resolve_options(args, _EVALUATE_TABLE)
    if v["train_trials"] is None:
        raise ConfigError("train_trials is required (flag --train-trials or config key)")
    ds = read_dataset(args.input, format=v["input_format"])
    payload = {
        "dataset": dataset_to_model(ds).model_dump(),
        "options": {
            "train_trials": v["train_trials"],
            "seeds": v["seeds"],
            "score": {
                "temperature": v["tau"],
                "warmup_trials": v["warmup"],
            },
            "filter": {"threshold": v["threshold"]},
            "train": {
                "model_kind": v["model"],
                "learning_rate": v["learning_rate"],
                "weight_decay": v["weight_decay"],
                "epochs": v["epochs"],
            },
        },
    }
    with _client(args) as client:
        resp = client.evaluate(payload)

    config_echo = {
        "input": str(args.input),
        "input_format": v["input_format"],
        "train_trials": v["train_trials"],
        "seeds": v["seeds"],
        "tau": v["tau"],
        "warmup": v["warmup"],
        "threshold": v["threshold"],
        "model": v["model"],
        "learning_rate": v["learning_rate"],
        "weight_decay": v["weight_decay"],
        "epochs": v["epochs"],
    }
    document = build_report_document(config_echo, resp)
    write_report(document, args.out)

    s = resp["summary"]
    n_train_points = sum(
        len(t.points) for t in ds.trials[: v["train_trials"]]
    )
    print(
        f"evaluated {s['n_runs']} seeds on {ds.n_trials - v['train_trials']} test trials "
        f"(train_trials={v['train_trials']})"
    )
    print(
        f"original  pe={percent_display(s['original_pe_mean'])}%  "
        f"accuracy={percent_display(s['original_accuracy_mean'])}%"
    )
    print(
        f"filtered  pe={percent_display(s['filtered_pe_mean'])}%  "
        f"accuracy={percent_display(s['filtered_accuracy_mean'])}%"
    )
    print(
        f"removed {s['removed_count']}/{n_train_points} training points "
        f"({percent_display(s['removed_fraction'])}%), "
        f"filtered wins {s['filtered_wins']}/{s['n_runs']}"
    )
    print(f"report written to {args.out}")
    return 0


_SYNTH_TABLE = {
    "output_format": ("csv", _choice_of(DATASET_FORMATS)),
    "preset": ("seed-like", _choice_of(PRESETS)),
    "seed": (0, int),
    "points_per_trial": (40, int),
    "dim": (4, int),
    "noise_sigma": (0.5, float),
    "contamination": (0.8, float),
    "decay": (0.9, float),
    "n_classes": (4, int),
    "n_trials": (12, int),
}


def cmd_synth(args: argparse.Namespace) -> int:
    v = _resolve_options(args, _SYNTH_TABLE)
    payload = {
        "options": {
            "preset": v["preset"],
            "seed": v["seed"],
            "points_per_trial": v["points_per_trial"],
            "dim": v["dim"],
            "noise_sigma": v["noise_sigma"],
            "contamination": v["contamination"],
            "decay": v["decay"],
            "n_classes": v["n_classes"],
            "n_trials": v["n_trials"],
        }
    }
    with _client(args) as client:
        resp = client.synthesize(payload)
    ds = model_to_dataset(DatasetModel(**resp["dataset"]))
    write_dataset(ds, args.out, format=v["output_format"])
    print(
        f"wrote {ds.n_trials} trials, {ds.n_points} points, "
        f"{len(ds.class_set)} classes to {args.out}"
    )
    if args.ground_truth:
        gm = GroundTruthModel(**resp["ground_truth"])
        gt = SynthGroundTruth(
            weights=np.asarray(gm.weights, dtype=np.float64),
            primed=np.asarray(gm.primed, dtype=bool),
            trial_indices=np.asarray(gm.trial_indices, dtype=np.int64),
            class_ids=np.asarray(gm.class_ids, dtype=np.int64),
        )
        write_ground_truth(gt, args.ground_truth)
        print(f"ground truth written to {args.ground_truth}")
    return 0


def cmd_profile(args: argparse.Namespace) -> int:
    score_sets = [read_scores(path) for path in args.inputs]
    payload = {
        "score_sets": [scores_to_model(aps).model_dump() for aps in score_sets]
    }
    with _client(args) as client:
        resp = client.profile(payload)
    write_profile(
        resp["mean_scores"], resp["trial_indices"], resp["class_ids"], args.out
    )
    print(
        f"averaged {len(score_sets)} score sets over {len(resp['mean_scores'])} points"
    )
    print(f"profile written to {args.out}")
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service.app import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port, log_level="warning")
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="primescore",
        description="Score, filter and evaluate trial-structured sequential datasets.",
    )
    parser.add_argument(
        "--version",
        action="version",
        version=f"primescore {TOOL_VERSION} (file format {FORMAT_VERSION})",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="key = value options file")
        p.add_argument("--server", help="base URL of a running service (default: in-process)")

    p_score = sub.add_parser("score", help="score every point of a dataset")
    p_score.add_argument("--input", required=True, help="dataset file")
    p_score.add_argument("--input-format", dest="input_format", choices=DATASET_FORMATS)
    p_score.add_argument("--out", required=True, help="score CSV to write")
    p_score.add_argument("--tau", type=float, help="softmax temperature (default 0.1)")
    p_score.add_argument("--warmup", type=int, help="warm-up trials (default: distinct class count)")
    add_common(p_score)
    p_score.set_defaults(func=cmd_score)

    p_eval = sub.add_parser(
        "evaluate", help="paired original-vs-filtered classifier evaluation"
    )
    p_eval.add_argument("--input", required=True, help="dataset file")
    p_eval.add_argument("--input-format", dest="input_format", choices=DATASET_FORMATS)
    p_eval.add_argument("--out", required=True, help="report JSON to write")
    p_eval.add_argument("--train-trials", dest="train_trials", type=int)
    p_eval.add_argument("--seeds", type=_parse_seeds, help="comma-separated, e.g. 0,1,2")
    p_eval.add_argument("--tau", type=float, help="softmax temperature (default 0.1)")
    p_eval.add_argument("--warmup", type=int, help="warm-up trials (default: distinct class count)")
    p_eval.add_argument("--threshold", type=float)
    p_eval.add_argument(
        "--model",
        choices=("nearest_centroid", "softmax_regression"),
    )
    p_eval.add_argument("--learning-rate", dest="learning_rate", type=float)
    p_eval.add_argument("--weight-decay", dest="weight_decay", type=float)
    p_eval.add_argument("--epochs", type=int)
    add_common(p_eval)
    p_eval.set_defaults(func=cmd_evaluate)

    p_synth = sub.add_parser("synth", help="generate a synthetic dataset")
    p_synth.add_argument("--out", required=True, help="dataset file to write")
    p_synth.add_argument(
        "--output-format", dest="output_format", choices=DATASET_FORMATS
    )
    p_synth.add_argument("--ground-truth", dest="ground_truth", help="ground-truth CSV to write")
    p_synth.add_argument("--preset", choices=PRESETS)
    p_synth.add_argument("--seed", type=int)
    p_synth.add_argument("--points-per-trial", dest="points_per_trial", type=int)
    p_synth.add_argument("--dim", type=int)
    p_synth.add_argument("--noise-sigma", dest="noise_sigma", type=float)
    p_synth.add_argument("--contamination", type=float)
    p_synth.add_argument("--decay", type=float)
    p_synth.add_argument("--n-classes", dest="n_classes", type=int)
    p_synth.add_argument("--n-trials", dest="n_trials", type=int)
    add_common(p_synth)
    p_synth.set_defaults(func=cmd_synth)

    p_profile = sub.add_parser("profile", help="average score files point-by-point")
    p_profile.add_argument(
        "--inputs",
        required=True,
        type=lambda s: [p for p in s.split(",") if p],
        help="comma-separated score CSV files",
    )
    p_profile.add_argument("--out", required=True, help="profile CSV to write")
    add_common(p_profile)
    p_profile.set_defaults(func=cmd_profile)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ServiceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2 if exc.status_code == 422 else 1
    except (DatasetFormatError, DatasetValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
