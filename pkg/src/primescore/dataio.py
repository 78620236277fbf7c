"""Dataset, score, ground-truth, profile and report files.

All writers are deterministic: fixed field order, floats serialized with full
round-trip precision (``repr``), LF line endings, no timestamps. Every format
starts with a ``# format_version=N`` comment line.

Dataset CSV layout (one row per point, rows grouped by ascending
trial_index)::

    # format_version=1
    # subject_id=...
    # session_id=...
    # classes=[{"id": 0, "name": "H"}, ...]
    trial_index,class_id,class_name,f0,...,f{D-1}

The JSONL variant carries the same information as one metadata object on the
first line followed by one point object per line. Reports are indented JSON
key/value trees; percentages are rendered as 2-decimal strings next to their
raw fractional values.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Sequence

import numpy as np

from .core import (
    ClassLabel,
    DataPoint,
    SequenceDataset,
    Trial,
    require_valid,
)
from .metrics import PrimingReport
from .scoring import ApsResult
from .synth import SynthGroundTruth

FORMAT_VERSION = 1
TOOL_VERSION = "0.1.0"

DATASET_FORMATS = ("csv", "jsonl")


class DatasetFormatError(ValueError):
    """A file could not be parsed; carries the 1-based physical line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def _fmt(x: float) -> str:
    return repr(float(x))


def _comment_lines(meta: dict[str, str]) -> list[str]:
    lines = [f"# format_version={FORMAT_VERSION}"]
    lines.extend(f"# {key}={value}" for key, value in meta.items())
    return lines


def _split_comments(text: str) -> tuple[dict[str, str], list[tuple[int, str]]]:
    """Separate leading '#' metadata lines from body lines (with line numbers)."""
    meta: dict[str, str] = {}
    body: list[tuple[int, str]] = []
    in_header = True
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if in_header and raw.startswith("#"):
            stripped = raw.lstrip("#").strip()
            if "=" in stripped:
                key, _, value = stripped.partition("=")
                meta[key.strip()] = value.strip()
            continue
        in_header = False
        if raw.strip() == "":
            continue
        body.append((lineno, raw))
    return meta, body


def _parse_csv_row(lineno: int, raw: str) -> list[str]:
    try:
        rows = list(csv.reader([raw]))
    except csv.Error as exc:
        raise DatasetFormatError(f"malformed CSV row: {exc}", line=lineno) from exc
    if not rows:
        raise DatasetFormatError("empty CSV row", line=lineno)
    return rows[0]


# ---------------------------------------------------------------------------
# datasets


def write_dataset(ds: SequenceDataset, path: str | Path, format: str = "csv") -> None:
    """Write a dataset to CSV or JSONL. Empty placeholder trials cannot be
    represented in the row-per-point layout and are rejected."""
    if format not in DATASET_FORMATS:
        raise ValueError(f"format must be one of {DATASET_FORMATS}, got {format!r}")
    if any(not t.points for t in ds.trials):
        raise ValueError("datasets with empty placeholder trials cannot be serialized")
    dim = ds.dim or 0
    classes_json = json.dumps(
        [{"id": c.id, "name": c.name} for c in ds.class_set], ensure_ascii=False
    )

    if format == "csv":
        buf = io.StringIO()
        meta = {
            "subject_id": ds.subject_id,
            "session_id": ds.session_id,
            "classes": classes_json,
        }
        buf.write("\n".join(_comment_lines(meta)) + "\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["trial_index", "class_id", "class_name"] + [f"f{j}" for j in range(dim)])
        for trial, point in ds.iter_points():
            writer.writerow(
                [trial.trial_index, trial.label.id, trial.label.name]
                + [_fmt(v) for v in point.features]
            )
        Path(path).write_text(buf.getvalue(), encoding="utf-8")
        return

    lines = [
        json.dumps(
            {
                "format_version": FORMAT_VERSION,
                "kind": "dataset",
                "subject_id": ds.subject_id,
                "session_id": ds.session_id,
                "classes": [{"id": c.id, "name": c.name} for c in ds.class_set],
            },
            ensure_ascii=False,
        )
    ]
    for trial, point in ds.iter_points():
        lines.append(
            json.dumps(
                {
                    "trial_index": trial.trial_index,
                    "class_id": trial.label.id,
                    "class_name": trial.label.name,
                    "features": [float(v) for v in point.features],
                },
                ensure_ascii=False,
            )
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


class _TrialAccumulator:
    """Rebuild trials from rows grouped by contiguous ascending trial_index."""

    def __init__(self):
        self.trials: list[Trial] = []
        self.current_index: int | None = None
        self.current_label: ClassLabel | None = None
        self.current_points: list[DataPoint] = []
        self.id_to_name: dict[int, str] = {}
        self.name_to_id: dict[str, int] = {}

    def _flush(self):
        if self.current_index is not None:
            self.trials.append(
                Trial(self.current_index, self.current_label, tuple(self.current_points))
            )
            self.current_points = []

    def add(self, lineno: int, trial_index: int, class_id: int, class_name: str, features):
        if class_id in self.id_to_name and self.id_to_name[class_id] != class_name:
            raise DatasetFormatError(
                f"class id {class_id} maps to both {self.id_to_name[class_id]!r} "
                f"and {class_name!r}",
                line=lineno,
            )
        if class_name in self.name_to_id and self.name_to_id[class_name] != class_id:
            raise DatasetFormatError(
                f"class name {class_name!r} maps to both ids "
                f"{self.name_to_id[class_name]} and {class_id}",
                line=lineno,
            )
        self.id_to_name[class_id] = class_name
        self.name_to_id[class_name] = class_id

        if self.current_index is None:
            if trial_index != 0:
                raise DatasetFormatError(
                    f"first trial_index must be 0, got {trial_index}", line=lineno
                )
            self.current_index = 0
            self.current_label = ClassLabel(class_id, class_name)
        elif trial_index == self.current_index + 1:
            self._flush()
            self.current_index = trial_index
            self.current_label = ClassLabel(class_id, class_name)
        elif trial_index != self.current_index:
            raise DatasetFormatError(
                f"non-contiguous trial_index {trial_index} after {self.current_index}",
                line=lineno,
            )
        elif self.current_label.id != class_id:
            raise DatasetFormatError(
                f"trial {trial_index} mixes class ids "
                f"{self.current_label.id} and {class_id}",
                line=lineno,
            )
        self.current_points.append(DataPoint(features, len(self.current_points)))

    def finish(self, declared_classes: list[ClassLabel] | None) -> tuple[tuple[Trial, ...], tuple[ClassLabel, ...]]:
        self._flush()
        if not self.trials:
            raise DatasetFormatError("file contains no data rows")
        if declared_classes is not None:
            return tuple(self.trials), tuple(declared_classes)
        observed = tuple(
            ClassLabel(i, self.id_to_name[i]) for i in sorted(self.id_to_name)
        )
        return tuple(self.trials), observed


def _parse_declared_classes(meta_value: str | None) -> list[ClassLabel] | None:
    if meta_value is None:
        return None
    try:
        entries = json.loads(meta_value)
        return [ClassLabel(int(e["id"]), str(e["name"])) for e in entries]
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise DatasetFormatError(f"bad classes metadata: {exc}") from exc


def read_dataset(path: str | Path, format: str = "csv") -> SequenceDataset:
    """Read and validate a dataset file; raises on parse or validation failure."""
    if format not in DATASET_FORMATS:
        raise ValueError(f"format must be one of {DATASET_FORMATS}, got {format!r}")
    text = Path(path).read_text(encoding="utf-8")
    if format == "csv":
        ds = _read_dataset_csv(text)
    else:
        ds = _read_dataset_jsonl(text)
    require_valid(ds)
    return ds


def _read_dataset_csv(text: str) -> SequenceDataset:
    meta, body = _split_comments(text)
    if not body:
        raise DatasetFormatError("file contains no header row")
    header_line, header_raw = body[0]
    header = _parse_csv_row(header_line, header_raw)
    if header[:3] != ["trial_index", "class_id", "class_name"]:
        raise DatasetFormatError(
            "header must start with trial_index,class_id,class_name", line=header_line
        )
    n_cols = len(header)
    acc = _TrialAccumulator()
    for lineno, raw in body[1:]:
        row = _parse_csv_row(lineno, raw)
        if len(row) != n_cols:
            raise DatasetFormatError(
                f"expected {n_cols} columns, got {len(row)}", line=lineno
            )
        try:
            trial_index = int(row[0])
            class_id = int(row[1])
            features = np.array([float(v) for v in row[3:]])
        except ValueError as exc:
            raise DatasetFormatError(f"bad value: {exc}", line=lineno) from exc
        acc.add(lineno, trial_index, class_id, row[2], features)
    trials, classes = acc.finish(_parse_declared_classes(meta.get("classes")))
    return SequenceDataset(
        subject_id=meta.get("subject_id", "unknown"),
        session_id=meta.get("session_id", "unknown"),
        trials=trials,
        class_set=classes,
    )


def _read_dataset_jsonl(text: str) -> SequenceDataset:
    lines = [(n, raw) for n, raw in enumerate(text.splitlines(), start=1) if raw.strip()]
    if not lines:
        raise DatasetFormatError("file is empty")
    objs: list[tuple[int, dict]] = []
    for lineno, raw in lines:
        try:
            objs.append((lineno, json.loads(raw)))
        except json.JSONDecodeError as exc:
            raise DatasetFormatError(f"bad JSON: {exc}", line=lineno) from exc

    meta: dict = {}
    if objs and objs[0][1].get("kind") == "dataset":
        meta = objs.pop(0)[1]
    declared = None
    if "classes" in meta:
        declared = [ClassLabel(int(e["id"]), str(e["name"])) for e in meta["classes"]]

    acc = _TrialAccumulator()
    for lineno, obj in objs:
        try:
            acc.add(
                lineno,
                int(obj["trial_index"]),
                int(obj["class_id"]),
                str(obj["class_name"]),
                np.array([float(v) for v in obj["features"]]),
            )
        except (KeyError, TypeError) as exc:
            raise DatasetFormatError(f"missing or bad field: {exc}", line=lineno) from exc
    trials, classes = acc.finish(declared)
    return SequenceDataset(
        subject_id=str(meta.get("subject_id", "unknown")),
        session_id=str(meta.get("session_id", "unknown")),
        trials=trials,
        class_set=classes,
    )


def datasets_equal(a: SequenceDataset, b: SequenceDataset) -> bool:
    """Exact structural and bitwise feature equality."""
    if (a.subject_id, a.session_id) != (b.subject_id, b.session_id):
        return False
    if a.class_set != b.class_set or a.n_trials != b.n_trials:
        return False
    for ta, tb in zip(a.trials, b.trials):
        if (ta.trial_index, ta.label) != (tb.trial_index, tb.label) or len(ta) != len(tb):
            return False
        for pa, pb in zip(ta.points, tb.points):
            if pa.index_in_trial != pb.index_in_trial:
                return False
            if not np.array_equal(pa.features, pb.features):
                return False
    return True


# ---------------------------------------------------------------------------
# scores / ground truth / profiles


def write_scores(aps: ApsResult, path: str | Path) -> None:
    """One row per point, dataset order: global index, structure, score, defined."""
    buf = io.StringIO()
    buf.write("\n".join(_comment_lines({})) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["point_global_index", "trial_index", "class_id", "aps_score", "defined"])
    for g in range(aps.n_points):
        writer.writerow(
            [
                g,
                int(aps.trial_indices[g]),
                int(aps.class_ids[g]),
                _fmt(aps.scores[g]),
                1 if aps.defined_mask[g] else 0,
            ]
        )
    Path(path).write_text(buf.getvalue(), encoding="utf-8")


def read_scores(path: str | Path) -> ApsResult:
    """Re-read a score file into a result (per-trial means recomputed)."""
    _, body = _split_comments(Path(path).read_text(encoding="utf-8"))
    if not body:
        raise DatasetFormatError("score file contains no header row")
    header_line, header_raw = body[0]
    header = _parse_csv_row(header_line, header_raw)
    expected = ["point_global_index", "trial_index", "class_id", "aps_score", "defined"]
    if header != expected:
        raise DatasetFormatError(f"score header must be {','.join(expected)}", line=header_line)
    scores, defined, tidx, cids = [], [], [], []
    for lineno, raw in body[1:]:
        row = _parse_csv_row(lineno, raw)
        if len(row) != 5:
            raise DatasetFormatError(f"expected 5 columns, got {len(row)}", line=lineno)
        try:
            tidx.append(int(row[1]))
            cids.append(int(row[2]))
            scores.append(float(row[3]))
            defined.append(bool(int(row[4])))
        except ValueError as exc:
            raise DatasetFormatError(f"bad value: {exc}", line=lineno) from exc
    if not scores:
        raise DatasetFormatError("score file contains no data rows")
    scores_arr = np.array(scores)
    tidx_arr = np.array(tidx, dtype=np.int64)
    n_trials = int(tidx_arr.max()) + 1
    per_trial = np.zeros(n_trials)
    for t in range(n_trials):
        sel = tidx_arr == t
        if sel.any():
            per_trial[t] = float(scores_arr[sel].mean())
    return ApsResult(
        scores=scores_arr,
        defined_mask=np.array(defined, dtype=bool),
        per_trial_mean=per_trial,
        trial_indices=tidx_arr,
        class_ids=np.array(cids, dtype=np.int64),
    )


def write_ground_truth(gt: SynthGroundTruth, path: str | Path) -> None:
    buf = io.StringIO()
    buf.write("\n".join(_comment_lines({})) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["point_global_index", "trial_index", "class_id", "weight", "primed"])
    for g in range(gt.weights.shape[0]):
        writer.writerow(
            [
                g,
                int(gt.trial_indices[g]),
                int(gt.class_ids[g]),
                _fmt(gt.weights[g]),
                1 if gt.primed[g] else 0,
            ]
        )
    Path(path).write_text(buf.getvalue(), encoding="utf-8")


def write_profile(
    mean_scores: Sequence[float],
    trial_indices: Sequence[int],
    class_ids: Sequence[int],
    path: str | Path,
) -> None:
    """Mean-score profile with trial boundary markers, for external plotting."""
    buf = io.StringIO()
    buf.write("\n".join(_comment_lines({})) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["point_global_index", "trial_index", "class_id", "mean_aps", "trial_start"])
    prev_trial = None
    for g, (s, t, c) in enumerate(zip(mean_scores, trial_indices, class_ids)):
        start = 1 if t != prev_trial else 0
        prev_trial = t
        writer.writerow([g, int(t), int(c), _fmt(s), start])
    Path(path).write_text(buf.getvalue(), encoding="utf-8")


# ---------------------------------------------------------------------------
# reports


def percent_display(fraction: float) -> str:
    """Render a fraction as a 2-decimal percentage string (0.0841 -> "8.41")."""
    return f"{fraction * 100:.2f}"


def format_priming_report(report: PrimingReport) -> dict:
    """Raw fractions plus table-style 2-decimal percentage displays."""
    return {
        "pe": report.pe,
        "pe_percent": percent_display(report.pe),
        "accuracy": report.accuracy,
        "accuracy_percent": percent_display(report.accuracy),
        "n_points": report.n_points,
        "per_trial_pe": {str(t): v for t, v in report.per_trial_pe.items()},
        "per_trial_pe_percent": {
            str(t): percent_display(v) for t, v in report.per_trial_pe.items()
        },
    }


def _arm_display(arm: dict) -> dict:
    return {
        "pe": arm["pe"],
        "pe_percent": percent_display(arm["pe"]),
        "accuracy": arm["accuracy"],
        "accuracy_percent": percent_display(arm["accuracy"]),
        "n_points": arm["n_points"],
        "per_trial_pe": dict(arm["per_trial_pe"]),
        "per_trial_pe_percent": {
            str(k): percent_display(v) for k, v in arm["per_trial_pe"].items()
        },
    }


def _summary_arm_display(summary: dict, arm: str) -> dict:
    return {
        "pe_mean": summary[f"{arm}_pe_mean"],
        "pe_mean_percent": percent_display(summary[f"{arm}_pe_mean"]),
        "pe_std": summary[f"{arm}_pe_std"],
        "accuracy_mean": summary[f"{arm}_accuracy_mean"],
        "accuracy_mean_percent": percent_display(summary[f"{arm}_accuracy_mean"]),
        "accuracy_std": summary[f"{arm}_accuracy_std"],
    }


def build_report_document(config: dict, evaluation: dict) -> dict:
    """Compose the evaluation report tree from an evaluation response body.

    ``config`` echoes the caller's effective settings; ``evaluation`` holds
    ``train_trials``, ``runs`` and ``summary`` as plain JSON-compatible dicts.
    Percentages appear both raw and as 2-decimal display strings.
    """
    summary = evaluation["summary"]
    return {
        "format_version": FORMAT_VERSION,
        "tool": {"name": "primescore", "version": TOOL_VERSION},
        "config": dict(config),
        "summary": {
            "n_runs": summary["n_runs"],
            "original": _summary_arm_display(summary, "original"),
            "filtered": _summary_arm_display(summary, "filtered"),
            "filtered_wins": summary["filtered_wins"],
            "removed_count": summary["removed_count"],
            "removed_fraction": summary["removed_fraction"],
            "removed_percent": percent_display(summary["removed_fraction"]),
            "emptied_trial_indices": list(summary["emptied_trial_indices"]),
        },
        "runs": [
            {
                "seed": run["seed"],
                "original": _arm_display(run["original"]),
                "filtered": _arm_display(run["filtered"]),
            }
            for run in evaluation["runs"]
        ],
    }


def write_report(document: dict, path: str | Path) -> None:
    """Write a report document as an indented JSON key/value tree."""
    Path(path).write_text(
        json.dumps(document, indent=2, ensure_ascii=False) + "\n", encoding="utf-8"
    )


def read_report(path: str | Path) -> dict:
    return json.loads(Path(path).read_text(encoding="utf-8"))
