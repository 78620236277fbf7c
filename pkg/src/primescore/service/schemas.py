"""Request/response bodies and converters between them and the core types.

Datasets travel as a class catalog plus per-trial point matrices; floats pass
through JSON with shortest round-trip serialization, so a dataset that goes
through the service and back is bitwise identical.
"""

from __future__ import annotations

from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..classifiers import TrainConfig
from ..core import ClassLabel, DataPoint, SequenceDataset, Trial
from ..filtering import FilterConfig, FilterOutcome
from ..metrics import PrimingReport
from ..pipeline import EvaluationResult
from ..scoring import ApsConfig, ApsResult
from ..synth import SynthGroundTruth


class ClassLabelModel(BaseModel):
    id: int = Field(ge=0)
    name: str = Field(min_length=1)


class TrialModel(BaseModel):
    trial_index: int = Field(ge=0)
    class_id: int = Field(ge=0)
    points: list[list[float]]


class DatasetModel(BaseModel):
    subject_id: str = "unknown"
    session_id: str = "unknown"
    classes: list[ClassLabelModel] = Field(min_length=1)
    trials: list[TrialModel] = Field(min_length=1)


class ScoreOptions(BaseModel):
    temperature: float = Field(default=0.1, gt=0)
    warmup_trials: int | None = Field(default=None, ge=0)


class ScoreSetModel(BaseModel):
    scores: list[float]
    defined: list[bool]
    trial_indices: list[int]
    class_ids: list[int]
    per_trial_mean: list[float]


class ScoreRequest(BaseModel):
    dataset: DatasetModel
    options: ScoreOptions = ScoreOptions()


class ScoreResponse(BaseModel):
    result: ScoreSetModel
    warmup_trials_used: int


class FilterOptions(BaseModel):
    threshold: float = Field(default=0.7, gt=0, le=1)


class FilterRequest(BaseModel):
    dataset: DatasetModel
    scores: ScoreSetModel
    options: FilterOptions = FilterOptions()


class FilterResponse(BaseModel):
    dataset: DatasetModel
    removed_count: int
    removed_fraction: float
    removed_index_list: list[list[int]]
    emptied_trial_indices: list[int]


class TrainOptions(BaseModel):
    model_config = ConfigDict(protected_namespaces=())

    model_kind: Literal["nearest_centroid", "softmax_regression"] = "softmax_regression"
    learning_rate: float = Field(default=0.1, gt=0)
    weight_decay: float = Field(default=1e-5, ge=0)
    epochs: int = Field(default=1000, ge=1)


class EvaluateOptions(BaseModel):
    train_trials: int = Field(ge=1)
    seeds: list[int] = Field(default=[0, 1, 2, 3, 4], min_length=1)
    score: ScoreOptions = ScoreOptions()
    filter: FilterOptions = FilterOptions()
    train: TrainOptions = TrainOptions()


class EvaluateRequest(BaseModel):
    dataset: DatasetModel
    options: EvaluateOptions


class ArmReportModel(BaseModel):
    pe: float
    accuracy: float
    n_points: int
    per_trial_pe: dict[str, float]


class RunModel(BaseModel):
    seed: int
    original: ArmReportModel
    filtered: ArmReportModel


class SummaryModel(BaseModel):
    n_runs: int
    original_pe_mean: float
    original_pe_std: float
    filtered_pe_mean: float
    filtered_pe_std: float
    original_accuracy_mean: float
    original_accuracy_std: float
    filtered_accuracy_mean: float
    filtered_accuracy_std: float
    filtered_wins: int
    removed_count: int
    removed_fraction: float
    emptied_trial_indices: list[int]


class EvaluateResponse(BaseModel):
    train_trials: int
    runs: list[RunModel]
    summary: SummaryModel


class SynthOptions(BaseModel):
    preset: Literal["seed-like", "random"] = "seed-like"
    seed: int = 0
    points_per_trial: int = Field(default=40, ge=1)
    dim: int = Field(default=4, ge=2)
    noise_sigma: float = Field(default=0.5, gt=0)
    contamination: float = Field(default=0.8, ge=0, le=1)
    decay: float = Field(default=0.9, gt=0, le=1)
    n_classes: int = Field(default=4, ge=2)
    n_trials: int = Field(default=12, ge=2)


class SynthesizeRequest(BaseModel):
    options: SynthOptions = SynthOptions()


class GroundTruthModel(BaseModel):
    weights: list[float]
    primed: list[bool]
    trial_indices: list[int]
    class_ids: list[int]


class SynthesizeResponse(BaseModel):
    dataset: DatasetModel
    ground_truth: GroundTruthModel


class ProfileRequest(BaseModel):
    score_sets: list[ScoreSetModel] = Field(min_length=1)


class ProfileResponse(BaseModel):
    mean_scores: list[float]
    trial_indices: list[int]
    class_ids: list[int]


class HealthResponse(BaseModel):
    status: str
    tool_version: str
    format_version: int


# ---------------------------------------------------------------------------
# converters


def dataset_to_model(ds: SequenceDataset) -> DatasetModel:
    return DatasetModel(
        subject_id=ds.subject_id,
        session_id=ds.session_id,
        classes=[ClassLabelModel(id=c.id, name=c.name) for c in ds.class_set],
        trials=[
            TrialModel(
                trial_index=t.trial_index,
                class_id=t.label.id,
                points=[[float(v) for v in p.features] for p in t.points],
            )
            for t in ds.trials
        ],
    )


def model_to_dataset(m: DatasetModel) -> SequenceDataset:
    catalog = {c.id: ClassLabel(c.id, c.name) for c in m.classes}
    trials = []
    for t in m.trials:
        label = catalog.get(t.class_id)
        if label is None:
            raise ValueError(
                f"trial {t.trial_index} references class id {t.class_id} "
                "absent from the class catalog"
            )
        points = tuple(
            DataPoint(np.asarray(row, dtype=np.float64), k)
            for k, row in enumerate(t.points)
        )
        trials.append(Trial(t.trial_index, label, points))
    return SequenceDataset(
        subject_id=m.subject_id,
        session_id=m.session_id,
        trials=tuple(trials),
        class_set=tuple(catalog[i] for i in sorted(catalog)),
    )


def scores_to_model(aps: ApsResult) -> ScoreSetModel:
    return ScoreSetModel(
        scores=[float(v) for v in aps.scores],
        defined=[bool(v) for v in aps.defined_mask],
        trial_indices=[int(v) for v in aps.trial_indices],
        class_ids=[int(v) for v in aps.class_ids],
        per_trial_mean=[float(v) for v in aps.per_trial_mean],
    )


def model_to_scores(m: ScoreSetModel) -> ApsResult:
    return ApsResult(
        scores=np.asarray(m.scores, dtype=np.float64),
        defined_mask=np.asarray(m.defined, dtype=bool),
        per_trial_mean=np.asarray(m.per_trial_mean, dtype=np.float64),
        trial_indices=np.asarray(m.trial_indices, dtype=np.int64),
        class_ids=np.asarray(m.class_ids, dtype=np.int64),
    )


def options_to_aps_config(opts: ScoreOptions) -> ApsConfig:
    return ApsConfig(temperature=opts.temperature, warmup_trials=opts.warmup_trials)


def options_to_filter_config(opts: FilterOptions) -> FilterConfig:
    return FilterConfig(threshold=opts.threshold)


def options_to_train_config(opts: TrainOptions) -> TrainConfig:
    return TrainConfig(
        model_kind=opts.model_kind,
        learning_rate=opts.learning_rate,
        weight_decay=opts.weight_decay,
        epochs=opts.epochs,
    )


def report_to_model(report: PrimingReport) -> ArmReportModel:
    return ArmReportModel(
        pe=report.pe,
        accuracy=report.accuracy,
        n_points=report.n_points,
        per_trial_pe={str(t): v for t, v in report.per_trial_pe.items()},
    )


def outcome_to_filter_response(outcome: FilterOutcome) -> FilterResponse:
    return FilterResponse(
        dataset=dataset_to_model(outcome.kept),
        removed_count=outcome.removed_count,
        removed_fraction=outcome.removed_fraction,
        removed_index_list=[list(t) for t in outcome.removed_index_list],
        emptied_trial_indices=list(outcome.emptied_trial_indices),
    )


def evaluation_to_response(result: EvaluationResult) -> EvaluateResponse:
    return EvaluateResponse(
        train_trials=result.train_trials,
        runs=[
            RunModel(
                seed=r.seed,
                original=report_to_model(r.original),
                filtered=report_to_model(r.filtered),
            )
            for r in result.runs
        ],
        summary=SummaryModel(**result.summary()),
    )


def ground_truth_to_model(gt: SynthGroundTruth) -> GroundTruthModel:
    return GroundTruthModel(
        weights=[float(v) for v in gt.weights],
        primed=[bool(v) for v in gt.primed],
        trial_indices=[int(v) for v in gt.trial_indices],
        class_ids=[int(v) for v in gt.class_ids],
    )
