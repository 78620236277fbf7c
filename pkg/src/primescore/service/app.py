"""FastAPI application assembling the scoring pipeline behind HTTP routes.

Body-shape problems are rejected by the schema layer with 422; anything the
core raises about the data itself (validation violations, misaligned scores,
degenerate splits, failed training) comes back as 400 with a structured
detail object.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from ..core import DatasetValidationError
from ..dataio import FORMAT_VERSION, TOOL_VERSION
from ..filtering import filter_by_aps
from ..pipeline import evaluate_sequence
from ..scoring import mean_profile, resolve_warmup, score_sequence
from ..synth import generate, random_order_config, seed_like_config
from .schemas import (
    EvaluateRequest,
    EvaluateResponse,
    FilterRequest,
    FilterResponse,
    HealthResponse,
    ProfileRequest,
    ProfileResponse,
    ScoreRequest,
    ScoreResponse,
    SynthesizeRequest,
    SynthesizeResponse,
    dataset_to_model,
    evaluation_to_response,
    ground_truth_to_model,
    model_to_dataset,
    model_to_scores,
    options_to_aps_config,
    options_to_filter_config,
    options_to_train_config,
    outcome_to_filter_response,
    scores_to_model,
)


def _bad_request(exc: Exception) -> HTTPException:
    if isinstance(exc, DatasetValidationError):
        detail = {
            "error": "dataset-validation",
            "message": str(exc),
            "violations": [
                {
                    "code": v.code,
                    "message": v.message,
                    "trial_index": v.trial_index,
                    "point_index": v.point_index,
                }
                for v in exc.report.violations
            ],
        }
    else:
        detail = {"error": "domain", "message": str(exc)}
    return HTTPException(status_code=400, detail=detail)


def create_app() -> FastAPI:
    app = FastAPI(title="primescore service", version=TOOL_VERSION)

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(
            status="ok", tool_version=TOOL_VERSION, format_version=FORMAT_VERSION
        )

    @app.post("/score", response_model=ScoreResponse)
    def score(req: ScoreRequest) -> ScoreResponse:
        try:
            ds = model_to_dataset(req.dataset)
            cfg = options_to_aps_config(req.options)
            result = score_sequence(ds, cfg)
            warmup = resolve_warmup(ds, cfg)
        except (DatasetValidationError, ValueError) as exc:
            raise _bad_request(exc) from exc
        return ScoreResponse(result=scores_to_model(result), warmup_trials_used=warmup)

    @app.post("/filter", response_model=FilterResponse)
    def filter_points(req: FilterRequest) -> FilterResponse:
        try:
            ds = model_to_dataset(req.dataset)
            aps = model_to_scores(req.scores)
            outcome = filter_by_aps(ds, aps, options_to_filter_config(req.options))
        except (DatasetValidationError, ValueError) as exc:
            raise _bad_request(exc) from exc
        return outcome_to_filter_response(outcome)

    @app.post("/evaluate", response_model=EvaluateResponse)
    def evaluate(req: EvaluateRequest) -> EvaluateResponse:
        try:
            result = evaluate_sequence(
                model_to_dataset(req.dataset),
                train_trials=req.options.train_trials,
                seeds=tuple(req.options.seeds),
                train_config=options_to_train_config(req.options.train),
                aps_config=options_to_aps_config(req.options.score),
                filter_config=options_to_filter_config(req.options.filter),
            )
        except (DatasetValidationError, ValueError, RuntimeError) as exc:
            raise _bad_request(exc) from exc
        return evaluation_to_response(result)

    @app.post("/synthesize", response_model=SynthesizeResponse)
    def synthesize(req: SynthesizeRequest) -> SynthesizeResponse:
        o = req.options
        try:
            if o.preset == "seed-like":
                cfg = seed_like_config(
                    seed=o.seed,
                    points_per_trial=o.points_per_trial,
                    dim=o.dim,
                    noise_sigma=o.noise_sigma,
                    contamination=o.contamination,
                    decay=o.decay,
                )
            else:
                cfg = random_order_config(
                    n_classes=o.n_classes,
                    n_trials=o.n_trials,
                    seed=o.seed,
                    points_per_trial=o.points_per_trial,
                    dim=o.dim,
                    noise_sigma=o.noise_sigma,
                    contamination=o.contamination,
                    decay=o.decay,
                )
            ds, gt = generate(cfg)
        except ValueError as exc:
            raise _bad_request(exc) from exc
        return SynthesizeResponse(
            dataset=dataset_to_model(ds), ground_truth=ground_truth_to_model(gt)
        )

    @app.post("/profile", response_model=ProfileResponse)
    def profile(req: ProfileRequest) -> ProfileResponse:
        try:
            results = [model_to_scores(m) for m in req.score_sets]
            means = mean_profile(results)
        except ValueError as exc:
            raise _bad_request(exc) from exc
        first = results[0]
        return ProfileResponse(
            mean_scores=[float(v) for v in means],
            trial_indices=[int(v) for v in first.trial_indices],
            class_ids=[int(v) for v in first.class_ids],
        )

    return app


app = create_app()
