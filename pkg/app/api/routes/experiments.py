"""Experiment grid routes."""

from __future__ import annotations

from fastapi import APIRouter, HTTPException
from pydantic import ValidationError

from app.api.schemas import ExperimentRequest, ExperimentResponse, SkippedCellItem
from app.core.errors import MastermindError
from app.core.experiments import ExperimentConfig, run_grid

router = APIRouter()


def _handle_domain_error(exc: MastermindError) -> HTTPException:
    """Convert domain errors into HTTP exceptions."""
    return HTTPException(status_code=exc.status_code, detail=str(exc))


@router.post("", response_model=ExperimentResponse)
def run_experiment(body: ExperimentRequest):
    """Run a small grid synchronously; no files are written."""
    try:
        config = ExperimentConfig(**body.model_dump())
    except ValidationError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc

    try:
        result = run_grid(config)
    except MastermindError as exc:
        raise _handle_domain_error(exc) from exc

    return ExperimentResponse(
        records=[r.to_dict() for r in result.records],
        summaries=[s.to_dict() for s in result.summaries],
        skipped=[SkippedCellItem(n=c.n, k=c.k, reason=c.reason) for c in result.skipped],
        slope=result.slope,
        all_won=result.all_won,
    )
