"""Single-game routes."""

from __future__ import annotations

from fastapi import APIRouter, HTTPException
from pydantic import ValidationError

from app.api.schemas import GameRequest, GameResponse, QueryItem
from app.core.errors import MastermindError
from app.core.experiments import ExperimentConfig, run_trial
from app.core.game import code_to_text

router = APIRouter()


def _handle_domain_error(exc: MastermindError) -> HTTPException:
    """Convert domain errors into HTTP exceptions."""
    return HTTPException(status_code=exc.status_code, detail=str(exc))


@router.post("", response_model=GameResponse)
def play_game(body: GameRequest):
    """Run one game and return the full query transcript."""
    try:
        config = ExperimentConfig(
            ns=[body.n],
            trials=1,
            **body.model_dump(exclude={"n"}),
        )
    except ValidationError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc

    try:
        transcript = run_trial(config, body.n, 0)
    except MastermindError as exc:
        raise _handle_domain_error(exc) from exc

    k = transcript.params.k
    return GameResponse(
        strategy=transcript.strategy_name,
        codemaker=transcript.codemaker_name,
        n=transcript.params.n,
        k=k,
        mu=transcript.mu,
        seed=transcript.seed,
        won=transcript.won,
        winning_index=transcript.winning_index,
        query_count=transcript.query_count,
        phase_counts=transcript.phase_counts(),
        secret=None if transcript.secret is None else code_to_text(transcript.secret, k),
        queries=[
            QueryItem(guess=code_to_text(q.guess, k), black=q.black, phase=q.phase)
            for q in transcript.queries
        ],
    )
