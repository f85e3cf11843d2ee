"""Layout inspection routes."""

from __future__ import annotations

from typing import Annotated, Any

from fastapi import APIRouter, HTTPException, Query

from app.api.schemas import LayoutQuery
from app.core.codec import describe_layout, size_one_layout, size_two_layout
from app.core.errors import MastermindError

router = APIRouter()


def _handle_domain_error(exc: MastermindError) -> HTTPException:
    """Convert domain errors into HTTP exceptions."""
    return HTTPException(status_code=exc.status_code, detail=str(exc))


@router.get("")
def get_layout(query: Annotated[LayoutQuery, Query()]) -> dict[str, Any]:
    """Constants and field map of the layout the strategies would use."""
    try:
        if query.kind == "size-one":
            layout = size_one_layout(
                query.n,
                query.k,
                epsilon=query.epsilon,
                big_k=query.big_k,
                block_size=query.block_size,
                samples=query.samples,
            )
        else:
            layout = size_two_layout(
                query.n,
                query.k,
                epsilon=query.epsilon,
                block_size=query.block_size,
                samples=query.samples,
            )
    except MastermindError as exc:
        raise _handle_domain_error(exc) from exc
    return describe_layout(layout)
