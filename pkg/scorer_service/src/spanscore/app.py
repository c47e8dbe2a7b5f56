"""FastAPI application speaking the phrase-scoring wire protocol.

POST /score   {"sentences": [{"left": [...], "right": [...]}, ...],
               "candidates": ["black tar", ...]}
              -> {"scores": [[...], ...]}  (row per sentence, column per
              candidate, raw non-negative reals; clients normalize)
GET /health   -> {"model": "<identifier>"}

Errors: 400 on malformed requests (field-level messages), 422 when a
candidate exceeds the supported span length, 500 with a diagnostic on
inference failure.
"""

from __future__ import annotations

import logging
import os

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field, field_validator

from .scoring import SpanScorer, SpanTooLongError

logger = logging.getLogger(__name__)


class WireSentence(BaseModel):
    left: list[str]
    right: list[str]


class ScoreRequest(BaseModel):
    sentences: list[WireSentence] = Field(min_length=1)
    candidates: list[str] = Field(min_length=1)

    @field_validator("candidates")
    @classmethod
    def candidates_non_blank(cls, value: list[str]) -> list[str]:
        blank = [i for i, c in enumerate(value) if not c.strip()]
        if blank:
            raise ValueError(f"blank candidate(s) at index(es) {blank}")
        return value


class ScoreResponse(BaseModel):
    scores: list[list[float]]


class HealthResponse(BaseModel):
    model: str


def create_app(scorer: SpanScorer) -> FastAPI:
    app = FastAPI(title="spanscore", version="0.1.0")
    app.state.scorer = scorer

    @app.exception_handler(RequestValidationError)
    async def malformed_request(request: Request, exc: RequestValidationError):
        # The wire protocol promises 400 with field-level messages for
        # malformed requests (FastAPI's default would be 422).
        errors = [
            {"field": ".".join(str(part) for part in err["loc"]), "message": err["msg"]}
            for err in exc.errors()
        ]
        return JSONResponse(status_code=400, content={"detail": errors})

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(model=scorer.model_id)

    @app.post("/score", response_model=ScoreResponse)
    def score(request: ScoreRequest) -> ScoreResponse:
        try:
            rows = scorer.score(
                [(s.left, s.right) for s in request.sentences], request.candidates
            )
        except SpanTooLongError as exc:
            return JSONResponse(status_code=422, content={"detail": str(exc)})
        except ValueError as exc:
            return JSONResponse(status_code=400, content={"detail": str(exc)})
        except Exception as exc:  # inference failure
            logger.exception("inference failed")
            return JSONResponse(
                status_code=500,
                content={"detail": f"inference failure: {type(exc).__name__}: {exc}"},
            )
        return ScoreResponse(scores=rows)

    return app


def create_app_from_env() -> FastAPI:
    """Factory for multi-worker serving; configuration via environment."""
    from .scoring import ScorerSettings

    model_id = os.environ["SPANSCORE_MODEL"]
    max_span = int(os.environ.get("SPANSCORE_MAX_SPAN", "8"))
    return create_app(SpanScorer(model_id, ScorerSettings(max_span_tokens=max_span)))
