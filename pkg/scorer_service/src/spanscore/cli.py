"""Service launcher: load a masked LM and serve the scoring protocol."""

from __future__ import annotations

import argparse
import logging
import os

import uvicorn

from .app import create_app
from .scoring import ScorerSettings, SpanScorer


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spanscore", description=__doc__)
    parser.add_argument(
        "--model",
        default=os.environ.get("SPANSCORE_MODEL"),
        help="Hugging Face model id or local checkpoint path (env: SPANSCORE_MODEL)",
    )
    parser.add_argument("--host", default=os.environ.get("SPANSCORE_HOST", "127.0.0.1"))
    parser.add_argument("--port", type=int, default=int(os.environ.get("SPANSCORE_PORT", "8300")))
    parser.add_argument(
        "--max-span",
        type=int,
        default=int(os.environ.get("SPANSCORE_MAX_SPAN", "8")),
        help="maximum candidate length in model tokens (longer candidates get HTTP 422)",
    )
    parser.add_argument(
        "--workers",
        type=int,
        default=int(os.environ.get("SPANSCORE_WORKERS", "1")),
        help="uvicorn worker processes (each loads its own copy of the model)",
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    if not args.model:
        build_parser().error("--model is required (or set SPANSCORE_MODEL)")
    if args.workers > 1:
        # uvicorn needs an import string to fork workers; each process
        # loads its own read-only copy of the model.
        os.environ["SPANSCORE_MODEL"] = args.model
        os.environ["SPANSCORE_MAX_SPAN"] = str(args.max_span)
        uvicorn.run(
            "spanscore.app:create_app_from_env",
            factory=True,
            host=args.host,
            port=args.port,
            workers=args.workers,
            log_level="info",
        )
        return 0
    scorer = SpanScorer(args.model, ScorerSettings(max_span_tokens=args.max_span))
    app = create_app(scorer)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
