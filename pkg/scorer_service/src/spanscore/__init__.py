"""spanscore: serve masked-span phrase scoring over HTTP."""

from .app import create_app
from .scoring import ScorerSettings, SpanScorer, SpanTooLongError

__version__ = "0.1.0"

__all__ = ["ScorerSettings", "SpanScorer", "SpanTooLongError", "create_app"]
