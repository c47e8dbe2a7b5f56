"""Exception types shared across the pipeline."""


class EuphraseError(Exception):
    """Base class for all pipeline errors."""


class ConfigError(EuphraseError):
    """Invalid or inconsistent run configuration."""


class MissingArtifactError(EuphraseError):
    """A stage was invoked before the stage that produces its input."""

    def __init__(self, artifact: str, producer_stage: str):
        self.artifact = artifact
        self.producer_stage = producer_stage
        super().__init__(
            f"missing artifact {artifact!r}: run the {producer_stage!r} stage first"
        )


class EmbeddingError(EuphraseError):
    """Embedding training or lookup failure."""


class RankingError(EuphraseError):
    """Ranking preconditions violated (empty pool, no masked sentences, ...)."""


class ScorerError(EuphraseError):
    """Base class for scorer failures."""


class ScorerConstructionError(ScorerError):
    """Scorer could not be built (e.g. remote endpoint failed its health check)."""


class ScorerTransportError(ScorerError):
    """Remote scorer request failed at the transport level."""


class ScorerProtocolError(ScorerError):
    """Remote scorer returned a response that violates the wire protocol."""
