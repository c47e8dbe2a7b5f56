import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from euphrase.corpus import TokenizedCorpus


@pytest.fixture
def tiny_corpus() -> TokenizedCorpus:
    """Hand-sized corpus with a repeated planted bigram."""
    docs = [
        [["i", "scored", "black", "tar", "again", "tonight"]],
        [["the", "black", "tar", "price", "went", "up"]],
        [["black", "tar", "is", "hard", "to", "find", "now"]],
        [["he", "sells", "black", "tar", "near", "the", "docks"]],
        [["that", "black", "tar", "batch", "was", "strong"]],
        [["fresh", "black", "tar", "hit", "the", "streets"]],
        [["pure", "white", "rock", "on", "sale"]],
        [["white", "rock", "prices", "dropped", "fast"]],
    ]
    return TokenizedCorpus.from_documents(docs)
