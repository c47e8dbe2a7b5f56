"""Corpus loading, normalization and sentence tokenization.

Tokenization is deliberately rule-based: lowercase, split on Unicode
whitespace, strip punctuation at token edges (word-internal hyphens and
apostrophes survive), and break sentences at ``.``, ``!`` or ``?``
followed by whitespace.  No trained segmenter is involved, so behavior
is identical across platforms and runs.
"""

from __future__ import annotations

import json
import logging
import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator

logger = logging.getLogger(__name__)

# Terminal punctuation followed by whitespace ends a sentence.
_SENTENCE_BREAK = re.compile(r"(?<=[.!?])\s+")
# `\w` includes underscore, so underscores are never stripped.
_EDGE_PUNCT = re.compile(r"^\W+|\W+$")

FORMATS = ("plain-lines", "json-lines")


def normalize_token(raw: str) -> str:
    """Lowercase and strip leading/trailing punctuation from one token."""
    return _EDGE_PUNCT.sub("", raw.lower())


def split_sentences(text: str) -> list[list[str]]:
    """Tokenize ``text`` into sentences of normalized tokens.

    Empty sentences (e.g. a chunk that was all punctuation) are dropped.
    """
    sentences = []
    for chunk in _SENTENCE_BREAK.split(text):
        tokens = [tok for tok in (normalize_token(raw) for raw in chunk.split()) if tok]
        if tokens:
            sentences.append(tokens)
    return sentences


def tokenize(text: str) -> list[str]:
    """Flat token list for ``text`` (sentence structure discarded)."""
    return [tok for sentence in split_sentences(text) for tok in sentence]


@dataclass
class TokenizedCorpus:
    """Documents as lists of token sentences, plus exact vocabulary counts.

    Instances are treated as immutable once built; all pipeline stages
    only read them.
    """

    documents: list[list[list[str]]]
    doc_ids: list[int]
    vocab: Counter = field(default_factory=Counter)
    n_skipped: int = 0

    @classmethod
    def from_documents(
        cls,
        documents: list[list[list[str]]],
        doc_ids: list[int] | None = None,
        n_skipped: int = 0,
    ) -> "TokenizedCorpus":
        if doc_ids is None:
            doc_ids = list(range(len(documents)))
        if len(doc_ids) != len(documents):
            raise ValueError("doc_ids and documents must have equal length")
        vocab = Counter()
        for doc in documents:
            for sentence in doc:
                vocab.update(sentence)
        return cls(documents=documents, doc_ids=doc_ids, vocab=vocab, n_skipped=n_skipped)

    def sentences(self) -> Iterator[tuple[int, int, list[str]]]:
        """Yield (doc_id, sentence_index, tokens) in stable corpus order."""
        for doc_id, doc in zip(self.doc_ids, self.documents):
            for sent_idx, sentence in enumerate(doc):
                yield doc_id, sent_idx, sentence

    @property
    def n_documents(self) -> int:
        return len(self.documents)

    @property
    def total_tokens(self) -> int:
        return sum(self.vocab.values())


def load_corpus(
    path: str | Path,
    format: str = "plain-lines",
    text_field: str = "text",
) -> TokenizedCorpus:
    """Load a UTF-8 corpus file, one document per line.

    ``plain-lines`` treats each line as raw document text.  ``json-lines``
    expects one JSON object per line carrying the document text under
    ``text_field``.  Malformed json-lines records are skipped with a
    warning naming the line number; the skip count is available on the
    returned corpus as ``n_skipped``.
    """
    if format not in FORMATS:
        raise ValueError(f"unknown corpus format {format!r}; expected one of {FORMATS}")
    path = Path(path)
    documents: list[list[list[str]]] = []
    doc_ids: list[int] = []
    n_skipped = 0
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if format == "plain-lines":
                text = line
            else:
                try:
                    record = json.loads(line)
                except json.JSONDecodeError as exc:
                    logger.warning("%s:%d: skipping malformed JSON record: %s", path, lineno, exc)
                    n_skipped += 1
                    continue
                if not isinstance(record, dict) or text_field not in record:
                    logger.warning(
                        "%s:%d: skipping record without %r field", path, lineno, text_field
                    )
                    n_skipped += 1
                    continue
                text = record[text_field]
                if not isinstance(text, str):
                    logger.warning(
                        "%s:%d: skipping record with non-string %r field", path, lineno, text_field
                    )
                    n_skipped += 1
                    continue
            documents.append(split_sentences(text))
            doc_ids.append(lineno - 1)
    corpus = TokenizedCorpus.from_documents(documents, doc_ids, n_skipped=n_skipped)
    logger.info(
        "loaded %d documents (%d tokens, %d vocabulary units, %d skipped records) from %s",
        corpus.n_documents,
        corpus.total_tokens,
        len(corpus.vocab),
        n_skipped,
        path,
    )
    return corpus
