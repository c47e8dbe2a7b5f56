"""Statistical quality-phrase mining and corpus re-segmentation.

A phrase candidate is any 2..max_len contiguous n-gram that clears a
frequency gate and does not start or end with a stopword.  Candidates
are scored with three corpus statistics:

* PMI: ``log2(p(phrase) / prod(p(token_i)))`` where ``p(phrase)`` is the
  candidate count over the number of n-gram positions of its length and
  ``p(token)`` is the unigram count over the total token count.
* Left/right branching entropy: Shannon entropy (bits) of the
  distribution of tokens immediately adjacent to the candidate.
  Occurrences at sentence boundaries contribute no neighbor.

The final quality score is ``sigmoid(z - 0.5)`` where ``z`` is a
weighted sum of the min-max normalized features, so a candidate sitting
at the feature midpoint scores exactly 0.5.

Accepted phrases are joined into single underscore units by a greedy
left-to-right, longest-match-first segmentation.  Raw corpus tokens that
already contain an underscore never participate in phrase formation, and
a candidate whose joined form collides with an existing raw token is
rejected, which keeps segmentation exactly reversible.
"""

from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .corpus import TokenizedCorpus

logger = logging.getLogger(__name__)

PHRASE_JOINER = "_"


def load_stopwords(path: str | Path | None = None) -> frozenset[str]:
    """Stopword set from ``path``, or the bundled English list."""
    if path is None:
        text = resources.files("euphrase.data").joinpath("stopwords.txt").read_text("utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    return frozenset(line.strip().lower() for line in text.splitlines() if line.strip())


@dataclass(frozen=True)
class PhraseCandidate:
    """A mined multi-word phrase with its features and quality score."""

    tokens: tuple[str, ...]
    frequency: int
    pmi: float
    left_entropy: float
    right_entropy: float
    quality: float

    @property
    def unit(self) -> str:
        """Single-token form used in segmented corpora and embeddings."""
        return PHRASE_JOINER.join(self.tokens)

    @property
    def text(self) -> str:
        """Human-readable space-separated form."""
        return " ".join(self.tokens)


@dataclass(frozen=True)
class MinerConfig:
    max_len: int = 4
    min_count: int = 5
    quality_threshold: float = 0.5
    pmi_weight: float = 0.5
    left_entropy_weight: float = 0.25
    right_entropy_weight: float = 0.25
    stopwords: frozenset[str] | None = None

    def stopword_set(self) -> frozenset[str]:
        return self.stopwords if self.stopwords is not None else load_stopwords()


def count_ngrams(corpus: TokenizedCorpus, max_len: int) -> Counter:
    """Exact counts of all 1..max_len n-grams within sentence boundaries.

    Keys are token tuples, including 1-tuples for unigrams.
    """
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    counts: Counter = Counter()
    for _, _, sentence in corpus.sentences():
        n_tokens = len(sentence)
        for i in range(n_tokens):
            top = min(max_len, n_tokens - i)
            for n in range(1, top + 1):
                counts[tuple(sentence[i : i + n])] += 1
    return counts


def _entropy_bits(neighbor_counts: Counter) -> float:
    total = sum(neighbor_counts.values())
    if total == 0:
        return 0.0
    h = 0.0
    for c in neighbor_counts.values():
        p = c / total
        h -= p * math.log2(p)
    # Degenerate distributions can produce -0.0.
    return h if h != 0.0 else 0.0


def _normalize(values: dict[tuple[str, ...], float]) -> dict[tuple[str, ...], float]:
    """Min-max normalize to [0, 1] within each phrase-length group.

    PMI (and to a lesser degree the entropies) scale with n-gram length,
    so normalizing across lengths would let any long phrase crush every
    bigram's normalized score.  A constant feature maps to 0.5.
    """
    out: dict[tuple[str, ...], float] = {}
    by_len: dict[int, list[tuple[str, ...]]] = {}
    for gram in values:
        by_len.setdefault(len(gram), []).append(gram)
    for grams in by_len.values():
        lo = min(values[g] for g in grams)
        hi = max(values[g] for g in grams)
        if hi == lo:
            for g in grams:
                out[g] = 0.5
        else:
            span = hi - lo
            for g in grams:
                out[g] = (values[g] - lo) / span
    return out


def score_candidates(
    counts: Counter,
    total_tokens: int,
    config: MinerConfig = MinerConfig(),
) -> list[PhraseCandidate]:
    """Score every gated n-gram in ``counts`` as a phrase candidate.

    ``counts`` must include n-grams up to ``config.max_len + 1`` so that
    branching entropies can be derived from the (n+1)-gram counts.
    Returned candidates are unsorted; ``mine_phrases`` applies the
    canonical ordering.
    """
    stopwords = config.stopword_set()
    positions: Counter = Counter()
    unigrams: dict[str, int] = {}
    for gram, c in counts.items():
        positions[len(gram)] += c
        if len(gram) == 1:
            unigrams[gram[0]] = c

    eligible: dict[tuple[str, ...], int] = {}
    for gram, c in counts.items():
        n = len(gram)
        if n < 2 or n > config.max_len or c < config.min_count:
            continue
        if gram[0] in stopwords or gram[-1] in stopwords:
            continue
        if any(PHRASE_JOINER in tok for tok in gram):
            continue
        if PHRASE_JOINER.join(gram) in unigrams:
            # A raw token spelled like the joined form would make
            # segmentation ambiguous to undo.
            continue
        eligible[gram] = c
    if not eligible:
        return []

    left_neighbors: dict[tuple[str, ...], Counter] = {g: Counter() for g in eligible}
    right_neighbors: dict[tuple[str, ...], Counter] = {g: Counter() for g in eligible}
    for gram, c in counts.items():
        if len(gram) < 2:  # a neighbor extension is at least a bigram
            continue
        inner_right = gram[:-1]
        if inner_right in right_neighbors:
            right_neighbors[inner_right][gram[-1]] += c
        inner_left = gram[1:]
        if inner_left in left_neighbors:
            left_neighbors[inner_left][gram[0]] += c

    pmi: dict[tuple[str, ...], float] = {}
    left_h: dict[tuple[str, ...], float] = {}
    right_h: dict[tuple[str, ...], float] = {}
    for gram, c in eligible.items():
        n = len(gram)
        p_gram = c / positions[n]
        p_indep = 1.0
        for tok in gram:
            p_indep *= unigrams[tok] / total_tokens
        pmi[gram] = math.log2(p_gram / p_indep)
        left_h[gram] = _entropy_bits(left_neighbors[gram])
        right_h[gram] = _entropy_bits(right_neighbors[gram])

    pmi_n = _normalize(pmi)
    left_n = _normalize(left_h)
    right_n = _normalize(right_h)
    out = []
    for gram in eligible:
        z = (
            config.pmi_weight * pmi_n[gram]
            + config.left_entropy_weight * left_n[gram]
            + config.right_entropy_weight * right_n[gram]
        )
        quality = 1.0 / (1.0 + math.exp(-(z - 0.5)))
        out.append(
            PhraseCandidate(
                tokens=gram,
                frequency=eligible[gram],
                pmi=pmi[gram],
                left_entropy=left_h[gram],
                right_entropy=right_h[gram],
                quality=quality,
            )
        )
    return out


def mine_phrases(corpus: TokenizedCorpus, config: MinerConfig = MinerConfig()) -> list[PhraseCandidate]:
    """Mine quality phrases, best first.

    Ordering is total and deterministic: quality descending, then
    frequency descending, then token sequence ascending.
    """
    counts = count_ngrams(corpus, config.max_len + 1)
    candidates = score_candidates(counts, corpus.total_tokens, config)
    candidates.sort(key=lambda c: (-c.quality, -c.frequency, c.tokens))
    logger.info("mined %d phrase candidates from %d tokens", len(candidates), corpus.total_tokens)
    return candidates


def accepted_phrases(
    candidates: list[PhraseCandidate], quality_threshold: float = 0.5
) -> list[PhraseCandidate]:
    return [c for c in candidates if c.quality >= quality_threshold]


@dataclass
class SegmentedCorpus:
    """A tokenized corpus with accepted phrases joined into single units."""

    documents: list[list[list[str]]]
    doc_ids: list[int]
    vocab: Counter
    phrase_inventory: list[PhraseCandidate] = field(default_factory=list)

    @property
    def phrase_units(self) -> set[str]:
        return {c.unit for c in self.phrase_inventory}

    def sentences(self):
        for doc_id, doc in zip(self.doc_ids, self.documents):
            for sent_idx, sentence in enumerate(doc):
                yield doc_id, sent_idx, sentence

    @property
    def total_tokens(self) -> int:
        return sum(self.vocab.values())


def join_sequences(tokens: list[str], sequences: set[tuple[str, ...]], max_len: int) -> list[str]:
    """Greedy left-to-right, longest-match-first joining of token runs.

    Overlapping matches resolve in favor of the earlier-starting, then
    longer, match.
    """
    if not sequences:
        return list(tokens)
    out = []
    i = 0
    n_tokens = len(tokens)
    while i < n_tokens:
        matched = 0
        for n in range(min(max_len, n_tokens - i), 1, -1):
            if tuple(tokens[i : i + n]) in sequences:
                matched = n
                break
        if matched:
            out.append(PHRASE_JOINER.join(tokens[i : i + matched]))
            i += matched
        else:
            out.append(tokens[i])
            i += 1
    return out


def segment_corpus(corpus: TokenizedCorpus, phrases: list[PhraseCandidate]) -> SegmentedCorpus:
    """Join every accepted phrase occurrence into a single underscore unit."""
    sequences = {c.tokens for c in phrases}
    max_len = max((len(s) for s in sequences), default=2)
    documents = []
    vocab: Counter = Counter()
    for doc in corpus.documents:
        segmented_doc = []
        for sentence in doc:
            segmented = join_sequences(sentence, sequences, max_len)
            vocab.update(segmented)
            segmented_doc.append(segmented)
        documents.append(segmented_doc)
    return SegmentedCorpus(
        documents=documents,
        doc_ids=list(corpus.doc_ids),
        vocab=vocab,
        phrase_inventory=list(phrases),
    )


def unjoin_corpus(segmented: SegmentedCorpus) -> TokenizedCorpus:
    """Invert :func:`segment_corpus` exactly.

    Only units present in the phrase inventory are split; raw tokens that
    happen to contain underscores are left alone.
    """
    units = segmented.phrase_units
    documents = []
    for doc in segmented.documents:
        restored_doc = []
        for sentence in doc:
            restored = []
            for tok in sentence:
                if tok in units:
                    restored.extend(tok.split(PHRASE_JOINER))
                else:
                    restored.append(tok)
            restored_doc.append(restored)
        documents.append(restored_doc)
    return TokenizedCorpus.from_documents(documents, list(segmented.doc_ids))


def write_phrases_tsv(path: str | Path, candidates: list[PhraseCandidate]) -> None:
    """Phrase list artifact: unit, frequency, pmi, entropies, quality."""
    with Path(path).open("w", encoding="utf-8") as fh:
        fh.write("phrase\tfrequency\tpmi\tleft_entropy\tright_entropy\tquality\n")
        for c in candidates:
            fh.write(
                f"{c.unit}\t{c.frequency}\t{c.pmi:.6f}\t{c.left_entropy:.6f}"
                f"\t{c.right_entropy:.6f}\t{c.quality:.6f}\n"
            )


def read_phrases_tsv(path: str | Path) -> list[PhraseCandidate]:
    candidates = []
    with Path(path).open(encoding="utf-8") as fh:
        header = fh.readline()
        if not header.startswith("phrase\t"):
            raise ValueError(f"{path}: not a phrase TSV artifact")
        for line in fh:
            unit, freq, pmi, lh, rh, quality = line.rstrip("\n").split("\t")
            candidates.append(
                PhraseCandidate(
                    tokens=tuple(unit.split(PHRASE_JOINER)),
                    frequency=int(freq),
                    pmi=float(pmi),
                    left_entropy=float(lh),
                    right_entropy=float(rh),
                    quality=float(quality),
                )
            )
    return candidates
