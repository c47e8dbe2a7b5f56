"""Synthetic planted-euphemism corpora for desk-scale verification.

Real euphemism corpora cannot be redistributed, so verification runs on
generated ones with a known answer key.  The generator emits two kinds
of documents:

* slot documents: template sentences that put a keyword slot inside a
  characteristic "street market" context.  Each slot holds its target
  keyword, or, with the configured substitution rate, one of the planted
  euphemistic phrases assigned to that target.
* benign documents: the planted phrases used in their innocent literal
  sense, far from any target context.  Euphemisms are ordinary phrases
  with a second meaning; mixing senses into one embedding is exactly
  what makes similarity-only ranking struggle while masked-slot
  evidence does not.
* filler documents: random background-vocabulary sentences, a fraction
  of which carry one of a fixed set of decoy collocations so the phrase
  miner has plenty of unrelated multi-word candidates to rank.

Slots are always flanked by stopwords so no mined phrase can leak
across a slot boundary, and euphemism/target tokens never appear in
templates or filler, which keeps the planted phrases' statistics clean.
Everything is driven by one seeded generator: a fixed seed reproduces
the corpus exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .corpus import TokenizedCorpus
from .evaluate import GroundTruth
from .preselect import TargetKeywordSet

TARGET_NAMES = ("zephyrine", "novaline", "kryotol", "vexadrine", "morvalin", "sublitex")

DEFAULT_PLANTED = (
    ("silver dust", 0.3),
    ("night glass", 0.3),
    ("velvet moss", 0.3),
)

# {kw} is the keyword slot, {noise} a random background token.  Slot
# neighbors are stopwords on both sides (see module docstring).
SLOT_TEMPLATES = (
    "my dealer dropped off some {kw} at the corner store past the {noise} river docks",
    "the street price of {kw} has doubled since the pure batch reached the {noise} market stalls",
    "scored a quick gram of {kw} from my usual plug behind the {noise} metro yard",
    "one hit of that {kw} from the fresh batch knocked my roommate flat at the {noise} warehouse party",
    "cops seized a stash of {kw} from beneath the floorboards of the {noise} old mill",
    "anyone selling any {kw} around the east side or has the {noise} supply line gone dry",
    "first time trying some {kw} at tonight's meetup so wish me luck by the {noise} iron bridge",
    "my plug only sells that {kw} on weekends down near the {noise} green lane exit",
    "heard the latest batch of {kw} is risky so avoid the {noise} harbor pier entirely",
    "need to re-up on {kw} before the weekend rush drains the {noise} delivery route",
)

# {eu} is a planted phrase in its innocent sense; same stopword-flank rule.
BENIGN_TEMPLATES = (
    "grandma polished the oak shelf with {eu} before the dinner guests arrived",
    "the craft fair sold little jars of {eu} at the candle display",
    "sprinkle a pinch of {eu} over the garden beds after the spring rain",
    "the hardware store stocks some {eu} by the paint thinner aisle",
    "her art teacher mixed some {eu} into the clay coating for the pottery class",
)

SLOT_FRACTION = 0.35
BENIGN_FRACTION = 0.15
N_DECOY_COLLOCATIONS = 15
DECOY_INSERT_PROB = 0.35
FILLER_LENGTH_RANGE = (8, 14)


@dataclass(frozen=True)
class SyntheticConfig:
    n_docs: int = 2000
    n_targets: int = 2
    planted: tuple[tuple[str, float], ...] = DEFAULT_PLANTED
    vocab_size: int = 500
    seed: int = 0

    def validate(self) -> None:
        problems = []
        if self.n_docs < 1:
            problems.append("n_docs must be >= 1")
        if not 1 <= self.n_targets <= len(TARGET_NAMES):
            problems.append(f"n_targets must be in 1..{len(TARGET_NAMES)}")
        if not self.planted:
            problems.append("planted euphemism list must be non-empty")
        if self.vocab_size < 2 * N_DECOY_COLLOCATIONS:
            problems.append(f"vocab_size must be >= {2 * N_DECOY_COLLOCATIONS}")
        rate_by_target: dict[int, float] = {}
        for i, (phrase, rate) in enumerate(self.planted):
            if len(phrase.split()) < 2:
                problems.append(f"planted phrase {phrase!r} must be multi-word")
            if not 0.0 < rate <= 1.0:
                problems.append(f"substitution rate for {phrase!r} must be in (0, 1]")
            slot = i % max(self.n_targets, 1)
            rate_by_target[slot] = rate_by_target.get(slot, 0.0) + rate
        for slot, total in rate_by_target.items():
            if total > 1.0 + 1e-9:
                problems.append(
                    f"substitution rates assigned to target #{slot} sum to {total:.2f} > 1"
                )
        if problems:
            raise ValueError("invalid synthetic corpus config: " + "; ".join(problems))


@dataclass
class SyntheticDataset:
    corpus: TokenizedCorpus
    targets: TargetKeywordSet
    truth: GroundTruth
    config: SyntheticConfig = field(repr=False, default=SyntheticConfig())


def _filler_token(index: int) -> str:
    return f"w{index:03d}"


def generate_synthetic_corpus(
    config: SyntheticConfig = SyntheticConfig(),
) -> tuple[TokenizedCorpus, TargetKeywordSet, GroundTruth]:
    """Build (corpus, targets, ground truth) from ``config``, deterministically."""
    config.validate()
    rng = np.random.default_rng(config.seed)
    targets = list(TARGET_NAMES[: config.n_targets])

    # planted[i] substitutes for targets[i % n_targets]
    assignments: dict[str, list[tuple[str, float]]] = {t: [] for t in targets}
    for i, (phrase, rate) in enumerate(config.planted):
        assignments[targets[i % len(targets)]].append((phrase, rate))

    decoys = [
        (_filler_token(2 * i), _filler_token(2 * i + 1)) for i in range(N_DECOY_COLLOCATIONS)
    ]

    n_slot_docs = max(1, round(SLOT_FRACTION * config.n_docs))
    n_benign_docs = round(BENIGN_FRACTION * config.n_docs)
    doc_kinds = np.array(
        ["slot"] * n_slot_docs
        + ["benign"] * n_benign_docs
        + ["filler"] * (config.n_docs - n_slot_docs - n_benign_docs)
    )
    rng.shuffle(doc_kinds)

    documents: list[list[list[str]]] = []
    for kind in doc_kinds:
        if kind == "slot":
            template = SLOT_TEMPLATES[int(rng.integers(len(SLOT_TEMPLATES)))]
            target = targets[int(rng.integers(len(targets)))]
            filler = _filler_token(int(rng.integers(config.vocab_size)))
            u = rng.random()
            cursor = 0.0
            slot_text = target
            for phrase, rate in assignments[target]:
                cursor += rate
                if u < cursor:
                    slot_text = phrase
                    break
            sentence = template.format(kw=slot_text, noise=filler).split()
        elif kind == "benign":
            template = BENIGN_TEMPLATES[int(rng.integers(len(BENIGN_TEMPLATES)))]
            phrase = config.planted[int(rng.integers(len(config.planted)))][0]
            sentence = template.format(eu=phrase).split()
        else:
            length = int(rng.integers(FILLER_LENGTH_RANGE[0], FILLER_LENGTH_RANGE[1] + 1))
            sentence = [
                _filler_token(int(i)) for i in rng.integers(config.vocab_size, size=length)
            ]
            if rng.random() < DECOY_INSERT_PROB:
                a, b = decoys[int(rng.integers(len(decoys)))]
                pos = int(rng.integers(len(sentence) + 1))
                sentence[pos:pos] = [a, b]
        documents.append([sentence])

    corpus = TokenizedCorpus.from_documents(documents)
    target_set = TargetKeywordSet.from_strings(targets)
    truth = GroundTruth.from_strings(phrase for phrase, _ in config.planted)
    return corpus, target_set, truth


def write_synthetic_dataset(
    outdir: str | Path, config: SyntheticConfig = SyntheticConfig()
) -> dict[str, Path]:
    """Write corpus.txt (plain-lines), targets.txt and truth.txt to ``outdir``."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    corpus, targets, truth = generate_synthetic_corpus(config)
    paths = {
        "corpus": outdir / "corpus.txt",
        "targets": outdir / "targets.txt",
        "truth": outdir / "truth.txt",
    }
    with paths["corpus"].open("w", encoding="utf-8") as fh:
        for doc in corpus.documents:
            fh.write(" ".join(doc[0]) + "\n")
    paths["targets"].write_text("\n".join(targets.keywords) + "\n", encoding="utf-8")
    paths["truth"].write_text("\n".join(sorted(truth.phrases)) + "\n", encoding="utf-8")
    return paths
