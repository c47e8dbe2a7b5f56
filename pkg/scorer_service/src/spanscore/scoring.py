"""Masked-span scoring with a pretrained masked language model.

A candidate phrase of n model tokens is scored against a masked
sentence by inserting n mask slots at the sentence's slot position and
multiplying the model's per-position probabilities of the candidate's
tokens.  Scoring is model-agnostic: any Hugging Face fill-mask
checkpoint works.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import torch
from transformers import AutoModelForMaskedLM, AutoTokenizer

logger = logging.getLogger(__name__)


class SpanTooLongError(ValueError):
    """Candidate tokenizes to more pieces than the configured span cap."""

    def __init__(self, candidate: str, length: int, max_span: int):
        self.candidate = candidate
        super().__init__(
            f"candidate {candidate!r} spans {length} model tokens, above the limit of {max_span}"
        )


@dataclass(frozen=True)
class ScorerSettings:
    max_span_tokens: int = 8
    max_context_tokens: int = 64  # per side, before model truncation


class SpanScorer:
    """Loads a masked LM once and answers span-filling queries."""

    def __init__(self, model_id: str, settings: ScorerSettings = ScorerSettings()):
        self.model_id = model_id
        self.settings = settings
        logger.info("loading masked LM %r", model_id)
        self.tokenizer = AutoTokenizer.from_pretrained(model_id)
        self.model = AutoModelForMaskedLM.from_pretrained(model_id)
        self.model.eval()
        if self.tokenizer.mask_token_id is None:
            raise ValueError(f"model {model_id!r} has no mask token; not a masked LM")
        max_positions = getattr(self.model.config, "max_position_embeddings", 512)
        self._budget = max_positions - self.settings.max_span_tokens - 4

    def candidate_ids(self, candidate: str) -> list[int]:
        ids = self.tokenizer.encode(candidate, add_special_tokens=False)
        if not ids:
            raise ValueError(f"candidate {candidate!r} tokenizes to nothing")
        if len(ids) > self.settings.max_span_tokens:
            raise SpanTooLongError(candidate, len(ids), self.settings.max_span_tokens)
        return ids

    def _context_ids(self, tokens: list[str], keep_tail: bool) -> list[int]:
        tokens = tokens[-self.settings.max_context_tokens :] if keep_tail else tokens[: self.settings.max_context_tokens]
        text = " ".join(tokens)
        ids = self.tokenizer.encode(text, add_special_tokens=False) if text else []
        # Keep the side nearest the mask if the model's window is tight.
        half = max(1, self._budget // 2)
        return ids[-half:] if keep_tail else ids[:half]

    @torch.no_grad()
    def score_sentence(self, left: list[str], right: list[str], candidates_ids: list[list[int]]) -> list[float]:
        """Raw probabilities of each pre-tokenized candidate filling the slot."""
        left_ids = self._context_ids(left, keep_tail=True)
        right_ids = self._context_ids(right, keep_tail=False)
        cls_id = self.tokenizer.cls_token_id
        sep_id = self.tokenizer.sep_token_id
        mask_id = self.tokenizer.mask_token_id

        scores = [0.0] * len(candidates_ids)
        by_length: dict[int, list[int]] = {}
        for index, ids in enumerate(candidates_ids):
            by_length.setdefault(len(ids), []).append(index)

        for span_length, indices in sorted(by_length.items()):
            input_ids = (
                ([cls_id] if cls_id is not None else [])
                + left_ids
                + [mask_id] * span_length
                + right_ids
                + ([sep_id] if sep_id is not None else [])
            )
            mask_start = (1 if cls_id is not None else 0) + len(left_ids)
            batch = torch.tensor([input_ids])
            logits = self.model(input_ids=batch).logits[0]
            log_probs = torch.log_softmax(logits[mask_start : mask_start + span_length], dim=-1)
            for index in indices:
                ids = candidates_ids[index]
                total = sum(log_probs[pos, tok_id].item() for pos, tok_id in enumerate(ids))
                scores[index] = float(torch.exp(torch.tensor(total)))
        return scores

    def score(self, sentences: list[tuple[list[str], list[str]]], candidates: list[str]) -> list[list[float]]:
        """Score rows: one row per sentence, one column per candidate."""
        candidates_ids = [self.candidate_ids(c) for c in candidates]
        return [self.score_sentence(left, right, candidates_ids) for left, right in sentences]
