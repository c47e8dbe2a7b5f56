"""Offline preparation: adapt a pretrained masked LM to a target corpus
with contiguous-span masking before serving it.

All training hyperparameters are required arguments; there are no
blessed defaults for a given corpus.  The adapted checkpoint is written
with ``save_pretrained`` and can be served directly:

    spanscore-finetune --model bert-base-uncased --corpus corpus.txt \
        --output-dir adapted/ --epochs 2 --learning-rate 3e-5 \
        --batch-size 16 --max-span-length 4 --mask-rate 0.15 --seed 1
    spanscore --model adapted/
"""

from __future__ import annotations

import argparse
import logging
import random
from pathlib import Path

import torch
from torch.utils.data import DataLoader
from transformers import AutoModelForMaskedLM, AutoTokenizer

logger = logging.getLogger(__name__)

IGNORE_INDEX = -100


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spanscore-finetune", description=__doc__)
    parser.add_argument("--model", required=True, help="base masked-LM checkpoint")
    parser.add_argument("--corpus", required=True, help="plain-lines text file, one document per line")
    parser.add_argument("--output-dir", required=True)
    parser.add_argument("--epochs", type=int, required=True)
    parser.add_argument("--learning-rate", type=float, required=True)
    parser.add_argument("--batch-size", type=int, required=True)
    parser.add_argument("--max-span-length", type=int, required=True,
                        help="longest contiguous masked span, in model tokens")
    parser.add_argument("--mask-rate", type=float, required=True,
                        help="fraction of tokens covered by masked spans")
    parser.add_argument("--seed", type=int, required=True)
    parser.add_argument("--max-length", type=int, default=128)
    return parser


def mask_spans(
    input_ids: torch.Tensor,
    special_mask: torch.Tensor,
    mask_token_id: int,
    max_span_length: int,
    mask_rate: float,
    rng: random.Random,
) -> tuple[torch.Tensor, torch.Tensor]:
    """Replace random contiguous token spans with the mask token.

    Returns (masked input ids, labels) with labels IGNORE_INDEX outside
    masked positions.
    """
    ids = input_ids.clone()
    labels = torch.full_like(ids, IGNORE_INDEX)
    eligible = [i for i in range(len(ids)) if not special_mask[i]]
    if not eligible:
        return ids, labels
    budget = max(1, int(round(mask_rate * len(eligible))))
    masked: set[int] = set()
    attempts = 0
    while len(masked) < budget and attempts < 10 * budget:
        attempts += 1
        span = rng.randint(1, max_span_length)
        start = rng.choice(eligible)
        positions = [p for p in range(start, min(start + span, len(ids))) if not special_mask[p]]
        for p in positions:
            if len(masked) >= budget:
                break
            if p not in masked:
                labels[p] = ids[p]
                ids[p] = mask_token_id
                masked.add(p)
    return ids, labels


def run(args: argparse.Namespace) -> Path:
    torch.manual_seed(args.seed)
    rng = random.Random(args.seed)
    tokenizer = AutoTokenizer.from_pretrained(args.model)
    model = AutoModelForMaskedLM.from_pretrained(args.model)
    model.train()

    lines = [line.strip() for line in Path(args.corpus).read_text(encoding="utf-8").splitlines()]
    lines = [line for line in lines if line]
    if not lines:
        raise ValueError(f"corpus {args.corpus} has no non-empty lines")
    logger.info("fine-tuning %s on %d documents", args.model, len(lines))

    encoded = tokenizer(lines, truncation=True, max_length=args.max_length)["input_ids"]

    def collate(batch: list[list[int]]):
        width = max(len(ids) for ids in batch)
        pad = tokenizer.pad_token_id or 0
        input_rows, label_rows, attention = [], [], []
        for ids in batch:
            ids_tensor = torch.tensor(ids)
            special = torch.tensor(
                tokenizer.get_special_tokens_mask(ids, already_has_special_tokens=True),
                dtype=torch.bool,
            )
            masked, labels = mask_spans(
                ids_tensor, special, tokenizer.mask_token_id, args.max_span_length, args.mask_rate, rng
            )
            padding = width - len(ids)
            input_rows.append(torch.cat([masked, torch.full((padding,), pad)]))
            label_rows.append(torch.cat([labels, torch.full((padding,), IGNORE_INDEX)]))
            attention.append(torch.cat([torch.ones(len(ids)), torch.zeros(padding)]))
        return (
            torch.stack(input_rows).long(),
            torch.stack(label_rows).long(),
            torch.stack(attention).long(),
        )

    loader = DataLoader(encoded, batch_size=args.batch_size, shuffle=True, collate_fn=collate,
                        generator=torch.Generator().manual_seed(args.seed))
    optimizer = torch.optim.AdamW(model.parameters(), lr=args.learning_rate)
    for epoch in range(args.epochs):
        total = 0.0
        for input_ids, labels, attention_mask in loader:
            optimizer.zero_grad()
            out = model(input_ids=input_ids, attention_mask=attention_mask, labels=labels)
            out.loss.backward()
            optimizer.step()
            total += out.loss.item()
        logger.info("epoch %d/%d: loss %.4f", epoch + 1, args.epochs, total / max(1, len(loader)))

    outdir = Path(args.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    model.save_pretrained(outdir)
    tokenizer.save_pretrained(outdir)
    logger.info("adapted checkpoint written to %s", outdir)
    return outdir


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    run(build_parser().parse_args(argv))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
