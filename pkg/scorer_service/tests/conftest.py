import pytest
import torch
from transformers import BertConfig, BertForMaskedLM, BertTokenizerFast

from spanscore.app import create_app
from spanscore.scoring import ScorerSettings, SpanScorer

SPECIAL = ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"]
WORDS = """
the a of and to in for on at by with from near behind my his her some that this
dealer plug batch stash gram price street corner market docks bridge lane yard
black tar blue dream cbd oil white horse happy powder brown sugar og kush
silver dust night glass velvet moss zephyrine novaline dropped scored seized
sold sells buy cheap pure fresh hidden found caught tonight weekend party mill
river iron green metro harbor warehouse east side supply line exit route crew
addict roommate cops luck time first trying heard latest avoid risky drains
shelf jars candle garden beds spring rain paint aisle pottery clay class
""".split()


@pytest.fixture(scope="session")
def tiny_model_dir(tmp_path_factory):
    """A small randomly initialized masked LM saved as a local checkpoint."""
    outdir = tmp_path_factory.mktemp("tiny-mlm")
    vocab = SPECIAL + sorted(set(WORDS))
    tokenizer = BertTokenizerFast(
        vocab={token: i for i, token in enumerate(vocab)}, do_lower_case=True
    )
    config = BertConfig(
        vocab_size=len(vocab),
        hidden_size=32,
        num_hidden_layers=2,
        num_attention_heads=2,
        intermediate_size=64,
        max_position_embeddings=96,
    )
    torch.manual_seed(7)
    model = BertForMaskedLM(config)
    model.save_pretrained(outdir)
    tokenizer.save_pretrained(outdir)
    return outdir


@pytest.fixture(scope="session")
def scorer(tiny_model_dir):
    return SpanScorer(str(tiny_model_dir), ScorerSettings(max_span_tokens=8))


@pytest.fixture(scope="session")
def app(scorer):
    return create_app(scorer)
