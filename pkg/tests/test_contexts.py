from collections import Counter

from euphrase.contexts import (
    ContextFilterConfig,
    MaskedSentence,
    extract_masked_sentences,
    filter_informative,
    read_masked_jsonl,
    write_masked_jsonl,
)
from euphrase.phrases import SegmentedCorpus
from euphrase.preselect import TargetKeywordSet


def seg_corpus(sentences: list[list[str]]) -> SegmentedCorpus:
    vocab = Counter()
    for s in sentences:
        vocab.update(s)
    return SegmentedCorpus(
        documents=[[s] for s in sentences],
        doc_ids=list(range(len(sentences))),
        vocab=vocab,
    )


HEROIN = TargetKeywordSet.from_strings(["heroin"])


class TestExtract:
    def test_single_occurrence(self):
        corpus = seg_corpus([["i", "did", "heroin", "today"]])
        [m] = extract_masked_sentences(corpus, HEROIN)
        assert m.left == ("i", "did")
        assert m.right == ("today",)
        assert m.target == "heroin"
        assert (m.doc_id, m.sent_idx) == (0, 0)

    def test_two_occurrences_two_sentences(self):
        corpus = seg_corpus([["heroin", "then", "more", "heroin"]])
        got = extract_masked_sentences(corpus, HEROIN)
        assert len(got) == 2
        assert got[0].left == ()
        assert got[1].right == ()

    def test_no_occurrences(self, caplog):
        corpus = seg_corpus([["nothing", "here"]])
        with caplog.at_level("WARNING"):
            assert extract_masked_sentences(corpus, HEROIN) == []
        assert any("no target" in rec.message for rec in caplog.records)

    def test_multiword_target_joined_even_if_unmined(self):
        corpus = seg_corpus([["he", "sells", "blue", "dream", "cheap"]])
        targets = TargetKeywordSet.from_strings(["blue dream"])
        [m] = extract_masked_sentences(corpus, targets)
        assert m.target == "blue_dream"
        assert m.left == ("he", "sells")
        assert m.right == ("cheap",)

    def test_reconstruction_within_cap(self):
        sentence = ["a", "b", "heroin", "c", "d", "e"]
        corpus = seg_corpus([sentence])
        [m] = extract_masked_sentences(corpus, HEROIN)
        assert list(m.left) + [m.target] + list(m.right) == sentence

    def test_truncation_keeps_tokens_nearest_mask(self):
        sentence = [f"l{i}" for i in range(20)] + ["heroin"] + [f"r{i}" for i in range(20)]
        corpus = seg_corpus([sentence])
        [m] = extract_masked_sentences(corpus, HEROIN, max_context=4)
        assert m.left == ("l16", "l17", "l18", "l19")
        assert m.right == ("r0", "r1", "r2", "r3")

    def test_deterministic_document_order(self):
        corpus = seg_corpus([["heroin", "a"], ["b", "heroin"]])
        got = extract_masked_sentences(corpus, HEROIN)
        assert [(m.doc_id, m.sent_idx) for m in got] == [(0, 0), (1, 0)]


def masked(left, right, target="heroin", doc_id=0, sent_idx=0):
    return MaskedSentence(tuple(left), tuple(right), target, doc_id, sent_idx)


class TestFilter:
    def test_short_context_dropped(self):
        got = filter_informative([masked(["i", "did"], ["today"])])
        assert got == []

    def test_duplicate_contexts_deduplicated(self):
        first = masked(["the", "fresh", "batch", "of"], ["hit", "the", "street", "market"])
        second = masked(["the", "fresh", "batch", "of"], ["hit", "the", "street", "market"], doc_id=5)
        got = filter_informative([first, second])
        assert got == [first]

    def test_paper_style_sentence_kept(self):
        sent = masked(
            ["this", "22", "year", "old", "former"],
            ["addict", "who", "i", "did", "drugs", "with", "was", "caught", "this", "night"],
        )
        assert filter_informative([sent]) == [sent]

    def test_content_gate(self):
        # 6 tokens of context but only one non-stopword.
        sent = masked(["the", "of", "and", "to"], ["in", "drugs"])
        assert filter_informative([sent]) == []
        relaxed = ContextFilterConfig(min_content=1)
        assert filter_informative([sent], relaxed) == [sent]

    def test_idempotent(self):
        sentences = [
            masked(["a", "fresh", "batch", "near"], ["the", "docks", "tonight"]),
            masked(["i", "did"], ["today"]),
            masked(["a", "fresh", "batch", "near"], ["the", "docks", "tonight"], doc_id=9),
        ]
        once = filter_informative(sentences)
        assert filter_informative(once) == once

    def test_order_preserving_subsequence(self):
        sentences = [
            masked([f"a{i}", "fresh", "batch", "by"], ["the", "docks", f"b{i}"], doc_id=i)
            for i in range(10)
        ]
        got = filter_informative(sentences)
        assert got == sentences


class TestMaskedJsonl:
    def test_round_trip(self, tmp_path):
        sentences = [
            masked(["a", "b"], ["c"], doc_id=3, sent_idx=1),
            masked([], ["x", "y"], target="blue_dream"),
        ]
        path = tmp_path / "masked.jsonl"
        write_masked_jsonl(path, sentences)
        assert read_masked_jsonl(path) == sentences
