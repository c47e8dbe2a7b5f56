import json

import numpy as np
import pytest

from euphrase.evaluate import (
    GroundTruth,
    evaluate_ranking,
    precision_at_k,
    write_eval_json,
    write_eval_tsv,
)
from euphrase.ranking import RankedList
from oracles import brute_force_precision_at_k


def ranked_of(units, method="epd"):
    return RankedList(method=method, entries=[(u, 1.0 / (i + 1)) for i, u in enumerate(units)])


TRUTH = GroundTruth.from_strings(["black tar", "cbd oil", "blue dream"])


class TestPrecisionAtK:
    def test_three_hits_in_top_ten(self):
        units = ["black_tar", "cbd_oil", "blue_dream"] + [f"n{i}_x" for i in range(7)]
        assert precision_at_k(ranked_of(units), TRUTH, 10) == pytest.approx(0.30)

    def test_short_list_fixed_denominator(self):
        units = ["black_tar", "cbd_oil", "blue_dream", "coca_cola", "og_kush"]
        truth = GroundTruth.from_strings(
            ["black tar", "cbd oil", "blue dream", "coca cola", "og kush"]
        )
        assert precision_at_k(ranked_of(units), truth, 10) == pytest.approx(0.5)

    def test_no_hits(self):
        assert precision_at_k(ranked_of(["a_b", "c_d"]), TRUTH, 10) == 0.0

    def test_invalid_k(self):
        with pytest.raises(ValueError):
            precision_at_k(ranked_of(["a_b"]), TRUTH, 0)

    def test_prepending_hit_never_decreases(self):
        rng = np.random.default_rng(8)
        for _ in range(30):
            units = [f"c{i}_x" for i in range(20)]
            truth_units = list(rng.choice(units, size=5, replace=False))
            truth = GroundTruth.from_strings(u.replace("_", " ") for u in truth_units)
            base = ranked_of(units)
            boosted = ranked_of(["black_tar"] + units)
            better = GroundTruth.from_strings(
                [u.replace("_", " ") for u in truth_units] + ["black tar"]
            )
            for k in (1, 3, 10, 25):
                assert precision_at_k(boosted, better, k) >= precision_at_k(base, truth, k) - 1e-12

    def test_matches_brute_force_on_random_fixtures(self):
        rng = np.random.default_rng(123)
        for _ in range(50):
            n = int(rng.integers(1, 40))
            units = [f"p{i}_q" for i in range(n)]
            rng.shuffle(units)
            truth_sample = rng.choice(units, size=min(n, int(rng.integers(1, 10))), replace=False)
            truth = GroundTruth.from_strings(u.replace("_", " ") for u in truth_sample)
            k = int(rng.integers(1, 60))
            expected = brute_force_precision_at_k(
                [u.replace("_", " ") for u in units], set(truth.phrases), k
            )
            assert precision_at_k(ranked_of(units), truth, k) == pytest.approx(expected)


class TestGroundTruth:
    def test_normalizes(self):
        truth = GroundTruth.from_strings(["  Black  Tar ", "cbd oil"])
        assert truth.phrases == frozenset({"black tar", "cbd oil"})

    def test_rejects_single_word(self):
        with pytest.raises(ValueError, match="multi-word"):
            GroundTruth.from_strings(["heroin"])

    def test_rejects_empty(self):
        with pytest.raises(ValueError, match="non-empty"):
            GroundTruth.from_strings([])

    def test_load(self, tmp_path):
        path = tmp_path / "truth.txt"
        path.write_text("black tar\ncbd oil\n", encoding="utf-8")
        assert GroundTruth.load(path).phrases == frozenset({"black tar", "cbd oil"})


class TestEvalReport:
    def test_hits_times_k_is_integer(self):
        units = ["black_tar", "x_y", "cbd_oil"] + [f"n{i}_x" for i in range(50)]
        report = evaluate_ranking(ranked_of(units), TRUTH)
        for k in report.ks:
            assert report.hits[k] == round(report.precision[k] * k)
            assert 0.0 <= report.precision[k] <= 1.0

    def test_tsv_and_json_outputs(self, tmp_path):
        report = evaluate_ranking(ranked_of(["black_tar", "n_x"]), TRUTH, ks=(1, 2))
        tsv, js = tmp_path / "eval.tsv", tmp_path / "eval.json"
        write_eval_tsv(tsv, report)
        write_eval_json(js, report)
        lines = tsv.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "method\tk\thits\tprecision"
        assert lines[1].startswith("epd\t1\t1\t1.000000")
        parsed = json.loads(js.read_text(encoding="utf-8"))
        assert parsed["precision_at_k"]["2"] == 0.5
