import json
from pathlib import Path

import pytest

from euphrase.cli import main
from euphrase.config import PipelineConfig
from euphrase.errors import ConfigError
from euphrase.synthetic import SyntheticConfig, write_synthetic_dataset


@pytest.fixture(scope="module")
def dataset(tmp_path_factory):
    root = tmp_path_factory.mktemp("dataset")
    paths = write_synthetic_dataset(root, SyntheticConfig(n_docs=300, seed=5))
    return paths


def write_config(path: Path, dataset, outdir: Path, **overrides) -> Path:
    data = {
        "corpus_path": str(dataset["corpus"]),
        "targets_path": str(dataset["targets"]),
        "ground_truth_path": str(dataset["truth"]),
        "output_dir": str(outdir),
        "seed": 3,
        "embed_dim": 24,
        "embed_epochs": 2,
        "preselect_k": 40,
        **overrides,
    }
    path.write_text(json.dumps(data), encoding="utf-8")
    return path


ARTIFACTS = (
    "resolved_config.json",
    "phrases.tsv",
    "segmented.jsonl",
    "embeddings.txt",
    "pool.tsv",
    "masked.jsonl",
    "ranked_epd.tsv",
    "eval_epd.tsv",
    "eval_epd.json",
)


class TestConfig:
    def test_unknown_key_rejected_by_name(self, tmp_path):
        path = tmp_path / "c.json"
        path.write_text(json.dumps({"windw": 6}), encoding="utf-8")
        with pytest.raises(ConfigError, match="'windw'"):
            PipelineConfig.from_file(path)

    def test_all_failures_listed(self):
        with pytest.raises(ConfigError) as err:
            PipelineConfig.from_dict({"scorer": "psychic", "threads": 0, "rank_method": "magic"})
        message = str(err.value)
        assert "scorer" in message and "threads" in message and "rank_method" in message

    def test_remote_requires_endpoint(self):
        with pytest.raises(ConfigError, match="remote_endpoint"):
            PipelineConfig.from_dict({"scorer": "remote"})

    def test_nested_config_rejected(self, tmp_path):
        path = tmp_path / "c.json"
        path.write_text(json.dumps({"embed": {"dim": 10}}), encoding="utf-8")
        with pytest.raises(ConfigError, match="flat"):
            PipelineConfig.from_file(path)

    def test_defaults_follow_stated_values(self):
        config = PipelineConfig()
        assert config.embed_window == 6
        assert config.embed_dim == 100
        assert config.embed_min_count == 5
        assert config.embed_subsample == 1e-4
        assert config.preselect_k == 1000
        assert config.eval_ks == (10, 20, 30, 50)


class TestCli:
    def test_all_pipeline_and_artifacts(self, dataset, tmp_path):
        outdir = tmp_path / "out"
        config = write_config(tmp_path / "c.json", dataset, outdir)
        assert main(["all", "--config", str(config)]) == 0
        for name in ARTIFACTS:
            assert (outdir / name).exists(), name

    def test_all_equals_staged_runs_byte_identical(self, dataset, tmp_path):
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        config_a = write_config(tmp_path / "ca.json", dataset, out_a)
        config_b = write_config(tmp_path / "cb.json", dataset, out_b)
        assert main(["all", "--config", str(config_a)]) == 0
        for stage in ("mine", "embed", "preselect", "contexts", "rank", "eval"):
            assert main([stage, "--config", str(config_b)]) == 0
        for name in ARTIFACTS:
            if name == "resolved_config.json":
                continue  # embeds the differing output_dir
            assert (out_a / name).read_bytes() == (out_b / name).read_bytes(), name

    def test_rerun_reproduces_byte_identical(self, dataset, tmp_path):
        outdir = tmp_path / "out"
        config = write_config(tmp_path / "c.json", dataset, outdir)
        assert main(["all", "--config", str(config)]) == 0
        first = {name: (outdir / name).read_bytes() for name in ARTIFACTS}
        assert main(["all", "--config", str(config)]) == 0
        for name, blob in first.items():
            assert (outdir / name).read_bytes() == blob, name

    def test_rank_without_contexts_names_stage(self, dataset, tmp_path, caplog):
        outdir = tmp_path / "out"
        config = write_config(tmp_path / "c.json", dataset, outdir)
        with caplog.at_level("ERROR"):
            code = main(["rank", "--config", str(config)])
        assert code == 2
        assert any("contexts" in rec.message for rec in caplog.records)

    def test_invalid_config_key_exits_one(self, dataset, tmp_path, caplog):
        config = tmp_path / "c.json"
        config.write_text(json.dumps({"windw": 6}), encoding="utf-8")
        with caplog.at_level("ERROR"):
            code = main(["mine", "--config", str(config)])
        assert code == 1
        assert any("windw" in rec.message for rec in caplog.records)

    def test_unknown_subcommand_exits_one(self, capsys):
        assert main(["explode"]) == 1
        assert "error" in capsys.readouterr().err

    def test_remote_scorer_failure_exits_three(self, dataset, tmp_path):
        outdir = tmp_path / "out"
        config = write_config(
            tmp_path / "c.json",
            dataset,
            outdir,
            scorer="remote",
            remote_endpoint="http://127.0.0.1:1",
            remote_timeout=0.5,
        )
        for stage in ("mine", "embed", "preselect", "contexts"):
            assert main([stage, "--config", str(config)]) == 0
        assert main(["rank", "--config", str(config)]) == 3

    def test_method_flag_selects_ranker(self, dataset, tmp_path):
        outdir = tmp_path / "out"
        config = write_config(tmp_path / "c.json", dataset, outdir)
        for stage in ("mine", "embed", "preselect", "contexts"):
            assert main([stage, "--config", str(config)]) == 0
        for method in ("word2vec", "eigen", "rank-all", "epd"):
            assert main(["rank", "--config", str(config), "--method", method]) == 0
            path = outdir / f"ranked_{method}.tsv"
            assert path.exists()
            assert f"\t{method}\n" in path.read_text(encoding="utf-8")

    def test_seed_and_out_overrides(self, dataset, tmp_path):
        outdir = tmp_path / "cfgout"
        override = tmp_path / "flagout"
        config = write_config(tmp_path / "c.json", dataset, outdir)
        assert main(["mine", "--config", str(config), "--out", str(override), "--seed", "9"]) == 0
        snapshot = json.loads((override / "resolved_config.json").read_text(encoding="utf-8"))
        assert snapshot["seed"] == 9
        assert snapshot["output_dir"] == str(override)
        assert not outdir.exists()

    def test_synth_subcommand(self, tmp_path):
        outdir = tmp_path / "synthout"
        assert main(["synth", "--out", str(outdir), "--seed", "2", "--docs", "50"]) == 0
        assert (outdir / "corpus.txt").exists()
        assert len((outdir / "corpus.txt").read_text(encoding="utf-8").splitlines()) == 50

    def test_resolved_snapshot_is_loadable_config(self, dataset, tmp_path):
        outdir = tmp_path / "out"
        config = write_config(tmp_path / "c.json", dataset, outdir)
        assert main(["mine", "--config", str(config)]) == 0
        reparsed = PipelineConfig.from_file(outdir / "resolved_config.json")
        assert reparsed.output_dir == str(outdir)
