"""Stage runners: each stage reads its inputs from disk and writes its
artifacts to the output directory, so expensive stages are cached and
any stage can be re-run in isolation.

Artifact layout under ``output_dir``::

    resolved_config.json    snapshot of the config that produced the run
    phrases.tsv             mined phrase candidates (mine)
    segmented.jsonl         phrase-joined corpus (mine)
    embeddings.txt          unit vectors (embed)
    pool.tsv                pre-selected candidates (preselect)
    masked.jsonl            filtered masked sentences (contexts)
    ranked_<method>.tsv     ranked candidates (rank)
    eval_<method>.tsv/.json precision report (eval)
"""

from __future__ import annotations

import json
import logging
from collections import Counter
from pathlib import Path

from .config import PipelineConfig
from .contexts import (
    ContextFilterConfig,
    extract_masked_sentences,
    filter_informative,
    read_masked_jsonl,
    write_masked_jsonl,
)
from .corpus import load_corpus
from .embeddings import EmbeddingTable, TrainParams, train_embeddings
from .errors import ConfigError, MissingArtifactError
from .evaluate import GroundTruth, evaluate_ranking, write_eval_json, write_eval_tsv
from .phrases import (
    MinerConfig,
    SegmentedCorpus,
    accepted_phrases,
    load_stopwords,
    mine_phrases,
    read_phrases_tsv,
    segment_corpus,
    write_phrases_tsv,
)
from .preselect import TargetKeywordSet, preselect, read_pool_tsv, write_pool_tsv
from .ranking import (
    RankedList,
    rank_all,
    rank_eigen,
    rank_epd,
    rank_word2vec,
    read_ranked_tsv,
    write_ranked_tsv,
)
from .scoring import OfflineScorerConfig, RemoteScorer, RemoteScorerConfig, build_offline_scorer

logger = logging.getLogger(__name__)

STAGES = ("mine", "embed", "preselect", "contexts", "rank", "eval")


def _artifact(config: PipelineConfig, name: str) -> Path:
    return Path(config.output_dir) / name


def _require(config: PipelineConfig, name: str, producer: str) -> Path:
    path = _artifact(config, name)
    if not path.exists():
        raise MissingArtifactError(str(path), producer)
    return path


def _require_input(value: str | None, key: str) -> str:
    if not value:
        raise ConfigError(f"this stage requires the {key!r} config key")
    return value


def _stopwords(config: PipelineConfig):
    return load_stopwords(config.stopwords_path) if config.stopwords_path else None


def write_segmented_jsonl(path: Path, corpus: SegmentedCorpus) -> None:
    with path.open("w", encoding="utf-8") as fh:
        for doc_id, doc in zip(corpus.doc_ids, corpus.documents):
            fh.write(json.dumps({"doc_id": doc_id, "sentences": doc}, sort_keys=True) + "\n")


def read_segmented_jsonl(path: Path, config: PipelineConfig) -> SegmentedCorpus:
    documents, doc_ids = [], []
    vocab: Counter = Counter()
    with path.open(encoding="utf-8") as fh:
        for line in fh:
            rec = json.loads(line)
            doc_ids.append(rec["doc_id"])
            documents.append(rec["sentences"])
            for sentence in rec["sentences"]:
                vocab.update(sentence)
    inventory = []
    phrases_path = _artifact(config, "phrases.tsv")
    if phrases_path.exists():
        inventory = accepted_phrases(read_phrases_tsv(phrases_path), config.quality_threshold)
    return SegmentedCorpus(documents=documents, doc_ids=doc_ids, vocab=vocab, phrase_inventory=inventory)


def _load_targets(config: PipelineConfig) -> TargetKeywordSet:
    return TargetKeywordSet.load(_require_input(config.targets_path, "targets_path"))


def _prepare_outdir(config: PipelineConfig) -> None:
    outdir = Path(config.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    config.write_snapshot(outdir)


def stage_mine(config: PipelineConfig) -> None:
    corpus = load_corpus(
        _require_input(config.corpus_path, "corpus_path"),
        format=config.corpus_format,
        text_field=config.text_field,
    )
    miner = MinerConfig(
        max_len=config.phrase_max_len,
        min_count=config.phrase_min_count,
        quality_threshold=config.quality_threshold,
        stopwords=_stopwords(config),
    )
    candidates = mine_phrases(corpus, miner)
    write_phrases_tsv(_artifact(config, "phrases.tsv"), candidates)
    accepted = accepted_phrases(candidates, config.quality_threshold)
    segmented = segment_corpus(corpus, accepted)
    write_segmented_jsonl(_artifact(config, "segmented.jsonl"), segmented)
    logger.info("mine: %d candidates, %d accepted at threshold %.2f",
                len(candidates), len(accepted), config.quality_threshold)


def stage_embed(config: PipelineConfig) -> None:
    segmented = read_segmented_jsonl(_require(config, "segmented.jsonl", "mine"), config)
    params = TrainParams(
        window=config.embed_window,
        dim=config.embed_dim,
        min_count=config.embed_min_count,
        subsample=config.embed_subsample,
        negatives=config.embed_negatives,
        epochs=config.embed_epochs,
        initial_lr=config.embed_initial_lr,
        seed=config.seed,
        threads=config.threads,
    )
    table = train_embeddings(segmented, params)
    table.save(_artifact(config, "embeddings.txt"))


def stage_preselect(config: PipelineConfig) -> None:
    table = EmbeddingTable.load(_require(config, "embeddings.txt", "embed"))
    candidates = read_phrases_tsv(_require(config, "phrases.tsv", "mine"))
    accepted = accepted_phrases(candidates, config.quality_threshold)
    pool = preselect(
        table,
        [c.unit for c in accepted],
        _load_targets(config),
        k=config.preselect_k,
    )
    write_pool_tsv(_artifact(config, "pool.tsv"), pool)


def stage_contexts(config: PipelineConfig) -> None:
    segmented = read_segmented_jsonl(_require(config, "segmented.jsonl", "mine"), config)
    masked = extract_masked_sentences(
        segmented, _load_targets(config), max_context=config.context_max_side
    )
    filtered = filter_informative(
        masked,
        ContextFilterConfig(
            min_context_tokens=config.context_min_tokens,
            min_content=config.context_min_content,
            stopwords=_stopwords(config),
        ),
    )
    write_masked_jsonl(_artifact(config, "masked.jsonl"), filtered)


def _build_scorer(config: PipelineConfig):
    if config.scorer == "remote":
        return RemoteScorer(
            RemoteScorerConfig(
                endpoint=_require_input(config.remote_endpoint, "remote_endpoint"),
                timeout=config.remote_timeout,
                batch_size=config.remote_batch_size,
                retries=config.remote_retries,
                parallel_requests=config.remote_parallel,
            )
        )
    segmented = read_segmented_jsonl(_require(config, "segmented.jsonl", "mine"), config)
    return build_offline_scorer(
        segmented, OfflineScorerConfig(window=config.offline_window, alpha=config.offline_alpha)
    )


def stage_rank(config: PipelineConfig, method: str | None = None) -> RankedList:
    method = method or config.rank_method
    masked = read_masked_jsonl(_require(config, "masked.jsonl", "contexts"))
    if method == "epd":
        pool = read_pool_tsv(_require(config, "pool.tsv", "preselect"))
        ranked = rank_epd(pool, masked, _build_scorer(config))
    elif method == "rank-all":
        candidates = read_phrases_tsv(_require(config, "phrases.tsv", "mine"))
        accepted = accepted_phrases(candidates, config.quality_threshold)
        ranked = rank_all([c.unit for c in accepted], masked, _build_scorer(config))
    elif method == "word2vec":
        ranked = rank_word2vec(read_pool_tsv(_require(config, "pool.tsv", "preselect")))
    elif method == "eigen":
        table = EmbeddingTable.load(_require(config, "embeddings.txt", "embed"))
        pool = read_pool_tsv(_require(config, "pool.tsv", "preselect"))
        ranked = rank_eigen(table, pool, _load_targets(config), config.eigen_sim_threshold)
    else:
        raise ConfigError(f"unknown ranking method {method!r}")
    write_ranked_tsv(_artifact(config, f"ranked_{method}.tsv"), ranked)
    return ranked


def stage_eval(config: PipelineConfig, method: str | None = None) -> None:
    method = method or config.rank_method
    ranked = read_ranked_tsv(_require(config, f"ranked_{method}.tsv", "rank"))
    truth = GroundTruth.load(_require_input(config.ground_truth_path, "ground_truth_path"))
    report = evaluate_ranking(ranked, truth, config.eval_ks)
    write_eval_tsv(_artifact(config, f"eval_{method}.tsv"), report)
    write_eval_json(_artifact(config, f"eval_{method}.json"), report)


def run_stage(stage: str, config: PipelineConfig, method: str | None = None) -> None:
    """Run one stage (or ``all``) with artifacts under ``config.output_dir``."""
    _prepare_outdir(config)
    if stage == "all":
        for name in STAGES:
            run_single(name, config, method)
        return
    run_single(stage, config, method)


def run_single(stage: str, config: PipelineConfig, method: str | None = None) -> None:
    if stage == "mine":
        stage_mine(config)
    elif stage == "embed":
        stage_embed(config)
    elif stage == "preselect":
        stage_preselect(config)
    elif stage == "contexts":
        stage_contexts(config)
    elif stage == "rank":
        stage_rank(config, method)
    elif stage == "eval":
        stage_eval(config, method)
    else:
        raise ConfigError(f"unknown stage {stage!r}")
