"""euphrase: detect multi-word euphemisms for target keywords.

Pipeline: mine quality phrases from a corpus, embed words and phrases in
one vector space, pre-select candidates by similarity to the target
keywords, then rank them by how well they fill masked target slots.
"""

from .config import PipelineConfig
from .contexts import MaskedSentence, extract_masked_sentences, filter_informative
from .corpus import TokenizedCorpus, load_corpus, tokenize
from .embeddings import EmbeddingTable, TrainParams, average_target_embedding, cosine, train_embeddings
from .evaluate import GroundTruth, evaluate_ranking, precision_at_k
from .phrases import MinerConfig, PhraseCandidate, SegmentedCorpus, mine_phrases, segment_corpus
from .preselect import CandidatePool, TargetKeywordSet, preselect
from .ranking import RankedList, rank_all, rank_eigen, rank_epd, rank_word2vec
from .scoring import OfflineScorer, RemoteScorer, build_offline_scorer, build_score_matrix
from .synthetic import SyntheticConfig, generate_synthetic_corpus

__version__ = "0.1.0"

__all__ = [
    "CandidatePool",
    "EmbeddingTable",
    "GroundTruth",
    "MaskedSentence",
    "MinerConfig",
    "OfflineScorer",
    "PhraseCandidate",
    "PipelineConfig",
    "RankedList",
    "RemoteScorer",
    "SegmentedCorpus",
    "SyntheticConfig",
    "TargetKeywordSet",
    "TokenizedCorpus",
    "TrainParams",
    "average_target_embedding",
    "build_offline_scorer",
    "build_score_matrix",
    "cosine",
    "evaluate_ranking",
    "extract_masked_sentences",
    "filter_informative",
    "generate_synthetic_corpus",
    "load_corpus",
    "mine_phrases",
    "precision_at_k",
    "preselect",
    "rank_all",
    "rank_eigen",
    "rank_epd",
    "rank_word2vec",
    "segment_corpus",
    "tokenize",
    "train_embeddings",
]
