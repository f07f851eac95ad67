"""Cross-lingual streaming news clustering.

Articles are represented by a title sentence vector plus an LDA topic
distribution; topic-space comparisons go through a precomputed K x K
topic-similarity matrix; clustering is incremental Single-Pass with centroid
assignment, cluster merging, and an optional date-span gate.
"""

from .cluster import (
    AssignmentRecord,
    Cluster,
    ClusterParams,
    ClusterState,
    assign,
    assign_baseline,
    assign_coarse,
    assign_fine,
    baseline_distance,
    load_state,
    merge_pass,
    save_state,
)
from .corpus import NewsArticle, TokenizedDoc, load_articles, save_articles, tokenize
from .embedding import (
    TITLE_MAX_CHARS,
    EmbeddingProvider,
    HashEmbedder,
    VectorStore,
    cosine_similarity,
    distillation_loss,
    embed,
    truncate_text,
)
from .evaluation import (
    ConfusionMatrix,
    event_prf,
    greedy_majority_mapping,
    kappa,
    language_balance,
    mapped_confusion,
    purity,
)
from .lda import LdaConfig, LdaModel, infer_topics, top_words, train_lda
from .newsrep import NewsRepr, SimWeights, news_similarity, represent, title_similarity, topic_similarity
from .topicsim import TopicSimMatrix, build_topic_matrix, raw_topic_sim, remap_similarities, word_to_topic_sim

__version__ = "0.1.0"

__all__ = [
    "AssignmentRecord",
    "Cluster",
    "ClusterParams",
    "ClusterState",
    "ConfusionMatrix",
    "EmbeddingProvider",
    "HashEmbedder",
    "LdaConfig",
    "LdaModel",
    "NewsArticle",
    "NewsRepr",
    "SimWeights",
    "TITLE_MAX_CHARS",
    "TokenizedDoc",
    "TopicSimMatrix",
    "VectorStore",
    "assign",
    "assign_baseline",
    "assign_coarse",
    "assign_fine",
    "baseline_distance",
    "build_topic_matrix",
    "cosine_similarity",
    "distillation_loss",
    "embed",
    "event_prf",
    "greedy_majority_mapping",
    "infer_topics",
    "kappa",
    "language_balance",
    "load_articles",
    "load_state",
    "mapped_confusion",
    "merge_pass",
    "news_similarity",
    "purity",
    "raw_topic_sim",
    "remap_similarities",
    "represent",
    "save_articles",
    "save_state",
    "title_similarity",
    "tokenize",
    "top_words",
    "topic_similarity",
    "train_lda",
    "truncate_text",
    "word_to_topic_sim",
]
