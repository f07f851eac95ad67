"""Topic-to-topic similarity matrix built from topic words and an embedder.

Each topic is summarized by its top-m words; word-to-topic similarity is the
best cosine against the other topic's word vectors, topic-to-topic similarity
is the symmetrized mean, and the raw values are remapped onto [0, 1] with a
sine curve anchored at the observed off-diagonal extremes.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .embedding import EmbeddingProvider, cosine_similarity, embed
from .lda import LdaModel, top_words

SYMMETRY_TOL = 1e-9


@dataclass
class TopicSimMatrix:
    k: int
    m: int
    sim_min: float
    sim_max: float
    norm: np.ndarray
    raw: np.ndarray | None = None  # not persisted

    def __post_init__(self):
        self.norm = np.asarray(self.norm, dtype=np.float64)
        if self.norm.shape != (self.k, self.k):
            raise ValueError(f"norm shape {self.norm.shape} != ({self.k}, {self.k})")
        if not np.allclose(self.norm, self.norm.T, atol=SYMMETRY_TOL):
            raise ValueError("norm matrix is not symmetric")
        if np.any(self.norm < 0.0) or np.any(self.norm > 1.0):
            raise ValueError("norm entries must lie in [0, 1]")
        if not np.allclose(np.diag(self.norm), 1.0, atol=SYMMETRY_TOL):
            raise ValueError("norm diagonal must be 1")

    def save(self, path) -> None:
        payload = {
            "K": self.k,
            "m": self.m,
            "sim_min": self.sim_min,
            "sim_max": self.sim_max,
            "norm": [row.tolist() for row in self.norm],
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh)

    @classmethod
    def load(cls, path) -> "TopicSimMatrix":
        with open(path, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
        return cls(
            k=int(payload["K"]),
            m=int(payload["m"]),
            sim_min=float(payload["sim_min"]),
            sim_max=float(payload["sim_max"]),
            norm=np.array(payload["norm"], dtype=np.float64),
        )


def word_to_topic_sim(word_vec, topic_vecs) -> float:
    """Best cosine between one word vector and any of the topic's word vectors."""
    vecs = list(topic_vecs)
    if not vecs:
        raise ValueError("topic has no word vectors")
    return max(cosine_similarity(word_vec, v) for v in vecs)


def raw_topic_sim(topic_a_vecs, topic_b_vecs) -> float:
    """Symmetrized topic similarity over two equal-size topic-word sets."""
    a = list(topic_a_vecs)
    b = list(topic_b_vecs)
    if len(a) != len(b):
        raise ValueError(f"topic word counts differ: {len(a)} vs {len(b)}")
    m = len(a)
    total = sum(word_to_topic_sim(av, b) for av in a)
    total += sum(word_to_topic_sim(bv, a) for bv in b)
    return total / (2 * m)


def _offdiag_extremes(raw: np.ndarray) -> tuple[float, float]:
    mask = ~np.eye(raw.shape[0], dtype=bool)
    off = raw[mask]
    return float(off.min()), float(off.max())


def remap_similarities(raw) -> np.ndarray:
    """Sine-remap off-diagonal entries onto [0, 1]; the diagonal is pinned to 1.

    The observed off-diagonal minimum maps to 0, the maximum to 1, and their
    midpoint to 0.5; the map is strictly increasing between the extremes. A
    degenerate input (all off-diagonal entries equal) maps them all to 0.5.
    """
    raw = np.asarray(raw, dtype=np.float64)
    if raw.ndim != 2 or raw.shape[0] != raw.shape[1] or raw.shape[0] < 2:
        raise ValueError(f"need a square matrix with K >= 2, got shape {raw.shape}")
    if not np.allclose(raw, raw.T, atol=SYMMETRY_TOL):
        raise ValueError("raw similarity matrix is not symmetric")
    sim_min, sim_max = _offdiag_extremes(raw)
    out = np.empty_like(raw)
    if sim_max == sim_min:
        warnings.warn("degenerate similarity range: all off-diagonal entries remap to 0.5")
        out.fill(0.5)
    else:
        a = math.pi / (sim_max - sim_min)
        b = math.pi / 2 - sim_max * a
        out = 0.5 * np.sin(a * raw + b) + 0.5
        np.clip(out, 0.0, 1.0, out=out)
    np.fill_diagonal(out, 1.0)
    return out


def build_topic_matrix(model: LdaModel, provider: EmbeddingProvider, m: int = 10) -> TopicSimMatrix:
    """Embed each topic's top-m words and fill the K x K similarity matrix.

    m is clamped to the vocabulary size (with a warning) so tiny toy models
    still build.
    """
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    if m > model.vocab_size:
        warnings.warn(f"m={m} exceeds vocabulary size {model.vocab_size}; clamping")
        m = model.vocab_size
    topic_vecs = []
    for t in range(model.k):
        vecs = []
        for word in top_words(model, t, m):
            try:
                vecs.append(embed(provider, word))
            except (KeyError, ValueError) as exc:
                raise ValueError(f"cannot embed word {word!r} of topic {t}: {exc}") from exc
        topic_vecs.append(vecs)

    K = model.k
    raw = np.empty((K, K))
    for i in range(K):
        for j in range(i, K):
            s = raw_topic_sim(topic_vecs[i], topic_vecs[j])
            raw[i, j] = s
            raw[j, i] = s
    sim_min, sim_max = _offdiag_extremes(raw)
    norm = remap_similarities(raw)
    return TopicSimMatrix(k=K, m=m, sim_min=sim_min, sim_max=sim_max, norm=norm, raw=raw)
