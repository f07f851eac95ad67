"""Joint news representation (title vector + topic distribution) and the
weighted similarity between two represented articles."""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass

import numpy as np

from .corpus import NewsArticle, tokenize
from .embedding import EmbeddingProvider, cosine_similarity, embed
from .lda import LdaConfig, LdaModel, infer_topics
from .topicsim import TopicSimMatrix

DIST_SUM_TOL = 1e-9


@dataclass
class NewsRepr:
    """The unit of clustering: one article reduced to (T, C) plus metadata.

    published_at and lang are None for synthetic reprs such as cluster
    centroids.
    """

    article_id: str
    T: np.ndarray
    C: np.ndarray
    published_at: dt.date | None = None
    lang: str | None = None
    label: str | None = None

    def __post_init__(self):
        self.T = np.asarray(self.T, dtype=np.float64)
        self.C = np.asarray(self.C, dtype=np.float64)
        if self.C.ndim != 1 or self.T.ndim != 1:
            raise ValueError("T and C must be 1-d vectors")
        if np.any(self.C < 0):
            raise ValueError(f"{self.article_id}: topic distribution has negative entries")
        if abs(float(self.C.sum()) - 1.0) > DIST_SUM_TOL:
            raise ValueError(
                f"{self.article_id}: topic distribution sums to {self.C.sum()}, expected 1"
            )

    def to_dict(self) -> dict:
        out = {
            "id": self.article_id,
            "T": self.T.tolist(),
            "C": self.C.tolist(),
            "published_at": self.published_at.isoformat() if self.published_at else None,
            "lang": self.lang,
        }
        if self.label is not None:
            out["label"] = self.label
        return out

    @classmethod
    def from_dict(cls, obj: dict) -> "NewsRepr":
        return cls(
            article_id=obj["id"],
            T=np.array(obj["T"], dtype=np.float64),
            C=np.array(obj["C"], dtype=np.float64),
            published_at=dt.date.fromisoformat(obj["published_at"]) if obj.get("published_at") else None,
            lang=obj.get("lang"),
            label=obj.get("label"),
        )


@dataclass(frozen=True)
class SimWeights:
    """Title/topic mixing weights; must be non-negative and sum to 1 so the
    combined similarity stays in [0, 1]."""

    alpha: float
    beta: float

    def __post_init__(self):
        if self.alpha < 0 or self.beta < 0:
            raise ValueError("weights must be non-negative")
        if abs(self.alpha + self.beta - 1.0) > DIST_SUM_TOL:
            raise ValueError(f"weights must sum to 1, got {self.alpha + self.beta}")


def represent(
    article: NewsArticle,
    provider: EmbeddingProvider,
    model: LdaModel,
    cfg: LdaConfig,
) -> NewsRepr:
    """Build the clustering representation for one article."""
    try:
        T = embed(provider, article.title)
        C = infer_topics(model, tokenize(article), cfg)
    except (KeyError, ValueError) as exc:
        raise ValueError(f"article {article.id!r}: {exc}") from exc
    return NewsRepr(
        article_id=article.id,
        T=T,
        C=C,
        published_at=article.published_at,
        lang=article.lang,
        label=article.label,
    )


def title_similarity(a: NewsRepr, b: NewsRepr) -> float:
    """Cosine of the title vectors shifted onto [0, 1]."""
    return 0.5 * cosine_similarity(a.T, b.T) + 0.5


def topic_similarity(a: NewsRepr, b: NewsRepr, tm: TopicSimMatrix) -> float:
    """Bilinear form C_a' * norm * C_b over the topic-similarity matrix."""
    if a.C.shape != (tm.k,) or b.C.shape != (tm.k,):
        raise ValueError(
            f"topic distribution sizes {a.C.shape}/{b.C.shape} do not match matrix K={tm.k}"
        )
    return float(a.C @ tm.norm @ b.C)


def news_similarity(a: NewsRepr, b: NewsRepr, w: SimWeights, tm: TopicSimMatrix) -> float:
    """Weighted mix of title and topic similarity; symmetric in a, b."""
    return w.alpha * title_similarity(a, b) + w.beta * topic_similarity(a, b, tm)
