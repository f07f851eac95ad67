"""Shared builders: planted streams with controlled geometry, toy corpora."""

from __future__ import annotations

import datetime as dt
import random

import numpy as np
import pytest

from crossnews import HashEmbedder, NewsRepr, TokenizedDoc, TopicSimMatrix


def orthonormal_bases(n: int, dim: int, seed: int) -> list[np.ndarray]:
    """Gram-Schmidt over hash vectors: exact zeros between base directions."""
    h = HashEmbedder(dim=dim, seed=seed)
    out: list[np.ndarray] = []
    for i in range(n):
        v = h.embed(f"base-{i}")
        for u in out:
            v = v - np.dot(v, u) * u
        out.append(v / np.linalg.norm(v))
    return out


def noisy_title(base: np.ndarray, noise_key: str, h: HashEmbedder, eta2: float = 0.05) -> np.ndarray:
    w = h.embed(noise_key)
    v = np.sqrt(1.0 - eta2) * base + np.sqrt(eta2) * w
    return v / np.linalg.norm(v)


def one_hot(k: int, size: int) -> np.ndarray:
    c = np.zeros(size)
    c[k] = 1.0
    return c


def planted_stream(
    n_events: int = 5,
    n_articles: int = 300,
    dim: int = 256,
    seed: int = 7,
    with_drift_lobe: bool = False,
):
    """Synthetic bilingual stream with one planted cluster per event.

    Title vectors sit in orthogonal cones (intra cosine ~0.94, inter ~0).
    With `with_drift_lobe`, the last event's topic mass straddles two adjacent
    topics so that its second lobe starts as a separate cluster and is only
    reunited by centroid merging.
    """
    k_topics = n_events + 1 if with_drift_lobe else n_events
    norm = np.full((k_topics, k_topics), 0.2)
    np.fill_diagonal(norm, 1.0)
    if with_drift_lobe:
        norm[n_events - 1, n_events] = norm[n_events, n_events - 1] = 0.58
    tm = TopicSimMatrix(
        k=k_topics, m=1, sim_min=float(norm.min()), sim_max=float(norm[norm < 1].max()), norm=norm
    )

    bases = orthonormal_bases(n_events, dim, seed)
    h = HashEmbedder(dim=dim, seed=seed + 1)
    start = dt.date(2022, 1, 1)
    reprs: list[NewsRepr] = []

    def add(event: int, c_vec: np.ndarray) -> None:
        i = len(reprs)
        reprs.append(
            NewsRepr(
                article_id=f"a{i:04d}",
                T=noisy_title(bases[event], f"noise-{i}", h),
                C=c_vec,
                published_at=start + dt.timedelta(days=i % 30),
                lang="zh" if i % 2 == 0 else "en",
                label=f"event-{event}",
            )
        )

    def mix(x: float) -> np.ndarray:
        c = np.zeros(k_topics)
        c[n_events - 1] = x
        c[n_events] = 1.0 - x
        return c

    if with_drift_lobe:
        lobe_budget = 60
        clean = n_articles - lobe_budget
        plan: list[tuple[str, int]] = []
        for j in range(clean // (n_events - 1) + 1):
            for e in range(n_events - 1):
                plan.append(("clean", e))
        plan = plan[:clean]
        lobe = (
            [("lobeA", n_events - 1)] * 20
            + [("seedB", n_events - 1)]
            + [("driftB", n_events - 1)] * 19
            + [("lobeA", n_events - 1)] * 20
        )
        plan = plan[: clean * 2 // 5] + lobe + plan[clean * 2 // 5 :]
        for kind, e in plan:
            if kind == "clean" or kind == "lobeA":
                add(e, one_hot(e, k_topics))
            elif kind == "seedB":
                add(e, one_hot(n_events, k_topics))
            else:
                add(e, mix(0.48))
    else:
        for i in range(n_articles):
            e = i % n_events
            add(e, one_hot(e, k_topics))
    return reprs, tm


def disjoint_corpus(
    n_docs: int = 200,
    words_per_side: int = 20,
    seed: int = 42,
    min_len: int = 20,
    max_len: int = 40,
) -> tuple[list[TokenizedDoc], list[str], list[str]]:
    """Docs drawn from one of two disjoint vocabularies (even/odd split)."""
    rnd = random.Random(seed)
    vocab_a = [f"alpha{i}" for i in range(words_per_side)]
    vocab_b = [f"beta{i}" for i in range(words_per_side)]
    docs = []
    for i in range(n_docs):
        vocab = vocab_a if i % 2 == 0 else vocab_b
        n = rnd.randint(min_len, max_len)
        docs.append(TokenizedDoc(article_id=f"d{i}", tokens=[rnd.choice(vocab) for _ in range(n)]))
    return docs, vocab_a, vocab_b


@pytest.fixture(scope="session")
def hash_provider():
    return HashEmbedder(dim=32, seed=5)
