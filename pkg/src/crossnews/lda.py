"""LDA topic model: collapsed Gibbs training and per-document inference.

Training keeps only the topic-word matrix phi; the document-topic matrix is
discarded because it plays no part in scoring new documents. Inference runs
a short Gibbs chain against the fixed phi and averages post-burn-in topic
counts.
"""

from __future__ import annotations

import hashlib
import json
import logging
import random
import warnings
from dataclasses import dataclass

import numpy as np

from .corpus import TokenizedDoc

logger = logging.getLogger(__name__)

ROW_SUM_TOL = 1e-9


@dataclass
class LdaConfig:
    """Sampler settings. alpha=None means the 50/K heuristic.

    burn_in is the warm-up portion of the training chain (the trainer reads
    final-state counts, so it only bounds train_iters); infer_burn_in is the
    number of inference sweeps discarded before count averaging.
    """

    k: int = 22
    alpha: float | None = None
    beta: float = 0.01
    train_iters: int = 1000
    infer_iters: int = 100
    burn_in: int = 200
    infer_burn_in: int = 20
    seed: int = 0

    def __post_init__(self):
        if self.k < 2:
            raise ValueError(f"topic count must be >= 2, got {self.k}")
        if self.alpha is None:
            self.alpha = 50.0 / self.k
        if self.alpha <= 0 or self.beta <= 0:
            raise ValueError("alpha and beta must be positive")
        if not (self.train_iters > self.burn_in >= 0):
            raise ValueError("need train_iters > burn_in >= 0")
        if not (self.infer_iters > self.infer_burn_in >= 0):
            raise ValueError("need infer_iters > infer_burn_in >= 0")


class LdaModel:
    """Vocabulary plus the K x V topic-word probability matrix."""

    def __init__(self, vocab: list[str], phi: np.ndarray, beta: float):
        self.vocab = list(vocab)
        self.phi = np.asarray(phi, dtype=np.float64)
        self.beta = float(beta)
        self.vocab_index = {w: i for i, w in enumerate(self.vocab)}
        self.validate()

    @property
    def k(self) -> int:
        return self.phi.shape[0]

    @property
    def vocab_size(self) -> int:
        return len(self.vocab)

    def validate(self) -> None:
        if self.phi.ndim != 2 or self.phi.shape[1] != len(self.vocab):
            raise ValueError(
                f"phi shape {self.phi.shape} does not match vocab size {len(self.vocab)}"
            )
        if np.any(self.phi <= 0):
            raise ValueError("phi must be strictly positive (beta-smoothed)")
        sums = self.phi.sum(axis=1)
        bad = np.where(np.abs(sums - 1.0) > ROW_SUM_TOL)[0]
        if bad.size:
            raise ValueError(f"phi row(s) {bad.tolist()} do not sum to 1 (sums {sums[bad]})")

    def save(self, path) -> None:
        payload = {
            "K": self.k,
            "beta": self.beta,
            "vocab": self.vocab,
            "phi": [row.tolist() for row in self.phi],
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, ensure_ascii=False)

    @classmethod
    def load(cls, path) -> "LdaModel":
        with open(path, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
        model = cls(payload["vocab"], np.array(payload["phi"], dtype=np.float64), payload["beta"])
        if model.k != payload["K"]:
            raise ValueError(f"{path}: K={payload['K']} but phi has {model.k} rows")
        return model


def _sample_index(weights: list[float], rnd: random.Random) -> int:
    total = 0.0
    for w in weights:
        total += w
    u = rnd.random() * total
    acc = 0.0
    for k, w in enumerate(weights):
        acc += w
        if u < acc:
            return k
    return len(weights) - 1


def train_lda(docs: list[TokenizedDoc], cfg: LdaConfig) -> LdaModel:
    """Collapsed Gibbs over the corpus; deterministic for a fixed cfg.seed."""
    if not docs:
        raise ValueError("cannot train on an empty corpus")
    vocab = sorted({tok for doc in docs for tok in doc.tokens})
    if len(vocab) < cfg.k:
        warnings.warn(
            f"vocabulary size {len(vocab)} is below the topic count {cfg.k}; "
            "topics cannot all be distinct"
        )
    index = {w: i for i, w in enumerate(vocab)}
    word_ids = [[index[t] for t in doc.tokens] for doc in docs]

    K, V = cfg.k, len(vocab)
    alpha, beta = float(cfg.alpha), float(cfg.beta)
    v_beta = V * beta
    rnd = random.Random(cfg.seed)

    # counts as plain lists: the per-token loop dominates and small-K python
    # arithmetic beats numpy dispatch here
    n_wk = [[0] * K for _ in range(V)]
    n_k = [0] * K
    n_dk = [[0] * K for _ in range(len(docs))]
    assignments: list[list[int]] = []
    total_tokens = 0
    for d, ids in enumerate(word_ids):
        zs = []
        for w in ids:
            z = rnd.randrange(K)
            zs.append(z)
            n_wk[w][z] += 1
            n_k[z] += 1
            n_dk[d][z] += 1
            total_tokens += 1
        assignments.append(zs)

    weights = [0.0] * K
    for _ in range(cfg.train_iters):
        for d, ids in enumerate(word_ids):
            zs = assignments[d]
            doc_counts = n_dk[d]
            for pos, w in enumerate(ids):
                z = zs[pos]
                counts_w = n_wk[w]
                counts_w[z] -= 1
                n_k[z] -= 1
                doc_counts[z] -= 1
                for k in range(K):
                    weights[k] = (counts_w[k] + beta) * (doc_counts[k] + alpha) / (n_k[k] + v_beta)
                z = _sample_index(weights, rnd)
                zs[pos] = z
                counts_w[z] += 1
                n_k[z] += 1
                doc_counts[z] += 1
        assert sum(n_k) == total_tokens, "topic counts out of sync with corpus size"

    n_kw = np.array(n_wk, dtype=np.float64).T  # K x V
    phi = (n_kw + beta) / (np.array(n_k, dtype=np.float64)[:, None] + v_beta)
    return LdaModel(vocab, phi, beta)


def infer_topics(model: LdaModel, doc: TokenizedDoc, cfg: LdaConfig) -> np.ndarray:
    """Topic distribution for one document against a trained model.

    Out-of-vocabulary tokens are dropped; a document with no known tokens
    gets the uniform distribution. Tokens are visited in sorted order, so the
    result is invariant under token reordering.
    """
    known = sorted(t for t in doc.tokens if t in model.vocab_index)
    dropped = len(doc.tokens) - len(known)
    if dropped:
        logger.debug("doc %s: dropped %d OOV token(s)", doc.article_id, dropped)
    K = model.k
    alpha = float(cfg.alpha)
    if not known:
        return np.full(K, 1.0 / K)

    # per-doc seed: deterministic, independent across distinct documents
    digest = hashlib.sha256((f"{cfg.seed}|" + "\x00".join(known)).encode("utf-8")).digest()
    rnd = random.Random(int.from_bytes(digest[:8], "big"))

    word_ids = [model.vocab_index[t] for t in known]
    phi_cols = [model.phi[:, w].tolist() for w in word_ids]
    n_k = [0] * K
    zs = []
    for _ in word_ids:
        z = rnd.randrange(K)
        zs.append(z)
        n_k[z] += 1

    acc = [0.0] * K
    samples = 0
    weights = [0.0] * K
    for sweep in range(cfg.infer_iters):
        for pos in range(len(word_ids)):
            z = zs[pos]
            n_k[z] -= 1
            col = phi_cols[pos]
            for k in range(K):
                weights[k] = col[k] * (n_k[k] + alpha)
            z = _sample_index(weights, rnd)
            zs[pos] = z
            n_k[z] += 1
        if sweep >= cfg.infer_burn_in:
            for k in range(K):
                acc[k] += n_k[k]
            samples += 1

    n_tokens = len(word_ids)
    denom = n_tokens + K * alpha
    theta = np.array([(acc[k] / samples + alpha) / denom for k in range(K)])
    return theta


def top_words(model: LdaModel, topic: int, m: int) -> list[str]:
    """The m most probable words of a topic; ties broken lexicographically."""
    if not (0 <= topic < model.k):
        raise IndexError(f"topic index {topic} out of range [0, {model.k})")
    if not (1 <= m <= model.vocab_size):
        raise ValueError(f"m must be in [1, {model.vocab_size}], got {m}")
    row = model.phi[topic]
    order = sorted(range(model.vocab_size), key=lambda w: (-row[w], model.vocab[w]))
    return [model.vocab[w] for w in order[:m]]
