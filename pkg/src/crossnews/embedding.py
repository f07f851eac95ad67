"""Sentence-vector providers and the vector math used everywhere else.

Vectors are plain numpy float64 arrays. Providers are injected: the engine
never computes transformer embeddings itself, it looks them up (VectorStore)
or synthesizes deterministic ones (HashEmbedder) for tests and dry runs.
"""

from __future__ import annotations

import hashlib
import json
import math
import warnings
from abc import ABC, abstractmethod
from typing import Iterable, Mapping

import numpy as np

# Sentence encoders cap their input; longer texts are cut before lookup so
# store keys stay canonical.
TITLE_MAX_CHARS = 128

DEFAULT_DIM = 768


def truncate_text(text: str, limit: int = TITLE_MAX_CHARS) -> str:
    """Cut `text` to at most `limit` characters (code points, not bytes)."""
    return text[:limit]


class EmbeddingProvider(ABC):
    """Deterministic text -> vector source with a fixed output dimension."""

    dim: int

    @abstractmethod
    def embed(self, text: str) -> np.ndarray:
        """Return the vector for `text` (already truncated by the caller)."""


class VectorStore(EmbeddingProvider):
    """File-backed provider: exact text -> vector, all vectors one dim."""

    def __init__(self, dim: int, entries: Mapping[str, np.ndarray] | None = None):
        if dim <= 0:
            raise ValueError(f"vector dim must be positive, got {dim}")
        self.dim = int(dim)
        self.entries: dict[str, np.ndarray] = {}
        for key, vec in (entries or {}).items():
            self.add(key, vec)

    def add(self, key: str, vec) -> None:
        arr = np.asarray(vec, dtype=np.float64)
        if arr.shape != (self.dim,):
            raise ValueError(
                f"vector for key {key!r} has length {arr.shape}, store dim is {self.dim}"
            )
        self.entries[key] = arr

    def embed(self, text: str) -> np.ndarray:
        try:
            return self.entries[text]
        except KeyError:
            raise KeyError(f"vector store has no entry for key {text!r}") from None

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, key: str) -> bool:
        return key in self.entries

    @classmethod
    def load(cls, path) -> "VectorStore":
        """Read the JSONL store format: header line {"dim": d}, then records.

        Duplicate keys keep the first occurrence and emit a warning; a record
        whose vector length disagrees with the header is an error.
        """
        with open(path, "r", encoding="utf-8") as fh:
            header_line = fh.readline()
            if not header_line.strip():
                raise ValueError(f"{path}: missing header line")
            header = json.loads(header_line)
            if not isinstance(header, dict) or "dim" not in header:
                raise ValueError(f'{path}: first line must be a {{"dim": int}} header')
            store = cls(int(header["dim"]))
            for lineno, line in enumerate(fh, start=2):
                if not line.strip():
                    continue
                rec = json.loads(line)
                key, vec = rec["key"], rec["vec"]
                if key in store.entries:
                    warnings.warn(f"{path}:{lineno}: duplicate key {key!r}, keeping first")
                    continue
                if len(vec) != store.dim:
                    raise ValueError(
                        f"{path}:{lineno}: vector length {len(vec)} != header dim {store.dim}"
                    )
                store.add(key, vec)
        return store

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(json.dumps({"dim": self.dim}) + "\n")
            for key, vec in self.entries.items():
                fh.write(json.dumps({"key": key, "vec": vec.tolist()}) + "\n")


class HashEmbedder(EmbeddingProvider):
    """Deterministic pseudo-random unit vectors derived from sha256.

    Construction (reproducible bit for bit across platforms and languages):
    concatenate sha256("{seed}|{text}|{i}") blocks for i = 0, 1, ..., read
    big-endian uint64s, keep the top 53 bits, map to [-1, 1), then normalize
    by a sequentially accumulated L2 norm (summation order is part of the
    contract).
    """

    def __init__(self, dim: int = DEFAULT_DIM, seed: int = 0):
        if dim <= 0:
            raise ValueError(f"vector dim must be positive, got {dim}")
        self.dim = int(dim)
        self.seed = int(seed)

    def embed(self, text: str) -> np.ndarray:
        need = self.dim * 8
        blocks = []
        for i in range((need + 31) // 32):
            blocks.append(hashlib.sha256(f"{self.seed}|{text}|{i}".encode("utf-8")).digest())
        buf = b"".join(blocks)[:need]
        u = np.frombuffer(buf, dtype=">u8").astype(np.uint64)
        comps = (u >> np.uint64(11)).astype(np.float64) / float(1 << 53) * 2.0 - 1.0
        total = 0.0
        for c in comps.tolist():  # sequential adds, not pairwise reduction
            total += c * c
        norm = math.sqrt(total)
        if norm == 0.0:  # unreachable in practice, keeps the unit-norm contract
            comps[0] = 1.0
            norm = 1.0
        return comps / norm


def embed(provider: EmbeddingProvider, text: str) -> np.ndarray:
    """Embed `text` through `provider`, truncating to the 128-char input cap."""
    if not text:
        raise ValueError("cannot embed empty text")
    vec = provider.embed(truncate_text(text))
    if vec.shape != (provider.dim,):
        raise ValueError(f"provider returned length {vec.shape}, declared dim {provider.dim}")
    return vec


def cosine_similarity(a, b) -> float:
    """Angle-based similarity: sum(a*b) / (|a| * |b|), in [-1, 1]."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"dim mismatch: {a.shape} vs {b.shape}")
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        raise ValueError("undefined cosine: zero vector")
    return max(-1.0, min(1.0, float(np.dot(a, b)) / (na * nb)))


def distillation_loss(
    student_zh: Iterable,
    student_en: Iterable,
    teacher_zh: Iterable,
    teacher_en: Iterable,
) -> float:
    """Cross-pair alignment loss: sum_i |S_zh_i - T_en_i|^2 + |S_en_i - T_zh_i|^2.

    All four sequences must be the same length and vector dimension. Zero
    exactly when every student vector matches its cross-language teacher.
    """
    s_zh = [np.asarray(v, dtype=np.float64) for v in student_zh]
    s_en = [np.asarray(v, dtype=np.float64) for v in student_en]
    t_zh = [np.asarray(v, dtype=np.float64) for v in teacher_zh]
    t_en = [np.asarray(v, dtype=np.float64) for v in teacher_en]
    n = len(s_zh)
    if not (len(s_en) == len(t_zh) == len(t_en) == n):
        raise ValueError(
            f"pair count mismatch: {n}, {len(s_en)}, {len(t_zh)}, {len(t_en)}"
        )
    total = 0.0
    for i in range(n):
        if not (s_zh[i].shape == s_en[i].shape == t_zh[i].shape == t_en[i].shape):
            raise ValueError(f"dim mismatch in pair {i}")
        total += float(np.sum((s_zh[i] - t_en[i]) ** 2))
        total += float(np.sum((s_en[i] - t_zh[i]) ** 2))
    return total


def l2_norm(v) -> float:
    return float(np.linalg.norm(np.asarray(v, dtype=np.float64)))


def unit(v) -> np.ndarray:
    """Normalize to unit length; rejects the zero vector."""
    arr = np.asarray(v, dtype=np.float64)
    n = float(np.linalg.norm(arr))
    if n == 0.0:
        raise ValueError("cannot normalize zero vector")
    return arr / n


def _self_check() -> None:
    # cheap smoke check used by `python -m crossnews.embedding`
    h = HashEmbedder(dim=8, seed=1)
    v = embed(h, "check")
    assert math.isclose(l2_norm(v), 1.0, abs_tol=1e-12)


if __name__ == "__main__":
    _self_check()
    print("embedding self-check ok")
