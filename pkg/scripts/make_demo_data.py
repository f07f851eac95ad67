#!/usr/bin/env python3
"""Regenerate the bundled demo corpus and its vector store.

The store mimics what a real aligned bilingual sentence encoder would give:
titles and topic words of one event share a direction regardless of language,
different events are near-orthogonal.
"""

import json
import random
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))
from crossnews import HashEmbedder, truncate_text  # noqa: E402

DIM = 256
ROOT = Path(__file__).resolve().parents[1]

EVENTS = [
    ("rate-decision", "Central bank holds rates steady", "央行宣布维持基准利率不变",
     ["rate", "bank", "policy", "inflation", "hold", "basis", "yield", "bond"],
     ["利率", "央行", "货币", "通胀", "基点", "债券", "政策", "收益"]),
    ("cup-final", "Underdogs clinch the cup final in extra time", "黑马加时绝杀夺得杯赛冠军",
     ["cup", "final", "goal", "striker", "extra", "match", "keeper", "title"],
     ["决赛", "夺冠", "进球", "加时", "门将", "球队", "冠军", "绝杀"]),
    ("chip-launch", "Flagship mobile chip debuts with on-device AI", "旗舰手机芯片发布主打端侧智能",
     ["chip", "silicon", "launch", "mobile", "npu", "process", "flagship", "benchmark"],
     ["芯片", "发布", "旗舰", "手机", "算力", "制程", "端侧", "跑分"]),
]


def orthonormal(n, seed):
    h = HashEmbedder(dim=DIM, seed=seed)
    out = []
    for i in range(n):
        v = h.embed(f"axis-{i}")
        for u in out:
            v = v - np.dot(v, u) * u
        out.append(v / np.linalg.norm(v))
    return out


def jitter(base, key, h, eta2=0.08):
    w = h.embed(key)
    v = np.sqrt(1 - eta2) * base + np.sqrt(eta2) * w
    return v / np.linalg.norm(v)


def main():
    rnd = random.Random(4)
    h = HashEmbedder(dim=DIM, seed=99)
    bases = orthonormal(len(EVENTS), seed=98)

    corpus_path = ROOT / "data" / "demo_corpus.jsonl"
    store_path = ROOT / "data" / "demo_vectors.jsonl"

    lines = []
    vectors: dict[str, np.ndarray] = {}
    for e_idx, (label, en_title, zh_title, en_vocab, zh_vocab) in enumerate(EVENTS):
        base = bases[e_idx]
        # one shared direction per event: zh and en words/titles line up
        vectors[truncate_text(en_title)] = jitter(base, f"title-en-{label}", h, eta2=0.03)
        vectors[truncate_text(zh_title)] = jitter(base, f"title-zh-{label}", h, eta2=0.03)
        for word in en_vocab + zh_vocab:
            vectors[truncate_text(word)] = jitter(base, f"word-{label}-{word}", h)
        for i in range(6):
            lang = "en" if i % 2 == 0 else "zh"
            vocab = en_vocab if lang == "en" else zh_vocab
            lines.append(
                {
                    "id": f"{label}-{i}",
                    "title": en_title if lang == "en" else zh_title,
                    "body": "",
                    "tokens": [rnd.choice(vocab) for _ in range(14)],
                    "lang": lang,
                    "published_at": f"2022-0{e_idx + 1}-{5 + i:02d}",
                    "label": label,
                }
            )

    with open(corpus_path, "w", encoding="utf-8") as fh:
        for l in lines:
            fh.write(json.dumps(l, ensure_ascii=False) + "\n")
    with open(store_path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps({"dim": DIM}) + "\n")
        for key, vec in vectors.items():
            fh.write(json.dumps({"key": key, "vec": vec.tolist()}, ensure_ascii=False) + "\n")
    print(f"wrote {len(lines)} articles -> {corpus_path}")
    print(f"wrote {len(vectors)} vectors -> {store_path}")


if __name__ == "__main__":
    main()
