"""Clustering and classification metrics: confusion matrix + Kappa, cluster
purity with noise exclusion, per-cluster language balance, and per-event
precision/recall/F1 under a 1:1 cluster-to-event mapping."""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Mapping, NamedTuple

import numpy as np


@dataclass
class ConfusionMatrix:
    """Square count matrix; rows are gold classes, columns predictions."""

    labels: list[str]
    counts: np.ndarray

    def __post_init__(self):
        self.counts = np.asarray(self.counts, dtype=np.int64)
        L = len(self.labels)
        if self.counts.shape != (L, L):
            raise ValueError(f"counts shape {self.counts.shape} != ({L}, {L})")
        if np.any(self.counts < 0):
            raise ValueError("counts must be non-negative")

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @classmethod
    def from_pairs(cls, gold, predicted, labels=None) -> "ConfusionMatrix":
        gold = list(gold)
        predicted = list(predicted)
        if len(gold) != len(predicted):
            raise ValueError("gold/predicted length mismatch")
        if labels is None:
            labels = sorted(set(gold) | set(predicted))
        index = {lab: i for i, lab in enumerate(labels)}
        counts = np.zeros((len(labels), len(labels)), dtype=np.int64)
        for g, p in zip(gold, predicted):
            counts[index[g], index[p]] += 1
        return cls(list(labels), counts)


class KappaResult(NamedTuple):
    p0: float
    pe: float
    k: float


def kappa(cm: ConfusionMatrix) -> KappaResult:
    """Chance-corrected agreement: k = (p0 - pe) / (1 - pe).

    p0 is overall accuracy; pe sums the row-total x column-total products
    over the squared grand total.
    """
    total = cm.total
    if total == 0:
        raise ValueError("empty confusion matrix")
    p0 = float(np.trace(cm.counts)) / total
    rows = cm.counts.sum(axis=1).astype(np.float64)
    cols = cm.counts.sum(axis=0).astype(np.float64)
    pe = float(np.dot(rows, cols)) / (total * total)
    if pe == 1.0:
        raise ValueError("degenerate single-class matrix: pe = 1")
    return KappaResult(p0, pe, (p0 - pe) / (1.0 - pe))


@dataclass
class ClusterStats:
    cluster_id: int
    size: int
    histogram: dict[str, int]
    majority_label: str
    majority_count: int
    purity: float
    zh_count: int | None = None
    en_count: int | None = None


@dataclass
class ClusterReport:
    per_cluster: list[ClusterStats]
    excluded: list[int]
    total_articles: int
    average_purity: float
    micro_purity: float  # majority total / size total over retained clusters
    noise_fraction: float

    def to_dict(self) -> dict:
        return {
            "per_cluster": [
                {
                    "cluster": s.cluster_id,
                    "size": s.size,
                    "histogram": dict(s.histogram),
                    "majority_label": s.majority_label,
                    "majority_count": s.majority_count,
                    "purity": s.purity,
                    "zh_count": s.zh_count,
                    "en_count": s.en_count,
                }
                for s in self.per_cluster
            ],
            "excluded": list(self.excluded),
            "total_articles": self.total_articles,
            "average_purity": self.average_purity,
            "micro_purity": self.micro_purity,
            "noise_fraction": self.noise_fraction,
        }


def _require_labels(assignments: Mapping[str, int], labels: Mapping[str, str]) -> None:
    missing = sorted(aid for aid in assignments if aid not in labels)
    if missing:
        raise ValueError(f"{len(missing)} article(s) have no label: {missing}")


def _majority(hist: Counter) -> tuple[str, int]:
    # ties broken by lexicographically smaller label for determinism
    label = min(hist, key=lambda lab: (-hist[lab], lab))
    return label, hist[label]


def purity(
    assignments: Mapping[str, int],
    labels: Mapping[str, str],
    noise_fraction: float = 0.04,
    langs: Mapping[str, str] | None = None,
) -> ClusterReport:
    """Per-cluster purity (majority label share) plus noise-filtered averages.

    Clusters holding fewer than noise_fraction of all articles are treated as
    noise: they stay listed but are excluded from both averages. When `langs`
    is given, each cluster's majority-label members are split into zh/en
    counts (the language-balance input).
    """
    _require_labels(assignments, labels)
    by_cluster: dict[int, list[str]] = defaultdict(list)
    for aid, cid in assignments.items():
        by_cluster[cid].append(aid)
    total = sum(len(v) for v in by_cluster.values())
    cutoff = noise_fraction * total

    per_cluster: list[ClusterStats] = []
    excluded: list[int] = []
    for cid in sorted(by_cluster):
        members = by_cluster[cid]
        hist = Counter(labels[aid] for aid in members)
        maj_label, maj_count = _majority(hist)
        zh = en = None
        if langs is not None:
            zh = sum(
                1 for aid in members if labels[aid] == maj_label and langs.get(aid) == "zh"
            )
            en = sum(
                1 for aid in members if labels[aid] == maj_label and langs.get(aid) == "en"
            )
        per_cluster.append(
            ClusterStats(
                cluster_id=cid,
                size=len(members),
                histogram=dict(sorted(hist.items())),
                majority_label=maj_label,
                majority_count=maj_count,
                purity=maj_count / len(members),
                zh_count=zh,
                en_count=en,
            )
        )
        if len(members) < cutoff:
            excluded.append(cid)

    retained = [s for s in per_cluster if s.cluster_id not in excluded]
    if retained:
        average = sum(s.purity for s in retained) / len(retained)
        micro = sum(s.majority_count for s in retained) / sum(s.size for s in retained)
    else:
        average = micro = 0.0
    return ClusterReport(
        per_cluster=per_cluster,
        excluded=excluded,
        total_articles=total,
        average_purity=average,
        micro_purity=micro,
        noise_fraction=noise_fraction,
    )


@dataclass
class LanguageBalance:
    per_cluster: dict[int, float]  # zh share among majority-label members
    zh_total: int
    en_total: int

    @property
    def total_proportion(self) -> float:
        return self.zh_total / (self.zh_total + self.en_total)


def language_balance(
    assignments: Mapping[str, int],
    langs: Mapping[str, str],
    labels: Mapping[str, str],
    noise_fraction: float = 0.04,
) -> LanguageBalance:
    """Chinese share among each retained cluster's majority-label members."""
    report = purity(assignments, labels, noise_fraction=noise_fraction, langs=langs)
    per_cluster: dict[int, float] = {}
    zh_total = en_total = 0
    for s in report.per_cluster:
        if s.cluster_id in report.excluded:
            continue
        zh, en = s.zh_count or 0, s.en_count or 0
        if zh + en == 0:
            raise ValueError(f"cluster {s.cluster_id}: majority members carry no language")
        per_cluster[s.cluster_id] = zh / (zh + en)
        zh_total += zh
        en_total += en
    return LanguageBalance(per_cluster=per_cluster, zh_total=zh_total, en_total=en_total)


@dataclass
class EventScore:
    event: str
    cluster_id: int | None
    tp: int
    cluster_size: int
    gold_size: int
    precision: float
    recall: float
    f1: float


@dataclass
class EventPrfReport:
    per_event: list[EventScore]
    overall_accuracy: float
    total_articles: int

    def to_dict(self) -> dict:
        return {
            "per_event": [
                {
                    "event": s.event,
                    "cluster": s.cluster_id,
                    "tp": s.tp,
                    "cluster_size": s.cluster_size,
                    "gold_size": s.gold_size,
                    "precision": s.precision,
                    "recall": s.recall,
                    "f1": s.f1,
                }
                for s in self.per_event
            ],
            "overall_accuracy": self.overall_accuracy,
            "total_articles": self.total_articles,
        }


def event_prf(
    assignments: Mapping[str, int],
    labels: Mapping[str, str],
    mapping: Mapping[int, str],
) -> EventPrfReport:
    """Per-event precision/recall/F1 given a 1:1 cluster-to-event mapping.

    Unmapped clusters contribute nothing to any event's retrieved set, so
    their articles count against recall only. Overall accuracy is the summed
    true positives over all articles.
    """
    _require_labels(assignments, labels)
    event_of_cluster = dict(mapping)
    claimed = Counter(event_of_cluster.values())
    dupes = [e for e, n in claimed.items() if n > 1]
    if dupes:
        raise ValueError(f"events mapped by more than one cluster: {sorted(dupes)}")

    cluster_members: dict[int, list[str]] = defaultdict(list)
    for aid, cid in assignments.items():
        cluster_members[cid].append(aid)
    gold_counts = Counter(labels[aid] for aid in assignments)

    cluster_of_event = {e: c for c, e in event_of_cluster.items()}
    events = sorted(set(gold_counts) | set(cluster_of_event))
    per_event: list[EventScore] = []
    tp_total = 0
    for event in events:
        cid = cluster_of_event.get(event)
        if cid is None:
            gold = gold_counts.get(event, 0)
            per_event.append(EventScore(event, None, 0, 0, gold, 0.0, 0.0, 0.0))
            continue
        members = cluster_members.get(cid, [])
        tp = sum(1 for aid in members if labels[aid] == event)
        gold = gold_counts.get(event, 0)
        precision = tp / len(members) if members else 0.0
        recall = tp / gold if gold else 0.0
        f1 = 2 * precision * recall / (precision + recall) if (precision + recall) else 0.0
        per_event.append(EventScore(event, cid, tp, len(members), gold, precision, recall, f1))
        tp_total += tp
    total = len(assignments)
    return EventPrfReport(
        per_event=per_event,
        overall_accuracy=tp_total / total if total else 0.0,
        total_articles=total,
    )


def greedy_majority_mapping(
    assignments: Mapping[str, int], labels: Mapping[str, str]
) -> dict[int, str]:
    """1:1 cluster-to-event mapping by descending overlap; once an event is
    claimed, smaller clusters sharing its majority stay unmapped."""
    _require_labels(assignments, labels)
    overlap: Counter = Counter()
    for aid, cid in assignments.items():
        overlap[(cid, labels[aid])] += 1
    taken_clusters: set[int] = set()
    taken_events: set[str] = set()
    mapping: dict[int, str] = {}
    for (cid, event), count in sorted(overlap.items(), key=lambda kv: (-kv[1], kv[0])):
        if count == 0 or cid in taken_clusters or event in taken_events:
            continue
        mapping[cid] = event
        taken_clusters.add(cid)
        taken_events.add(event)
    return mapping


def mapped_confusion(
    assignments: Mapping[str, int],
    labels: Mapping[str, str],
    mapping: Mapping[int, str],
    unmapped_label: str = "(unmapped)",
) -> ConfusionMatrix:
    """Gold event vs mapped-cluster event, with unmapped clusters pooled into
    one extra prediction column."""
    _require_labels(assignments, labels)
    gold = []
    pred = []
    for aid, cid in assignments.items():
        gold.append(labels[aid])
        pred.append(mapping.get(cid, unmapped_label))
    label_set = sorted(set(gold) | set(mapping.values()))
    if unmapped_label in pred:
        label_set.append(unmapped_label)
    return ConfusionMatrix.from_pairs(gold, pred, labels=label_set)


def _format_table(headers: list[str], rows: list[list[str]]) -> str:
    widths = [len(h) for h in headers]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    lines = ["  ".join(h.ljust(widths[i]) for i, h in enumerate(headers))]
    lines.append("  ".join("-" * w for w in widths))
    for row in rows:
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)))
    return "\n".join(lines)


def render_purity_table(report: ClusterReport) -> str:
    rows = []
    for s in report.per_cluster:
        marker = " (noise)" if s.cluster_id in report.excluded else ""
        rows.append(
            [
                f"{s.cluster_id}{marker}",
                str(s.size),
                s.majority_label,
                f"{s.majority_count}/{s.size}",
                f"{s.purity:.4f}",
            ]
        )
    rows.append(["AVG", "", "", "", f"{report.average_purity:.4f}"])
    rows.append(["AVG (weighted)", "", "", "", f"{report.micro_purity:.4f}"])
    return _format_table(["cluster", "size", "majority", "count", "purity"], rows)


def render_language_table(balance: LanguageBalance, report: ClusterReport) -> str:
    stats = {s.cluster_id: s for s in report.per_cluster}
    rows = []
    for cid, prop in sorted(balance.per_cluster.items()):
        s = stats[cid]
        rows.append(
            [str(cid), str(s.zh_count), str(s.en_count), str((s.zh_count or 0) + (s.en_count or 0)), f"{prop:.4f}"]
        )
    rows.append(
        [
            "total",
            str(balance.zh_total),
            str(balance.en_total),
            str(balance.zh_total + balance.en_total),
            f"{balance.total_proportion:.4f}",
        ]
    )
    return _format_table(["cluster", "zh", "en", "majority total", "zh share"], rows)


def render_prf_table(report: EventPrfReport) -> str:
    rows = [
        [
            s.event,
            "-" if s.cluster_id is None else str(s.cluster_id),
            f"{s.precision:.4f}",
            f"{s.recall:.4f}",
            f"{s.f1:.4f}",
        ]
        for s in report.per_event
    ]
    rows.append(["overall accuracy", "", "", "", f"{report.overall_accuracy:.4f}"])
    return _format_table(["event", "cluster", "precision", "recall", "F1"], rows)
