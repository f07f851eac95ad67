"""Streaming Single-Pass clustering over represented news.

Two assignment strategies share one ClusterState:

* improved: each arriving article is compared against cluster centroids only
  (running sums keep the centroid O(1) to update), so one assignment costs
  exactly |clusters| similarity evaluations; after a join, clusters whose
  centroids drifted together are merged;
* baseline: classic max-linkage Single-Pass, comparing the article against
  every stored member of every cluster.

Fine (event-level) mode additionally refuses to let a cluster's date span
exceed time_threshold days, both at insertion and at merge time.

sim_eval_counter counts article-to-cluster similarity evaluations, which is
what separates the two strategies; cluster-to-cluster comparisons during
merging are not counted.
"""

from __future__ import annotations

import datetime as dt
import json
from dataclasses import dataclass, field

import numpy as np

from .newsrep import NewsRepr, SimWeights, news_similarity
from .topicsim import TopicSimMatrix

MODES = ("coarse", "fine")

CENTROID_TOL = 1e-6


@dataclass
class ClusterParams:
    mode: str
    weights: SimWeights
    news_threshold: float
    cluster_threshold: float
    time_threshold: int | None = None  # days; None disables the gate
    enable_merge: bool = True

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not (0.0 <= self.news_threshold <= 1.0 and 0.0 <= self.cluster_threshold <= 1.0):
            raise ValueError("thresholds must lie in [0, 1]")
        if self.time_threshold is not None and self.time_threshold < 0:
            raise ValueError("time_threshold must be >= 0 days")

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "weights": {"alpha": self.weights.alpha, "beta": self.weights.beta},
            "news_threshold": self.news_threshold,
            "cluster_threshold": self.cluster_threshold,
            "time_threshold": self.time_threshold,
            "enable_merge": self.enable_merge,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "ClusterParams":
        return cls(
            mode=obj["mode"],
            weights=SimWeights(obj["weights"]["alpha"], obj["weights"]["beta"]),
            news_threshold=obj["news_threshold"],
            cluster_threshold=obj["cluster_threshold"],
            time_threshold=obj.get("time_threshold"),
            enable_merge=obj.get("enable_merge", True),
        )


@dataclass
class Cluster:
    id: int
    member_ids: list[str]
    t_sum: np.ndarray
    c_sum: np.ndarray
    min_date: dt.date
    max_date: dt.date

    @property
    def size(self) -> int:
        return len(self.member_ids)

    def centroid(self) -> NewsRepr:
        """Mean title vector and renormalized mean topic distribution."""
        c = self.c_sum / self.size
        total = float(c.sum())
        if total <= 0:
            raise ValueError(f"cluster {self.id}: degenerate topic mass")
        return NewsRepr(
            article_id=f"centroid:{self.id}",
            T=self.t_sum / self.size,
            C=c / total,
        )

    def add(self, repr: NewsRepr) -> None:
        self.member_ids.append(repr.article_id)
        self.t_sum = self.t_sum + repr.T
        self.c_sum = self.c_sum + repr.C
        if repr.published_at is not None:
            self.min_date = min(self.min_date, repr.published_at)
            self.max_date = max(self.max_date, repr.published_at)

    def absorb(self, other: "Cluster") -> None:
        self.member_ids.extend(other.member_ids)
        self.t_sum = self.t_sum + other.t_sum
        self.c_sum = self.c_sum + other.c_sum
        self.min_date = min(self.min_date, other.min_date)
        self.max_date = max(self.max_date, other.max_date)

    def span_days_with(self, date: dt.date) -> int:
        return (max(self.max_date, date) - min(self.min_date, date)).days

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "member_ids": list(self.member_ids),
            "size": self.size,
            "T_sum": self.t_sum.tolist(),
            "C_sum": self.c_sum.tolist(),
            "min_date": self.min_date.isoformat(),
            "max_date": self.max_date.isoformat(),
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "Cluster":
        c = cls(
            id=int(obj["id"]),
            member_ids=list(obj["member_ids"]),
            t_sum=np.array(obj["T_sum"], dtype=np.float64),
            c_sum=np.array(obj["C_sum"], dtype=np.float64),
            min_date=dt.date.fromisoformat(obj["min_date"]),
            max_date=dt.date.fromisoformat(obj["max_date"]),
        )
        if obj.get("size") is not None and int(obj["size"]) != c.size:
            raise ValueError(f"cluster {c.id}: size {obj['size']} != {c.size} member ids")
        return c


@dataclass
class ClusterState:
    clusters: list[Cluster] = field(default_factory=list)
    next_id: int = 0
    sim_eval_counter: int = 0

    def by_id(self, cluster_id: int) -> Cluster:
        for c in self.clusters:
            if c.id == cluster_id:
                return c
        raise KeyError(f"no cluster with id {cluster_id}")

    def new_cluster(self, repr: NewsRepr) -> Cluster:
        if repr.published_at is None:
            raise ValueError(f"article {repr.article_id!r} has no publication date")
        c = Cluster(
            id=self.next_id,
            member_ids=[repr.article_id],
            t_sum=np.array(repr.T, dtype=np.float64),
            c_sum=np.array(repr.C, dtype=np.float64),
            min_date=repr.published_at,
            max_date=repr.published_at,
        )
        self.next_id += 1
        self.clusters.append(c)
        return c

    def assignments(self) -> dict[str, int]:
        """article id -> cluster id for every article seen so far."""
        out: dict[str, int] = {}
        for c in self.clusters:
            for aid in c.member_ids:
                out[aid] = c.id
        return out

    def validate(self) -> None:
        ids = [c.id for c in self.clusters]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate cluster ids")
        seen: set[str] = set()
        for c in self.clusters:
            if c.size < 1:
                raise ValueError(f"cluster {c.id} is empty")
            for aid in c.member_ids:
                if aid in seen:
                    raise ValueError(f"article {aid!r} appears in more than one cluster")
                seen.add(aid)


@dataclass
class AssignmentRecord:
    article_id: str
    cluster_id: int
    best_sim: float | None  # best similarity over pre-existing clusters
    created: bool
    merged_ids: list[int] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "id": self.article_id,
            "cluster": self.cluster_id,
            "best_sim": self.best_sim,
            "created": self.created,
            "merged": list(self.merged_ids),
        }


def _centroid_sim(repr: NewsRepr, cluster: Cluster, w: SimWeights, tm: TopicSimMatrix) -> float:
    return news_similarity(repr, cluster.centroid(), w, tm)


def _centroid_sims(
    state: ClusterState, repr: NewsRepr, p: ClusterParams, tm: TopicSimMatrix
) -> list[tuple[float, Cluster]]:
    # one evaluation per existing cluster: this is the O(k) assignment cost
    state.sim_eval_counter += len(state.clusters)
    return [(_centroid_sim(repr, c, p.weights, tm), c) for c in state.clusters]


def merge_pass(
    state: ClusterState, changed_id: int, p: ClusterParams, tm: TopicSimMatrix
) -> list[int]:
    """Merge clusters into `changed_id` while its best partner stays above
    cluster_threshold (and, when a time gate is set, within the date span).

    Runs to a local fixpoint around the changed cluster; similarities are
    recomputed against the current (post-merge) centroid each round. Returns
    the ids of absorbed clusters.
    """
    c = state.by_id(changed_id)
    absorbed: list[int] = []
    while True:
        best: Cluster | None = None
        best_sim = -np.inf
        cen = c.centroid()
        for other in state.clusters:
            if other.id == c.id:
                continue
            sim = news_similarity(cen, other.centroid(), p.weights, tm)
            if sim > best_sim:
                best, best_sim = other, sim
        if best is None or best_sim <= p.cluster_threshold:
            break
        if p.mode == "fine" and p.time_threshold is not None:
            merged_span = (max(c.max_date, best.max_date) - min(c.min_date, best.min_date)).days
            if merged_span > p.time_threshold:
                break
        c.absorb(best)
        state.clusters.remove(best)
        absorbed.append(best.id)
    return absorbed


def assign_coarse(
    state: ClusterState, repr: NewsRepr, p: ClusterParams, tm: TopicSimMatrix
) -> AssignmentRecord:
    """Topic-level assignment: best centroid wins if above news_threshold."""
    if p.mode != "coarse":
        raise ValueError(f"assign_coarse called with mode {p.mode!r}")
    sims = _centroid_sims(state, repr, p, tm)
    best_sim: float | None = None
    best_cluster: Cluster | None = None
    for sim, c in sims:  # state order is id order; strict > keeps the lowest id on ties
        if best_sim is None or sim > best_sim:
            best_sim, best_cluster = sim, c
    if best_cluster is not None and best_sim > p.news_threshold:
        best_cluster.add(repr)
        merged = merge_pass(state, best_cluster.id, p, tm) if p.enable_merge else []
        return AssignmentRecord(repr.article_id, best_cluster.id, best_sim, False, merged)
    c = state.new_cluster(repr)
    return AssignmentRecord(repr.article_id, c.id, best_sim, True, [])


def assign_fine(
    state: ClusterState, repr: NewsRepr, p: ClusterParams, tm: TopicSimMatrix
) -> AssignmentRecord:
    """Event-level assignment: walk clusters in descending centroid similarity
    and take the first that passes both the similarity and the time gate.

    Callers must feed articles in ascending published_at order.
    """
    if p.mode != "fine":
        raise ValueError(f"assign_fine called with mode {p.mode!r}")
    if repr.published_at is None:
        raise ValueError(f"article {repr.article_id!r} has no publication date")
    sims = _centroid_sims(state, repr, p, tm)
    sims.sort(key=lambda pair: (-pair[0], pair[1].id))
    best_sim = sims[0][0] if sims else None
    target: Cluster | None = None
    for sim, c in sims:
        if sim <= p.news_threshold:
            break  # sorted descending: nothing further can pass
        if p.time_threshold is not None and c.span_days_with(repr.published_at) > p.time_threshold:
            continue
        target = c
        break
    if target is not None:
        target.add(repr)
        created = False
    else:
        target = state.new_cluster(repr)
        created = True
    merged = merge_pass(state, target.id, p, tm) if p.enable_merge else []
    return AssignmentRecord(repr.article_id, target.id, best_sim, created, merged)


def assign(
    state: ClusterState, repr: NewsRepr, p: ClusterParams, tm: TopicSimMatrix
) -> AssignmentRecord:
    if p.mode == "coarse":
        return assign_coarse(state, repr, p, tm)
    return assign_fine(state, repr, p, tm)


def baseline_distance(
    repr: NewsRepr,
    cluster: Cluster,
    members: dict[str, NewsRepr],
    w: SimWeights,
    tm: TopicSimMatrix,
) -> float:
    """Max-linkage similarity between an article and a cluster's members."""
    if cluster.size == 0:
        raise ValueError(f"cluster {cluster.id} is empty")
    return max(news_similarity(repr, members[aid], w, tm) for aid in cluster.member_ids)


def assign_baseline(
    state: ClusterState,
    repr: NewsRepr,
    p: ClusterParams,
    tm: TopicSimMatrix,
    members: dict[str, NewsRepr],
) -> AssignmentRecord:
    """Classic Single-Pass: max-linkage against every stored sample (O(N)).

    No merging and no time gate; kept as the measured reference point. The
    caller's `members` map gains the new article after assignment.
    """
    state.sim_eval_counter += sum(c.size for c in state.clusters)
    best_sim: float | None = None
    best_cluster: Cluster | None = None
    for c in state.clusters:
        sim = baseline_distance(repr, c, members, p.weights, tm)
        if best_sim is None or sim > best_sim:
            best_sim, best_cluster = sim, c
    if best_cluster is not None and best_sim > p.news_threshold:
        best_cluster.add(repr)
        record = AssignmentRecord(repr.article_id, best_cluster.id, best_sim, False, [])
    else:
        c = state.new_cluster(repr)
        record = AssignmentRecord(repr.article_id, c.id, best_sim, True, [])
    members[repr.article_id] = repr
    return record


def save_state(state: ClusterState, params: ClusterParams, path) -> None:
    payload = {
        "params": params.to_dict(),
        "clusters": [c.to_dict() for c in state.clusters],
        "next_id": state.next_id,
        "sim_eval_counter": state.sim_eval_counter,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh)


def load_state(path) -> tuple[ClusterState, ClusterParams]:
    with open(path, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    params = ClusterParams.from_dict(payload["params"])
    clusters = [Cluster.from_dict(obj) for obj in payload["clusters"]]
    max_id = max((c.id for c in clusters), default=-1)
    state = ClusterState(
        clusters=clusters,
        next_id=int(payload.get("next_id", max_id + 1)),
        sim_eval_counter=int(payload.get("sim_eval_counter", 0)),
    )
    state.validate()
    return state, params
