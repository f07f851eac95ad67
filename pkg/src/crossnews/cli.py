"""Command-line pipeline: train the topic model, build the topic-similarity
matrix, run streaming clustering, and evaluate against gold labels.

All commands read one JSON config file; subcommand flags override it. Exit
codes: 0 success, 1 runtime failure, 2 usage or config error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from . import cluster as clustering
from . import corpus as corpus_mod
from . import evaluation
from .embedding import EmbeddingProvider, HashEmbedder, VectorStore
from .lda import LdaConfig, LdaModel, train_lda
from .newsrep import represent
from .topicsim import TopicSimMatrix, build_topic_matrix


class ConfigError(ValueError):
    """Bad config file or bad usage; maps to exit code 2."""


@dataclass
class PipelineConfig:
    paths: dict[str, str]
    embedder: dict
    lda: LdaConfig
    cluster: clustering.ClusterParams
    topic_words: int = 10
    noise_fraction: float = 0.04

    @classmethod
    def load(cls, path) -> "PipelineConfig":
        try:
            with open(path, "r", encoding="utf-8") as fh:
                obj = json.load(fh)
        except FileNotFoundError:
            raise ConfigError(f"config file not found: {path}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file {path} is not valid JSON: {exc}") from None
        try:
            lda_cfg = LdaConfig(**obj.get("lda", {}))
            cluster_params = clustering.ClusterParams.from_dict(obj["cluster"])
            return cls(
                paths=dict(obj["paths"]),
                embedder=dict(obj.get("embedder", {"kind": "hash", "dim": 768, "seed": 0})),
                lda=lda_cfg,
                cluster=cluster_params,
                topic_words=int(obj.get("topic_words", 10)),
                noise_fraction=float(obj.get("noise_fraction", 0.04)),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"config file {path}: {exc}") from None

    def path(self, name: str) -> str:
        try:
            return self.paths[name]
        except KeyError:
            raise ConfigError(f"config is missing required path {name!r}") from None

    def require_input(self, name: str) -> str:
        p = self.path(name)
        if not os.path.exists(p):
            raise ConfigError(f"input path {name!r} does not exist: {p}")
        return p

    def make_embedder(self) -> EmbeddingProvider:
        kind = self.embedder.get("kind")
        if kind == "hash":
            return HashEmbedder(
                dim=int(self.embedder.get("dim", 768)), seed=int(self.embedder.get("seed", 0))
            )
        if kind == "store":
            return VectorStore.load(self.require_input("vector_store"))
        raise ConfigError(f"unknown embedder kind {kind!r} (expected 'hash' or 'store')")


def cmd_train_lda(cfg: PipelineConfig) -> int:
    corpus_path = cfg.require_input("corpus")
    articles = corpus_mod.load_articles(corpus_path)
    docs = [corpus_mod.tokenize(a) for a in articles]
    model = train_lda(docs, cfg.lda)
    model.save(cfg.path("lda_model"))
    print(
        f"trained LDA: K={model.k} V={model.vocab_size} docs={len(docs)} "
        f"iters={cfg.lda.train_iters} seed={cfg.lda.seed} -> {cfg.path('lda_model')}"
    )
    return 0


def cmd_topic_matrix(cfg: PipelineConfig) -> int:
    model = LdaModel.load(cfg.require_input("lda_model"))
    provider = cfg.make_embedder()
    tm = build_topic_matrix(model, provider, m=cfg.topic_words)
    tm.save(cfg.path("topic_matrix"))
    print(
        f"built topic matrix: K={tm.k} m={tm.m} sim_min={tm.sim_min:.6f} "
        f"sim_max={tm.sim_max:.6f} -> {cfg.path('topic_matrix')}"
    )
    return 0


def cmd_cluster(cfg: PipelineConfig, mode: str | None = None, resume: bool = False) -> int:
    params = cfg.cluster
    if mode is not None and mode != params.mode:
        params = clustering.ClusterParams.from_dict({**params.to_dict(), "mode": mode})
    model = LdaModel.load(cfg.require_input("lda_model"))
    tm = TopicSimMatrix.load(cfg.require_input("topic_matrix"))
    provider = cfg.make_embedder()
    articles = corpus_mod.load_articles(cfg.require_input("corpus"))
    if params.mode == "fine":
        # stable sort: equal dates keep file order
        articles = sorted(articles, key=lambda a: a.published_at)

    state_path = cfg.path("cluster_state")
    log_path = cfg.path("assignment_log")
    if resume and os.path.exists(state_path):
        state, saved_params = clustering.load_state(state_path)
        if saved_params.to_dict() != params.to_dict():
            raise ConfigError(
                f"state file {state_path} was built with different parameters; "
                "refusing to resume"
            )
        seen = set(state.assignments())
        log_mode = "a"
    else:
        state = clustering.ClusterState()
        seen = set()
        log_mode = "w"

    processed = 0
    with open(log_path, log_mode, encoding="utf-8") as log:
        for article in articles:
            if article.id in seen:
                continue
            repr_ = represent(article, provider, model, cfg.lda)
            record = clustering.assign(state, repr_, params, tm)
            log.write(json.dumps(record.to_dict()) + "\n")
            processed += 1
    state.validate()
    clustering.save_state(state, params, state_path)
    print(
        f"clustered {processed} article(s) ({params.mode}): {len(state.clusters)} clusters, "
        f"{state.sim_eval_counter} similarity evaluations -> {state_path}"
    )
    return 0


def cmd_evaluate(cfg: PipelineConfig) -> int:
    state, params = clustering.load_state(cfg.require_input("cluster_state"))
    articles = corpus_mod.load_articles(cfg.require_input("corpus"))
    labels = {a.id: a.label for a in articles if a.label is not None}
    langs = {a.id: a.lang for a in articles}
    assignments = state.assignments()

    report = evaluation.purity(assignments, labels, noise_fraction=cfg.noise_fraction, langs=langs)
    balance = evaluation.language_balance(
        assignments, langs, labels, noise_fraction=cfg.noise_fraction
    )
    mapping = evaluation.greedy_majority_mapping(assignments, labels)
    prf = evaluation.event_prf(assignments, labels, mapping)
    cm = evaluation.mapped_confusion(assignments, labels, mapping)
    try:
        kap = evaluation.kappa(cm)
        kappa_out = {"p0": kap.p0, "pe": kap.pe, "k": kap.k}
    except ValueError as exc:
        kappa_out = {"error": str(exc)}

    payload = {
        "mode": params.mode,
        "purity": report.to_dict(),
        "language_balance": {
            "per_cluster": {str(k): v for k, v in balance.per_cluster.items()},
            "zh_total": balance.zh_total,
            "en_total": balance.en_total,
            "total_proportion": balance.total_proportion,
        },
        "event_prf": prf.to_dict(),
        "mapping": {str(c): e for c, e in sorted(mapping.items())},
        "kappa": kappa_out,
    }
    with open(cfg.path("report_json"), "w", encoding="utf-8") as fh:
        json.dump(payload, fh, ensure_ascii=False, indent=2)

    text = "\n\n".join(
        [
            evaluation.render_purity_table(report),
            evaluation.render_language_table(balance, report),
            evaluation.render_prf_table(prf),
        ]
    )
    text_path = cfg.paths.get("report_text")
    if text_path:
        with open(text_path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    print(text)
    print(f"\nreport -> {cfg.path('report_json')}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crossnews",
        description="cross-lingual streaming news clustering pipeline",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("train-lda", "topic-matrix", "cluster", "evaluate", "pipeline"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="JSON pipeline config")
        p.add_argument("--seed", type=int, default=None, help="override lda.seed")
        if name in ("cluster", "pipeline"):
            p.add_argument("--mode", choices=clustering.MODES, default=None)
            p.add_argument("--resume", action="store_true")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = PipelineConfig.load(args.config)
        if args.seed is not None:
            cfg.lda.seed = args.seed
        if args.command == "train-lda":
            return cmd_train_lda(cfg)
        if args.command == "topic-matrix":
            return cmd_topic_matrix(cfg)
        if args.command == "cluster":
            return cmd_cluster(cfg, mode=args.mode, resume=args.resume)
        if args.command == "evaluate":
            return cmd_evaluate(cfg)
        if args.command == "pipeline":
            rc = cmd_train_lda(cfg)
            rc = rc or cmd_topic_matrix(cfg)
            rc = rc or cmd_cluster(cfg, mode=args.mode, resume=args.resume)
            return rc or cmd_evaluate(cfg)
        raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
