from fractions import Fraction

import numpy as np
import pytest

from crossnews import (
    ConfusionMatrix,
    event_prf,
    greedy_majority_mapping,
    kappa,
    language_balance,
    mapped_confusion,
    purity,
)
from crossnews.evaluation import render_language_table, render_prf_table, render_purity_table

# 7-class reference confusion matrix (rows gold, cols predicted)
REF_CONFUSION = [
    [281, 9, 2, 0, 0, 5, 3],
    [3, 273, 12, 0, 2, 9, 1],
    [1, 4, 288, 1, 1, 1, 4],
    [2, 0, 0, 291, 5, 2, 0],
    [7, 2, 6, 7, 258, 16, 4],
    [4, 11, 6, 0, 1, 269, 9],
    [3, 0, 1, 1, 7, 25, 263],
]
REF_CLASSES = ["economy", "politics", "military", "entertainment", "sports", "science", "automobile"]

# 11-cluster reference count table; columns follow LABELS
LABELS = ["military", "politics", "economy", "entertainment", "sports", "science", "automobile"]
REF_CLUSTERS = {
    1: [4, 13, 108, 3, 7, 1, 0],
    2: [16, 9, 6, 0, 24, 15, 267],
    3: [2, 4, 18, 134, 33, 2, 6],
    4: [6, 3, 2, 0, 0, 1, 4],
    5: [5, 19, 11, 10, 23, 11, 1],
    6: [7, 2, 14, 3, 156, 4, 13],
    7: [31, 211, 20, 4, 2, 7, 0],
    8: [12, 1, 21, 2, 18, 214, 6],
    9: [19, 4, 2, 143, 13, 0, 1],
    10: [197, 14, 13, 0, 8, 44, 2],
    11: [1, 20, 85, 1, 16, 1, 0],
}
REF_PURITY = {
    1: 0.7941,
    2: 0.7923,
    3: 0.6734,
    6: 0.7839,
    7: 0.7673,
    8: 0.7810,
    9: 0.7857,
    10: 0.7086,  # 197/278 from the listed counts (0.7164 would need a 275 total)
    11: 0.6855,
}
# zh counts among each retained cluster's majority-label members
REF_ZH = {1: 55, 2: 140, 3: 72, 6: 69, 7: 108, 8: 107, 9: 68, 10: 103, 11: 40}
REF_ZH_SHARE = {
    1: 0.5093,
    2: 0.5243,
    3: 0.5373,
    6: 0.4423,
    7: 0.5118,
    8: 0.5000,
    9: 0.4755,
    10: 0.5228,
    11: 0.4706,
}

# 6-cluster / 5-event reference table
EVENTS = ["pyeongchang", "beijing", "nba-finals", "brazil-cup", "russia-cup"]
REF_EVENT_CLUSTERS = {
    1: [31, 4, 5, 2, 0],
    2: [2, 32, 6, 2, 0],
    3: [2, 0, 59, 0, 0],
    4: [0, 0, 3, 25, 4],
    5: [4, 2, 2, 4, 33],
    6: [1, 2, 5, 7, 3],
}
REF_PRF = {
    "pyeongchang": (0.7381, 0.7750, 0.7561),
    "beijing": (0.7619, 0.8000, 0.7805),
    "nba-finals": (0.9672, 0.7375, 0.8369),
    "brazil-cup": (0.7813, 0.6250, 0.6945),
    "russia-cup": (0.7333, 0.8250, 0.7765),
}


def synth_assignments(cluster_counts, labels):
    """Expand a {cluster: [count per label]} table into per-article maps."""
    assignments, article_labels = {}, {}
    n = 0
    for cid, row in cluster_counts.items():
        for lab, count in zip(labels, row):
            for _ in range(count):
                aid = f"art{n:05d}"
                assignments[aid] = cid
                article_labels[aid] = lab
                n += 1
    return assignments, article_labels


def synth_langs(assignments, labels, zh_per_cluster, cluster_counts, label_names):
    majority = {
        cid: label_names[int(np.argmax(row))] for cid, row in cluster_counts.items()
    }
    langs = {}
    given = {cid: 0 for cid in cluster_counts}
    for aid, cid in assignments.items():
        if labels[aid] == majority[cid] and given[cid] < zh_per_cluster.get(cid, 0):
            langs[aid] = "zh"
            given[cid] += 1
        else:
            langs[aid] = "en"
    return langs


def test_kappa_reference_matrix():
    cm = ConfusionMatrix(REF_CLASSES, np.array(REF_CONFUSION))
    res = kappa(cm)
    assert res.p0 == pytest.approx(0.9157, abs=0.0005)
    assert res.pe == pytest.approx(0.1429, abs=0.0005)
    assert res.k == pytest.approx(0.9016, abs=0.0005)
    # equal row totals (300 each) force pe = 1/7 regardless of predictions
    assert res.pe == pytest.approx(1 / 7, abs=1e-12)


def test_kappa_diagonal_is_one_and_uniform_is_zero():
    diag = ConfusionMatrix(["a", "b"], np.diag([7, 5]))
    assert kappa(diag).k == pytest.approx(1.0)
    uniform = ConfusionMatrix(["a", "b"], np.array([[5, 5], [5, 5]]))
    assert kappa(uniform).k == pytest.approx(0.0)


def test_kappa_invariant_under_label_permutation():
    cm = ConfusionMatrix(REF_CLASSES, np.array(REF_CONFUSION))
    perm = [3, 0, 6, 1, 5, 2, 4]
    counts = np.array(REF_CONFUSION)[np.ix_(perm, perm)]
    cm2 = ConfusionMatrix([REF_CLASSES[i] for i in perm], counts)
    assert kappa(cm2) == pytest.approx(kappa(cm), abs=1e-12)


def test_kappa_degenerate_single_class():
    cm = ConfusionMatrix(["a", "b"], np.array([[4, 0], [0, 0]]))
    with pytest.raises(ValueError, match="pe = 1"):
        kappa(cm)


def test_purity_reference_counts():
    assignments, labels = synth_assignments(REF_CLUSTERS, LABELS)
    report = purity(assignments, labels, noise_fraction=0.04)
    assert report.total_articles == 2100
    assert sorted(report.excluded) == [4, 5]
    stats = {s.cluster_id: s for s in report.per_cluster}
    for cid, want in REF_PURITY.items():
        assert stats[cid].purity == pytest.approx(want, abs=0.001), f"cluster {cid}"
    assert stats[10].majority_count == 197 and stats[10].size == 278
    # size-weighted purity over retained clusters: 1515/2004
    assert report.micro_purity == pytest.approx(1515 / 2004, abs=1e-12)
    assert report.micro_purity == pytest.approx(0.7560, abs=0.001)


def test_purity_single_label_cluster_is_one():
    assignments = {"a": 0, "b": 0, "c": 1}
    labels = {"a": "x", "b": "x", "c": "y"}
    report = purity(assignments, labels, noise_fraction=0.0)
    stats = {s.cluster_id: s for s in report.per_cluster}
    assert stats[0].purity == 1.0 and stats[1].purity == 1.0
    assert report.average_purity == 1.0


def test_purity_missing_labels_listed():
    with pytest.raises(ValueError, match="no label.*'b'"):
        purity({"a": 0, "b": 0}, {"a": "x"})


def test_language_balance_reference_counts():
    assignments, labels = synth_assignments(REF_CLUSTERS, LABELS)
    langs = synth_langs(assignments, labels, REF_ZH, REF_CLUSTERS, LABELS)
    balance = language_balance(assignments, langs, labels, noise_fraction=0.04)
    for cid, want in REF_ZH_SHARE.items():
        assert balance.per_cluster[cid] == pytest.approx(want, abs=0.0005), f"cluster {cid}"
    assert balance.zh_total == 762 and balance.zh_total + balance.en_total == 1515
    assert balance.total_proportion == pytest.approx(0.5030, abs=0.0005)


def test_language_balance_all_zh_cluster():
    assignments = {"a": 0, "b": 0}
    labels = {"a": "x", "b": "x"}
    langs = {"a": "zh", "b": "zh"}
    balance = language_balance(assignments, langs, labels, noise_fraction=0.0)
    assert balance.per_cluster[0] == 1.0


def test_event_prf_reference_counts():
    assignments, labels = synth_assignments(REF_EVENT_CLUSTERS, EVENTS)
    mapping = {1: EVENTS[0], 2: EVENTS[1], 3: EVENTS[2], 4: EVENTS[3], 5: EVENTS[4]}
    report = event_prf(assignments, labels, mapping)
    scores = {s.event: s for s in report.per_event}
    for event, (p, r, f1) in REF_PRF.items():
        s = scores[event]
        assert s.precision == pytest.approx(p, abs=0.001), event
        assert s.recall == pytest.approx(r, abs=0.001), event
        assert s.f1 == pytest.approx(f1, abs=0.001), event
    assert report.overall_accuracy == 180 / 240 == 0.75
    assert report.total_articles == 240


def test_event_prf_perfect_clustering():
    assignments = {f"a{i}": i % 3 for i in range(30)}
    labels = {f"a{i}": f"ev{i % 3}" for i in range(30)}
    mapping = {0: "ev0", 1: "ev1", 2: "ev2"}
    report = event_prf(assignments, labels, mapping)
    for s in report.per_event:
        assert s.precision == s.recall == s.f1 == 1.0
    assert report.overall_accuracy == 1.0


def test_event_prf_duplicate_mapping_rejected():
    with pytest.raises(ValueError, match="more than one cluster"):
        event_prf({"a": 0, "b": 1}, {"a": "e", "b": "e"}, {0: "e", 1: "e"})


def test_event_prf_unmapped_cluster_hits_recall_only():
    assignments = {"a": 0, "b": 0, "c": 1}
    labels = {"a": "e", "b": "e", "c": "e"}
    report = event_prf(assignments, labels, {0: "e"})
    s = report.per_event[0]
    assert s.precision == 1.0
    assert s.recall == pytest.approx(2 / 3)


def test_greedy_mapping_reference_counts():
    assignments, labels = synth_assignments(REF_EVENT_CLUSTERS, EVENTS)
    mapping = greedy_majority_mapping(assignments, labels)
    assert mapping == {1: EVENTS[0], 2: EVENTS[1], 3: EVENTS[2], 4: EVENTS[3], 5: EVENTS[4]}
    assert 6 not in mapping  # its majority event is already claimed by a bigger cluster


def test_mapped_confusion_kappa_from_reference_counts():
    assignments, labels = synth_assignments(REF_EVENT_CLUSTERS, EVENTS)
    mapping = greedy_majority_mapping(assignments, labels)
    cm = mapped_confusion(assignments, labels, mapping)
    res = kappa(cm)
    assert res.p0 == pytest.approx(0.75, abs=1e-12)
    # independent arithmetic: pe from row/col totals with the unmapped pool
    pe = Fraction(40 * 42 + 40 * 42 + 80 * 61 + 40 * 32 + 40 * 45, 240 * 240)
    want_k = (Fraction(3, 4) - pe) / (1 - pe)
    assert res.k == pytest.approx(float(want_k), abs=1e-12)


def test_render_tables_contain_key_values():
    assignments, labels = synth_assignments(REF_CLUSTERS, LABELS)
    langs = synth_langs(assignments, labels, REF_ZH, REF_CLUSTERS, LABELS)
    report = purity(assignments, labels, noise_fraction=0.04, langs=langs)
    balance = language_balance(assignments, langs, labels, noise_fraction=0.04)
    txt = render_purity_table(report)
    assert "0.7941" in txt and "(noise)" in txt
    txt2 = render_language_table(balance, report)
    assert "0.5030" in txt2
    ev_assign, ev_labels = synth_assignments(REF_EVENT_CLUSTERS, EVENTS)
    prf = event_prf(ev_assign, ev_labels, greedy_majority_mapping(ev_assign, ev_labels))
    txt3 = render_prf_table(prf)
    assert "0.9672" in txt3 and "0.7500" in txt3
