import math

import _chat_helpers as _help
import numpy as np
import pytest

from chatwatch.modules.chat import LinePrediction, MatchSession, ToxicClass
from chatwatch.modules.context import Scope
from chatwatch.modules.evaluation import (
    HISTORY_BINS,
    NO_THRESHOLD,
    MetricInputError,
    OperatingPoint,
    PRCurve,
    PRPoint,
    binary_weighted_prf,
    class_recall_at_threshold,
    history_bin,
    history_length_report,
    intercept_rate,
    operating_points,
    per_class_curves,
    pr_curve,
    recall_at_precision,
    summarize_reports,
    to_json,
    weighted_prf,
)

CLASSES = list(ToxicClass)
NT = ToxicClass.NON_TOXIC


def _brute_force_weighted(preds, golds):
    present = [c for c in CLASSES if c in set(preds) | set(golds)]
    total = len(golds)
    p_sum = r_sum = f_sum = 0.0
    for c in present:
        tp = sum(1 for p, g in zip(preds, golds) if p is c and g is c)
        n_pred = sum(1 for p in preds if p is c)
        n_gold = sum(1 for g in golds if g is c)
        p = tp / n_pred if n_pred else 0.0
        r = tp / n_gold if n_gold else 0.0
        f = 2 * p * r / (p + r) if p + r else 0.0
        w = n_gold / total
        p_sum, r_sum, f_sum = p_sum + w * p, r_sum + w * r, f_sum + w * f
    return p_sum, r_sum, f_sum


def test_weighted_prf_matches_brute_force():
    rng = np.random.default_rng(0)
    for _ in range(100):
        n = int(rng.integers(1, 40))
        golds = [CLASSES[i] for i in rng.integers(0, len(CLASSES), size=n)]
        preds = [CLASSES[i] for i in rng.integers(0, len(CLASSES), size=n)]
        report = weighted_prf(preds, golds)
        p, r, f = _brute_force_weighted(preds, golds)
        assert report.precision == pytest.approx(p)
        assert report.recall == pytest.approx(r)
        assert report.f1 == pytest.approx(f)
        assert report.support == n


def test_weighted_prf_known_values():
    golds = [ToxicClass.SPAM, ToxicClass.SPAM, NT, NT]
    preds = [ToxicClass.SPAM, NT, NT, NT]
    report = weighted_prf(preds, golds, level="line")
    # spam: P 1, R 0.5; non_toxic: P 2/3, R 1
    assert report.level == "line"
    assert report.precision == pytest.approx(0.5 * 1 + 0.5 * 2 / 3)
    assert report.recall == pytest.approx(0.75)
    assert report.per_class[ToxicClass.SPAM].support == 2


def test_weighted_prf_errors():
    with pytest.raises(MetricInputError):
        weighted_prf([], [])
    with pytest.raises(MetricInputError):
        weighted_prf([NT], [NT, NT])
    with pytest.raises(MetricInputError):
        weighted_prf([NT], [NT], level="word")


def test_binary_collapses_toxic_classes():
    golds = [ToxicClass.SPAM, ToxicClass.THREATS, NT]
    preds = [ToxicClass.THREATS, ToxicClass.SPAM, NT]
    assert weighted_prf(preds, golds).f1 < 1.0
    assert binary_weighted_prf(preds, golds).f1 == pytest.approx(1.0)


def _brute_force_curve(scores, gold):
    points = []
    for t in sorted(set(scores), reverse=True):
        flagged = [s >= t for s in scores]
        tp = sum(1 for f, g in zip(flagged, gold) if f and g)
        points.append((t, tp / sum(flagged), tp / sum(gold)))
    return points


def test_pr_curve_matches_brute_force():
    rng = np.random.default_rng(2)
    for _ in range(50):
        n = int(rng.integers(2, 30))
        scores = list(np.round(rng.random(n), 2))
        gold = [bool(g) for g in rng.random(n) < 0.4]
        if not any(gold):
            gold[0] = True
        curve = pr_curve(scores, gold)
        expected = _brute_force_curve(scores, gold)
        assert [p.threshold for p in curve.points] == pytest.approx([e[0] for e in expected])
        assert [p.precision for p in curve.points] == pytest.approx([e[1] for e in expected])
        assert [p.recall for p in curve.points] == pytest.approx([e[2] for e in expected])

        # step-wise average precision
        ap, previous = 0.0, 0.0
        for _, p, r in expected:
            ap += (r - previous) * p
            previous = r
        assert curve.average_precision == pytest.approx(ap)


def test_pr_curve_without_positives():
    curve = pr_curve([0.2, 0.7, 0.2], [False, False, False])
    assert curve.thresholds == [0.7, 0.2]
    assert all(p.precision == 0.0 and p.recall == 0.0 for p in curve.points)
    assert curve.average_precision == 0.0
    assert (curve.n_positive, curve.n_total) == (0, 3)
    assert recall_at_precision(curve, 0.9) == (0.0, math.inf)
    assert not any(pt.reachable for pt in operating_points(curve))


def test_pr_curve_errors():
    with pytest.raises(MetricInputError):
        pr_curve([1.5], [True])
    with pytest.raises(MetricInputError):
        pr_curve([], [])


def _curve(points):
    return PRCurve(tuple(PRPoint(*p) for p in points), 0.0, 1, 1)


def test_recall_at_precision():
    curve = _curve([(0.9, 1.0, 0.2), (0.8, 0.95, 0.5), (0.6, 0.92, 0.5), (0.4, 0.7, 0.9)])
    assert recall_at_precision(curve, 0.9) == (0.5, 0.8)
    assert recall_at_precision(curve, 0.99) == (0.2, 0.9)
    assert recall_at_precision(curve, 0.5) == (0.9, 0.4)
    recall, threshold = recall_at_precision(_curve([(0.5, 0.4, 1.0)]), 0.9)
    assert recall == 0.0 and math.isinf(threshold)
    with pytest.raises(MetricInputError):
        recall_at_precision(curve, 0.0)


def test_recall_at_precision_matches_brute_force():
    rng = np.random.default_rng(3)
    for _ in range(50):
        n = int(rng.integers(2, 40))
        scores = list(np.round(rng.random(n), 2))
        gold = [bool(g) for g in rng.random(n) < 0.5]
        if not any(gold):
            gold[-1] = True
        curve = pr_curve(scores, gold)
        for target in (0.5, 0.8, 0.9, 1.0):
            qualifying = [e for e in _brute_force_curve(scores, gold) if e[1] >= target]
            recall, threshold = recall_at_precision(curve, target)
            if not qualifying:
                assert (recall, threshold) == (0.0, NO_THRESHOLD)
                continue
            best = max(e[2] for e in qualifying)
            assert recall == pytest.approx(best)
            assert threshold == pytest.approx(max(e[0] for e in qualifying if e[2] == best))


def test_operating_points_round_trip_through_json():
    curve = pr_curve([0.9, 0.8, 0.3, 0.1], [True, True, False, True])
    points = operating_points(curve, (0.9, 0.99))
    assert [p.threshold for p in points] == [0.8, 0.8]
    assert all(p.reachable for p in points)
    unreachable = OperatingPoint(0.999, NO_THRESHOLD, 0.0, 0.0)
    assert unreachable.to_dict()["threshold"] is None
    assert OperatingPoint.from_dict(unreachable.to_dict()) == unreachable
    assert '"threshold": null' in to_json(unreachable.to_dict())


def test_class_recall_and_intercept_rate():
    scores = [0.9, 0.2, 0.7, 0.6]
    golds = [ToxicClass.SPAM, ToxicClass.SPAM, ToxicClass.THREATS, NT]
    recalls = class_recall_at_threshold(scores, golds, 0.6)
    assert recalls == {ToxicClass.SPAM: (0.5, 2), ToxicClass.THREATS: (1.0, 1)}
    assert intercept_rate(scores, 0.6) == 0.75


def test_per_class_curves_skip_absent_classes():
    rows = [{ToxicClass.SPAM: 0.8}, {ToxicClass.SPAM: 0.1}, {ToxicClass.SPAM: 0.6}]
    curves = per_class_curves(rows, [ToxicClass.SPAM, NT, NT])
    assert list(curves) == [ToxicClass.SPAM]
    assert curves[ToxicClass.SPAM].n_positive == 1


def test_summarize_reports():
    reports = [
        weighted_prf([NT, NT], [NT, NT]),
        weighted_prf([NT, NT], [NT, ToxicClass.SPAM]),
    ]
    summary = summarize_reports(reports)
    f1s = [r.f1 for r in reports]
    assert summary.n_runs == 2
    assert summary.mean["f1"] == pytest.approx(np.mean(f1s))
    assert summary.std["f1"] == pytest.approx(np.std(f1s, ddof=1))
    with pytest.raises(MetricInputError):
        summarize_reports([reports[0], weighted_prf([NT], [NT], level="line")])


def test_history_bin_edges():
    assert [history_bin(n) for n in (0, 1, 2, 10, 11, 20, 21, 40, 41, 500)] == [
        "0", "1", "2-10", "2-10", "11-20", "11-20", "21-30", "31-40", "41+", "41+",
    ]
    assert [b[0] for b in HISTORY_BINS] == ["0", "1", "2-10", "11-20", "21-30", "31-40", "41+"]


def test_history_length_report_on_fifty_line_match():
    lines = tuple(_help.line(i, f"p{i % 4}", f"t{i % 2}", text="go") for i in range(50))
    s = MatchSession("m0", lines)
    preds = [
        LinePrediction("m0", i, ln.player_key, (), NT, 0.0) for i, ln in enumerate(lines)
    ]
    bins = history_length_report(preds, [NT] * 50, [s], Scope.MODERATOR)
    assert [b.support for b in bins] == [1, 1, 9, 10, 10, 10, 9]
    assert all(b.f1 == pytest.approx(1.0) for b in bins)


def test_history_length_report_empty_bins():
    lines = tuple(_help.line(i, "p0", "t0", text="go") for i in range(3))
    s = MatchSession("m0", lines)
    preds = [LinePrediction("m0", i, "p0", (), NT, 0.0) for i in range(3)]
    bins = history_length_report(preds, [NT] * 3, [s])
    assert [b.support for b in bins] == [1, 1, 1, 0, 0, 0, 0]
    assert bins[-1].f1 is None
    with pytest.raises(MetricInputError):
        history_length_report(
            [LinePrediction("zz", 0, "p0", (), NT, 0.0)], [NT], [s]
        )
