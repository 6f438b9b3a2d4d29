import json

import numpy as np
import pytest

from conftest import fast_config
from vsumpipe.errors import ShapeError
from vsumpipe.evaluate import (
    EvalReport,
    assign_folds,
    crossval,
    format_table,
    overlap_metrics,
    read_report,
    write_report,
)


class TestOverlapMetrics:
    def test_equal_masks_full_score(self):
        mask = np.array([0, 1, 1, 0, 1])
        p, r, f = overlap_metrics(mask, mask)
        assert (p, r, f) == (100.0, 100.0, 100.0)

    def test_disjoint_masks_zero(self):
        p, r, f = overlap_metrics(np.array([1, 1, 0, 0]), np.array([0, 0, 1, 1]))
        assert (p, r, f) == (0.0, 0.0, 0.0)

    def test_half_overlap_case(self):
        gt = np.zeros(20, dtype=int)
        gt[0:10] = 1
        pred = np.zeros(20, dtype=int)
        pred[5:15] = 1
        p, r, f = overlap_metrics(pred, gt)
        assert abs(p - 50.0) < 1e-9 and abs(r - 50.0) < 1e-9 and abs(f - 50.0) < 1e-9

    def test_empty_denominators(self):
        zero = np.zeros(4, dtype=int)
        one = np.array([1, 0, 0, 0])
        assert overlap_metrics(zero, one) == (0.0, 0.0, 0.0)
        assert overlap_metrics(one, zero) == (0.0, 0.0, 0.0)

    def test_precision_recall_duality(self):
        rng = np.random.default_rng(0)
        for _ in range(300):
            t = int(rng.integers(1, 50))
            a = (rng.random(t) < 0.4).astype(int)
            b = (rng.random(t) < 0.4).astype(int)
            pa, ra, fa = overlap_metrics(a, b)
            pb, rb, fb = overlap_metrics(b, a)
            assert pa == rb and ra == pb
            assert abs(fa - fb) < 1e-12  # F symmetric under p/r exchange

    def test_validation(self):
        with pytest.raises(ShapeError):
            overlap_metrics(np.zeros(3), np.zeros(4))
        with pytest.raises(ValueError):
            overlap_metrics(np.array([0, 2]), np.array([0, 1]))


class TestFoldAssignment:
    class V:
        def __init__(self, vid, cat=None):
            self.video_id, self.category = vid, cat

    def test_each_video_once(self):
        videos = [self.V(f"v{i}") for i in range(5)]
        assignment = assign_folds(videos, 5, seed=1, stratify=False)
        assert sorted(assignment.values()) == [0, 1, 2, 3, 4]

    def test_deterministic(self):
        videos = [self.V(f"v{i}") for i in range(9)]
        a = assign_folds(videos, 4, seed=2, stratify=False)
        b = assign_folds(videos, 4, seed=2, stratify=False)
        assert a == b
        c = assign_folds(videos, 4, seed=3, stratify=False)
        assert a != c  # overwhelmingly likely for 9 videos

    def test_order_invariance(self):
        videos = [self.V(f"v{i}") for i in range(8)]
        a = assign_folds(videos, 4, seed=5, stratify=False)
        b = assign_folds(list(reversed(videos)), 4, seed=5, stratify=False)
        assert a == b

    def test_stratified_one_per_category(self):
        videos = [self.V(f"v{i}", cat=f"c{i % 4}") for i in range(12)]
        assignment = assign_folds(videos, 5, seed=7, stratify=True)
        for fold in range(5):
            cats = [v.category for v in videos if assignment[v.video_id] == fold]
            assert len(cats) == len(set(cats))

    def test_too_few_videos(self):
        with pytest.raises(ValueError):
            assign_folds([self.V("a")], 5, seed=0, stratify=False)

    def test_category_overflow(self):
        videos = [self.V(f"v{i}", cat="same") for i in range(6)]
        with pytest.raises(ValueError):
            assign_folds(videos, 3, seed=0, stratify=True)


@pytest.fixture(scope="module")
def report(small_dataset):
    cfg = fast_config(variant="baseline", stream="rgb", folds=3)
    return crossval(small_dataset["manifest"], cfg), cfg, small_dataset


class TestCrossval:

    def test_every_video_reported_once(self, report):
        rep, _, ds = report
        ids = [r["video_id"] for r in rep.per_video]
        assert ids == sorted(e.video_id for e in ds["manifest"])

    def test_metrics_in_range(self, report):
        rep, _, _ = report
        for row in rep.per_video:
            for key in ("precision", "recall", "fscore"):
                assert 0.0 <= row[key] <= 100.0
            assert 0.0 <= row["summary_fraction"] <= 0.16

    def test_deterministic_repeat(self, report, small_dataset):
        rep, cfg, _ = report
        again = crossval(small_dataset["manifest"], cfg)
        assert json.dumps(rep.to_dict(), sort_keys=True) == json.dumps(again.to_dict(), sort_keys=True)

    def test_manifest_reorder_invariance(self, report, small_dataset):
        import dataclasses

        rep, cfg, _ = report
        manifest = small_dataset["manifest"]
        shuffled = dataclasses.replace(manifest, entries=tuple(reversed(manifest.entries)))
        again = crossval(shuffled, cfg)
        assert again.aggregate == rep.aggregate
        assert again.fold_assignments == rep.fold_assignments

    def test_stratified_run(self, small_dataset):
        cfg = fast_config(variant="baseline", stream="rgb", folds=3, stratify=True, epochs=1)
        rep = crossval(small_dataset["manifest"], cfg)
        cat_of = {e.video_id: e.category for e in small_dataset["manifest"]}
        for fold in set(rep.fold_assignments.values()):
            cats = [cat_of[v] for v, f in rep.fold_assignments.items() if f == fold]
            assert len(cats) == len(set(cats))

    def test_folds_exceed_videos(self, small_dataset):
        with pytest.raises(ValueError):
            crossval(small_dataset["manifest"], fast_config(folds=7))

    def test_percentile_mask_path(self, small_dataset):
        cfg = fast_config(variant="baseline", stream="rgb", folds=3, epochs=1,
                          eval_mask="percentile")
        rep = crossval(small_dataset["manifest"], cfg)
        for row in rep.per_video:
            assert 0.0 <= row["fscore"] <= 100.0

    def test_curve_dump(self, small_dataset, tmp_path):
        cfg = fast_config(variant="baseline", stream="rgb", folds=3, epochs=1)
        crossval(small_dataset["manifest"], cfg, curves_dir=str(tmp_path / "curves"))
        files = sorted((tmp_path / "curves").iterdir())
        assert len(files) == 6
        first = files[0].read_text().splitlines()
        assert all(len(line.split()) == 2 for line in first)


class TestReportIo:
    def test_roundtrip(self, tmp_path):
        rep = EvalReport(
            per_video=[{"video_id": "a", "precision": 50.0, "recall": 100.0,
                        "fscore": 66.66666666666667, "summary_fraction": 0.15}],
            aggregate=66.66666666666667,
            fold_assignments={"a": 0},
            config={"seed": 1},
        )
        path = str(tmp_path / "rep.json")
        write_report(rep, path)
        back = read_report(path)
        assert back.aggregate == rep.aggregate
        assert back.per_video == rep.per_video
        table = format_table(rep)
        assert "66.67" in table and "a" in table
