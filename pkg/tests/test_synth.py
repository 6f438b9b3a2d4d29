import hashlib
import os

import numpy as np
import pytest

from vsumpipe.dataio import read_annotations, read_features, read_manifest
from vsumpipe.kts import segment
from vsumpipe.preprocess import BinarizeRule, consolidate_targets
from vsumpipe.synth import SynthSpec, generate

TINY = SynthSpec(n_videos=3, t_range=(60, 100), dim=8, n_segments_range=(4, 6),
                 n_users=4, fps=4.0, seed=11)


def dir_hashes(root):
    out = {}
    for base, _, files in os.walk(root):
        for f in files:
            p = os.path.join(base, f)
            out[os.path.relpath(p, root)] = hashlib.sha256(open(p, "rb").read()).hexdigest()
    return out


class TestGenerate:
    def test_files_pass_all_validators(self, tmp_path):
        manifest, truth = generate(TINY, str(tmp_path))
        back = read_manifest(str(tmp_path / "manifest.json"))
        assert len(back) == 3
        for entry in back:
            rgb = read_features(back.resolve(entry.path_rgb))
            flow = read_features(back.resolve(entry.path_flow))
            ann = read_annotations(back.resolve(entry.path_annotations))
            assert rgb.n_frames == flow.n_frames == ann.n_frames
            assert flow.frames.min() >= 0.0 and flow.frames.max() <= 1.0
            assert rgb.fps == TINY.fps

    def test_planted_fraction_within_one_segment(self, tmp_path):
        _, truth = generate(TINY, str(tmp_path))
        for v in truth["videos"]:
            mask = np.frombuffer(v["mask"].encode(), np.uint8) - ord("0")
            t = v["n_frames"]
            bounds = [0, *v["boundaries"], t]
            max_seg = max(b - a for a, b in zip(bounds[:-1], bounds[1:]))
            assert abs(int(mask.sum()) - TINY.summary_fraction * t) <= max_seg

    def test_zero_user_noise_gt_equals_plant(self, tmp_path):
        spec = SynthSpec(n_videos=2, t_range=(50, 70), dim=6, n_users=3,
                         user_noise=0.0, fps=2.0, seed=3)
        _, truth = generate(spec, str(tmp_path))
        manifest = read_manifest(str(tmp_path / "manifest.json"))
        for entry, tv in zip(manifest, truth["videos"]):
            ann = read_annotations(manifest.resolve(entry.path_annotations))
            labels = consolidate_targets(ann, BinarizeRule(x=0.5, mark="positive")).labels
            planted = np.frombuffer(tv["mask"].encode(), np.uint8) - ord("0")
            assert np.array_equal(labels, planted)

    def test_zero_feature_noise_kts_recovers_boundaries(self, tmp_path):
        spec = SynthSpec(n_videos=2, t_range=(60, 90), dim=8, n_segments_range=(4, 6),
                         feature_noise=0.0, fps=2.0, seed=7)
        _, truth = generate(spec, str(tmp_path))
        manifest = read_manifest(str(tmp_path / "manifest.json"))
        for entry, tv in zip(manifest, truth["videos"]):
            seq = read_features(manifest.resolve(entry.path_rgb))
            seg = segment(seq, penalty_c=1e-6)
            assert list(seg.change_points) == tv["boundaries"]

    def test_same_seed_byte_identical(self, tmp_path):
        generate(TINY, str(tmp_path / "a"))
        generate(TINY, str(tmp_path / "b"))
        assert dir_hashes(tmp_path / "a") == dir_hashes(tmp_path / "b")

    def test_different_seed_differs(self, tmp_path):
        generate(TINY, str(tmp_path / "a"))
        import dataclasses

        generate(dataclasses.replace(TINY, seed=TINY.seed + 1), str(tmp_path / "b"))
        assert dir_hashes(tmp_path / "a") != dir_hashes(tmp_path / "b")

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            SynthSpec(summary_fraction=0.0)
        with pytest.raises(ValueError):
            SynthSpec(user_noise=-0.1)
        with pytest.raises(ValueError):
            SynthSpec(n_videos=0)
