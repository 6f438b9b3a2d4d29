import pytest

from vsumpipe.config import RunConfig
from vsumpipe.dataio import read_manifest
from vsumpipe.synth import SynthSpec, generate


@pytest.fixture(scope="session")
def small_dataset(tmp_path_factory):
    """Compact planted dataset shared by pipeline-level tests."""
    root = tmp_path_factory.mktemp("smallset")
    spec = SynthSpec(n_videos=6, t_range=(120, 200), dim=16, n_segments_range=(6, 9),
                     n_users=4, user_noise=0.05, feature_noise=0.4, fps=4.0, seed=5)
    manifest, truth = generate(spec, str(root))
    return {
        "dir": str(root),
        "manifest_path": str(root / "manifest.json"),
        "manifest": read_manifest(str(root / "manifest.json")),
        "truth": truth,
        "spec": spec,
    }


def fast_config(**overrides) -> RunConfig:
    """Small-width, short-schedule config for pipeline smoke tests."""
    base = dict(enc_hidden=64, latent=32, mlp_width=24, conv_channels=24, lstm_hidden=12,
                epochs=2, seed=3)
    base.update(overrides)
    return RunConfig(**base)
