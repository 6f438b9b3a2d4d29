import numpy as np
import pytest

from vsumpipe.dataio import load_model, save_model
from vsumpipe.encdec import (
    EncDec,
    EncDecConfig,
    encdec_from_bundle,
    encdec_to_bundle,
    train_encdec,
)
from vsumpipe.training import TrainConfig

SMALL = EncDecConfig(in_dim=6, hidden=24, latent=12)


class TestEncode:
    def test_latent_dimension(self):
        model = EncDec(EncDecConfig(in_dim=1024), seed=0)
        window = np.random.default_rng(0).standard_normal((5, 1024))
        latent = model.encode(window)
        assert latent.shape == (5, 512)

    def test_latent_512_for_any_input_dim(self):
        for d in (7, 64, 300):
            model = EncDec(EncDecConfig(in_dim=d, hidden=32), seed=0)
            assert model.encode(np.zeros((4, d))).shape == (4, 512)

    def test_deterministic(self):
        model = EncDec(SMALL, seed=1)
        x = np.random.default_rng(1).standard_normal((8, 6))
        a = model.encode(x)
        b = model.encode(x)
        assert a.tobytes() == b.tobytes()

    def test_zero_weights_sigmoid_gives_half(self):
        model = EncDec(EncDecConfig(in_dim=6, hidden=8, latent=4, activation="sigmoid"), seed=0)
        for p in model.network.params().values():
            p[...] = 0.0
        latent = model.encode(np.random.default_rng(2).standard_normal((5, 6)))
        assert np.array_equal(latent, np.full((5, 4), 0.5))


class TestTraining:
    def test_overfit_one_window(self):
        rng = np.random.default_rng(3)
        window = rng.standard_normal((1, 4, 6))
        cfg = TrainConfig(epochs=400, batch_size=1, lr=0.003, val_fraction=0.0, seed=0)
        model, result = train_encdec(window, SMALL, cfg)
        recon = model.reconstruct(window)
        assert float(np.mean((recon - window) ** 2)) < 1e-3
        # loss non-increasing, allowing a 5% transient bump between epochs
        # (absolute floor covers jitter once the loss hits numerical noise)
        hist = result.train_history
        for prev, cur in zip(hist, hist[1:]):
            assert cur <= prev * 1.05 + 1e-8

    def test_initial_loss_nonnegative(self):
        windows = np.random.default_rng(4).standard_normal((10, 4, 6))
        _, result = train_encdec(windows, SMALL, TrainConfig(epochs=1, seed=0))
        assert result.train_history[0] >= 0.0

    def test_zero_epochs_returns_initialized_model(self):
        windows = np.random.default_rng(5).standard_normal((6, 4, 6))
        model, result = train_encdec(windows, SMALL, TrainConfig(epochs=0, seed=9))
        fresh = EncDec(SMALL, seed=9)
        for k, v in model.network.params().items():
            assert np.array_equal(v, fresh.network.params()[k])
        assert result.epochs_run == 0 and result.best_val_loss is None

    def test_empty_input_rejected(self):
        with pytest.raises(ValueError):
            train_encdec(np.zeros((0, 4, 6)), SMALL)

    def test_best_epoch_restored(self):
        windows = np.random.default_rng(6).standard_normal((24, 4, 6))
        model, result = train_encdec(windows, SMALL, TrainConfig(epochs=5, seed=2))
        assert result.best_val_loss == min(result.val_history)


class TestBundle:
    def test_roundtrip_through_file(self, tmp_path):
        windows = np.random.default_rng(7).standard_normal((12, 4, 6))
        model, _ = train_encdec(windows, SMALL, TrainConfig(epochs=2, seed=4))
        path = str(tmp_path / "enc.mbdl")
        save_model(encdec_to_bundle(model, "rgb"), path)
        back = encdec_from_bundle(load_model(path))
        x = np.random.default_rng(8).standard_normal((5, 6))
        assert back.encode(x).tobytes() == model.encode(x).tobytes()
        assert back.cfg == model.cfg
