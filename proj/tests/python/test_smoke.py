import math

import numpy as np
import pytest

import wslice


def small_config():
    cfg = wslice.RunConfig()
    cfg.network.num_windows = 4
    cfg.training.num_epochs = 1
    cfg.training.batch_size = 2
    cfg.training.learning_rate = 1e-3
    cfg.training.num_train = 2
    cfg.training.num_val = 2
    cfg.training.num_test = 2
    return cfg


def test_version():
    assert wslice.__version__ == "0.1.0"


def test_shannon_rate():
    assert wslice.shannon_rate(15.0) == pytest.approx(4.0)
    assert wslice.shannon_rate(math.e - 1.0, base="e") == pytest.approx(1.0)
    with pytest.raises(ValueError):
        wslice.shannon_rate(1.0, base="10")


def test_composition():
    h, l, b = wslice.sample_composition(20, seed=3)
    assert h + l + b == 20
    assert min(h, l, b) >= 1


def test_config_round_trip():
    cfg = small_config()
    back = wslice.RunConfig.from_json(cfg.to_json())
    assert back.network.num_windows == 4
    assert back.training.num_test == 2
    with pytest.raises(wslice.ConfigError):
        wslice.RunConfig.from_json('{"network": {"bogus": 1}}')


def test_baseline_evaluation():
    out = wslice.evaluate(small_config(), "proportional", num_test=3)
    assert out["allocation"].shape == (3, 4, 3)
    np.testing.assert_allclose(out["allocation"].sum(axis=2), 1.0)
    assert np.all(out["lambda"] == 0.0)
    v = out["violations"].as_dict()
    assert all(0.0 <= x <= 100.0 for x in v.values())


def test_missing_checkpoint():
    with pytest.raises(wslice.MissingArtifactError):
        wslice.evaluate(small_config(), "sapd")
    with pytest.raises(wslice.ConfigError):
        wslice.evaluate(small_config(), "nope")


def test_train_and_evaluate(tmp_path):
    cfg = small_config()
    res = wslice.train(cfg, "sapd", tmp_path / "sapd")
    assert (tmp_path / "sapd" / "epochs.csv").exists()
    out = wslice.evaluate(cfg, "sapd", checkpoint=res["checkpoint"])
    assert np.all(out["lambda"] >= 0.0)
    alloc = wslice.policy_allocation(res["checkpoint"], [0.3] * 9, 1.0, 0.0)
    assert sum(alloc.as_tuple()) == pytest.approx(1.0)
