"""Smoke tests for the python bindings."""

import math

import numpy as np
import pytest

import dnhb


@pytest.fixture
def cfg():
    return dnhb.SystemConfig(n_t=8, n_r=2, n_rf_t=4, n_rf_r=1, n_s=1, k_users=2)


def test_array_response_unit_norm():
    a = dnhb.array_response_ula(16, 0.7)
    assert a.shape == (16, 1)
    assert abs(np.linalg.norm(a) - 1.0) < 1e-12


def test_channel_shapes_and_determinism(cfg):
    real_a = dnhb.generate_channel(cfg, seed=5)
    real_b = dnhb.generate_channel(cfg, seed=5)
    assert len(real_a.channels) == cfg.k_users
    for h_a, h_b in zip(real_a.channels, real_b.channels):
        assert h_a.shape == (cfg.n_r, cfg.n_t)
        np.testing.assert_array_equal(h_a, h_b)


def test_channel_power_normalization(cfg):
    powers = [
        np.linalg.norm(r.channels[0]) ** 2
        for r in dnhb.generate_channel_set(cfg, 400, seed=7)
    ]
    mean_power = float(np.mean(powers))
    expected = cfg.n_t * cfg.n_r
    assert 0.85 * expected < mean_power < 1.15 * expected


def test_qpsk_round_trip():
    qpsk = dnhb.Constellation.qpsk()
    bits = [0, 0, 0, 1, 1, 0, 1, 1]
    symbols = qpsk.modulate(bits)
    assert abs(abs(symbols[0]) - 1.0) < 1e-12
    assert qpsk.demodulate(symbols) == bits


def test_model_forward_and_loss(cfg):
    real = dnhb.generate_channel(cfg, seed=9)
    model = dnhb.build_model(cfg, seed=3)
    symbols = dnhb.Constellation.qpsk().modulate([0, 1, 1, 0, 1, 1, 0, 0])
    batch = np.array(symbols, dtype=np.complex128).reshape(2, 2)
    outputs = dnhb.model_forward(model, batch, real, noise_variance=0.0)
    assert len(outputs) == cfg.k_users
    assert outputs[0].shape == (cfg.n_s, 2)
    loss = dnhb.sum_mse_loss(batch, np.vstack(outputs))
    assert loss >= 0.0


def test_training_reduces_loss(cfg):
    real = dnhb.generate_channel(cfg, seed=11)
    model = dnhb.build_model(cfg, seed=4)
    tc = dnhb.TrainConfig()
    tc.epochs = 12
    tc.steps_per_epoch = 20
    tc.batch_size = 64
    tc.train_snr_db_min = 5.0
    tc.train_snr_db_max = 5.0
    tc.seed = 12
    report = dnhb.train(model, real, tc, dnhb.Constellation.qpsk())
    assert len(report.epoch_loss) == 12
    assert report.epoch_loss[-1] < report.epoch_loss[0]


def test_linear_mode_extraction_constant_modulus(cfg):
    model = dnhb.build_model(cfg, mode="linear", seed=6)
    mats = dnhb.extract_matrices(model)
    assert np.allclose(np.abs(mats["f_analog"]), 1.0, atol=1e-12)
    for w in mats["w_analog"]:
        assert np.allclose(np.abs(w), 1.0, atol=1e-12)


def test_bd_baseline_beats_noise(cfg):
    real = dnhb.generate_channel(cfg, seed=13)
    tx = dnhb.bd_full_digital(real, cfg)
    errors, bits = dnhb.ber_trial_linear(tx, real, cfg, 60.0, 4000,
                                         dnhb.Constellation.qpsk(), seed=14)
    assert bits >= 4000
    assert errors == 0


def test_omp_hybrid_runs(cfg):
    real = dnhb.generate_channel(cfg, seed=15)
    tx = dnhb.omp_hybrid(real, cfg, noise_variance=0.1)
    assert tx.f_analog is not None
    assert np.allclose(np.abs(tx.f_analog), 1.0, atol=1e-12)
    power = np.linalg.norm(tx.effective_precoder()) ** 2
    assert power <= cfg.power_budget + 1e-9


def test_finite_diff_gradient():
    grad = dnhb.finite_diff_gradient(lambda p: p[0] ** 2 + 3.0 * p[1], [2.0, 1.0])
    assert abs(grad[0] - 4.0) < 1e-6
    assert abs(grad[1] - 3.0) < 1e-6


def test_invalid_config_raises():
    with pytest.raises(dnhb.DnhbError):
        dnhb.SystemConfig(n_t=2, n_r=2, n_rf_t=8, n_rf_r=1, n_s=1, k_users=1)
