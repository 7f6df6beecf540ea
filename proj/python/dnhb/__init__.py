"""Autoencoder hybrid beamforming simulator.

Thin python layer over the C++ core (the ``_dnhb`` extension module):
channel generation, the trainable transceiver network, classical baselines
and Monte Carlo BER measurement.
"""

from ._dnhb import (
    Constellation,
    ChannelRealization,
    DnhbError,
    DnhbModel,
    LinearTransceiver,
    Rng,
    SystemConfig,
    TrainConfig,
    TrainingReport,
    array_response_ula,
    bd_full_digital,
    ber_trial_linear,
    ber_trial_model,
    build_model,
    evaluate_linear_transceiver,
    extract_matrices,
    finite_diff_gradient,
    generate_channel,
    generate_channel_set,
    load_model,
    model_forward,
    omp_hybrid,
    randn_complex,
    run_experiment_file,
    save_model,
    sum_mse_loss,
    train,
)

__all__ = [
    "Constellation",
    "ChannelRealization",
    "DnhbError",
    "DnhbModel",
    "LinearTransceiver",
    "Rng",
    "SystemConfig",
    "TrainConfig",
    "TrainingReport",
    "array_response_ula",
    "bd_full_digital",
    "ber_trial_linear",
    "ber_trial_model",
    "build_model",
    "evaluate_linear_transceiver",
    "extract_matrices",
    "finite_diff_gradient",
    "generate_channel",
    "generate_channel_set",
    "load_model",
    "model_forward",
    "omp_hybrid",
    "randn_complex",
    "run_experiment_file",
    "save_model",
    "sum_mse_loss",
    "train",
]
