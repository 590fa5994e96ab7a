"""Quantum-circuit uniform and Gaussian random variates, with diffusion and Brownian consumers."""

from .brownian import BrownianPath, FidelityReport, fidelity_check, simulate_path
from .diffusion import NoiseSchedule, forward_step, forward_to_t, linear_schedule
from .gaussian import (
    DegenerateSourceError,
    GaussianPair,
    UniformSource,
    box_muller,
    clt_sum_gaussian,
    gaussian_stream,
    marsaglia_polar,
    quantum_gaussian_stream,
)
from .qrng import QrngConfig, QuantumRandomGenerator, UniformVariate, to_binary_index, uniform_variate
from .stats import StatReport, full_battery

__version__ = "0.1.0"

__all__ = [
    "BrownianPath",
    "DegenerateSourceError",
    "FidelityReport",
    "GaussianPair",
    "NoiseSchedule",
    "QrngConfig",
    "QuantumRandomGenerator",
    "StatReport",
    "UniformSource",
    "UniformVariate",
    "box_muller",
    "clt_sum_gaussian",
    "fidelity_check",
    "forward_step",
    "forward_to_t",
    "full_battery",
    "gaussian_stream",
    "linear_schedule",
    "marsaglia_polar",
    "quantum_gaussian_stream",
    "simulate_path",
    "to_binary_index",
    "uniform_variate",
]
