"""Leeson phase noise, oscillator noise-factor decomposition and figures of merit.

All dB-domain quantities are computed directly in dB algebra; the linear
forms span ~25 orders of magnitude and are never round-tripped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .bvd import Resonator, series_resonance
from .compensation import (
    CompensationNetwork,
    effective_resistance,
    find_operating_point,
    _phase_slope_q,
    tank_impedance,
)

BOLTZMANN = 1.380649e-23

# Literal constant of the maximum-FoM formula; 10*log10(2e-3/kT) at 300 K
# evaluates to 176.84, the quotable rounded form uses 176.8.
FOM_MAX_CONSTANT_DB = 176.8

DEFAULT_TEMPERATURE = 300.0
DEFAULT_GAMMA = 1.0


@dataclass(frozen=True)
class OscillatorOperatingPoint:
    """Bias and signal conditions of the oscillator core."""

    v_osc: float
    f_0: float
    delta_f: float
    temperature: float = DEFAULT_TEMPERATURE
    gamma: float = DEFAULT_GAMMA
    g_mbias: float | None = None  # None: use the sizing rule 2/r_res
    i_bias: float | None = None
    p_dc: float | None = None

    def __post_init__(self):
        for name in ("v_osc", "f_0", "delta_f", "temperature"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.gamma < 0:
            raise ValueError("gamma must be non-negative")
        if not self.delta_f < self.f_0:
            raise ValueError("offset must be below the carrier")


@dataclass(frozen=True)
class NoiseBudget:
    """Noise factor split into resonator-loss, inductor-loss and active parts."""

    f_unity: float
    f_rl0: float
    f_active: float
    f_min: float
    beta: float
    eta: float | None = None


def leeson_phase_noise(res: Resonator, q_loaded: float,
                       op: OscillatorOperatingPoint,
                       noise_factor: float = 1.0) -> float:
    """White-noise region Leeson prediction in dBc/Hz.

    10*log10[F * 4kT*r_m/v_osc^2 * (f_0/(2*Q_L*delta_f))^2]; there is no
    flicker term in this model.
    """
    if not q_loaded > 0:
        raise ValueError("q_loaded must be positive")
    if not noise_factor > 0:
        raise ValueError("noise_factor must be positive")
    ratio = op.f_0 / (2.0 * q_loaded * op.delta_f)
    lin = (noise_factor * 4.0 * BOLTZMANN * op.temperature * res.r_m
           / (op.v_osc * op.v_osc))
    return 10.0 * math.log10(lin) + 20.0 * math.log10(ratio)


def noise_factor_from(beta: float, r_l0: float, r_m: float,
                      gamma: float, g_mbias: float) -> NoiseBudget:
    """Noise budget from already-reduced quantities.

    f_min = 1 + r_l0/r_m + gamma*beta + gamma*(4/9)*g_mbias*r_m*beta^2.
    """
    f_rl0 = r_l0 / r_m
    f_active = gamma * beta + gamma * (4.0 / 9.0) * g_mbias * r_m * beta * beta
    return NoiseBudget(f_unity=1.0, f_rl0=f_rl0, f_active=f_active,
                       f_min=1.0 + f_rl0 + f_active, beta=beta)


def noise_factor_components(res: Resonator, comp: CompensationNetwork,
                            op: OscillatorOperatingPoint) -> NoiseBudget:
    """Noise budget of the compensated oscillator at its operating point."""
    tank = effective_resistance(res, comp)
    g_mbias = op.g_mbias
    if g_mbias is None:
        g_mbias = 2.0 / tank.r_res  # minimum-g_m sizing rule
    return noise_factor_from(tank.beta, comp.r_l0, res.r_m, op.gamma, g_mbias)


def fom_from_measurement(phase_noise_dbchz: float, f_0: float,
                         delta_f: float, p_dc: float) -> float:
    """Figure of merit from a measured/predicted phase-noise number.

    -PN + 20*log10(f_0/delta_f) - 10*log10(p_dc/1 mW), in dBc/Hz.
    """
    if not p_dc > 0:
        raise ValueError("p_dc must be positive")
    return (-phase_noise_dbchz
            + 20.0 * math.log10(f_0 / delta_f)
            - 10.0 * math.log10(p_dc / 1e-3))


def fom_physical(q_loaded: float, beta: float, eta: float,
                 noise_factor: float, temperature: float = DEFAULT_TEMPERATURE) -> float:
    """FoM from tank and efficiency physics: 10*log10[2*beta*eta*Q_L^2/(kTF)*1e-3]."""
    for name, v in (("q_loaded", q_loaded), ("beta", beta), ("eta", eta),
                    ("noise_factor", noise_factor), ("temperature", temperature)):
        if not v > 0:
            raise ValueError(f"{name} must be positive")
    if eta > 1:
        raise ValueError("eta cannot exceed 1")
    lin = (2.0 * beta * eta * q_loaded * q_loaded
           / (BOLTZMANN * temperature * noise_factor) * 1e-3)
    return 10.0 * math.log10(lin)


def fom_max(q_loaded: float, beta: float) -> float:
    """Upper FoM bound for a lossless-drive, 100%-efficient oscillator."""
    if not q_loaded > 0 or not beta > 0:
        raise ValueError("q_loaded and beta must be positive")
    return (FOM_MAX_CONSTANT_DB + 20.0 * math.log10(q_loaded)
            + 10.0 * math.log10(beta))


def sensitivity_sweep(res: Resonator, comp: CompensationNetwork,
                      op: OscillatorOperatingPoint,
                      delta_c_range) -> list[tuple[float, float]]:
    """Phase-noise penalty of tank misalignment.

    Each delta-C is added to the capacitive branch and the oscillator is
    assumed to hold the tuned high-Q motional mode while that mode exists
    (the bank tuning targets it); once it vanishes only the low-Q LC-branch
    operating point remains and the prediction collapses accordingly.
    Returns (delta_c, phase_noise_dbchz) pairs in input order.
    """
    out = []
    for dc in np.asarray(delta_c_range, dtype=float):
        shifted = replace(comp, c_fix=comp.c_fix + dc)
        f_op, _, _ = find_operating_point(res, shifted)
        q_l = _phase_slope_q(lambda f: tank_impedance(res, shifted, f), f_op)
        budget = noise_factor_components(res, shifted, op)
        pn = leeson_phase_noise(res, q_l, replace(op, f_0=f_op), budget.f_min)
        out.append((float(dc), pn))
    return out
