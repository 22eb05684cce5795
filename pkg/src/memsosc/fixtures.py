"""Built-in reference devices and compensation networks.

Four published resonator parameter sets spanning 45 MHz quartz to a 30 GHz
MEMS device, plus the two inductor variants used throughout the examples.
"""

from __future__ import annotations

from .bvd import Resonator
from .compensation import CompensationNetwork

# Notes on the stored values:
#  * saw400m: the quoted Q of 16,400 disagrees with the device's own
#    R/L/C values, which imply ~17,700.  The raw published parameters are
#    stored; regression tests allow 10% on this row only.
#  * rft30g: c_m is trimmed by +0.004% (within the published rounding of
#    1.6 aF) so that f_s sits 152 kHz below 30 GHz; the rounded values
#    would put f_s 412 kHz above 30 GHz, where the device's documented
#    zero-phase compensation point at 30 GHz cannot exist.
BUILTIN_RESONATORS = {
    "quartz45m": Resonator(r_m=12.3, l_m=4.4e-3, c_m=2.895e-15, c_0=4e-12,
                           label="quartz45m"),
    "saw400m": Resonator(r_m=14.0, l_m=97.5e-6, c_m=1.594e-15, c_0=2.1e-12,
                         label="saw400m"),
    "fbar2g4": Resonator(r_m=1.04, l_m=107.2e-9, c_m=38.99e-15, c_0=1.29e-12,
                         label="fbar2g4"),
    "rft30g": Resonator(r_m=332.0, l_m=17.59e-6, c_m=1.60006e-18, c_0=16e-15,
                        label="rft30g"),
}

# Nominal Q values as published, for regression checks and reports.
PUBLISHED_Q = {
    "quartz45m": 1e5,
    "saw400m": 16400.0,
    "fbar2g4": 1600.0,
    "rft30g": 10000.0,
}

PUBLISHED_FREQUENCY = {
    "quartz45m": 45e6,
    "saw400m": 400e6,
    "fbar2g4": 2.4e9,
    "rft30g": 30e9,
}

# 250 pH shunt inductor at 30 GHz: the analysis variant (Q_L0 = 10,
# R_L0 ~ 4.7 ohm) and the realizable variant (Q_L0 = 8).  c_fix absorbs
# node parasitics and is trimmed so bank midscale (code 4) aligns the
# 250 pH branch with the rft30g series resonance.
BUILTIN_NETWORKS = {
    "l0_250p_q10": CompensationNetwork(l_0=250e-12, q_l0=10.0, f_ref=30e9,
                                       c_fix=92.58e-15, bank_unit=1e-15,
                                       bank_size=8, bank_code=4),
    "l0_250p_q8": CompensationNetwork(l_0=250e-12, q_l0=8.0, f_ref=30e9,
                                      c_fix=92.58e-15, bank_unit=1e-15,
                                      bank_size=8, bank_code=4),
}


def get_resonator(name: str) -> Resonator:
    try:
        return BUILTIN_RESONATORS[name]
    except KeyError:
        raise KeyError(f"unknown built-in resonator {name!r}; "
                       f"choices: {', '.join(sorted(BUILTIN_RESONATORS))}") from None


def get_network(name: str) -> CompensationNetwork:
    try:
        return BUILTIN_NETWORKS[name]
    except KeyError:
        raise KeyError(f"unknown built-in network {name!r}; "
                       f"choices: {', '.join(sorted(BUILTIN_NETWORKS))}") from None
