"""Shunt-inductor compensation of the resonator static capacitance.

The network places l_0 (with series loss r_l0 derived from its quality
factor) across the resonator, together with a fixed capacitor and a
digitally tunable capacitor bank, so that the l_0/C branch resonates out
c_0 at the motional series resonance.

Operating points are the zero-phase crossings of the composite impedance,
i.e. the frequencies where a negative-conductance cell can sustain
oscillation.  The tuned high-Q crossing sits at the motional series
resonance (an impedance notch of depth r_res with a steep phase slope);
the broad LC-branch structure carries its own low-Q crossing.  The
motional crossing exists only while the capacitive misalignment stays
below 1/(2*r_m*w_s) - beyond that the tank susceptance exceeds what the
motional branch can cancel and only the low-Q point remains.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import brentq

from .bvd import (
    TWO_PI,
    Resonator,
    _check_frequency,
    motional_bandwidth,
    motional_detuning,
    motional_impedance,
    quality_factor,
    series_resonance,
)


class NoSolutionError(ValueError):
    """Requested synthesis has no physical solution."""


class NoResonanceError(RuntimeError):
    """No resonant operating point exists in the examined window."""


class AlignmentWarning(UserWarning):
    """Best achievable tuning still leaves the tank off the motional peak."""


@dataclass(frozen=True)
class CompensationNetwork:
    """Shunt inductor, fixed capacitor and unit-capacitor bank around a resonator.

    q_l0 is specified at f_ref and converted once to a frequency-independent
    series resistance r_l0; inductor loss dispersion is out of scope.
    """

    l_0: float
    q_l0: float
    f_ref: float
    c_fix: float = 0.0
    bank_unit: float = 0.0
    bank_size: int = 0
    bank_code: int = 0
    topology: str = "shunt"

    def __post_init__(self):
        if not self.l_0 > 0:
            raise ValueError("l_0 must be positive")
        if not self.q_l0 > 0:
            raise ValueError("q_l0 must be positive")
        if not self.f_ref > 0:
            raise ValueError("f_ref must be positive")
        if self.c_fix < 0 or self.bank_unit < 0:
            raise ValueError("capacitances must be non-negative")
        if self.bank_size < 0:
            raise ValueError("bank_size must be non-negative")
        if not 0 <= self.bank_code <= self.bank_size:
            raise ValueError("bank_code must lie in [0, bank_size]")
        if self.topology not in ("shunt", "series"):
            raise ValueError(f"unknown topology {self.topology!r}")

    @property
    def r_l0(self) -> float:
        """Series loss resistance of the inductor, 2*pi*f_ref*l_0/q_l0."""
        return TWO_PI * self.f_ref * self.l_0 / self.q_l0

    def branch_capacitance(self, res: Resonator, bank_code: int | None = None) -> float:
        """Total capacitance across l_0: c_0 + c_fix + selected bank units."""
        code = self.bank_code if bank_code is None else bank_code
        return res.c_0 + self.c_fix + code * self.bank_unit


@dataclass(frozen=True)
class TankAnalysis:
    """Derived figures of the compensated tank at its operating resonance."""

    f_tank: float
    f_s: float
    r_res: float
    beta: float
    aligned: bool
    q_loaded: float | None = None
    dominant_mode: str | None = None


def zero_phase_c0(res: Resonator, f: float) -> float:
    """Static capacitance that would give a 0-degree impedance phase at f.

    Only frequencies above the series resonance admit a positive solution.
    """
    f = float(_check_frequency(f))
    w = TWO_PI * f
    d = float(motional_detuning(res, f))  # omega^2*l_m*c_m - 1
    if d <= 0:
        raise NoSolutionError(
            f"no physical solution: {f} Hz is not above the series resonance "
            f"({series_resonance(res):.6g} Hz)")
    a = w * res.r_m * res.c_m
    return res.c_m * d / (a * a + d * d)


def shunt_inductor_for(c_total: float, f_0: float) -> float:
    """Inductance resonating c_total at f_0."""
    if not c_total > 0 or not f_0 > 0:
        raise ValueError("c_total and f_0 must be positive")
    w = TWO_PI * f_0
    return 1.0 / (w * w * c_total)


def tank_impedance(res: Resonator, comp: CompensationNetwork, f):
    """Complex impedance of motional branch || C branch || lossy inductor."""
    if comp.topology != "shunt":
        raise ValueError("tank_impedance is defined for the shunt topology only")
    f = _check_frequency(f)
    w = TWO_PI * f
    c_branch = comp.branch_capacitance(res)
    y = (1.0 / motional_impedance(res, f)
         + 1j * w * c_branch
         + 1.0 / (comp.r_l0 + 1j * w * comp.l_0))
    z = 1.0 / y
    return complex(z) if np.ndim(f) == 0 else z


def series_compensation_impedance(res: Resonator, l_0: float, r_l0: float, f):
    """Impedance of the rejected series variant: inductor in series with the one-port."""
    from .bvd import impedance

    f = _check_frequency(f)
    w = TWO_PI * f
    return (r_l0 + 1j * w * l_0) + impedance(res, f)


def tank_resonance(res: Resonator, comp: CompensationNetwork,
                   bank_code: int | None = None) -> float:
    """LC-branch resonance 1/(2*pi*sqrt(l_0*c_branch))."""
    c = comp.branch_capacitance(res, bank_code)
    if c <= 0:
        raise ValueError("branch capacitance must be positive")
    return 1.0 / (TWO_PI * math.sqrt(comp.l_0 * c))


def _effective_parallel_resistance(res: Resonator, comp: CompensationNetwork) -> float:
    q2r = comp.q_l0 * comp.q_l0 * comp.r_l0
    return res.r_m * q2r / (res.r_m + q2r)


def motional_mode_capacitance_margin(res: Resonator) -> float:
    """Capacitive misalignment beyond which the high-Q motional mode is lost.

    The motional branch can cancel at most 1/(2*r_m) of net tank
    susceptance; the equivalent capacitance offset is 1/(2*r_m*w_s).
    """
    return 1.0 / (2.0 * res.r_m * TWO_PI * series_resonance(res))


# --- operating points ----------------------------------------------------

def _phase_of(res: Resonator, comp: CompensationNetwork, f):
    return np.angle(tank_impedance(res, comp, f))


def _phase_crossings(res: Resonator, comp: CompensationNetwork,
                     lo: float, hi: float, points: int) -> list[float]:
    """Zero crossings of the impedance phase over [lo, hi], refined by brentq."""
    grid = np.linspace(lo, hi, points)
    ph = _phase_of(res, comp, grid)
    out = []
    sign = np.sign(ph)
    for i in np.nonzero(sign[:-1] * sign[1:] < 0)[0]:
        out.append(brentq(lambda f: float(_phase_of(res, comp, f)),
                          grid[i], grid[i + 1], xtol=lo * 1e-12))
    return out


def find_motional_operating_point(res: Resonator, comp: CompensationNetwork):
    """Zero-phase crossing nearest f_s, or None once that mode has vanished.

    The crossing lies within one motional bandwidth of f_s whenever it
    exists; the search window spans +-2 bandwidths.
    """
    fs = series_resonance(res)
    bw = motional_bandwidth(res)
    # cap: for very low motional Q the bandwidth exceeds the octave around f_s
    lo = max(fs - 2.0 * bw, 0.5 * fs)
    hi = min(fs + 2.0 * bw, 1.5 * fs)
    crossings = _phase_crossings(res, comp, lo, hi, 2001)
    if not crossings:
        return None
    f = min(crossings, key=lambda x: abs(x - fs))
    return f, complex(tank_impedance(res, comp, f))


def find_lc_operating_point(res: Resonator, comp: CompensationNetwork):
    """Zero-phase crossing of the broad LC-branch structure.

    Among the crossings in a window around the LC resonance this is the one
    with the largest impedance (the motional crossing, when inside the
    window, is a notch of much lower impedance).
    """
    ft = tank_resonance(res, comp)
    half = ft / max(2.0 * comp.q_l0, 4.0)
    lo = max(ft - 4.0 * half, ft * 0.2)
    hi = ft + 4.0 * half
    crossings = _phase_crossings(res, comp, lo, hi, 4001)
    if not crossings:
        raise NoResonanceError("no resonance found in the LC sweep window")
    f = max(crossings, key=lambda x: abs(tank_impedance(res, comp, x)))
    return f, complex(tank_impedance(res, comp, f))


def find_operating_point(res: Resonator, comp: CompensationNetwork):
    """Governing operating point: (frequency, impedance, mode).

    The tuned high-Q motional crossing governs whenever it exists (it is
    what the bank tuning targets); otherwise only the low-Q LC-branch
    point remains.
    """
    motional = find_motional_operating_point(res, comp)
    if motional is not None:
        return (*motional, "motional")
    f, z = find_lc_operating_point(res, comp)
    return f, z, "lc_tank"


def find_impedance_peaks(res: Resonator, comp: CompensationNetwork,
                         lo: float, hi: float, points: int = 4001):
    """Interior local maxima of |Z| over a linear grid, coarse but robust.

    Returns (frequency, magnitude) pairs sorted by frequency; used to
    examine split-resonance structures.
    """
    grid = np.linspace(lo, hi, points)
    mags = np.abs(tank_impedance(res, comp, grid))
    idx = np.nonzero((mags[1:-1] > mags[:-2]) & (mags[1:-1] > mags[2:]))[0] + 1
    return [(float(grid[i]), float(mags[i])) for i in idx]


# --- loaded quality factor ----------------------------------------------

def _phase_slope_q(zfun, f_0: float) -> float:
    """Q from the phase slope: (f/2)*|dphi/df|, central difference with step
    halving until a halving changes the estimate by < 0.1%."""
    h = f_0 * 1e-4
    q_prev = None
    q = 0.0
    while h > f_0 * 1e-13:
        dphi = np.angle(zfun(f_0 + h)) - np.angle(zfun(f_0 - h))
        dphi = (dphi + math.pi) % (2.0 * math.pi) - math.pi
        q = 0.5 * f_0 * abs(float(dphi)) / (2.0 * h)
        if q_prev is not None and q > 0 and abs(q - q_prev) < 1e-3 * q:
            return q
        q_prev = q
        h *= 0.5
    return q


def loaded_q(res: Resonator, comp: CompensationNetwork,
             mode: str = "dominant") -> float:
    """Loaded Q of the composite tank by the phase-slope method.

    Evaluated at a zero-phase operating point: "dominant" (the governing
    one), "motional" (nearest f_s; raises once that mode has vanished) or
    "lc_tank".
    """
    if mode == "dominant":
        f_op, _, _ = find_operating_point(res, comp)
    elif mode == "motional":
        point = find_motional_operating_point(res, comp)
        if point is None:
            raise NoResonanceError("no motional-mode resonance found")
        f_op = point[0]
    elif mode == "lc_tank":
        f_op = find_lc_operating_point(res, comp)[0]
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return _phase_slope_q(lambda f: tank_impedance(res, comp, f), f_op)


def loaded_q_3db(res: Resonator, comp: CompensationNetwork) -> float:
    """Secondary Q estimate from the half-power (-3 dB) bandwidth.

    The governing operating point is a |Z| extremum: a peak for the bare
    LC structure, a notch for a motionally loaded tank.  The bandwidth is
    the spacing of the sqrt(2) magnitude points around that extremum
    (down from a peak, up from a notch).  Agrees with the phase-slope
    method on lightly loaded tanks; under heavy loading (beta well below
    1) the notch walls are set by the unloaded motional branch and this
    estimate reads high.
    """
    f_op, z_op, _ = find_operating_point(res, comp)
    m0 = abs(z_op)
    # peak-or-notch probe at a bandwidth-scale offset; the zero-phase point
    # sits slightly off the magnitude extremum, so look at both sides
    q_est = _phase_slope_q(lambda f: tank_impedance(res, comp, f), f_op)
    probe = f_op / (4.0 * max(q_est, 1.0))
    m_side = 0.5 * (abs(tank_impedance(res, comp, f_op + probe))
                    + abs(tank_impedance(res, comp, f_op - probe)))
    is_notch = m_side > m0
    target = m0 * math.sqrt(2.0) if is_notch else m0 / math.sqrt(2.0)

    def excess(f):
        return (abs(tank_impedance(res, comp, f)) - target) * (1 if is_notch else -1)

    def crossing(direction: int) -> float:
        step = f_op * 1e-9
        f = f_op
        while step < f_op:
            f_next = f + direction * step
            if f_next <= 0:
                break
            if excess(f_next) >= 0:
                return brentq(excess, min(f, f_next), max(f, f_next),
                              xtol=f_op * 1e-12)
            f = f_next
            step *= 2.0
        raise NoResonanceError("half-power point not found")

    f_lo = crossing(-1)
    f_hi = crossing(+1)
    return f_op / (f_hi - f_lo)


# --- tank-level summaries ------------------------------------------------

def effective_resistance(res: Resonator, comp: CompensationNetwork) -> TankAnalysis:
    """Resistance-division summary: r_res = r_m || (q_l0^2 * r_l0) and beta."""
    r_res = _effective_parallel_resistance(res, comp)
    fs = series_resonance(res)
    ft = tank_resonance(res, comp)
    aligned = abs(ft - fs) <= 0.5 * motional_bandwidth(res)
    return TankAnalysis(f_tank=ft, f_s=fs, r_res=r_res, beta=r_res / res.r_m,
                        aligned=aligned)


def classify_alignment(res: Resonator, comp: CompensationNetwork) -> TankAnalysis:
    """Alignment class plus the governing operating mode."""
    base = effective_resistance(res, comp)
    _, _, mode = find_operating_point(res, comp)
    return replace(base, dominant_mode=mode)


def analyze_tank(res: Resonator, comp: CompensationNetwork) -> TankAnalysis:
    """Full tank summary including the phase-slope loaded Q."""
    base = effective_resistance(res, comp)
    _, _, mode = find_operating_point(res, comp)
    q = loaded_q(res, comp, mode="dominant")
    return replace(base, dominant_mode=mode, q_loaded=q)


def tune_bank(res: Resonator, comp: CompensationNetwork) -> int:
    """Bank code minimizing |f_tank - f_s|; ties break toward the lower code.

    Scans every code exhaustively; warns when even the best code leaves the
    tank more than a motional bandwidth off the series resonance.
    """
    if comp.bank_size < 1:
        warnings.warn("bank has no tunable units", AlignmentWarning)
        return 0
    fs = series_resonance(res)
    codes = np.arange(comp.bank_size + 1)
    offsets = np.array([abs(tank_resonance(res, comp, int(c)) - fs) for c in codes])
    best = int(np.argmin(offsets))  # argmin takes the first (lowest) code on ties
    if offsets[best] > motional_bandwidth(res):
        warnings.warn(
            f"best bank code {best} still leaves the tank "
            f"{offsets[best]:.4g} Hz off the series resonance",
            AlignmentWarning)
    return best
