"""Design toolkit for shunt-inductor compensated MEMS resonator oscillators."""

from .bvd import (
    ComplexResponse,
    Resonator,
    coupling_coefficient,
    impedance,
    motional_bandwidth,
    parallel_resonance,
    phase,
    quality_factor,
    series_resonance,
    static_reactance,
)
from .compensation import (
    AlignmentWarning,
    CompensationNetwork,
    NoResonanceError,
    NoSolutionError,
    TankAnalysis,
    analyze_tank,
    classify_alignment,
    effective_resistance,
    find_impedance_peaks,
    find_lc_operating_point,
    find_motional_operating_point,
    find_operating_point,
    loaded_q,
    loaded_q_3db,
    motional_mode_capacitance_margin,
    shunt_inductor_for,
    tank_impedance,
    tank_resonance,
    tune_bank,
    zero_phase_c0,
)
from .design import DesignError, DesignReport, DesignSpec, run_design, size_active
from .mna import (
    Netlist,
    NetlistError,
    SingularCircuitError,
    ac_sweep,
    driving_point_impedance,
    format_netlist,
    lint_netlist,
    parse_netlist,
)
from .noise import (
    NoiseBudget,
    OscillatorOperatingPoint,
    fom_from_measurement,
    fom_max,
    fom_physical,
    leeson_phase_noise,
    noise_factor_components,
    noise_factor_from,
    sensitivity_sweep,
)

__version__ = "0.1.0"
