import math
from dataclasses import replace

import pytest

from memsosc import (
    DesignError,
    DesignReport,
    DesignSpec,
    fom_physical,
    run_design,
    series_resonance,
    size_active,
)
from memsosc.design import SUPPLY_BRANCH_FACTOR

from conftest import rescale_motional_q


def rft_spec(res, **overrides):
    kw = dict(resonator=res, target_f0=30e9, v_osc_target=0.3,
              parasitic_c=86.58e-15, q_l0_available=8.0,
              bank_unit=1e-15, bank_size=8, c_fix=10e-15)
    kw.update(overrides)
    return DesignSpec(**kw)


class TestSpecValidation:
    def test_rejects_unreachable_target(self, rft):
        with pytest.raises(ValueError):
            rft_spec(rft, target_f0=10e9)

    def test_rejects_nonpositive(self, rft):
        with pytest.raises(ValueError):
            rft_spec(rft, v_osc_target=0.0)
        with pytest.raises(ValueError):
            rft_spec(rft, parasitic_c=-1e-15)


class TestSizeActive:
    def test_worked_example(self):
        g_m, i_bias, _ = size_active(196.3, 0.3, 200e-6)
        assert g_m == pytest.approx(10.19e-3, rel=1e-3)
        assert i_bias == pytest.approx(1.528e-3, rel=1e-3)

    def test_w_over_l(self):
        g_m, i_bias, w_over_l = size_active(196.3, 0.3, 200e-6)
        assert w_over_l == pytest.approx(g_m ** 2 / (2 * i_bias * 200e-6))
        assert w_over_l == pytest.approx(169.9, rel=1e-3)

    def test_scaling_sanity(self):
        g_m, i_bias, _ = size_active(2.0, 2.0, 200e-6)
        assert g_m == pytest.approx(1.0)
        assert i_bias == pytest.approx(1.0)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            size_active(0.0, 0.3, 200e-6)


class TestRunDesign:
    def test_reference_design(self, rft):
        report = run_design(rft_spec(rft))
        assert report.l_0 == pytest.approx(250e-12, abs=25e-12)
        assert report.predicted_pn <= -125.0
        assert report.predicted_fom >= 210.0
        assert report.p_dc_estimate <= 3e-3

    def test_bare_c0_inductor(self, rft):
        report = run_design(rft_spec(rft, parasitic_c=0.0, bank_size=0,
                                     bank_unit=0.0, c_fix=0.0,
                                     l0_grid_step=1.759e-9 / 7))
        assert report.l_0 == pytest.approx(1.759e-9, rel=0.01)

    def test_low_q_resonator_warns(self, rft):
        res = rescale_motional_q(rft, 500.0)
        report = run_design(rft_spec(res))
        assert any("loaded Q" in w for w in report.warnings)

    def test_deterministic(self, rft):
        a = run_design(rft_spec(rft))
        b = run_design(rft_spec(rft))
        assert a == b

    def test_startup_condition(self, rft):
        report = run_design(rft_spec(rft))
        assert report.g_m * report.r_res >= 2.0 - 1e-12

    def test_power_accounting(self, rft):
        report = run_design(rft_spec(rft))
        assert report.p_dc_estimate == pytest.approx(
            SUPPLY_BRANCH_FACTOR * 0.8 * report.i_bias)
        p_out = 0.3 ** 2 / (2.0 * report.r_res)
        assert report.eta == pytest.approx(p_out / report.p_dc_estimate)

    def test_fom_recomputes_from_report_fields(self, rft):
        report = run_design(rft_spec(rft))
        again = fom_physical(report.q_loaded, report.beta, report.eta,
                             report.noise_factor, 300.0)
        assert report.predicted_fom == pytest.approx(again, abs=0.01)

    def test_lower_q_l0_never_helps(self, rft):
        foms = [run_design(rft_spec(rft, q_l0_available=q)).predicted_fom
                for q in (4.0, 6.0, 8.0, 10.0, 12.0)]
        assert all(a <= b + 1e-9 for a, b in zip(foms, foms[1:]))

    def test_chosen_l0_is_grid_minimal(self, rft):
        spec = rft_spec(rft)
        report = run_design(spec)
        # every smaller grid inductor needs more capacitance than the bank
        # can supply
        ws = 2.0 * math.pi * series_resonance(rft)
        c_base = rft.c_0 + spec.parasitic_c + spec.c_fix
        c_max = c_base + spec.bank_size * spec.bank_unit + 0.5 * spec.bank_unit
        k = 1
        while k * spec.l0_grid_step < report.l_0 - 1e-15:
            assert 1.0 / (ws * ws * k * spec.l0_grid_step) > c_max
            k += 1

    def test_fails_when_bank_cannot_align(self, rft):
        # grid too coarse: no inductor lands anywhere near the needed value
        with pytest.raises(DesignError):
            run_design(rft_spec(rft, l0_grid_step=1e-9, bank_size=2))

    def test_report_is_frozen(self, rft):
        report = run_design(rft_spec(rft))
        with pytest.raises(AttributeError):
            report.l_0 = 1.0
