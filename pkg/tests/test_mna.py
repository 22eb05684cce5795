import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from memsosc import (
    Netlist,
    NetlistError,
    ac_sweep,
    driving_point_impedance,
    format_netlist,
    impedance,
    lint_netlist,
    parse_netlist,
)
from memsosc.fixtures import get_resonator
from memsosc.mna import (
    E_ARITY,
    E_DANGLING,
    E_DIRECTIVE,
    E_DUP_NAME,
    E_KIND,
    E_NO_GROUND,
    E_NONPOSITIVE,
    E_NOT_CONNECTED,
    E_VALUE,
    Element,
    SingularCircuitError,
    build_system,
)

from conftest import NETLIST_DIR


def load(name: str) -> str:
    return (NETLIST_DIR / name).read_text()


GOOD_FILES = [
    "good_resistor.cir",
    "good_bvd_rft.cir",
    "good_series_lc.cir",
    "good_shunt_tank.cir",
    "good_divider.cir",
    "good_suffixes.cir",
]

BAD_FILES = {
    "bad_kind.cir": {E_KIND},
    "bad_value.cir": {E_VALUE},
    "bad_nonpositive.cir": {E_NONPOSITIVE},
    "bad_arity.cir": {E_ARITY},
    "bad_dup_name.cir": {E_DUP_NAME},
    "bad_directive.cir": {E_DIRECTIVE},
    "bad_dangling.cir": {E_DANGLING},
    "bad_no_ground.cir": {E_NO_GROUND},
    "bad_not_connected.cir": {E_NOT_CONNECTED},
}


class TestGoldenFiles:
    @pytest.mark.parametrize("name", GOOD_FILES)
    def test_good_files_lint_clean(self, name):
        assert lint_netlist(load(name)) == []

    @pytest.mark.parametrize("name,codes", sorted(BAD_FILES.items()))
    def test_bad_files_report_expected_codes(self, name, codes):
        diags = lint_netlist(load(name))
        assert codes <= {d.code for d in diags}

    def test_every_diagnostic_code_covered(self):
        seen = set()
        for name in BAD_FILES:
            seen |= {d.code for d in lint_netlist(load(name))}
        assert seen == {E_KIND, E_VALUE, E_NONPOSITIVE, E_ARITY, E_DUP_NAME,
                        E_DIRECTIVE, E_DANGLING, E_NO_GROUND, E_NOT_CONNECTED}

    def test_diagnostics_carry_position(self):
        diags = lint_netlist(load("bad_dup_name.cir"))
        dup = next(d for d in diags if d.code == E_DUP_NAME)
        assert dup.line == 2
        assert dup.column == 1


class TestParsing:
    def test_single_resistor(self):
        nl = parse_netlist("R1 1 0 332\n.probe 1 0\n")
        assert nl.elements == (Element("R", "R1", "1", "0", 332.0),)
        assert nl.probe == ("1", "0")

    def test_suffix_value(self):
        nl = parse_netlist("C1 1 0 16f\n.probe 1 0\n")
        assert nl.elements[0].value == pytest.approx(16e-15)

    def test_bvd_fixture_values(self):
        nl = parse_netlist(load("good_bvd_rft.cir"))
        by_name = {el.name: el for el in nl.elements}
        assert by_name["Rm"].value == 332.0
        assert by_name["Lm"].value == pytest.approx(17.59e-6)
        assert by_name["C0"].value == pytest.approx(16e-15)
        assert nl.ac == (5, 29.9e9, 30.1e9, "lin")

    def test_parse_raises_with_diagnostics(self):
        with pytest.raises(NetlistError) as err:
            parse_netlist("X1 1 0 5\n.probe 1 0\n")
        assert any(d.code == E_KIND for d in err.value.diagnostics)

    def test_comments_and_blanks_ignored(self):
        nl = parse_netlist("* header\n\nR1 1 0 5\n.probe 1 0\n")
        assert len(nl.elements) == 1


class TestRoundTrip:
    @pytest.mark.parametrize("name", GOOD_FILES)
    def test_golden_roundtrip(self, name):
        nl = parse_netlist(load(name))
        assert parse_netlist(format_netlist(nl)) == nl


KINDS = st.sampled_from("RLC")
NODE = st.integers(min_value=0, max_value=6).map(str)


@st.composite
def netlists(draw):
    n = draw(st.integers(min_value=1, max_value=8))
    elements = []
    prev = "0"
    for i in range(n):
        kind = draw(KINDS)
        # chain guarantees ground connectivity without dangling nodes
        node = draw(NODE) if draw(st.booleans()) else str(i + 1)
        value = draw(st.floats(min_value=1e-15, max_value=1e6,
                               allow_nan=False, allow_infinity=False))
        elements.append(Element(kind, f"{kind}{i}", prev, node, value))
        prev = node
    elements.append(Element("R", "Rterm", prev, "0", 50.0))
    ac = None
    if draw(st.booleans()):
        ac = (draw(st.integers(min_value=1, max_value=50)),
              draw(st.floats(min_value=1.0, max_value=1e9)),
              draw(st.floats(min_value=1e9, max_value=1e12)),
              draw(st.sampled_from(["lin", "log"])))
    probe = ("0", elements[0].node_b)
    return Netlist(tuple(elements), ac, probe)


@settings(max_examples=500, deadline=None)
@given(netlists())
def test_property_roundtrip(nl):
    assert parse_netlist(format_netlist(nl)) == nl


class TestSolving:
    def test_resistor_flat(self):
        nl = parse_netlist(load("good_resistor.cir"))
        for f in (1e3, 1e6, 1e9):
            assert driving_point_impedance(nl, f) == pytest.approx(332.0)

    def test_lossless_series_lc_short_at_resonance(self):
        nl = parse_netlist(load("good_series_lc.cir"))
        fs = 1.0 / (2.0 * math.pi * math.sqrt(17.59e-6 * 1.6e-18))
        assert abs(driving_point_impedance(nl, fs)) < 1e-6

    def test_divider_dc_limit(self):
        nl = parse_netlist(load("good_divider.cir"))
        # at low f the capacitor opens: R1 dangles, R2 alone remains
        z = driving_point_impedance(nl, 1e-2)
        assert z.real == pytest.approx(2000.0, rel=1e-6)

    def test_bvd_matches_analytic(self, rft):
        nl = parse_netlist(load("good_bvd_rft.cir"))
        for f in (29.9e9, 30.0e9, 30.1e9):
            oracle = driving_point_impedance(nl, f)
            analytic = impedance(rft, f)
            assert cmath.isclose(oracle, analytic, rel_tol=1e-9)

    def test_parallel_rlc_closed_form(self):
        text = ("R1 t 0 100\nL1 t 0 10n\nC1 t 0 1p\n.probe t 0\n")
        nl = parse_netlist(text)
        f = 3.7e9
        w = 2.0 * math.pi * f
        y = 1.0 / 100.0 + 1.0 / (1j * w * 10e-9) + 1j * w * 1e-12
        assert cmath.isclose(driving_point_impedance(nl, f), 1.0 / y,
                             rel_tol=1e-12)

    # Exactly singular systems need the admittance cancellation to land on
    # a float zero: a 1 H || 1 F trap at f = 1/(2*pi) gives w == 1.0 and
    # wC - 1/(wL) == 0.0 bit-exactly.
    TRAP_F = 1.0 / (2.0 * math.pi)

    def test_singular_raises(self):
        trap = parse_netlist("L1 a 0 1\nC1 a 0 1\n.probe a 0\n")
        assert 2.0 * math.pi * self.TRAP_F == 1.0  # construction premise
        with pytest.raises(SingularCircuitError):
            driving_point_impedance(trap, self.TRAP_F)

    def test_sweep_gap_markers(self):
        text = (f"L1 a 0 1\nC1 a 0 1\n"
                f".ac lin 1 {self.TRAP_F!r} {self.TRAP_F!r}\n"
                f".probe a 0\n")
        resp = ac_sweep(parse_netlist(text))
        assert np.all(np.isnan(resp.values.real))

    def test_sweep_grids(self):
        nl = parse_netlist("R1 1 0 50\n.ac log 3 1meg 100meg\n.probe 1 0\n")
        resp = ac_sweep(nl)
        assert resp.frequencies[1] == pytest.approx(10e6, rel=1e-9)
        assert np.allclose(resp.values, 50.0)

    def test_matrix_symmetric(self):
        nl = parse_netlist(load("good_shunt_tank.cir"))
        y, rhs, index = build_system(nl, 30e9)
        assert np.array_equal(y, y.T)

    def test_aligned_tank_sweep_single_dominant_region(self):
        nl = parse_netlist(load("good_shunt_tank.cir"))
        resp = ac_sweep(nl)
        mags = resp.magnitude()
        # aligned: one merged resonance region, no separated second peak
        peak = int(np.argmax(mags))
        assert 29.5e9 < resp.frequencies[peak] < 30.5e9


@st.composite
def random_rlc(draw):
    kinds = draw(st.lists(KINDS, min_size=1, max_size=6))
    elements = []
    for i, kind in enumerate(kinds):
        lo, hi = {"R": (0.1, 1e5), "L": (1e-12, 1e-3),
                  "C": (1e-16, 1e-6)}[kind]
        value = draw(st.floats(min_value=lo, max_value=hi))
        a = str(draw(st.integers(min_value=0, max_value=3)))
        b = str(draw(st.integers(min_value=0, max_value=3)))
        if a == b:
            b = str((int(a) + 1) % 4)
        elements.append(Element(kind, f"{kind}{i}", a, b, value))
    elements.append(Element("R", "Rg", "1", "0", 1e3))
    return Netlist(tuple(elements), None, ("1", "0"))


@settings(max_examples=300, deadline=None)
@given(random_rlc(), st.floats(min_value=1e3, max_value=1e11))
def test_property_passivity(nl, f):
    try:
        z = driving_point_impedance(nl, f)
    except SingularCircuitError:
        return
    assert z.real >= -1e-9
