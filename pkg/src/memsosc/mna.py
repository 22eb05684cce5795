"""Small-signal AC oracle: linear R/L/C netlists solved by modified nodal analysis.

The netlist grammar is one statement per line:

    <Kind><name> <nodeA> <nodeB> <value>     R/L/C element (ohm, henry, farad)
    .ac lin|log <points> <fstart> <fstop>    sweep directive
    .probe <nodeA> <nodeB>                   driving-point impedance probe
    * comment

Values accept engineering suffixes (``16f``, ``250p``, ``30g``, ``1meg``).
Node "0" is ground.  Inductors are stamped as admittances 1/(jwL); only
AC analysis at f > 0 is supported, which keeps the system at one row per
non-ground node.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bvd import TWO_PI, ComplexResponse
from .engnotation import EngNotationError, parse_eng

_KINDS = ("R", "L", "C")

# Diagnostic codes
E_KIND = "E_KIND"              # unknown element kind letter
E_VALUE = "E_VALUE"            # malformed value / suffix
E_NONPOSITIVE = "E_NONPOSITIVE"
E_ARITY = "E_ARITY"            # wrong token count on a statement
E_DUP_NAME = "E_DUP_NAME"
E_DIRECTIVE = "E_DIRECTIVE"    # malformed .ac / .probe / unknown dot card
E_DANGLING = "E_DANGLING"      # non-ground, non-probe node used only once
E_NO_GROUND = "E_NO_GROUND"
E_NOT_CONNECTED = "E_NOT_CONNECTED"


@dataclass(frozen=True)
class Diagnostic:
    code: str
    line: int
    column: int
    message: str

    def __str__(self):
        return f"{self.line}:{self.column}: {self.code}: {self.message}"


class NetlistError(ValueError):
    """Parse or structural failure; carries the full diagnostic list."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(str(d) for d in self.diagnostics))


class SingularCircuitError(RuntimeError):
    """The MNA system is singular at the requested frequency."""


@dataclass(frozen=True)
class Element:
    kind: str
    name: str
    node_a: str
    node_b: str
    value: float


@dataclass(frozen=True)
class Netlist:
    elements: tuple[Element, ...]
    ac: tuple[int, float, float, str] | None = None  # (points, start, stop, spacing)
    probe: tuple[str, str] | None = None


def lint_netlist(text: str) -> list[Diagnostic]:
    """All diagnostics for the given source, empty when it parses cleanly."""
    _, diags = _parse(text)
    return diags


def parse_netlist(text: str) -> Netlist:
    netlist, diags = _parse(text)
    if diags:
        raise NetlistError(diags)
    return netlist


def _parse(text: str):
    elements: list[Element] = []
    seen_names: set[str] = set()
    ac = None
    probe = None
    diags: list[Diagnostic] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("*"):
            continue
        tokens = line.split()
        col = raw.index(tokens[0]) + 1

        if tokens[0].startswith("."):
            card = tokens[0].lower()
            if card == ".ac":
                if (len(tokens) != 5 or tokens[1].lower() not in ("lin", "log")):
                    diags.append(Diagnostic(E_DIRECTIVE, lineno, col,
                                            ".ac wants: .ac lin|log <points> <fstart> <fstop>"))
                    continue
                try:
                    points = int(tokens[2])
                    fstart = parse_eng(tokens[3])
                    fstop = parse_eng(tokens[4])
                except (ValueError, EngNotationError):
                    diags.append(Diagnostic(E_DIRECTIVE, lineno, col,
                                            f"malformed .ac parameters: {line!r}"))
                    continue
                if points < 1 or fstart <= 0 or fstop < fstart:
                    diags.append(Diagnostic(E_DIRECTIVE, lineno, col,
                                            "need points >= 1 and 0 < fstart <= fstop"))
                    continue
                ac = (points, fstart, fstop, tokens[1].lower())
            elif card == ".probe":
                if len(tokens) != 3:
                    diags.append(Diagnostic(E_DIRECTIVE, lineno, col,
                                            ".probe wants: .probe <nodeA> <nodeB>"))
                    continue
                probe = (tokens[1], tokens[2])
            else:
                diags.append(Diagnostic(E_DIRECTIVE, lineno, col,
                                        f"unknown directive {tokens[0]!r}"))
            continue

        kind = tokens[0][0].upper()
        if kind not in _KINDS:
            diags.append(Diagnostic(E_KIND, lineno, col,
                                    f"unknown element kind {tokens[0][0]!r}"))
            continue
        if len(tokens) != 4:
            diags.append(Diagnostic(E_ARITY, lineno, col,
                                    f"element wants: <Kind><name> <nodeA> <nodeB> <value>"))
            continue
        name = tokens[0]
        if name in seen_names:
            diags.append(Diagnostic(E_DUP_NAME, lineno, col,
                                    f"duplicate element name {name!r}"))
            continue
        try:
            value = parse_eng(tokens[3])
        except EngNotationError:
            diags.append(Diagnostic(E_VALUE, lineno, col,
                                    f"malformed value {tokens[3]!r}"))
            continue
        if value <= 0:
            diags.append(Diagnostic(E_NONPOSITIVE, lineno, col,
                                    f"element value must be positive, got {tokens[3]!r}"))
            continue
        seen_names.add(name)
        elements.append(Element(kind, name, tokens[1], tokens[2], value))

    diags.extend(_structural_diagnostics(elements, probe))
    return Netlist(tuple(elements), ac, probe), diags


def _structural_diagnostics(elements, probe):
    diags = []
    if not elements:
        return diags
    degree: dict[str, int] = {}
    for el in elements:
        for node in (el.node_a, el.node_b):
            degree[node] = degree.get(node, 0) + 1
    if "0" not in degree:
        diags.append(Diagnostic(E_NO_GROUND, 0, 0, 'no element touches ground node "0"'))
    probe_nodes = set(probe) if probe else set()
    for node, deg in sorted(degree.items()):
        if node != "0" and deg == 1 and node not in probe_nodes:
            diags.append(Diagnostic(E_DANGLING, 0, 0,
                                    f"node {node!r} is used by a single terminal only"))
    # connectivity over the element graph
    adjacency: dict[str, set[str]] = {n: set() for n in degree}
    for el in elements:
        adjacency[el.node_a].add(el.node_b)
        adjacency[el.node_b].add(el.node_a)
    if "0" in adjacency:
        seen = {"0"}
        stack = ["0"]
        while stack:
            for nxt in adjacency[stack.pop()]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        unreachable = sorted(set(degree) - seen)
        if unreachable:
            diags.append(Diagnostic(E_NOT_CONNECTED, 0, 0,
                                    f"nodes not connected to ground: {', '.join(unreachable)}"))
    return diags


def format_netlist(netlist: Netlist) -> str:
    """Serialize back to netlist text; values use plain float notation so the
    result reparses bit-exactly."""
    lines = [f"{el.name} {el.node_a} {el.node_b} {el.value!r}"
             for el in netlist.elements]
    if netlist.ac is not None:
        points, fstart, fstop, spacing = netlist.ac
        lines.append(f".ac {spacing} {points} {fstart!r} {fstop!r}")
    if netlist.probe is not None:
        lines.append(f".probe {netlist.probe[0]} {netlist.probe[1]}")
    return "\n".join(lines) + "\n"


# --- solving -------------------------------------------------------------

def _solve_lu(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Dense complex solve with partial pivoting and explicit singularity
    reporting (pivot below 1e-12 of the largest initial row norm)."""
    a = a.copy()
    b = b.copy()
    n = a.shape[0]
    threshold = 1e-12 * max(np.max(np.sum(np.abs(a), axis=1)), 1e-300)
    for k in range(n):
        pivot_row = k + int(np.argmax(np.abs(a[k:, k])))
        if abs(a[pivot_row, k]) < threshold:
            raise SingularCircuitError("singular MNA system (lossless resonance?)")
        if pivot_row != k:
            a[[k, pivot_row]] = a[[pivot_row, k]]
            b[[k, pivot_row]] = b[[pivot_row, k]]
        factors = a[k + 1:, k] / a[k, k]
        a[k + 1:, k:] -= np.outer(factors, a[k, k:])
        b[k + 1:] -= factors * b[k]
    x = np.zeros(n, dtype=complex)
    for k in range(n - 1, -1, -1):
        x[k] = (b[k] - a[k, k + 1:] @ x[k + 1:]) / a[k, k]
    return x


def _admittance(el: Element, w: float) -> complex:
    if el.kind == "R":
        return 1.0 / el.value
    if el.kind == "L":
        return 1.0 / (1j * w * el.value)
    return 1j * w * el.value


def build_system(netlist: Netlist, f: float):
    """Admittance matrix, source vector and node index map at frequency f."""
    if f <= 0:
        raise ValueError("frequency must be positive")
    if netlist.probe is None:
        raise ValueError("netlist has no .probe directive")
    nodes = sorted({n for el in netlist.elements for n in (el.node_a, el.node_b)}
                   - {"0"})
    index = {n: i for i, n in enumerate(nodes)}
    n = len(nodes)
    w = TWO_PI * f
    y = np.zeros((n, n), dtype=complex)
    for el in netlist.elements:
        adm = _admittance(el, w)
        ia = index.get(el.node_a)
        ib = index.get(el.node_b)
        if ia is not None:
            y[ia, ia] += adm
        if ib is not None:
            y[ib, ib] += adm
        if ia is not None and ib is not None:
            y[ia, ib] -= adm
            y[ib, ia] -= adm
    rhs = np.zeros(n, dtype=complex)
    pa, pb = netlist.probe
    if pa not in index and pa != "0":
        raise ValueError(f"probe node {pa!r} not in circuit")
    if pb not in index and pb != "0":
        raise ValueError(f"probe node {pb!r} not in circuit")
    if pa in index:
        rhs[index[pa]] += 1.0
    if pb in index:
        rhs[index[pb]] -= 1.0
    return y, rhs, index


def driving_point_impedance(netlist: Netlist, f: float) -> complex:
    """Impedance seen between the probe nodes: unit AC current in, voltage out."""
    y, rhs, index = build_system(netlist, f)
    if not np.array_equal(y, y.T):
        raise AssertionError("MNA matrix must be symmetric for R/L/C circuits")
    v = _solve_lu(y, rhs)
    pa, pb = netlist.probe
    va = v[index[pa]] if pa in index else 0.0
    vb = v[index[pb]] if pb in index else 0.0
    return complex(va - vb)


def ac_sweep(netlist: Netlist) -> ComplexResponse:
    """Probe impedance over the .ac grid; singular points become NaN gaps."""
    if netlist.ac is None:
        raise ValueError("netlist has no .ac directive")
    points, fstart, fstop, spacing = netlist.ac
    if points == 1:
        grid = np.array([fstart])
    elif spacing == "log":
        grid = np.geomspace(fstart, fstop, points)
    else:
        grid = np.linspace(fstart, fstop, points)
    values = np.empty(grid.size, dtype=complex)
    for i, f in enumerate(grid):
        try:
            values[i] = driving_point_impedance(netlist, float(f))
        except SingularCircuitError:
            values[i] = complex(math.nan, math.nan)
    return ComplexResponse(grid, values)
