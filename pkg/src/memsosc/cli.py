"""Command-line surface.

Subcommands: resonator, compensate, noise, design, ac, sweep.  Every
report prints the defaults it used so any quoted number is reproducible.
Exit codes: 0 success, 1 user/input error, 2 design failure.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import bvd, compensation, design, fixtures, iodoc, mna, noise
from .engnotation import EngNotationError, format_eng, parse_eng

DEFAULT_OFFSETS = (100e3, 1e6, 10e6)


class UserError(Exception):
    """Bad input at the CLI level; reported on stderr, exit 1."""


def _eng(text: str) -> float:
    try:
        return parse_eng(text)
    except EngNotationError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _emit(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        iodoc.atomic_write_text(path, text)


def _defaults_header(op: noise.OscillatorOperatingPoint | None = None) -> str:
    lines = ["# defaults: T = 300 K, gamma = 1, offsets = 100k / 1meg / 10meg Hz"]
    if op is not None:
        lines.append(f"# operating point: v_osc = {format_eng(op.v_osc)}V, "
                     f"f_0 = {format_eng(op.f_0)}Hz, T = {op.temperature:g} K, "
                     f"gamma = {op.gamma:g}")
    return "\n".join(lines)


def _load_resonator(args) -> bvd.Resonator:
    try:
        return iodoc.resolve_resonator(args.resonator)
    except (iodoc.DocumentError, OSError) as exc:
        raise UserError(str(exc))


def _load_network(args, res: bvd.Resonator) -> compensation.CompensationNetwork:
    if args.network is not None:
        try:
            return iodoc.resolve_network(args.network)
        except (iodoc.DocumentError, OSError) as exc:
            raise UserError(str(exc))
    # default: lossy inductor resonating the bare static capacitance at f_s
    fs = bvd.series_resonance(res)
    l_0 = compensation.shunt_inductor_for(res.c_0, fs)
    return compensation.CompensationNetwork(l_0=l_0, q_l0=args.q_l0, f_ref=fs)


def _operating_point(args, f_0: float, offset: float) -> noise.OscillatorOperatingPoint:
    return noise.OscillatorOperatingPoint(
        v_osc=args.vosc, f_0=f_0, delta_f=offset,
        temperature=args.temp, gamma=args.gamma,
        g_mbias=args.gmbias)


def _point_metrics(res, comp, args, offset: float) -> dict:
    """Shared per-point numbers for the noise report and parameter sweeps."""
    tank = compensation.effective_resistance(res, comp)
    f_op, _, _ = compensation.find_operating_point(res, comp)
    q_l = compensation._phase_slope_q(
        lambda f: compensation.tank_impedance(res, comp, f), f_op)
    op = _operating_point(args, f_op, offset)
    budget = noise.noise_factor_components(res, comp, op)
    pn = noise.leeson_phase_noise(res, q_l, op, budget.f_min)
    i_bias = args.vosc / tank.r_res
    p_dc = design.SUPPLY_BRANCH_FACTOR * args.supply * i_bias
    eta = args.vosc ** 2 / (2.0 * tank.r_res) / p_dc
    fom = noise.fom_physical(q_l, tank.beta, eta, budget.f_min, args.temp)
    return {"f_osc": f_op, "q_l": q_l, "beta": tank.beta, "r_res": tank.r_res,
            "budget": budget, "pn": pn, "fom": fom, "p_dc": p_dc, "eta": eta}


# --- subcommands ---------------------------------------------------------

def cmd_resonator(args) -> int:
    res = _load_resonator(args)
    fs = bvd.series_resonance(res)
    fp = bvd.parallel_resonance(res)
    q = bvd.quality_factor(res)
    kt2 = bvd.coupling_coefficient(res)
    xc0 = bvd.static_reactance(res, fs)
    print(_defaults_header())
    print(f"resonator      : {res.label or args.resonator}")
    print(f"f_s            : {fs!r} Hz")
    print(f"f_p            : {fp!r} Hz")
    print(f"Q              : {q!r}")
    print(f"kt^2 (cm/c0)   : {kt2!r}")
    print(f"|X_C0| at f_s  : {xc0!r} ohm")
    print(f"|X_C0| / R_m   : {xc0 / res.r_m!r}")
    if args.out is not None:
        if args.f_from is None or args.f_to is None:
            raise UserError("--out needs a sweep window (--from/--to)")
        resp = bvd.sweep(res, args.f_from, args.f_to, args.points, log=args.log)
        _emit(args.out, iodoc.response_csv(resp))
    return 0


def cmd_compensate(args) -> int:
    res = _load_resonator(args)
    f_0 = args.f0 if args.f0 is not None else bvd.series_resonance(res)
    print(_defaults_header())
    try:
        c0_zero = compensation.zero_phase_c0(res, f_0)
        print(f"zero-phase C0 at {format_eng(f_0)}Hz : {c0_zero!r} F")
    except compensation.NoSolutionError as exc:
        print(f"zero-phase C0 at {format_eng(f_0)}Hz : {exc}")
    print(f"suggested L0 for bare c_0     : "
          f"{compensation.shunt_inductor_for(res.c_0, f_0)!r} H")
    comp = _load_network(args, res)
    tank = compensation.analyze_tank(res, comp)
    print(f"r_res          : {tank.r_res!r} ohm")
    print(f"beta           : {tank.beta!r}")
    print(f"Q_L (phase slope): {tank.q_loaded!r}")
    print(f"f_tank         : {tank.f_tank!r} Hz")
    print(f"aligned        : {tank.aligned}")
    print(f"dominant mode  : {tank.dominant_mode}")
    return 0


def cmd_noise(args) -> int:
    res = _load_resonator(args)
    comp = _load_network(args, res)
    offsets = args.offsets or list(DEFAULT_OFFSETS)
    m = _point_metrics(res, comp, args, offsets[0])
    budget = m["budget"]
    print(_defaults_header(_operating_point(args, m["f_osc"], offsets[0])))
    print(f"f_osc          : {m['f_osc']!r} Hz")
    print(f"Q_L            : {m['q_l']!r}")
    print(f"beta           : {m['beta']!r}")
    print(f"F_RL0          : {budget.f_rl0!r}")
    print(f"F_active       : {budget.f_active!r}")
    print(f"F_min          : {budget.f_min!r}")
    for off in offsets:
        op = _operating_point(args, m["f_osc"], off)
        pn = noise.leeson_phase_noise(res, m["q_l"], op, budget.f_min)
        print(f"PN @ {format_eng(off)}Hz : {pn!r} dBc/Hz")
    print(f"FoM (physical) : {m['fom']!r} dBc/Hz  "
          f"[p_dc = {m['p_dc']!r} W, eta = {m['eta']!r}]")
    pn0 = noise.leeson_phase_noise(
        res, m["q_l"], _operating_point(args, m["f_osc"], offsets[0]), budget.f_min)
    print(f"FoM (from PN)  : "
          f"{noise.fom_from_measurement(pn0, m['f_osc'], offsets[0], m['p_dc'])!r}"
          f" dBc/Hz")
    print(f"FoM (maximum)  : {noise.fom_max(m['q_l'], m['beta'])!r} dBc/Hz")
    return 0


def cmd_design(args) -> int:
    try:
        spec = iodoc.designspec_from_document(iodoc.load_document(args.infile))
    except (iodoc.DocumentError, OSError, ValueError) as exc:
        raise UserError(str(exc))
    try:
        report = design.run_design(spec)
    except design.DesignError as exc:
        print(f"design failed: {exc}", file=sys.stderr)
        return 2
    if args.format == "doc":
        _emit(args.out, iodoc.report_document(report))
        return 0
    lines = [_defaults_header()]
    lines.append(f"L0             : {format_eng(report.l_0)}H "
                 f"(Q_L0 = {report.q_l0:g}, R_L0 = {report.r_l0:.4g} ohm)")
    lines.append(f"c_fix + parasitics : {format_eng(report.c_fix)}F")
    lines.append(f"bank code      : {report.bank_code} / {report.bank_size}")
    lines.append(f"f_s / f_tank   : {report.f_s!r} / {report.f_tank!r} Hz")
    lines.append(f"f_osc          : {report.f_osc!r} Hz")
    lines.append(f"r_res / beta   : {report.r_res:.6g} ohm / {report.beta:.6g}")
    lines.append(f"Q_L / Q_reso   : {report.q_loaded:.6g} / {report.q_resonator:.6g}")
    lines.append(f"noise factor   : {report.noise_factor:.6g}")
    lines.append(f"g_m / I_bias   : {report.g_m:.6g} S / {report.i_bias:.6g} A")
    lines.append(f"W/L            : {report.w_over_l:.6g}")
    lines.append(f"P_DC estimate  : {report.p_dc_estimate:.6g} W "
                 f"(eta = {report.eta:.4g})")
    lines.append(f"predicted PN   : {report.predicted_pn:.6g} dBc/Hz "
                 f"@ {format_eng(report.pn_offset)}Hz")
    lines.append(f"predicted FoM  : {report.predicted_fom:.6g} dBc/Hz")
    for w in report.warnings:
        lines.append(f"warning        : {w}")
    _emit(args.out, "\n".join(lines) + "\n")
    return 0


def cmd_ac(args) -> int:
    try:
        netlist = mna.parse_netlist(Path(args.infile).read_text())
    except OSError as exc:
        raise UserError(str(exc))
    except mna.NetlistError as exc:
        raise UserError(f"netlist errors:\n" +
                        "\n".join(str(d) for d in exc.diagnostics))
    try:
        resp = mna.ac_sweep(netlist)
    except ValueError as exc:
        raise UserError(str(exc))
    _emit(args.out, iodoc.response_csv(resp))
    return 0


def cmd_sweep(args) -> int:
    res = _load_resonator(args)
    comp = _load_network(args, res)
    offset = args.offsets[0] if args.offsets else 1e6
    if args.log:
        values = np.geomspace(args.f_from, args.f_to, args.points)
    else:
        values = np.linspace(args.f_from, args.f_to, args.points)

    fs = bvd.series_resonance(res)
    rows = []
    for v in values:
        if args.var == "q_rft":
            l_m = v * res.r_m / (2.0 * math.pi * fs)
            c_m = 1.0 / ((2.0 * math.pi * fs) ** 2 * l_m)
            res_i = replace(res, l_m=l_m, c_m=c_m)
            comp_i = comp
        elif args.var == "delta_c":
            res_i = res
            comp_i = replace(comp, c_fix=comp.c_fix + v)
        elif args.var == "q_l0":
            res_i = res
            comp_i = replace(comp, q_l0=v)
        elif args.var == "l_0":
            res_i = res
            comp_i = replace(comp, l_0=v)
        else:
            raise UserError(f"unknown sweep variable {args.var!r}")
        m = _point_metrics(res_i, comp_i, args, offset)
        rows.append((v, m["q_l"], m["beta"], m["pn"], m["fom"]))

    lines = [f"{args.var},q_l,beta,pn_dbchz,fom_dbchz"]
    for row in rows:
        lines.append(",".join(repr(float(x)) for x in row))
    _emit(args.out, "\n".join(lines) + "\n")
    return 0


# --- wiring --------------------------------------------------------------

def _add_resonator_arg(p):
    p.add_argument("resonator", help="built-in fixture name or document path")


def _add_network_args(p):
    p.add_argument("--network", help="network fixture name or document path")
    p.add_argument("--q-l0", dest="q_l0", type=_eng, default=10.0,
                   help="inductor Q for the default bare-c_0 network")


def _add_op_args(p):
    p.add_argument("--vosc", type=_eng, default=0.3, help="oscillation amplitude, V")
    p.add_argument("--offset", dest="offsets", type=_eng, action="append",
                   help="phase-noise offset(s), Hz (repeatable)")
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--temp", type=float, default=300.0)
    p.add_argument("--gmbias", type=_eng, default=None,
                   help="tail-source transconductance, S (default: 2/r_res)")
    p.add_argument("--supply", type=_eng, default=0.8)


def _add_window_args(p, required=False):
    p.add_argument("--from", dest="f_from", type=_eng, required=required)
    p.add_argument("--to", dest="f_to", type=_eng, required=required)
    p.add_argument("--points", type=int, default=201)
    p.add_argument("--log", action="store_true", help="geometric spacing")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="memsosc",
        description="MEMS-resonator oscillator design toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("resonator", help="one-port figures and impedance sweep")
    _add_resonator_arg(p)
    _add_window_args(p)
    p.add_argument("--out", help="sweep CSV path ('-' for stdout)")
    p.set_defaults(func=cmd_resonator)

    p = sub.add_parser("compensate", help="zero-phase condition and tank analysis")
    _add_resonator_arg(p)
    _add_network_args(p)
    p.add_argument("--f0", type=_eng, default=None,
                   help="target frequency (default: f_s)")
    p.set_defaults(func=cmd_compensate)

    p = sub.add_parser("noise", help="noise budget, phase noise and FoM")
    _add_resonator_arg(p)
    _add_network_args(p)
    _add_op_args(p)
    p.set_defaults(func=cmd_noise)

    p = sub.add_parser("design", help="run the full design procedure")
    p.add_argument("--in", dest="infile", required=True, help="design spec document")
    p.add_argument("--out", help="report path ('-' for stdout)")
    p.add_argument("--format", choices=("text", "doc"), default="text")
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("ac", help="AC sweep of a netlist via the MNA engine")
    p.add_argument("--in", dest="infile", required=True, help="netlist path")
    p.add_argument("--out", help="CSV path ('-' for stdout)")
    p.set_defaults(func=cmd_ac)

    p = sub.add_parser("sweep", help="parameter sweep with derived metrics")
    _add_resonator_arg(p)
    _add_network_args(p)
    _add_op_args(p)
    p.add_argument("--var", required=True,
                   choices=("q_rft", "delta_c", "q_l0", "l_0"))
    _add_window_args(p, required=True)
    p.add_argument("--out", help="CSV path ('-' for stdout)")
    p.set_defaults(func=cmd_sweep)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UserError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, compensation.NoSolutionError,
            compensation.NoResonanceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
