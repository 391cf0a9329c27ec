"""Command-line interface: steady, spectrum, entangle, reproduce, verify.

Units at the CLI mirror the way operating points are usually quoted:
``--g`` and ``--gamma-a`` in units of kappa, ``--delta`` and ``--gamma-m``
in units of omega_m, everything else SI.  Config files are flat
``key = value`` text with SI values and keys named exactly after the
SystemParams fields; flags override file values.  The environment variable
ATOMOPTOMECH_CONFIG supplies a default config path.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from .entanglement import detuning_sweep
from .numerics import (
    InvalidCovariance,
    NoConvergence,
    SingularMatrix,
    SingularSystem,
    UnstableDrift,
)
from .params import C_LIGHT, SystemParams, param_names, validate
from .selfcheck import run_verification
from .spectrum import PoleAtOmega, spectrum_sweep
from .steadystate import NoRoot, fixed_point
from .svg import line_plot

ENV_CONFIG = "ATOMOPTOMECH_CONFIG"

EXIT_OK = 0
EXIT_NUMERIC = 1
EXIT_CONFIG = 2

_NUMERIC_ERRORS = (
    NoRoot,
    NoConvergence,
    SingularMatrix,
    SingularSystem,
    UnstableDrift,
    InvalidCovariance,
    PoleAtOmega,
)

CASE_PRESETS = {"1": (1.0, 1.0), "2.5": (2.5, 2.5), "8": (8.0, 8.0)}


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    """Resolved run description: parameters plus output/grid choices."""

    params: SystemParams
    mode: str
    out: str | None = None
    svg: str | None = None
    outdir: str = "."
    g_values: tuple = ()
    grid_min: float = 0.0
    grid_max: float = 0.0
    grid_points: int = 0
    workers: int = field(default_factory=lambda: os.cpu_count() or 1)

    def grid(self, unit: float):
        return np.linspace(self.grid_min, self.grid_max, self.grid_points) * unit


def _run_config(args, mode: str, **kw) -> RunConfig:
    params = build_params(args)
    validate(params)
    workers = getattr(args, "workers", None) or os.cpu_count() or 1
    cfg = RunConfig(params=params, mode=mode, workers=workers, **kw)
    for path in (cfg.out, cfg.svg):
        if path:
            parent = os.path.dirname(os.path.abspath(path))
            if not os.path.isdir(parent):
                raise ConfigError(f"output directory {parent!r} does not exist")
    return cfg


def _fmt(x) -> str:
    return f"{x:.12g}"


def parse_config_file(path: str) -> dict:
    """Flat key = value config (SI units, SystemParams field names)."""
    allowed = set(param_names()) | {"backaction_weight", "wavelength"}
    values = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw.strip()!r}")
            key, _, val = line.partition("=")
            key = key.strip()
            val = val.strip()
            if key not in allowed:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            if key == "backaction_weight":
                values[key] = val
                continue
            try:
                values[key] = float(val)
            except ValueError:
                raise ConfigError(f"{path}:{lineno}: key {key!r} has malformed number {val!r}")
    return values


def build_params(args) -> SystemParams:
    """Defaults <- config file <- SI flags <- scaled flags, in that order."""
    file_vals: dict = {}
    path = getattr(args, "config", None) or os.environ.get(ENV_CONFIG)
    if path:
        if not os.path.exists(path) and getattr(args, "config", None) is None:
            path = None  # stale env var pointing nowhere is not an error
        else:
            file_vals = parse_config_file(path)

    wavelength = file_vals.pop("wavelength", None)
    params = SystemParams(**file_vals)
    if wavelength is not None:
        params = params.replace(omega_c=2 * math.pi * C_LIGHT / wavelength)

    si_flags = (
        "omega_m",
        "kappa",
        "n_atoms",
        "coupling_G",
        "cavity_length",
        "mirror_mass",
        "omega_c",
        "temperature",
        "n_thermal",
        "chi",
        "delta_a",
        "delta_r",
        "gamma_r",
        "backaction_weight",
    )
    updates = {}
    for name in si_flags:
        val = getattr(args, name, None)
        if val is not None:
            updates[name] = val
    if getattr(args, "wavelength", None) is not None:
        updates["omega_c"] = 2 * math.pi * C_LIGHT / args.wavelength
    if updates:
        params = params.replace(**updates)

    scaled = {}
    g_flag = getattr(args, "g", None)
    if g_flag is not None and not isinstance(g_flag, list):
        scaled["coupling_G"] = g_flag * params.kappa
    if getattr(args, "gamma_a", None) is not None:
        scaled["gamma_a"] = args.gamma_a * params.kappa
    if getattr(args, "gamma_m", None) is not None:
        scaled["gamma_m"] = args.gamma_m * params.omega_m
    if getattr(args, "delta", None) is not None:
        scaled["delta"] = args.delta * params.omega_m
    if scaled:
        params = params.replace(**scaled)

    case = getattr(args, "case", None)
    if case is not None:
        dr, gr = CASE_PRESETS[case]
        params = params.replace(delta_r=dr, gamma_r=gr)
    return params


def _add_param_flags(p: argparse.ArgumentParser, repeatable_g: bool = False):
    p.add_argument("--config", help="config file path (key = value, SI units)")
    p.add_argument("--omega-m", type=float, help="mechanical angular frequency [rad/s]")
    p.add_argument("--kappa", type=float, help="cavity decay rate [rad/s]")
    p.add_argument("--gamma-a", type=float, help="collective atomic decay [units of kappa]")
    p.add_argument("--gamma-m", type=float, help="mechanical damping [units of omega_m]")
    p.add_argument("--n-atoms", type=float, help="atom count")
    if repeatable_g:
        p.add_argument(
            "--g",
            type=float,
            action="append",
            help="atom-cavity coupling [units of kappa], repeatable",
        )
    else:
        p.add_argument("--g", type=float, help="atom-cavity coupling [units of kappa]")
    p.add_argument("--coupling-g", dest="coupling_G", type=float,
                   help="atom-cavity coupling [rad/s] (SI alternative to --g)")
    p.add_argument("--delta", type=float, help="effective cavity detuning [units of omega_m]")
    p.add_argument("--delta-r", type=float, help="dimensionless effective atomic detuning")
    p.add_argument("--gamma-r", type=float, help="dimensionless effective atomic decay")
    p.add_argument("--case", choices=sorted(CASE_PRESETS), help="preset delta_r = gamma_r value")
    p.add_argument("--cavity-length", type=float, help="cavity length [m]")
    p.add_argument("--mirror-mass", type=float, help="mirror mass [kg]")
    p.add_argument("--omega-c", type=float, help="cavity angular frequency [rad/s]")
    p.add_argument("--wavelength", type=float, help="cavity wavelength [m] (alternative to --omega-c)")
    p.add_argument("--temperature", type=float, help="mechanical bath temperature [K]")
    p.add_argument("--n-thermal", type=float, help="mean thermal phonon number")
    p.add_argument("--chi", type=float, help="collective drive amplitude [rad/s] (optional)")
    p.add_argument("--delta-a", type=float, help="bare atomic detuning [rad/s] (optional)")
    p.add_argument(
        "--backaction-weight",
        choices=("delta", "kappa"),
        help="weight of the backaction term when inferring the drive amplitude",
    )


def _write_text(path: str, text: str):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def spectrum_csv(table) -> str:
    header = "omega_over_omega_m," + ",".join(f"s_out_g{g:g}" for g in table.g_over_kappa)
    lines = [header]
    for i, x in enumerate(table.omega_over_omega_m):
        cells = [_fmt(x)]
        for j in range(len(table.g_over_kappa)):
            v = table.s_out[i, j]
            cells.append("" if not math.isfinite(v) else _fmt(v))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def entangle_csv(rows) -> str:
    lines = ["delta_over_omega_m,stable,e_n,nu"]
    for r in rows:
        lines.append(
            ",".join(
                [
                    _fmt(r.delta_over_omega_m),
                    "true" if r.stable else "false",
                    "" if r.e_n is None else _fmt(r.e_n),
                    "" if r.nu is None else _fmt(r.nu),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def cmd_steady(args) -> int:
    params = build_params(args)
    warnings = validate(params)
    ss = fixed_point(params)
    if args.json:
        record = {
            "beta_re": ss.beta.real,
            "beta_im": ss.beta.imag,
            "excitation": ss.excitation,
            "c_s_re": ss.c_s.real,
            "c_s_im": ss.c_s.imag,
            "x_s": ss.x_s,
            "p_s": ss.p_s,
            "residual": ss.residual,
            "branch_count": ss.branch_count,
            "warnings": warnings,
        }
        print(json.dumps(record, sort_keys=True))
        return EXIT_OK
    print(f"beta         = {ss.beta.real:+.9f} {ss.beta.imag:+.9f}i")
    print(f"|beta|^2     = {ss.excitation:.9f}")
    print(f"c_s          = {ss.c_s.real:+.6e} {ss.c_s.imag:+.6e}i")
    print(f"x_s          = {ss.x_s:.6e}")
    print(f"p_s          = {ss.p_s:.1f}")
    print(f"residual     = {ss.residual:.3e}")
    print(f"branches     = {ss.branch_count}")
    for w in warnings:
        print(f"warning      : {w}")
    return EXIT_OK


def cmd_spectrum(args) -> int:
    cfg = _run_config(
        args,
        "spectrum",
        out=args.out,
        svg=args.svg,
        g_values=tuple(args.g) if args.g else (25.0, 50.0, 75.0, 100.0),
        grid_min=args.omega_min,
        grid_max=args.omega_max,
        grid_points=args.points,
    )
    params = cfg.params
    table = spectrum_sweep(
        params,
        (params.delta_r, params.gamma_r),
        cfg.g_values,
        cfg.grid(params.omega_m),
        workers=cfg.workers,
    )
    text = spectrum_csv(table)
    if cfg.out:
        _write_text(cfg.out, text)
        print(f"wrote {cfg.out}")
    else:
        sys.stdout.write(text)
    if cfg.svg:
        series = [
            [v if math.isfinite(v) else None for v in table.s_out[:, j]]
            for j in range(len(cfg.g_values))
        ]
        _write_text(
            cfg.svg,
            line_plot(
                list(table.omega_over_omega_m),
                series,
                [f"G = {g:g} kappa" for g in cfg.g_values],
                "omega / omega_m",
                "S_out",
            ),
        )
        print(f"wrote {cfg.svg}")
    return EXIT_OK


def cmd_entangle(args) -> int:
    cfg = _run_config(
        args,
        "entangle",
        out=args.out,
        svg=args.svg,
        grid_min=args.delta_min,
        grid_max=args.delta_max,
        grid_points=args.points,
    )
    params = cfg.params
    rows = detuning_sweep(
        params,
        (params.delta_r, params.gamma_r),
        args.g if args.g is not None else params.coupling_G / params.kappa,
        cfg.grid(params.omega_m),
        workers=cfg.workers,
    )
    text = entangle_csv(rows)
    if cfg.out:
        _write_text(cfg.out, text)
        print(f"wrote {cfg.out}")
    else:
        sys.stdout.write(text)
    if cfg.svg:
        xs = [r.delta_over_omega_m for r in rows]
        ys = [[r.e_n if r.e_n is not None else None for r in rows]]
        _write_text(
            cfg.svg,
            line_plot(xs, ys, ["E_N"], "Delta / omega_m", "E_N"),
        )
        print(f"wrote {cfg.svg}")
    return EXIT_OK


def _reproduce_fig2(params, outdir, points, workers):
    files = []
    for tag, case in (("a", (1.0, 1.0)), ("b", (2.5, 2.5)), ("c", (8.0, 8.0))):
        p = params.replace(delta=-params.omega_m)
        grid = np.linspace(0.5, 1.5, points) * p.omega_m
        table = spectrum_sweep(p, case, (25.0, 50.0, 75.0, 100.0), grid, workers=workers)
        csv_path = os.path.join(outdir, f"fig2{tag}.csv")
        _write_text(csv_path, spectrum_csv(table))
        series = [
            [v if math.isfinite(v) else None for v in table.s_out[:, j]] for j in range(4)
        ]
        svg_path = os.path.join(outdir, f"fig2{tag}.svg")
        _write_text(
            svg_path,
            line_plot(
                list(table.omega_over_omega_m),
                series,
                [f"G = {g:g} kappa" for g in table.g_over_kappa],
                "omega / omega_m",
                "S_out",
                title=f"panel {tag}: delta_r = gamma_r = {case[0]:g}",
            ),
        )
        files += [csv_path, svg_path]
    return files


def _entangle_columns_csv(xs, columns, labels) -> str:
    lines = ["delta_over_omega_m," + ",".join(labels)]
    for i, x in enumerate(xs):
        cells = [_fmt(x)]
        for col in columns:
            v = col[i]
            cells.append("" if v is None else _fmt(v))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def _reproduce_fig3(params, outdir, points, workers):
    files = []
    grid = np.linspace(0.0, 3.0, points) * params.omega_m
    xs = [d / params.omega_m for d in grid]
    for tag, g in (("a", 25.0), ("b", 100.0)):
        cols, labels = [], []
        for case_tag, case in (("1", (1.0, 1.0)), ("8", (8.0, 8.0))):
            rows = detuning_sweep(params, case, g, grid, workers=workers)
            cols.append([r.e_n for r in rows])
            labels.append(f"e_n_case{case_tag}")
        csv_path = os.path.join(outdir, f"fig3{tag}.csv")
        _write_text(csv_path, _entangle_columns_csv(xs, cols, labels))
        svg_path = os.path.join(outdir, f"fig3{tag}.svg")
        _write_text(
            svg_path,
            line_plot(
                xs,
                cols,
                [l.replace("e_n_case", "delta_r = gamma_r = ") for l in labels],
                "Delta / omega_m",
                "E_N",
                title=f"panel {tag}: G = {g:g} kappa",
            ),
        )
        files += [csv_path, svg_path]
    return files


def _reproduce_fig4(params, outdir, points, workers):
    files = []
    grid = np.linspace(0.0, 3.0, points) * params.omega_m
    xs = [d / params.omega_m for d in grid]
    for tag, g in (("a", 25.0), ("b", 100.0)):
        cols, labels = [], []
        for n_atoms in (1e6, 1e7):
            p = params.replace(n_atoms=n_atoms)
            rows = detuning_sweep(p, (1.0, 1.0), g, grid, workers=workers)
            cols.append([r.e_n for r in rows])
            labels.append(f"e_n_n{n_atoms:.0e}".replace("+0", ""))
        csv_path = os.path.join(outdir, f"fig4{tag}.csv")
        _write_text(csv_path, _entangle_columns_csv(xs, cols, labels))
        svg_path = os.path.join(outdir, f"fig4{tag}.svg")
        _write_text(
            svg_path,
            line_plot(
                xs,
                cols,
                labels,
                "Delta / omega_m",
                "E_N",
                title=f"panel {tag}: G = {g:g} kappa",
            ),
        )
        files += [csv_path, svg_path]
    return files


def cmd_reproduce(args) -> int:
    cfg = _run_config(args, f"reproduce-{args.figure}", outdir=args.outdir)
    os.makedirs(cfg.outdir, exist_ok=True)
    jobs = {
        "fig2": (_reproduce_fig2, args.points or 2000),
        "fig3": (_reproduce_fig3, args.points or 500),
        "fig4": (_reproduce_fig4, args.points or 500),
    }
    failures = 0
    targets = [args.figure] if args.figure != "all" else ["fig2", "fig3", "fig4"]
    for name in targets:
        fn, pts = jobs[name]
        try:
            files = fn(cfg.params, cfg.outdir, pts, cfg.workers)
            for f in files:
                print(f"wrote {f}")
        except Exception as exc:  # noqa: BLE001 - panel isolation is the contract
            failures += 1
            print(f"error: {name} failed: {exc}", file=sys.stderr)
    return EXIT_NUMERIC if failures else EXIT_OK


def cmd_verify(args) -> int:
    failures = run_verification(seed=args.seed, n_equivalence=args.points)
    print(f"{failures} failure(s)")
    return min(failures, 125)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="atomoptomech",
        description=(
            "Steady states, output intensity squeezing spectra, stability and "
            "steady-state entanglement for a cavity driven through an "
            "atomic-ensemble mirror."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_steady = sub.add_parser("steady", help="solve and print the steady state")
    _add_param_flags(p_steady)
    p_steady.add_argument("--json", action="store_true", help="emit a single JSON record")
    p_steady.set_defaults(func=cmd_steady)

    p_spec = sub.add_parser("spectrum", help="output intensity squeezing spectrum sweep")
    _add_param_flags(p_spec, repeatable_g=True)
    p_spec.add_argument("--omega-min", type=float, default=0.5, help="grid start [omega_m]")
    p_spec.add_argument("--omega-max", type=float, default=1.5, help="grid end [omega_m]")
    p_spec.add_argument("--points", type=int, default=2000)
    p_spec.add_argument("--out", help="CSV output path")
    p_spec.add_argument("--svg", help="SVG output path")
    p_spec.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    p_spec.set_defaults(func=cmd_spectrum)

    p_ent = sub.add_parser("entangle", help="log-negativity detuning sweep")
    _add_param_flags(p_ent)
    p_ent.add_argument("--delta-min", type=float, default=0.0, help="grid start [omega_m]")
    p_ent.add_argument("--delta-max", type=float, default=3.0, help="grid end [omega_m]")
    p_ent.add_argument("--points", type=int, default=500)
    p_ent.add_argument("--out", help="CSV output path")
    p_ent.add_argument("--svg", help="SVG output path")
    p_ent.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    p_ent.set_defaults(func=cmd_entangle)

    p_rep = sub.add_parser("reproduce", help="regenerate the reference figure data sets")
    _add_param_flags(p_rep)
    p_rep.add_argument("figure", choices=("fig2", "fig3", "fig4", "all"))
    p_rep.add_argument("--outdir", default=".")
    p_rep.add_argument("--points", type=int, default=None)
    p_rep.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    p_rep.set_defaults(func=cmd_reproduce)

    p_ver = sub.add_parser("verify", help="run the built-in oracle cross-checks")
    p_ver.add_argument("--seed", type=int, default=1234)
    p_ver.add_argument("--points", type=int, default=200,
                       help="number of random points for the equivalence check")
    p_ver.set_defaults(func=cmd_verify)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except _NUMERIC_ERRORS as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
