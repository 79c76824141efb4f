"""Command-line front end emitting deterministic CSV.

Subcommands: `dispersion` (closed-form branch table), `simulate` (one
seeded-mode run with a frequency/decay fit), `soliton` (gausson profile and
split-step evolution error report) and `validate` (the randomized oracle
suite).  Every run is driven by a config file plus per-key override flags;
identical config and seed produce byte-identical output.

CSV contract: UTF-8, comma separators, LF line endings, mandatory header
row, floats in 17-significant-digit scientific notation.  Summary and
footer values ride along as trailing `# key = value` comment lines so the
column grid stays rectangular.

Exit codes: 0 success, 1 validation failure, 2 config error, 3 numerical
failure.
"""

import argparse
import sys

import numpy as np

from .config import (SCHEMA, ConfigError, RunConfig, apply_overrides,
                     load_config)
from .core import NumericalError, QmhdError, ValidationError
from .dispersion import ModeBranch, dispersion_result
from .linsim import dispersion_scan, measure_mode, simulate_mode
from .madelung import (classical_limit_width, lognls_evolve,
                       normalize_soliton, soliton_field, soliton_params,
                       soliton_profile)
from .validation import run_suite


def _fmt(value):
    return f"{float(value):.16e}"


def build_parser():
    parser = argparse.ArgumentParser(
        prog="qmhdwaves",
        description="Quantum-MHD plasma waves: dispersion, simulation, "
                    "solitons, validation")
    sub = parser.add_subparsers(dest="command", required=True)
    commands = {
        "dispersion": "closed-form branch speeds, one row per wavenumber",
        "simulate": "seeded-mode time series with a frequency/decay fit",
        "soliton": "gausson profile and split-step evolution error report",
        "validate": "randomized oracle suite; exit 0 iff every check passes",
    }
    for name, help_text in commands.items():
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--config", metavar="PATH",
                         help="config file; omitted = built-in defaults")
        cmd.add_argument("--out", metavar="PATH",
                         help="output file; omitted = stdout")
        cmd.add_argument("--seed", type=int, default=20250101,
                         metavar="U64", help="randomized-suite seed")
        if name == "validate":
            cmd.add_argument("--inject-fault", action="store_true",
                             help="corrupt one background to demonstrate "
                                  "failure reporting")
        for section, fields in SCHEMA.items():
            for key, spec in fields.items():
                cmd.add_argument(f"--{key}", metavar="VALUE", default=None,
                                 help=f"[{section}] {spec.help}")
    return parser


def _load(args):
    cfg = load_config(args.config) if args.config else RunConfig.defaults()
    overrides = {}
    for section_fields in SCHEMA.values():
        for key in section_fields:
            raw = getattr(args, key, None)
            if raw is not None:
                overrides[key] = raw
    return apply_overrides(cfg, overrides)


def cmd_dispersion(cfg):
    """Rows (k, u_alfven, U0, u_fast, u_slow, omega_alfven) per index."""
    bg = cfg.background()
    grid = cfg.grid()
    lines = ["k,u_alfven,U0,u_fast,u_slow,omega_alfven"]
    for index in cfg.get("k_indices"):
        kappa = grid.mode_wavenumber(int(index))
        res = dispersion_result(bg, (kappa, 0.0, 0.0))
        lines.append(",".join(_fmt(v) for v in (
            kappa, res.u_alfven, res.U0, res.u_fast, res.u_slow,
            res.omega_alfven)))
    return lines


def cmd_simulate(cfg):
    """Time series of the tracked component plus a fit summary footer."""
    bg = cfg.background()
    grid = cfg.grid()
    diss = cfg.dissipation()
    branch = ModeBranch.from_name(cfg.get("branch"))
    k_index = cfg.get("k_indices")[0]
    run = simulate_mode(grid, bg, diss, branch, k_index,
                        amplitude=cfg.get("amplitude"),
                        periods=cfg.get("periods"),
                        samples_per_period=cfg.get("samples_per_period"),
                        cfl_factor=cfg.get("cfl_factor"))
    lines = [f"t,re_{run.component},im_{run.component}"]
    for t, z in zip(run.times, run.series):
        lines.append(f"{_fmt(t)},{_fmt(z.real)},{_fmt(z.imag)}")
    lines.append("# summary")
    lines.append(f"# component = {run.component}")
    lines.append(f"# k_index = {run.k_index}")
    lines.append(f"# k = {_fmt(run.k)}")
    lines.append(f"# omega_analytic = {_fmt(run.omega_analytic)}")
    if np.max(np.abs(run.series)) == 0.0:
        # zero-amplitude runs have no signal; the sentinel documents that
        # the fit was skipped rather than failed
        lines.append("# fit = skipped (zero amplitude)")
        for key in ("omega_measured", "gamma_measured", "rel_error",
                    "fit_residual"):
            lines.append(f"# {key} = nan")
        return lines
    fit = measure_mode(run.times, run.series)
    rel = abs(fit.omega_measured - run.omega_analytic) / run.omega_analytic
    lines.append(f"# omega_measured = {_fmt(fit.omega_measured)}")
    lines.append(f"# gamma_measured = {_fmt(fit.decay_rate)}")
    lines.append(f"# rel_error = {_fmt(rel)}")
    lines.append(f"# fit_residual = {_fmt(fit.amplitude_fit_error)}")
    return lines


def _soliton_params_from(cfg, grid, bg):
    b = cfg.get("b")
    index = cfg.get("carrier_index")
    if index < 1:
        raise ValidationError(
            f"carrier_index must be >= 1 so the transit time is finite, "
            f"got {index}")
    k = grid.mode_wavenumber(int(index))
    omega = cfg.get("omega")
    c = cfg.get("c")
    if omega is None:
        return normalize_soliton(b, bg.mass, bg.hbar, k, c=c,
                                 d=cfg.get("offset"))
    if c is None:
        big_b = 4.0 * bg.mass * b / bg.hbar ** 2
        c = (big_b / (2.0 * np.pi)) ** 0.25 * np.exp(-0.5)
    return soliton_params(b, bg.mass, bg.hbar, k, omega, c,
                          d=cfg.get("offset"))


def _circular_com(density, length):
    theta = 2.0 * np.pi * np.arange(density.size) / density.size
    z = np.sum(density * np.exp(1j * theta))
    return float(np.angle(z)) * length / (2.0 * np.pi)


def cmd_soliton(cfg):
    """Profile, initial/final densities, pointwise error, footer metrics."""
    bg = cfg.background()
    grid = cfg.grid()
    params = _soliton_params_from(cfg, grid, bg)
    length, n = grid.length, grid.n_points
    dx = grid.dx
    dt = cfg.get("dt_factor") * bg.mass * dx ** 2 / bg.hbar
    transit_time = cfg.get("transits") * length / params.v
    n_steps = max(1, int(np.ceil(transit_time / dt)))
    dt = transit_time / n_steps

    psi0 = soliton_field(params, length, n)
    psi_t = lognls_evolve(psi0, dt, n_steps, params.b, bg.mass, bg.hbar)
    dens0 = np.abs(psi0.samples) ** 2
    dens_t = np.abs(psi_t.samples) ** 2
    kappa = psi0.wavenumbers()
    shift = params.v * transit_time
    shifted = np.fft.ifft(np.fft.fft(dens_t) * np.exp(1j * kappa * shift)).real
    error = np.abs(shifted - dens0)
    x = psi0.x
    profile = soliton_profile(params, x)

    lines = ["x,profile_G,density_t0,density_tT_shifted,error"]
    for j in range(n):
        lines.append(",".join(_fmt(v) for v in (
            x[j], profile[j], dens0[j], shifted[j], error[j])))

    com0 = _circular_com(dens0, length)
    com_t = _circular_com(dens_t, length)
    displacement = com_t - com0
    displacement += length * round((shift - displacement) / length)
    lines.append("# footer")
    lines.append(f"# transit_time = {_fmt(transit_time)}")
    lines.append(f"# n_steps = {n_steps}")
    lines.append(f"# norm_initial = {_fmt(psi0.norm())}")
    lines.append(f"# norm_drift = {_fmt(abs(psi_t.norm() - psi0.norm()))}")
    lines.append(f"# max_error = {_fmt(float(np.max(error)))}")
    lines.append(f"# delta_width = "
                 f"{_fmt(classical_limit_width(params.b, bg.mass, bg.hbar))}")
    lines.append(f"# com_speed_measured = {_fmt(displacement / transit_time)}")
    lines.append(f"# com_speed_expected = {_fmt(params.v)}")
    return lines


def cmd_validate(seed, inject_fault):
    results, ok = run_suite(seed, inject_fault=inject_fault)
    lines = [f"qmhdwaves validation suite (seed={seed})"]
    lines.extend(r.line() for r in results)
    passed = sum(r.passed for r in results)
    lines.append(f"result: {passed}/{len(results)} checks passed")
    return lines, ok


def _write(lines, out_path):
    text = "\n".join(lines) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "validate":
            lines, ok = cmd_validate(args.seed,
                                     getattr(args, "inject_fault", False))
            _write(lines, args.out)
            return 0 if ok else 1
        cfg = _load(args)
        handler = {"dispersion": cmd_dispersion, "simulate": cmd_simulate,
                   "soliton": cmd_soliton}[args.command]
        _write(handler(cfg), args.out)
        return 0
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}",
              file=sys.stderr)
        return 3
    except ValidationError as exc:
        print(f"validation failure: {type(exc).__name__}: {exc}",
              file=sys.stderr)
        return 1
    except QmhdError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
