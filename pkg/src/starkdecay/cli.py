"""Command-line front-end.

Subcommands: derive, simulate, sweep, map-params; each accepts
--config <path>, --out <path>, --seed <u64>, --tol <real>.  Outputs are
CSV (or JSON records) with a versioned schema comment line, full-precision
floats (17 significant digits), and a JSON run manifest at <out>.manifest
holding the command, the fully-resolved configuration, the tool version,
the rng seed, and the output paths; re-running with the manifest as
--config reproduces the outputs byte for byte (statistically for seeded
Monte Carlo, exactly under the same seed).

Exit codes: 0 success, 1 usage/config error, 2 tolerance breach,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict
from pathlib import Path

import numpy as np

from . import __version__
from .collision import (
    CollisionConfig,
    JumpProbabilityError,
    SimulationError,
    convergence_study,
    mc_unravel,
    run_collisions,
)
from .config import (
    ConfigError,
    load_emitter_config,
    load_simulate_config,
    load_sweep_config,
    read_config_mapping,
)
from .ito_algebra import (
    NonConvergenceError,
    coefficient_functions,
    emitter_generator,
    ito_exp,
)
from .lindblad import (
    DensityMatrixError,
    IntegrationError,
    StructuralError,
    closed_form_evolution,
    decay_rate,
    density_matrix,
    lindblad_model,
    numerical_evolution,
    stark_shift,
    suppression_factor,
)
from .physical_params import (
    ForbiddenTransitionError,
    ResonantDenominatorError,
    map_one_quantum,
    map_two_quantum,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_TOLERANCE = 2
EXIT_NUMERICAL = 3

TIMESERIES_SCHEMA = "qsde-timeseries/1"
SWEEP_SCHEMA = "qsde-sweep/1"
CONVERGENCE_SCHEMA = "qsde-convergence/1"

_NUMERICAL_ERRORS = (
    IntegrationError,
    SimulationError,
    NonConvergenceError,
    JumpProbabilityError,
    StructuralError,
    DensityMatrixError,
)


class _Parser(argparse.ArgumentParser):
    """argparse defaults to exit code 2; the CLI contract reserves 2 for
    tolerance breaches, so usage errors remap to 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _write_csv(
    path: Path,
    schema: str,
    params: dict[str, str],
    header: list[str],
    rows: list[list[float]],
) -> None:
    lines = [f"# schema: {schema}"]
    if params:
        lines.append("# params: " + " ".join(f"{k}={v}" for k, v in params.items()))
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(_fmt(x) for x in row))
    path.write_text("\n".join(lines) + "\n")


def _write_manifest(
    out: Path, command: str, config: dict[str, str], seed: int, outputs: list[Path]
) -> None:
    manifest = {
        "command": command,
        "tool": "starkdecay",
        "version": __version__,
        "seed": seed,
        "config": config,
        "outputs": [str(p) for p in outputs],
    }
    Path(str(out) + ".manifest").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n"
    )


def _print_operator(name: str, op: np.ndarray, stream) -> None:
    rows = [
        "[" + ", ".join(f"{z.real:+.12g}{z.imag:+.12g}j" for z in row) + "]"
        for row in op
    ]
    print(f"  {name:<6}: " + "  ".join(rows), file=stream)


def cmd_derive(args) -> int:
    chi, eta = args.chi, args.eta
    if args.config is not None:
        pairs = read_config_mapping(args.config, "derive-config/1")
        for key in ("chi", "eta"):
            if key not in pairs:
                raise ConfigError(f"{args.config}: missing key {key!r}")
        chi = float(pairs["chi"]) if chi is None else chi
        eta = float(pairs["eta"]) if eta is None else eta
    if chi is None or eta is None:
        print("derive: provide --chi and --eta (or a derive-config/1 file)", file=sys.stderr)
        return EXIT_USAGE
    seed = 0 if args.seed is None else args.seed
    tol = args.tol if args.tol is not None else 1e-12

    coeffs = coefficient_functions(chi, eta)
    series = ito_exp(emitter_generator(chi, eta), tol=1e-15)
    residual = coeffs.max_norm_distance(series)
    model = lindblad_model(chi, eta)
    s = float(suppression_factor(eta))

    out = sys.stdout
    print(f"coefficients (chi={_fmt(chi)}, eta={_fmt(eta)})", file=out)
    _print_operator("drift", coeffs.drift, out)
    _print_operator("gain", coeffs.gain, out)
    _print_operator("loss", coeffs.loss, out)
    _print_operator("gauge", coeffs.gauge, out)
    print("master equation", file=out)
    print(f"  gamma = {_fmt(model.gamma)}", file=out)
    print(f"  delta = {_fmt(model.delta)}", file=out)
    print(f"  jump  = {_fmt(abs(model.jump[0, 1]))} * R-", file=out)
    print(f"  suppression S(eta) = {_fmt(s)}", file=out)
    print(f"series residual (ito_exp vs closed form, max-norm): {residual:.3e}", file=out)

    if args.out is not None:
        out_path = Path(args.out)
        record = {
            "chi": chi,
            "eta": eta,
            "gamma": model.gamma,
            "delta": model.delta,
            "jump_scalar": abs(model.jump[0, 1]),
            "suppression": s,
            "series_residual": residual,
            "drift": _complex_matrix(coeffs.drift),
            "gain": _complex_matrix(coeffs.gain),
            "loss": _complex_matrix(coeffs.loss),
            "gauge": _complex_matrix(coeffs.gauge),
        }
        out_path.write_text(json.dumps(record, indent=2, sort_keys=True) + "\n")
        config = {
            "schema": "derive-config/1",
            "chi": repr(chi),
            "eta": repr(eta),
            "tol": repr(tol),
        }
        _write_manifest(out_path, "derive", config, seed, [out_path])

    if residual > tol:
        print(f"derive: series residual {residual:.3e} exceeds tol {tol:.3e}", file=sys.stderr)
        return EXIT_TOLERANCE
    return EXIT_OK


def _complex_matrix(a: np.ndarray) -> list[list[list[float]]]:
    return [[[float(z.real), float(z.imag)] for z in row] for row in a]


def cmd_simulate(args) -> int:
    if args.config is None:
        print("simulate: --config is required", file=sys.stderr)
        return EXIT_USAGE
    if args.out is None:
        print("simulate: --out is required", file=sys.stderr)
        return EXIT_USAGE
    cfg = load_simulate_config(args.config)
    seed = args.seed if args.seed is not None else cfg.seed
    tol_rk4 = args.tol if args.tol is not None else cfg.tol_rk4
    tol_collision = args.tol if args.tol is not None else cfg.tol_collision

    model = lindblad_model(cfg.chi, cfg.eta)
    rho0 = density_matrix(cfg.p_excited, cfg.coherence)
    grid_dt = cfg.tau_end / cfg.steps
    taus = [k * grid_dt for k in range(cfg.steps + 1)]

    closed = np.array([closed_form_evolution(model, rho0, t) for t in taus])
    rk4 = numerical_evolution(model, rho0, cfg.tau_end, cfg.steps)

    methods: list[tuple[str, np.ndarray]] = [("closed", closed), ("rk4", rk4)]
    if cfg.collision_enabled:
        coll_cfg = CollisionConfig(
            chi=cfg.chi,
            eta=cfg.eta,
            dtau=grid_dt / cfg.collision_substeps,
            n_slices=cfg.steps * cfg.collision_substeps,
            fock_cutoff=cfg.fock_cutoff,
            rng_seed=seed,
        )
        collision = run_collisions(coll_cfg, rho0)[:: cfg.collision_substeps]
        methods.append(("collision", collision))
    if cfg.mc_enabled:
        mc = mc_unravel(
            model,
            rho0,
            n_traj=cfg.mc_n_traj,
            dtau=grid_dt / cfg.mc_substeps,
            n_slices=cfg.steps * cfg.mc_substeps,
            seed=seed,
        ).states[:: cfg.mc_substeps]
        methods.append(("mc", mc))

    header = ["tau"]
    for name, _ in methods:
        header += [
            f"rho11_{name}",
            f"rho22_{name}",
            f"re_rho21_{name}",
            f"im_rho21_{name}",
        ]
    rows = []
    for k, t in enumerate(taus):
        row = [t]
        for _, states in methods:
            rho = states[k]
            row += [rho[0, 0].real, rho[1, 1].real, rho[1, 0].real, rho[1, 0].imag]
        rows.append(row)

    out_path = Path(args.out)
    params = {
        "chi": _fmt(cfg.chi),
        "eta": _fmt(cfg.eta),
        "tau_end": _fmt(cfg.tau_end),
        "steps": str(cfg.steps),
        "seed": str(seed),
    }
    _write_csv(out_path, TIMESERIES_SCHEMA, params, header, rows)
    outputs = [out_path]

    if cfg.convergence_halvings > 0:
        n_slices = max(1, round(cfg.tau_end / cfg.convergence_dtau))
        study = convergence_study(
            CollisionConfig(
                chi=cfg.chi,
                eta=cfg.eta,
                dtau=cfg.tau_end / n_slices,
                n_slices=n_slices,
                fock_cutoff=cfg.fock_cutoff,
                rng_seed=seed,
            ),
            rho0,
            halvings=cfg.convergence_halvings,
        )
        conv_rows = []
        for i, dtau in enumerate(study.dtaus):
            steps_i = max(1, round(cfg.tau_end / dtau))
            rk4_i = numerical_evolution(model, rho0, cfg.tau_end, steps_i)
            err_rk4 = max(
                abs(rk4_i[k][1, 1].real - closed_form_evolution(model, rho0, k * cfg.tau_end / steps_i)[1, 1].real)
                for k in range(steps_i + 1)
            )
            conv_rows.append(
                [
                    dtau,
                    study.errors_rho_ee[i],
                    study.errors_arg_coherence[i],
                    err_rk4,
                ]
            )
        conv_path = Path(str(out_path.with_suffix("")) + ".convergence.csv")
        _write_csv(
            conv_path,
            CONVERGENCE_SCHEMA,
            params,
            ["dtau", "collision_err_rho22", "collision_err_arg_rho21", "rk4_err_rho22"],
            conv_rows,
        )
        outputs.append(conv_path)

    config = dict(cfg.resolved())
    config["seed"] = str(seed)
    config["tol.rk4"] = repr(tol_rk4)
    config["tol.collision"] = repr(tol_collision)
    _write_manifest(out_path, "simulate", config, seed, outputs)

    breaches = []
    err_rk4 = max(abs(rk4[k][1, 1].real - closed[k][1, 1].real) for k in range(len(taus)))
    if err_rk4 > tol_rk4:
        breaches.append(f"rk4 vs closed: {err_rk4:.3e} > {tol_rk4:.3e}")
    for name, states in methods[2:]:
        err = max(abs(states[k][1, 1].real - closed[k][1, 1].real) for k in range(len(taus)))
        if name == "collision":
            if err > tol_collision:
                breaches.append(f"collision vs closed: {err:.3e} > {tol_collision:.3e}")
        elif name == "mc":
            sigma = math.sqrt(0.25 / cfg.mc_n_traj) + 1e-9
            if err > cfg.tol_mc_sigmas * sigma:
                breaches.append(
                    f"mc vs closed: {err:.3e} > {cfg.tol_mc_sigmas:g} sigma = "
                    f"{cfg.tol_mc_sigmas * sigma:.3e}"
                )
    if breaches:
        for b in breaches:
            print(f"simulate: tolerance breach: {b}", file=sys.stderr)
        return EXIT_TOLERANCE
    return EXIT_OK


def cmd_sweep(args) -> int:
    if args.config is None:
        print("sweep: --config is required", file=sys.stderr)
        return EXIT_USAGE
    if args.out is None:
        print("sweep: --out is required", file=sys.stderr)
        return EXIT_USAGE
    cfg = load_sweep_config(args.config)
    seed = args.seed if args.seed is not None else cfg.seed

    etas = np.linspace(cfg.eta_start, cfg.eta_stop, cfg.eta_count)
    rows = [
        [
            float(eta),
            float(decay_rate(cfg.chi, eta)),
            float(stark_shift(cfg.chi, eta)),
            float(suppression_factor(eta)),
        ]
        for eta in etas
    ]
    out_path = Path(args.out)
    _write_csv(
        out_path,
        SWEEP_SCHEMA,
        {"chi": _fmt(cfg.chi)},
        ["eta", "gamma", "delta", "suppression"],
        rows,
    )
    config = dict(cfg.resolved())
    config["seed"] = str(seed)
    _write_manifest(out_path, "sweep", config, seed, [out_path])
    return EXIT_OK


def cmd_map_params(args) -> int:
    if args.config is None:
        print("map-params: --config is required", file=sys.stderr)
        return EXIT_USAGE
    system, spec = load_emitter_config(args.config)
    if spec.kind == "one-quantum":
        mapping = map_one_quantum(spec, system)
    else:
        mapping = map_two_quantum(spec, system)
    record = asdict(mapping)
    record["kind"] = spec.kind

    print(f"kind = {spec.kind}")
    print(f"chi = {_fmt(mapping.chi)}")
    print(f"eta = {_fmt(mapping.eta)}")
    if spec.kind == "one-quantum":
        print(f"significance = {_fmt(mapping.significance)}")
        print(f"stark_significant = {str(mapping.stark_significant).lower()}")
    else:
        print(f"eta_chi_ratio = {_fmt(mapping.eta_chi_ratio)}")
        print(f"strong_stark = {str(mapping.strong_stark).lower()}")

    if args.out is not None:
        out_path = Path(args.out)
        out_path.write_text(json.dumps(record, indent=2, sort_keys=True) + "\n")
        config = dict(read_config_mapping(args.config, "emitter-config/1"))
        seed = 0 if args.seed is None else args.seed
        _write_manifest(out_path, "map-params", config, seed, [out_path])
    return EXIT_OK


def _build_parser() -> _Parser:
    parser = _Parser(prog="starkdecay", description=__doc__)
    parser.add_argument("--version", action="version", version=f"starkdecay {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", type=str, default=None, help="config file or run manifest")
        p.add_argument("--out", type=str, default=None, help="output path")
        p.add_argument("--seed", type=int, default=None, help="rng seed (u64)")
        p.add_argument("--tol", type=float, default=None, help="residual tolerance override")

    p_derive = sub.add_parser("derive", help="coefficient table and rates for (chi, eta)")
    p_derive.add_argument("--chi", type=float, default=None)
    p_derive.add_argument("--eta", type=float, default=None)
    common(p_derive)
    p_derive.set_defaults(func=cmd_derive)

    p_sim = sub.add_parser("simulate", help="time series from closed form, RK4, collisions, MC")
    common(p_sim)
    p_sim.set_defaults(func=cmd_simulate)

    p_sweep = sub.add_parser("sweep", help="gamma, delta, suppression over an eta grid")
    common(p_sweep)
    p_sweep.set_defaults(func=cmd_sweep)

    p_map = sub.add_parser("map-params", help="(chi, eta) from physical emitter data")
    common(p_map)
    p_map.set_defaults(func=cmd_map_params)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _NUMERICAL_ERRORS as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ResonantDenominatorError, ForbiddenTransitionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
