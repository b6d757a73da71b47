"""Command-line front end.

Subcommands: make-data, check-condition, run, run-perturbation, verify,
sweep.  Flags mirror the config file and override it.  Exit codes: 0 success,
1 condition/check failure, 2 validation error, 3 numerical blow-up.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .checkpoint import write_checkpoint
from .config import (
    RESOLVED_CONFIG_NAME,
    ConfigError,
    RunConfig,
    apply_overrides,
    load_config,
    load_config_string,
    save_config,
)
from .diagnostics import SeriesCollector, bootstrap_monitor, write_series_csv
from .evolution import (
    BlowUpError,
    PhysicalParams,
    SchemeParams,
    State,
    integrate,
)
from .fields import random_solenoidal
from .grid import make_grid
from .initial_data import (
    DataRecipe,
    GridResolutionError,
    build_beltrami_data,
    build_seed,
    check_condition,
    check_grid_for_recipe,
    data_norms,
    structure_residuals,
)
from .operators import sobolev_norm
from .verify import run_verification

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_VALIDATION = 2
EXIT_BLOWUP = 3


def _write_json(path, payload) -> None:
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _build_config(args) -> RunConfig:
    config = load_config(args.config) if args.config else RunConfig()
    overrides = {
        "grid.n": args.n,
        "grid.box_side": args.box_side,
        "recipe.epsilon": args.epsilon,
        "recipe.v0_amplitude": args.v0_amplitude,
        "recipe.c0_amplitude": args.c0_amplitude,
        "params.mu": args.mu,
        "params.nu": args.nu,
        "params.alpha": args.alpha,
        "scheme.dt": args.dt,
        "scheme.auto_cfl": args.auto_cfl,
        "scheme.T": args.T,
        "scheme.eta": args.eta,
        "condition.constant_C": args.constant_C,
        "condition.delta": args.delta,
        "io.output_path": args.output,
        "io.observer_stride": args.observer_stride,
        "io.checkpoint_stride": args.checkpoint_stride,
        "io.seed": args.seed,
        "io.jobs": args.jobs,
    }
    return apply_overrides(config, overrides)


def _prepare_outdir(config: RunConfig) -> Path:
    out = Path(config.io.output_path)
    out.mkdir(parents=True, exist_ok=True)
    save_config(config, out / RESOLVED_CONFIG_NAME)
    return out


def _make_datum(config: RunConfig, strict: bool):
    """Grid + recipe + constructed datum; strict mode refuses coarse grids."""
    grid = make_grid(config.grid.n, config.grid.box_side)
    recipe = DataRecipe(config.recipe.epsilon, config.recipe.profile)
    report = check_grid_for_recipe(grid, recipe)
    if not report["representable"]:
        raise GridResolutionError(
            f"grid only resolves |k| <= {grid.k_max:.4f}; the shell needs "
            f"{1.0 + recipe.epsilon:.4f}")
    if strict and not report["fine"]:
        raise GridResolutionError(
            f"grid spacing dk = {report['dk']:.6g} is too coarse for "
            f"epsilon = {recipe.epsilon}; required dk <= {report['required_dk']:.6g}")
    u0 = build_beltrami_data(build_seed(recipe, grid))
    return grid, recipe, u0


def _norms_payload(u0, recipe) -> dict:
    rep = data_norms(u0, recipe)
    div_res, bel_res = structure_residuals(u0)
    return {
        "epsilon": rep.epsilon,
        "l1_hat": rep.l1_hat,
        "l2": rep.l2,
        "linf_first": rep.linf_first,
        "h3": rep.h3,
        "div_res": div_res,
        "beltrami_res": bel_res,
        "ratio_l1": rep.ratio_l1,
        "ratio_l2": rep.ratio_l2,
    }


def cmd_make_data(args) -> int:
    config = _build_config(args)
    grid, recipe, u0 = _make_datum(config, strict=True)
    out = _prepare_outdir(config)
    write_checkpoint(u0, out / "u0.ckpt")
    payload = _norms_payload(u0, recipe)
    _write_json(out / "norms.json", payload)
    print(f"wrote {out / 'u0.ckpt'} and norms.json "
          f"(beltrami_res = {payload['beltrami_res']:.3e})")
    return EXIT_OK


def _initial_perturbations(config: RunConfig, grid):
    rng = np.random.default_rng(config.io.seed)
    v0 = random_solenoidal(grid, rng, amplitude=config.recipe.v0_amplitude)
    c0 = random_solenoidal(grid, rng, amplitude=config.recipe.c0_amplitude)
    return v0, c0


def cmd_check_condition(args) -> int:
    config = _build_config(args)
    grid, recipe, u0 = _make_datum(config, strict=True)
    v0, c0 = _initial_perturbations(config, grid)
    rep = data_norms(u0, recipe)
    result = check_condition(rep, sobolev_norm(v0, 3.0), sobolev_norm(c0, 3.0),
                             recipe, config.condition.constant_C, config.condition.delta)
    out = _prepare_outdir(config)
    payload = {
        "lhs": result.lhs,
        "log_lhs": result.log_lhs,
        "delta": result.delta,
        "constant_C": result.constant_C,
        "pass": result.passed,
        "components": result.components,
    }
    _write_json(out / "condition.json", payload)
    print(f"condition lhs = {result.lhs:.6e}  delta = {result.delta:.6e}  "
          f"pass = {result.passed}")
    return EXIT_OK if result.passed else EXIT_CHECK_FAILED


def _scheme_from_config(config: RunConfig) -> SchemeParams:
    dt = None if config.scheme.auto_cfl else config.scheme.dt
    if dt is None and not config.scheme.auto_cfl:
        raise ConfigError("scheme.dt is unset and auto_cfl is false")
    return SchemeParams(
        dt=dt,
        cfl_advect=config.scheme.cfl_advect,
        cfl_hall=config.scheme.cfl_hall,
        dt_cap=config.scheme.dt_cap,
        blowup_factor=config.scheme.blowup_factor,
    )


def _run_common(args, kind: str) -> int:
    config = _build_config(args)
    grid, recipe, u0 = _make_datum(config, strict=False)
    params = PhysicalParams(config.params.mu, config.params.nu, config.params.alpha)
    scheme = _scheme_from_config(config)
    out = _prepare_outdir(config)

    v0, c0 = _initial_perturbations(config, grid)
    if kind == "full":
        state0 = State(0.0, v0 + u0, c0 + u0, kind="full")
    else:
        state0 = State(0.0, v0, c0, kind="perturbation")

    gate = check_condition(data_norms(u0, recipe), sobolev_norm(v0, 3.0),
                           sobolev_norm(c0, 3.0), recipe,
                           config.condition.constant_C, config.condition.delta)

    collector = SeriesCollector(params, U0=u0, stride=config.io.observer_stride)
    ckpt_stride = config.io.checkpoint_stride
    counter = {"n": 0}

    def observer(state):
        collector(state)
        if ckpt_stride > 0 and counter["n"] % ckpt_stride == 0:
            write_checkpoint(state.a, out / f"state_a_{counter['n']:06d}.ckpt")
            write_checkpoint(state.b, out / f"state_b_{counter['n']:06d}.ckpt")
        counter["n"] += 1

    _write_json(out / "norms.json", _norms_payload(u0, recipe))
    try:
        traj = integrate(state0, config.scheme.T, params, scheme, U0=u0,
                         observer=observer)
    except BlowUpError as exc:
        write_series_csv(collector.records, out / "series.csv")
        _write_json(out / "blowup.json",
                    {"time": exc.time, "norms": exc.norms, "message": str(exc)})
        print(f"blow-up detected: {exc}", file=sys.stderr)
        return EXIT_BLOWUP

    write_series_csv(collector.records, out / "series.csv")
    write_checkpoint(traj.final.a, out / "final_a.ckpt")
    write_checkpoint(traj.final.b, out / "final_b.ckpt")
    monitor = bootstrap_monitor(collector.records, config.eta)
    _write_json(out / "run_meta.json", {
        "kind": kind,
        "n_steps": traj.n_steps,
        "final_t": traj.final.t,
        "eta": monitor.eta,
        "bootstrap_held": monitor.held,
        "gamma_estimate": None if monitor.held else monitor.gamma_estimate,
        "max_energy": monitor.max_energy,
        "fd_rate_deviation": collector.fd_rate_deviation(),
        "condition_lhs": gate.lhs,
        "condition_log_lhs": gate.log_lhs,
        "condition_pass": gate.passed,
    })
    print(f"run complete: {traj.n_steps} steps to t = {traj.final.t:g}; "
          f"max perturbation energy {monitor.max_energy:.6e} "
          f"({'held' if monitor.held else 'exceeded'} eta = {monitor.eta:g})")
    return EXIT_OK


def cmd_run(args) -> int:
    return _run_common(args, "full")


def cmd_run_perturbation(args) -> int:
    return _run_common(args, "perturbation")


def cmd_verify(args) -> int:
    config = _build_config(args)
    out = _prepare_outdir(config)
    checks = run_verification(config)
    all_pass = all(c["pass"] for c in checks.values())
    _write_json(out / "verdicts.json", {"checks": checks, "all_pass": all_pass})
    width = max(len(k) for k in checks)
    for name, c in checks.items():
        status = "PASS" if c["pass"] else "FAIL"
        print(f"[{status}] {name:<{width}}  value = {c['value']:.3e}  "
              f"threshold = {c['threshold']:.3e}")
    print(f"verify: {'all checks passed' if all_pass else 'FAILURES present'}")
    return EXIT_OK if all_pass else EXIT_CHECK_FAILED


def _auto_grid_for(epsilon: float) -> tuple[int, float]:
    """Smallest even n with headroom over the shell on the box 8*pi/eps."""
    box = 8.0 * np.pi / epsilon
    n = int(np.ceil(9.2 * (1.0 + epsilon) / epsilon))
    n += n % 2
    return max(n, 8), box


def _sweep_member(payload) -> dict:
    epsilon, base_config_text, outdir = payload
    # members inherit everything from the resolved base except grid geometry
    config = load_config_string(base_config_text)

    n, box = _auto_grid_for(epsilon)
    if config.grid.n >= n and check_grid_for_recipe(
            make_grid(config.grid.n, config.grid.box_side),
            DataRecipe(epsilon))["fine"]:
        n, box = config.grid.n, config.grid.box_side
    config.grid.n = n
    config.grid.box_side = box
    config.recipe.epsilon = epsilon
    config.io.output_path = str(Path(outdir) / f"eps_{epsilon:g}")

    grid, recipe, u0 = _make_datum(config, strict=True)
    out = _prepare_outdir(config)
    write_checkpoint(u0, out / "u0.ckpt")
    payload = _norms_payload(u0, recipe)
    v0 = random_solenoidal(grid, np.random.default_rng(config.io.seed),
                           amplitude=config.recipe.v0_amplitude)
    c0 = random_solenoidal(grid, np.random.default_rng(config.io.seed + 1),
                           amplitude=config.recipe.c0_amplitude)
    rep = data_norms(u0, recipe)
    cond = check_condition(rep, sobolev_norm(v0, 3.0), sobolev_norm(c0, 3.0), recipe,
                           config.condition.constant_C, config.condition.delta)
    payload["condition_lhs"] = cond.lhs
    payload["condition_log_lhs"] = cond.log_lhs
    payload["condition_pass"] = cond.passed
    payload["n"] = config.grid.n
    payload["box_side"] = config.grid.box_side
    _write_json(out / "norms.json", payload)
    _write_json(out / "condition.json", {
        "lhs": cond.lhs, "log_lhs": cond.log_lhs, "delta": cond.delta,
        "constant_C": cond.constant_C, "pass": cond.passed,
        "components": cond.components,
    })
    return payload


def cmd_sweep(args) -> int:
    config = _build_config(args)
    try:
        epsilons = sorted({float(tok) for tok in args.epsilons.split(",") if tok.strip()},
                          reverse=True)
    except ValueError:
        raise ConfigError(f"cannot parse epsilon list {args.epsilons!r}") from None
    if not epsilons:
        raise ConfigError("empty epsilon list")
    out = _prepare_outdir(config)
    base_text_path = out / RESOLVED_CONFIG_NAME
    base_text = base_text_path.read_text()

    payloads = [(eps, base_text, str(out)) for eps in epsilons]
    if config.io.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.io.jobs) as pool:
            rows = list(pool.map(_sweep_member, payloads))
    else:
        rows = [_sweep_member(p) for p in payloads]

    summary = {"epsilons": epsilons, "rows": rows}
    _write_json(out / "sweep_summary.json", summary)
    header = f"{'epsilon':>8} {'l1_hat':>12} {'ratio_l1':>10} {'ratio_l2':>10} {'linf_first':>11} {'cond_lhs':>12} {'pass':>5}"
    print(header)
    for row in rows:
        print(f"{row['epsilon']:>8g} {row['l1_hat']:>12.5g} {row['ratio_l1']:>10.4g} "
              f"{row['ratio_l2']:>10.4g} {row['linf_first']:>11.5g} "
              f"{row['condition_lhs']:>12.5g} {str(row['condition_pass']):>5}")
    return EXIT_OK


def _add_common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("-c", "--config", help="INI config file")
    p.add_argument("--n", type=int, help="grid points per axis")
    p.add_argument("--box-side", dest="box_side", type=float)
    p.add_argument("--epsilon", type=float, help="spectral shell half-width")
    p.add_argument("--v0-amplitude", dest="v0_amplitude", type=float)
    p.add_argument("--c0-amplitude", dest="c0_amplitude", type=float)
    p.add_argument("--mu", type=float)
    p.add_argument("--nu", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--dt", type=float)
    p.add_argument("--auto-cfl", dest="auto_cfl", action="store_const", const=True)
    p.add_argument("-T", "--final-time", dest="T", type=float)
    p.add_argument("--eta", type=float, help="bootstrap energy threshold")
    p.add_argument("--constant-C", dest="constant_C", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("-o", "--output", help="output directory")
    p.add_argument("--observer-stride", dest="observer_stride", type=int)
    p.add_argument("--checkpoint-stride", dest="checkpoint_stride", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--jobs", type=int)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="hallmhd",
        description="Periodic-box pseudo-spectral Hall-MHD solver and "
                    "verification harness")
    sub = parser.add_subparsers(dest="command", required=True)

    commands = {
        "make-data": (cmd_make_data, "construct the annular Beltrami datum"),
        "check-condition": (cmd_check_condition, "evaluate the smallness gate"),
        "run": (cmd_run, "integrate the full system"),
        "run-perturbation": (cmd_run_perturbation, "integrate the split system"),
        "verify": (cmd_verify, "run the identity/estimate suite"),
        "sweep": (cmd_sweep, "norm scalings across a list of shell widths"),
    }
    for name, (func, help_text) in commands.items():
        p = sub.add_parser(name, help=help_text)
        _add_common_flags(p)
        if name == "sweep":
            p.add_argument("--epsilons", required=True,
                           help="comma-separated shell half-widths")
        p.set_defaults(func=func)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, GridResolutionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
