"""Command-line front end.

Commands:

* ``simulate``  — run a scenario's mechanisms, write trajectories.csv and
  a run manifest;
* ``analytics`` — closed-form results (fluctuation band, cycle table,
  stationary moments, cumulants, diffusion decision, echo-chamber limits)
  as JSON on stdout;
* ``errors``    — local/global error estimates, optionally swept over a
  grid, written as errors.csv;
* ``list``      — names of the shipped scenario catalog;
* ``validate``  — parse a scenario and print its summary without running.

Exit codes: 0 success, 2 configuration or usage error, 3 budget refusal,
4 numeric or domain error.
"""

from __future__ import annotations

import argparse
import json
import platform
import sys
from pathlib import Path

import numpy as np

from . import __version__, dynamics, meanfield, metrics
from .config import list_catalog, load_scenario, scenario_digest
from .dynamics import DEFAULT_BUDGET, Mechanism
from .errors import (BudgetError, ConfigurationError, DomainError,
                     UnsupportedOperationError)


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=None,
                        help="override the scenario's master seed")
    parser.add_argument("--out", default=None,
                        help="output directory root (default: the scenario's outputs field)")
    parser.add_argument("--threads", type=int, default=1,
                        help="parallel replication workers")
    parser.add_argument("--allow-large", action="store_true",
                        help="lift the agent-step budget cap")
    parser.add_argument("--set", dest="overrides", action="append", default=[],
                        metavar="KEY=VALUE", help="override a scenario field; repeatable")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="voxpop",
        description="Simulation and closed-form analytics for threshold opinion "
                    "dynamics with communities and major influencers.")
    parser.add_argument("--version", action="version", version=f"voxpop {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run a scenario and write trajectories")
    p_sim.add_argument("--scenario", required=True,
                       help="catalog name (e.g. catalog/snowball) or a JSON file path")
    _add_common_flags(p_sim)
    p_sim.set_defaults(func=cmd_simulate)

    p_ana = sub.add_parser("analytics", help="closed-form results as JSON")
    ana_sub = p_ana.add_subparsers(dest="analytic", required=True)

    p_fluct = ana_sub.add_parser("fluctuation", help="long-run oscillation band")
    p_fluct.add_argument("--c", type=float, required=True)
    p_fluct.add_argument("--c0", type=float, required=True)
    p_fluct.add_argument("--T", type=int, required=True, help="drive half-period")
    p_fluct.set_defaults(func=cmd_analytics_fluctuation)

    p_cycle = ana_sub.add_parser("cycle", help="per-step average lift per half-period")
    p_cycle.add_argument("--c", type=float, required=True)
    p_cycle.add_argument("--c0", type=float, required=True)
    p_cycle.add_argument("--t-max", type=int, default=50)
    p_cycle.set_defaults(func=cmd_analytics_cycle)

    p_stat = ana_sub.add_parser("stationary",
                                help="stationary mean/variance under a two-state chain")
    p_stat.add_argument("--c", type=float, required=True)
    p_stat.add_argument("--c0", type=float, required=True)
    p_stat.add_argument("--alpha", type=float, required=True, help="switch-down rate")
    p_stat.add_argument("--beta", type=float, required=True, help="switch-up rate")
    p_stat.set_defaults(func=cmd_analytics_stationary)

    p_cum = ana_sub.add_parser("cumulants",
                               help="stationary cumulants under i.i.d. drive")
    p_cum.add_argument("--c", type=float, required=True)
    p_cum.add_argument("--k1", type=float, required=True)
    p_cum.add_argument("--k2", type=float, required=True)
    p_cum.add_argument("--k3", type=float, required=True)
    p_cum.set_defaults(func=cmd_analytics_cumulants)

    p_diff = ana_sub.add_parser("diffusion", help="endpoint decision for the switch-up rate")
    p_diff.add_argument("--alpha", type=float, required=True)
    p_diff.add_argument("--rho", type=float, required=True, help="discount factor")
    p_diff.add_argument("--c", type=float, required=True)
    p_diff.add_argument("--theta", type=float, required=True)
    p_diff.set_defaults(func=cmd_analytics_diffusion)

    p_echo = ana_sub.add_parser("echo", help="two-class polarization limits")
    p_echo.add_argument("--epsilon", type=float, required=True)
    p_echo.add_argument("--nu", type=float, required=True)
    p_echo.add_argument("--steps", type=int, default=5000)
    p_echo.add_argument("--seed", type=int, default=0)
    p_echo.set_defaults(func=cmd_analytics_echo)

    p_err = sub.add_parser("errors", help="estimate local/global approximation errors")
    p_err.add_argument("--scenario", required=True)
    p_err.add_argument("--metric", choices=("local", "global"), required=True)
    p_err.add_argument("--mechanism", required=True,
                       help="full, meanfield, common(M) or independent(M); "
                            "bare common/independent take --M")
    p_err.add_argument("--M", type=int, default=None, help="survey size")
    p_err.add_argument("--T", type=int, default=None,
                       help="horizon (default: the scenario's)")
    p_err.add_argument("--replications", type=int, default=None)
    p_err.add_argument("--grid", default=None, metavar="KEY=V1,V2,...",
                       help="sweep N, M or T, e.g. M=10,100,1000")
    p_err.add_argument("--phi-gap", action="store_true",
                       help="add the estimated empirical-vs-analytic mean-influence "
                            "gap to the global bound")
    p_err.add_argument("--debug-agents", type=int, default=0,
                       help="cross-check the local probe over this many draws")
    _add_common_flags(p_err)
    p_err.set_defaults(func=cmd_errors)

    p_list = sub.add_parser("list", help="list shipped catalog scenarios")
    p_list.set_defaults(func=cmd_list)

    p_val = sub.add_parser("validate", help="parse and summarize a scenario")
    p_val.add_argument("--scenario", required=True)
    _add_common_flags(p_val)
    p_val.set_defaults(func=cmd_validate)

    return parser


def _print_json(name: str, inputs: dict, outputs: dict) -> None:
    print(json.dumps({"name": name, "inputs": inputs, "outputs": outputs}, indent=2))


def _out_dir(args, config) -> Path:
    root = Path(args.out) if args.out else Path(config.outputs)
    out = root / config.name
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_manifest(path: Path, config, raw: dict, args, files: list[str]) -> None:
    manifest = {
        "scenario": config.name,
        "config_sha256": scenario_digest(raw),
        "master_seed": config.master_seed,
        "overrides": list(args.overrides),
        "seed_override": args.seed,
        "n_agents": config.n_agents,
        "horizon": config.horizon,
        "replications": config.replications,
        "mechanisms": [m.label() for m in config.mechanisms],
        "files": files,
        "versions": {
            "voxpop": __version__,
            "python": platform.python_version(),
            "numpy": np.__version__,
        },
    }
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")


def cmd_simulate(args) -> int:
    config, raw = load_scenario(args.scenario, args.overrides, seed=args.seed)
    result = dynamics.run(config, allow_large=args.allow_large, threads=args.threads)
    out = _out_dir(args, config)
    csv_path = out / "trajectories.csv"
    result.to_csv(csv_path)
    _write_manifest(out / "manifest.json", config, raw, args, ["trajectories.csv"])
    print(csv_path)
    print(out / "manifest.json")
    return 0


def cmd_analytics_fluctuation(args) -> int:
    band = meanfield.fluctuation_limits(args.c, args.c0, args.T)
    _print_json("fluctuation_limits",
                {"c": args.c, "c0": args.c0, "T": args.T},
                {"p_min_inf": band.lower, "p_max_inf": band.upper,
                 "ceiling": band.ceiling, "amplitude": band.amplitude})
    return 0


def cmd_analytics_cycle(args) -> int:
    plan = meanfield.optimal_cycle(args.c, args.c0, args.t_max)
    _print_json("optimal_cycle",
                {"c": args.c, "c0": args.c0, "t_max": args.t_max},
                {"argmax_T": plan.best_half_period, "v_star": plan.best_value,
                 "v_table": plan.values.tolist()})
    return 0


def cmd_analytics_stationary(args) -> int:
    model = meanfield.LinearModel.from_rates([1.0], [[args.c]], [[args.c0]])
    chain_mean = args.beta / (args.alpha + args.beta)
    mean = float(meanfield.stationary_mean(model, [chain_mean])[0])
    variance = meanfield.stationary_variance_single_class(args.c, args.alpha,
                                                          args.beta, args.c0)
    _print_json("stationary_moments",
                {"c": args.c, "c0": args.c0, "alpha": args.alpha, "beta": args.beta},
                {"mean": mean, "variance": variance, "chain_on_fraction": chain_mean})
    return 0


def cmd_analytics_cumulants(args) -> int:
    k1, k2, k3 = meanfield.cumulants_iid_single_class(args.c, (args.k1, args.k2, args.k3))
    _print_json("stationary_cumulants",
                {"c": args.c, "drive_cumulants": [args.k1, args.k2, args.k3]},
                {"k1": k1, "k2": k2, "k3": k3})
    return 0


def cmd_analytics_diffusion(args) -> int:
    decision = meanfield.optimal_diffusion_decision(args.alpha, args.rho, args.c,
                                                    args.theta)
    label = "indifferent" if decision.indifferent else f"beta={decision.beta:g}"
    _print_json("optimal_diffusion_decision",
                {"alpha": args.alpha, "rho": args.rho, "c": args.c, "theta": args.theta},
                {"decision": label, "threshold": decision.threshold,
                 "value_at_0": decision.value_at_0, "value_at_1": decision.value_at_1})
    return 0


def cmd_analytics_echo(args) -> int:
    limits = meanfield.echo_chamber_limits(args.epsilon, args.nu)
    check = meanfield.echo_chamber_check(args.epsilon, args.nu, t_steps=args.steps,
                                         master_seed=args.seed or 0)
    _print_json("echo_chamber_limits",
                {"epsilon": args.epsilon, "nu": args.nu, "steps": args.steps},
                {"class1_mean": limits.class1_mean,
                 "class1_variance": limits.class1_variance,
                 "class2_limit": limits.class2_limit,
                 "check_class1_time_mean": check.class1_time_mean,
                 "check_class2_final": check.class2_final})
    return 0


def _parse_grid(expr: str) -> dict:
    if "=" not in expr:
        raise ConfigurationError("--grid", f"expected KEY=V1,V2,..., got {expr!r}")
    key, rest = expr.split("=", 1)
    values = [int(v) for v in rest.split(",") if v.strip()]
    if not values:
        raise ConfigurationError("--grid", f"no values in {expr!r}")
    return {key.strip(): values}


def _resolve_mechanism(args) -> Mechanism:
    text = args.mechanism.strip()
    if text in ("common", "independent"):
        if args.M is None:
            if args.grid and args.grid.strip().startswith("M"):
                text = f"{text}(1)"  # placeholder; the sweep replaces M
            else:
                raise ConfigurationError("--mechanism",
                                         f"{text} needs --M or an M grid")
        else:
            text = f"{text}({args.M})"
    elif args.M is not None:
        raise ConfigurationError("--M", f"{text} does not take a survey size")
    return Mechanism.parse(text)


def cmd_errors(args) -> int:
    config, raw = load_scenario(args.scenario, args.overrides, seed=args.seed)
    mechanism = _resolve_mechanism(args)
    horizon = config.horizon if args.T is None else args.T
    if args.grid:
        grid = _parse_grid(args.grid)
        reports = metrics.error_sweep(
            config, mechanism, args.metric, grid, args.replications,
            t_steps=horizon, include_phi_gap=args.phi_gap,
            debug_agents=args.debug_agents, allow_large=args.allow_large)
    elif args.metric == "local":
        reports = [metrics.local_error(config, mechanism, horizon, args.replications,
                                       debug_agents=args.debug_agents,
                                       allow_large=args.allow_large)]
    else:
        reports = [metrics.global_error(config, mechanism, horizon, args.replications,
                                        include_phi_gap=args.phi_gap,
                                        allow_large=args.allow_large)]
    out = _out_dir(args, config)
    csv_path = out / "errors.csv"
    metrics.write_reports(reports, csv_path)
    for rep in reports:
        note = "" if rep.bound_kind == "guaranteed" else f" ({rep.bound_kind})"
        print(f"{rep.metric} {rep.mechanism} T={rep.t_steps} N={rep.n_agents}: "
              f"estimate {rep.estimate:.6g} +- {rep.std_error:.6g}, "
              f"bound {rep.bound:.6g}{note}")
    print(csv_path)
    return 0


def cmd_list(args) -> int:
    for name in list_catalog():
        print(name)
    return 0


def cmd_validate(args) -> int:
    config, raw = load_scenario(args.scenario, args.overrides, seed=args.seed)
    cost = config.n_agents * max(config.horizon, 1) * config.replications
    cap = DEFAULT_BUDGET if config.budget_cap is None else min(config.budget_cap,
                                                               DEFAULT_BUDGET)
    print(f"name:         {config.name}")
    print(f"classes:      {config.population.n_classes}")
    print(f"influencers:  {config.population.n_influencers}")
    print(f"n_agents:     {config.n_agents}")
    print(f"horizon:      {config.horizon}")
    print(f"replications: {config.replications}")
    print(f"mechanisms:   {', '.join(m.label() for m in config.mechanisms)}")
    print(f"influencer:   {config.influencer.kind}")
    print(f"master_seed:  {config.master_seed}")
    print(f"agent-steps:  {cost:.3g} ({'within' if cost <= cap else 'above'} "
          f"budget {cap:.3g})")
    if config.description:
        print(f"description:  {config.description}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigurationError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except BudgetError as exc:
        print(f"budget refusal: {exc}", file=sys.stderr)
        return 3
    except (DomainError, FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return 4
    except (ValueError, UnsupportedOperationError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
