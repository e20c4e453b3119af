"""Monte Carlo estimates of how far each approximation mechanism strays.

Two yardsticks:

* local error — self-consistency of an approximate process: the expected
  l1 distance at the horizon between the estimate an updating agent would
  use and the census proportions of that same process. Agents are
  exchangeable (i.i.d. features, symmetric noise), so a single fresh
  probe estimate stands in for any fixed agent's; a debug mode draws
  several probes and asserts they agree within Monte Carlo error.

* global error — the expected fraction of agents whose opinion at the
  horizon differs between the approximate process and the full-information
  process, both driven by the same features, influence events and
  influencer path (an exact coupling, which also acts as variance
  reduction).

The local bound sqrt(K)/(2 sqrt(M or N)) is a guarantee. The global bound
is reported as a shape only: the growth factor (K_phi^T - 1)/(K_phi - 1)
times the survey or population scale, with unknown constants set to 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import TYPE_CHECKING

import numpy as np

from .dynamics import Mechanism, ReplicationContext, check_budget
from .errors import ConfigurationError
from .macro import MacroFunction, lipschitz_constant
from .population import class_proportions

if TYPE_CHECKING:
    from .config import ScenarioConfig

_GROWTH_UNIT_TOL = 1e-12


@dataclass(frozen=True)
class ErrorReport:
    metric: str          # "local" | "global"
    mechanism: str       # mechanism label
    n_agents: int
    m: int | None        # survey size, None for census/recursion regimes
    t_steps: int
    estimate: float
    std_error: float
    bound: float
    replications: int
    bound_kind: str = "guaranteed"  # "guaranteed" | "order-only"


def growth_factor(k_phi: float, t_steps: int) -> float:
    """Accumulated error amplification over t steps, (K_phi^T - 1)/(K_phi - 1).

    At K_phi = 1 the geometric sum degenerates to T.
    """
    if t_steps < 0:
        raise ValueError(f"t_steps must be >= 0, got {t_steps}")
    if abs(k_phi - 1.0) <= _GROWTH_UNIT_TOL:
        return float(t_steps)
    return (k_phi ** t_steps - 1.0) / (k_phi - 1.0)


def local_bound(n_classes: int, mechanism: Mechanism, n_agents: int) -> float:
    """Guaranteed ceiling on the local error: sqrt(K)/(2 sqrt(M)) for
    surveys, sqrt(K)/(2 sqrt(N)) for the recursion regime."""
    scale = mechanism.m if mechanism.is_survey else n_agents
    return math.sqrt(n_classes) / (2.0 * math.sqrt(scale))


def _effective_reps(scenario: "ScenarioConfig", replications: int | None) -> int:
    reps = scenario.replications if replications is None else int(replications)
    if reps < 1:
        raise ValueError(f"replications must be >= 1, got {reps}")
    return reps


def local_error(scenario: "ScenarioConfig", mechanism: Mechanism | str, t_steps: int,
                replications: int | None = None, *, debug_agents: int = 0,
                allow_large: bool = False) -> ErrorReport:
    """Estimate the horizon-T self-consistency gap of an approximation.

    Averages, over replications, the l1 distance between a fresh updater's
    estimate at the horizon and the census proportions of the approximate
    process itself.
    """
    mechanism = Mechanism.parse(mechanism)
    if mechanism.kind == "full":
        raise ValueError("the census regime has no estimation gap; "
                         "pick common(M), independent(M) or meanfield")
    if t_steps < 0:
        raise ValueError(f"t_steps must be >= 0, got {t_steps}")
    reps = _effective_reps(scenario, replications)
    check_budget(scenario.n_agents, t_steps, reps, scenario.budget_cap, allow_large)
    probes = max(1, debug_agents)
    gaps = np.empty((reps, probes))
    for r in range(reps):
        ctx = ReplicationContext.build(scenario, r, horizon=t_steps)
        out = ctx.simulate(mechanism, t_steps, record=False, probes=probes)
        truth = class_proportions(out.final_opinions, ctx.population)
        gaps[r] = np.abs(out.probe_estimates - truth).sum(axis=1)
    if debug_agents:
        _assert_probe_agreement(gaps)
    per_rep = gaps[:, 0]
    estimate = float(per_rep.mean())
    std_error = float(per_rep.std(ddof=1) / math.sqrt(reps)) if reps > 1 else 0.0
    return ErrorReport(
        metric="local", mechanism=mechanism.label(), n_agents=scenario.n_agents,
        m=mechanism.m, t_steps=t_steps, estimate=estimate, std_error=std_error,
        bound=local_bound(scenario.population.n_classes, mechanism, scenario.n_agents),
        replications=reps)


def _assert_probe_agreement(gaps: np.ndarray) -> None:
    """Probe gaps must agree across probe slots up to Monte Carlo error;
    exchangeability makes the single-probe shortcut legitimate."""
    reps, probes = gaps.shape
    for j in range(1, probes):
        diff = gaps[:, j] - gaps[:, 0]
        spread = diff.std(ddof=1) / math.sqrt(reps) if reps > 1 else 0.0
        assert abs(diff.mean()) <= 5.0 * spread + 1e-12, (
            f"probe {j} disagrees with probe 0 beyond Monte Carlo error: "
            f"mean diff {diff.mean():.3g}, std error {spread:.3g}")


def _phi_gap(ctx: ReplicationContext, points: int = 21) -> float:
    """Largest l1 gap between the population's empirical mean-influence
    function and the analytic one, over a ray of proportion vectors
    p = s * mu (s on a uniform grid) and every binary influencer vector."""
    spec = ctx.population.spec
    analytic = MacroFunction.analytic(spec)
    empirical = MacroFunction.empirical(ctx.population)
    mu = np.asarray(spec.mu, dtype=np.float64)
    m0 = spec.n_influencers
    if m0 > 10:
        raise ValueError(f"phi-gap enumeration over 2^{m0} influencer states is too large")
    gap = 0.0
    for s in np.linspace(0.0, 1.0, points):
        p = s * mu
        for code in range(2 ** m0):
            x0 = (code >> np.arange(m0)) & 1
            gap = max(gap, float(np.abs(empirical(p, x0) - analytic(p, x0)).sum()))
    return gap


def global_error_curve(scenario: "ScenarioConfig", mechanism: Mechanism | str,
                       horizons, replications: int | None = None, *,
                       include_phi_gap: bool = False,
                       allow_large: bool = False) -> list[ErrorReport]:
    """Coupled disagreement fractions at several horizons from one pass.

    Each replication simulates the census process and the approximate
    process once up to max(horizons) on identical noise and compares
    opinions at every requested horizon.
    """
    mechanism = Mechanism.parse(mechanism)
    horizons = sorted({int(t) for t in np.atleast_1d(np.asarray(horizons, dtype=np.int64))})
    if not horizons:
        raise ValueError("horizons must be nonempty")
    if horizons[0] < 0:
        raise ValueError(f"horizons must be >= 0, got {horizons[0]}")
    reps = _effective_reps(scenario, replications)
    t_max = horizons[-1]
    check_budget(scenario.n_agents, 2 * max(t_max, 1), reps, scenario.budget_cap, allow_large)
    snapshots = tuple(horizons)
    fractions = np.empty((reps, len(horizons)))
    gaps = np.empty(reps) if include_phi_gap else None
    for r in range(reps):
        ctx = ReplicationContext.build(scenario, r, horizon=t_max)
        ref = ctx.simulate(Mechanism(kind="full"), t_max, record=False, snapshots=snapshots)
        app = ctx.simulate(mechanism, t_max, record=False, snapshots=snapshots)
        for j, t in enumerate(horizons):
            fractions[r, j] = np.mean(ref.opinions_at[t] != app.opinions_at[t])
        if include_phi_gap:
            gaps[r] = _phi_gap(ctx)
    k_phi = lipschitz_constant(MacroFunction.analytic(scenario.population)) \
        if scenario.population.threshold_law.kind == "uniform01" \
        else float(np.max(scenario.population.inter_class))
    if mechanism.kind == "full":
        scale = 0.0
    elif mechanism.is_survey:
        scale = 1.0 / math.sqrt(mechanism.m)
    else:
        scale = 1.0 / math.sqrt(scenario.n_agents)
    if include_phi_gap:
        scale += float(gaps.mean())
    reports = []
    for j, t in enumerate(horizons):
        col = fractions[:, j]
        reports.append(ErrorReport(
            metric="global", mechanism=mechanism.label(), n_agents=scenario.n_agents,
            m=mechanism.m, t_steps=t, estimate=float(col.mean()),
            std_error=float(col.std(ddof=1) / math.sqrt(reps)) if reps > 1 else 0.0,
            bound=growth_factor(k_phi, t) * scale, replications=reps,
            bound_kind="order-only"))
    return reports


def global_error(scenario: "ScenarioConfig", mechanism: Mechanism | str, t_steps: int,
                 replications: int | None = None, *, include_phi_gap: bool = False,
                 allow_large: bool = False) -> ErrorReport:
    """Coupled disagreement fraction at a single horizon."""
    return global_error_curve(scenario, mechanism, [t_steps], replications,
                              include_phi_gap=include_phi_gap,
                              allow_large=allow_large)[0]


def error_sweep(scenario: "ScenarioConfig", mechanism: Mechanism | str, metric: str,
                grid: dict, replications: int | None = None, *,
                t_steps: int | None = None, include_phi_gap: bool = False,
                debug_agents: int = 0, allow_large: bool = False) -> list[ErrorReport]:
    """Repeat one error metric along a grid over N, M or T.

    All grid points reuse the scenario's master seed, so sweeps are
    comparable run to run. Returns reports in ascending grid order.
    """
    if metric not in ("local", "global"):
        raise ConfigurationError("metric", f"must be local or global, got {metric!r}")
    if len(grid) != 1:
        raise ConfigurationError("grid", "exactly one of N, M or T must be swept")
    key, values = next(iter(grid.items()))
    if key not in ("N", "M", "T"):
        raise ConfigurationError("grid", f"sweep key must be N, M or T, got {key!r}")
    values = sorted(int(v) for v in values)
    if not values:
        raise ConfigurationError("grid", "grid values must be nonempty")
    mechanism = Mechanism.parse(mechanism)
    horizon = scenario.horizon if t_steps is None else int(t_steps)

    def one(sc, mech, t) -> ErrorReport:
        if metric == "local":
            return local_error(sc, mech, t, replications,
                               debug_agents=debug_agents, allow_large=allow_large)
        return global_error(sc, mech, t, replications,
                            include_phi_gap=include_phi_gap, allow_large=allow_large)

    if key == "T" and metric == "global":
        return global_error_curve(scenario, mechanism, values, replications,
                                  include_phi_gap=include_phi_gap, allow_large=allow_large)
    if key == "T":
        return [one(scenario, mechanism, t) for t in values]
    if key == "N":
        return [one(replace(scenario, n_agents=n), mechanism, horizon) for n in values]
    if not mechanism.is_survey:
        raise ConfigurationError("grid", "an M sweep needs a survey mechanism")
    return [one(scenario, Mechanism(kind=mechanism.kind, m=m), horizon) for m in values]


def write_reports(reports, path) -> None:
    """CSV schema: metric,mechanism,N,M,T,estimate,std_error,bound,replications."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("metric,mechanism,N,M,T,estimate,std_error,bound,replications\n")
        for rep in reports:
            m = "" if rep.m is None else str(rep.m)
            fh.write(f"{rep.metric},{rep.mechanism},{rep.n_agents},{m},{rep.t_steps},"
                     f"{rep.estimate:.10g},{rep.std_error:.10g},{rep.bound:.10g},"
                     f"{rep.replications}\n")
