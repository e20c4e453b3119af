"""Coupled N-agent opinion dynamics under four information regimes.

Every agent carries a fixed feature vector (initial opinion, class,
influencer coefficient row, threshold). At each step an agent flagged by
an influence event recomputes its opinion as

    1{ c_kappa . p_hat + c0_n . X0(t) > s_n },

where p_hat is the class-proportion estimate supplied by the mechanism:

* ``full``           — exact census proportions;
* ``common(M)``      — one M-agent survey without replacement, shared by
  all updaters this step;
* ``independent(M)`` — each updater draws its own fresh M-agent survey;
* ``meanfield``      — the deterministic-given-X0 recursion value, no
  survey at all.

All mechanisms of a replication share feature vectors, influence events
and the influencer path, so cross-mechanism error metrics are couplings.
Survey counts per class are drawn from the multivariate hypergeometric
law, which is the exact distribution of class-and-opinion counts in a
uniform without-replacement sample; with M = N every mechanism reduces
to the census arithmetic and trajectories match full information bit for
bit.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

from .errors import BudgetError, ConfigurationError
from .macro import MacroFunction
from .population import Population, class_proportions, sample_population
from .streams import (INFLUENCE_EVENTS, INFLUENCER_PATH, POPULATION,
                      SURVEY_COMMON, SURVEY_INDEPENDENT, substream)

if TYPE_CHECKING:
    from .config import ScenarioConfig

DEFAULT_BUDGET = 5_000_000_000  # agent-steps: n_agents * horizon * replications

_MECHANISM_RE = re.compile(r"^(common|independent)\((\d+)\)$")


@dataclass(frozen=True)
class Mechanism:
    """An information regime; surveys carry their sample size M."""

    kind: str  # "full" | "common" | "independent" | "meanfield"
    m: int | None = None

    def __post_init__(self):
        if self.kind in ("full", "meanfield"):
            if self.m is not None:
                raise ConfigurationError("mechanism", f"{self.kind} takes no survey size")
        elif self.kind in ("common", "independent"):
            if self.m is None or self.m < 1:
                raise ConfigurationError("mechanism", f"{self.kind} needs a survey size M >= 1")
        else:
            raise ConfigurationError("mechanism", f"unknown mechanism {self.kind!r}")

    @classmethod
    def parse(cls, text) -> "Mechanism":
        if isinstance(text, Mechanism):
            return text
        if isinstance(text, dict):
            return cls(kind=text.get("kind", ""), m=text.get("m"))
        text = str(text).strip()
        if text in ("full", "meanfield"):
            return cls(kind=text)
        match = _MECHANISM_RE.match(text)
        if match:
            return cls(kind=match.group(1), m=int(match.group(2)))
        raise ConfigurationError(
            "mechanism", f"{text!r} is not full, meanfield, common(M) or independent(M)")

    def label(self) -> str:
        return self.kind if self.m is None else f"{self.kind}({self.m})"

    @property
    def is_survey(self) -> bool:
        return self.kind in ("common", "independent")


@dataclass(frozen=True)
class SimState:
    """Snapshot of one mechanism's process: time, opinions, and for the
    mean-field regime the shared recursion value."""

    t: int
    opinions: np.ndarray  # (N,) uint8
    mechanism: Mechanism
    mkv_p: np.ndarray | None = None  # (K,), meanfield only


def initial_state(population: Population, mechanism: Mechanism,
                  mkv_p0: np.ndarray | None = None) -> SimState:
    """Start from the sampled initial opinions; the mean-field recursion
    starts from the class-mass-weighted initial law unless overridden."""
    opinions = population.xi.copy()
    if mechanism.kind != "meanfield":
        return SimState(t=0, opinions=opinions, mechanism=mechanism)
    if mkv_p0 is None:
        spec = population.spec
        mkv_p0 = np.asarray(spec.mu, dtype=np.float64) * np.asarray(spec.initial_law,
                                                                    dtype=np.float64)
    return SimState(t=0, opinions=opinions, mechanism=mechanism,
                    mkv_p=np.asarray(mkv_p0, dtype=np.float64))


def _check_step_inputs(state: SimState, population: Population, x0_t: np.ndarray,
                       influence_events: np.ndarray, expected_kind: str) -> None:
    if state.mechanism.kind != expected_kind:
        raise ValueError(f"state carries mechanism {state.mechanism.label()!r}, "
                         f"stepper handles {expected_kind!r}")
    n = population.n_agents
    if state.opinions.shape != (n,):
        raise ValueError(f"opinions must have shape ({n},), got {state.opinions.shape}")
    if np.shape(x0_t) != (population.spec.n_influencers,):
        raise ValueError(f"x0_t must have shape ({population.spec.n_influencers},), "
                         f"got {np.shape(x0_t)}")
    if np.shape(influence_events) != (n,):
        raise ValueError(f"influence_events must have shape ({n},), "
                         f"got {np.shape(influence_events)}")


def _advance_opinions(state: SimState, population: Population, x0_t: np.ndarray,
                      events: np.ndarray, p_by_class: np.ndarray) -> np.ndarray:
    """Threshold update with a class-proportion estimate shared by all updaters."""
    c = np.asarray(population.spec.inter_class, dtype=np.float64)
    base_by_class = c @ p_by_class
    scores = base_by_class[population.kappa] + population.c0 @ np.asarray(x0_t,
                                                                          dtype=np.float64)
    adopt = scores > population.thresholds
    keep = state.opinions.astype(bool, copy=False)
    return np.where(events.astype(bool, copy=False), adopt, keep).astype(np.uint8)


def step_full(state: SimState, population: Population, x0_t: np.ndarray,
              influence_events: np.ndarray) -> SimState:
    """Census regime: every updater sees the exact class proportions."""
    _check_step_inputs(state, population, x0_t, influence_events, "full")
    p = class_proportions(state.opinions, population)
    new = _advance_opinions(state, population, x0_t, influence_events, p)
    return SimState(t=state.t + 1, opinions=new, mechanism=state.mechanism)


def survey_proportions(population: Population, opinions: np.ndarray,
                       indices: np.ndarray) -> np.ndarray:
    """Class-proportion estimate from a without-replacement index sample.

    Integer counts divided by the sample size; with indices covering the
    whole population this reproduces ``class_proportions`` exactly.
    """
    indices = np.asarray(indices)
    kappa_s = population.kappa[indices]
    ones = opinions[indices].astype(bool, copy=False)
    counts = np.bincount(kappa_s[ones], minlength=population.spec.n_classes)
    return counts / indices.size


def step_survey_common(state: SimState, population: Population, x0_t: np.ndarray,
                       influence_events: np.ndarray,
                       survey_indices: np.ndarray) -> SimState:
    """Shared-survey regime: one fresh M-sample feeds every updater this step."""
    _check_step_inputs(state, population, x0_t, influence_events, "common")
    survey_indices = np.asarray(survey_indices)
    m = state.mechanism.m
    if survey_indices.shape != (m,):
        raise ValueError(f"survey_indices must have shape ({m},), got {survey_indices.shape}")
    if np.unique(survey_indices).size != m:
        raise ValueError("survey_indices contains duplicates; the sample is "
                         "drawn without replacement")
    p_hat = survey_proportions(population, state.opinions, survey_indices)
    new = _advance_opinions(state, population, x0_t, influence_events, p_hat)
    return SimState(t=state.t + 1, opinions=new, mechanism=state.mechanism)


def _independent_estimates(population: Population, opinions: np.ndarray, m: int,
                           n_draws: int, rng: np.random.Generator) -> np.ndarray:
    """Per-updater survey estimates, shape (n_draws, K).

    Only the per-class counts of opinion-1 agents in a sample matter, and
    for a uniform without-replacement sample those counts are jointly
    multivariate hypergeometric over the colors (class-k opinion-1 agents
    for each k, everyone else). Sampling the counts directly is therefore
    law-identical to materializing index subsets, at a fraction of the cost.
    """
    k = population.spec.n_classes
    ones = np.bincount(population.kappa[opinions.astype(bool, copy=False)], minlength=k)
    colors = np.append(ones, population.n_agents - ones.sum())
    draws = rng.multivariate_hypergeometric(colors, m, size=n_draws)
    return draws[:, :k] / m


def step_survey_independent(state: SimState, population: Population, x0_t: np.ndarray,
                            influence_events: np.ndarray,
                            rng: np.random.Generator) -> SimState:
    """Private-survey regime: every updater draws its own fresh M-sample."""
    _check_step_inputs(state, population, x0_t, influence_events, "independent")
    m = state.mechanism.m
    if m > population.n_agents:
        raise ValueError(f"survey size {m} exceeds population size {population.n_agents}")
    if m == population.n_agents:
        # every survey is the full census; identical arithmetic to step_full
        p = class_proportions(state.opinions, population)
        new = _advance_opinions(state, population, x0_t, influence_events, p)
        return SimState(t=state.t + 1, opinions=new, mechanism=state.mechanism)
    updaters = np.flatnonzero(np.asarray(influence_events))
    new = state.opinions.copy()
    if updaters.size:
        p_hat = _independent_estimates(population, state.opinions, m, updaters.size, rng)
        c = np.asarray(population.spec.inter_class, dtype=np.float64)
        rows = c[population.kappa[updaters]]
        scores = np.einsum("rk,rk->r", rows, p_hat) \
            + population.c0[updaters] @ np.asarray(x0_t, dtype=np.float64)
        new[updaters] = scores > population.thresholds[updaters]
    return SimState(t=state.t + 1, opinions=new, mechanism=state.mechanism)


def step_meanfield(state: SimState, population: Population, x0_t: np.ndarray,
                   influence_events: np.ndarray, macro: MacroFunction) -> SimState:
    """Recursion regime: updaters score against the deterministic-given-X0
    class proportions, which then advance by one application of the
    mean-influence function."""
    _check_step_inputs(state, population, x0_t, influence_events, "meanfield")
    if state.mkv_p is None:
        raise ValueError("meanfield state needs mkv_p; build it with initial_state()")
    new = _advance_opinions(state, population, x0_t, influence_events, state.mkv_p)
    h = population.spec.h
    step = macro(state.mkv_p, x0_t)
    mkv_next = step if h == 1.0 else (1.0 - h) * state.mkv_p + h * step
    return SimState(t=state.t + 1, opinions=new, mechanism=state.mechanism, mkv_p=mkv_next)


@dataclass
class MechanismRun:
    """Recorded output of one mechanism over one replication."""

    mechanism: Mechanism
    proportions: np.ndarray | None        # (T+1, K) census proportions of the process
    mkv: np.ndarray | None                # (T+1, K), meanfield only
    opinions_at: dict[int, np.ndarray] = field(default_factory=dict)
    probe_estimates: np.ndarray | None = None  # (probes, K), estimate a fresh
    #                                            updater would use at the horizon
    final_opinions: np.ndarray | None = None


@dataclass
class ReplicationContext:
    """Everything one replication shares across mechanisms: the sampled
    population, the realized influencer path, and the stream ids used to
    replay identical influence events for every mechanism."""

    master_seed: int
    replication: int
    population: Population
    x0_path: np.ndarray  # (horizon, M0) uint8
    macro: MacroFunction

    @classmethod
    def build(cls, scenario: "ScenarioConfig", replication: int,
              horizon: int | None = None) -> "ReplicationContext":
        if horizon is None:
            horizon = scenario.horizon
        seed = scenario.master_seed
        pop = sample_population(
            scenario.population, scenario.n_agents,
            np.random.SeedSequence(seed, spawn_key=(POPULATION, replication)))
        path_rng = substream(seed, INFLUENCER_PATH, replication)
        x0_path = scenario.influencer.realize(horizon, path_rng)
        if scenario.population.threshold_law.kind == "uniform01":
            macro = MacroFunction.analytic(scenario.population)
        else:
            macro = MacroFunction.empirical(pop)
        return cls(master_seed=seed, replication=replication, population=pop,
                   x0_path=x0_path, macro=macro)

    def simulate(self, mechanism: Mechanism | str, t_steps: int, *,
                 record: bool = True, snapshots: tuple[int, ...] = (),
                 probes: int = 0) -> MechanismRun:
        """Run one mechanism for t_steps, replaying this replication's noise.

        Influence events and survey streams are re-instantiated from the
        master seed on every call, so different mechanisms (and repeated
        calls) see identical randomness — the coupling used by the error
        metrics. ``snapshots`` stores opinion copies at those times, and
        ``probes`` draws that many horizon estimates as a fresh updater
        would form them (all equal for census/common/recursion regimes,
        i.i.d. for private surveys).
        """
        mechanism = Mechanism.parse(mechanism)
        if t_steps < 0:
            raise ValueError(f"t_steps must be >= 0, got {t_steps}")
        if t_steps > self.x0_path.shape[0]:
            raise ValueError(f"context holds a {self.x0_path.shape[0]}-step influencer "
                             f"path, {t_steps} steps requested")
        pop = self.population
        n = pop.n_agents
        h = pop.spec.h
        k = pop.spec.n_classes
        rep = self.replication
        event_rng = substream(self.master_seed, INFLUENCE_EVENTS, rep)
        survey_rng = None
        if mechanism.kind == "common":
            survey_rng = substream(self.master_seed, SURVEY_COMMON, rep)
        elif mechanism.kind == "independent":
            survey_rng = substream(self.master_seed, SURVEY_INDEPENDENT, rep)
        state = initial_state(pop, mechanism)
        all_events = np.ones(n, dtype=np.uint8) if h == 1.0 else None
        proportions = np.empty((t_steps + 1, k)) if record else None
        mkv = np.empty((t_steps + 1, k)) if record and mechanism.kind == "meanfield" else None
        run = MechanismRun(mechanism=mechanism, proportions=proportions, mkv=mkv)
        snapshots = tuple(snapshots)

        def observe(s: SimState) -> None:
            if record:
                proportions[s.t] = class_proportions(s.opinions, pop)
                if mkv is not None:
                    mkv[s.t] = s.mkv_p
            if s.t in snapshots:
                run.opinions_at[s.t] = s.opinions.copy()

        observe(state)
        for t in range(t_steps):
            x0_t = self.x0_path[t]
            events = all_events if all_events is not None else \
                (event_rng.random(n) < h).astype(np.uint8)
            if mechanism.kind == "full":
                state = step_full(state, pop, x0_t, events)
            elif mechanism.kind == "common":
                idx = survey_rng.choice(n, size=mechanism.m, replace=False, shuffle=False)
                state = step_survey_common(state, pop, x0_t, events, idx)
            elif mechanism.kind == "independent":
                state = step_survey_independent(state, pop, x0_t, events, survey_rng)
            else:
                state = step_meanfield(state, pop, x0_t, events, self.macro)
            observe(state)
        if probes > 0:
            run.probe_estimates = self._probe(state, mechanism, survey_rng, probes)
        run.final_opinions = state.opinions
        return run

    def _probe(self, state: SimState, mechanism: Mechanism,
               survey_rng: np.random.Generator | None, probes: int) -> np.ndarray:
        """Horizon estimates as fresh updaters would draw them at time T."""
        pop = self.population
        if mechanism.kind == "meanfield":
            return np.tile(state.mkv_p, (probes, 1))
        if mechanism.kind == "full":
            return np.tile(class_proportions(state.opinions, pop), (probes, 1))
        if mechanism.m == pop.n_agents:
            return np.tile(class_proportions(state.opinions, pop), (probes, 1))
        if mechanism.kind == "common":
            idx = survey_rng.choice(pop.n_agents, size=mechanism.m,
                                    replace=False, shuffle=False)
            return np.tile(survey_proportions(pop, state.opinions, idx), (probes, 1))
        return _independent_estimates(pop, state.opinions, mechanism.m, probes, survey_rng)


def check_budget(n_agents: int, horizon: int, replications: int,
                 budget_cap: int | None, allow_large: bool) -> None:
    """Refuse runs whose agent-step cost exceeds the cap unless overridden."""
    if allow_large:
        return
    cap = DEFAULT_BUDGET if budget_cap is None else min(budget_cap, DEFAULT_BUDGET)
    cost = int(n_agents) * max(int(horizon), 1) * int(replications)
    if cost > cap:
        raise BudgetError(
            f"run needs {cost:.3g} agent-steps "
            f"(n_agents={n_agents} x horizon={horizon} x replications={replications}), "
            f"above the cap {cap:.3g}; pass allow_large / --allow-large to proceed")


@dataclass
class RunResult:
    """Per-mechanism class-proportion trajectories for every replication,
    plus the standalone recursion trajectory driven by each replication's
    influencer path."""

    scenario_name: str
    horizon: int
    n_classes: int
    labels: list[str]
    proportions: dict[str, np.ndarray]  # label -> (R, T+1, K)
    mkv: np.ndarray                     # (R, T+1, K)

    @property
    def replications(self) -> int:
        return self.mkv.shape[0]

    def to_csv(self, path) -> None:
        """Schema: mechanism,replication,t,k,p with the recursion under the
        mechanism label ``mkv``; 10 significant digits."""
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("mechanism,replication,t,k,p\n")
            for label in self.labels:
                self._write_block(fh, label, self.proportions[label])
            self._write_block(fh, "mkv", self.mkv)

    @staticmethod
    def _write_block(fh, label: str, traj: np.ndarray) -> None:
        reps, t_len, k_len = traj.shape
        for r in range(reps):
            block = traj[r]
            for t in range(t_len):
                row = block[t]
                for k in range(k_len):
                    fh.write(f"{label},{r},{t},{k},{row[k]:.10g}\n")


def _simulate_replication(scenario: "ScenarioConfig", rep: int) -> dict[str, np.ndarray]:
    ctx = ReplicationContext.build(scenario, rep)
    out: dict[str, np.ndarray] = {}
    meanfield_seen = False
    for mech in scenario.mechanisms:
        run = ctx.simulate(mech, scenario.horizon, record=True)
        out[mech.label()] = run.proportions
        if mech.kind == "meanfield":
            out["mkv"] = run.mkv
            meanfield_seen = True
    if not meanfield_seen:
        from .meanfield import iterate_macro

        spec = scenario.population
        p0 = np.asarray(spec.mu) * np.asarray(spec.initial_law)
        out["mkv"] = iterate_macro(ctx.macro, p0, scenario.influencer, scenario.horizon,
                                   h=spec.h, x0_path=ctx.x0_path)
    return out


def run(scenario: "ScenarioConfig", *, allow_large: bool = False,
        threads: int = 1) -> RunResult:
    """Execute every mechanism of the scenario over all replications.

    Replications are independent and may run in parallel; assembly is
    keyed by replication index so the result does not depend on worker
    scheduling.
    """
    check_budget(scenario.n_agents, scenario.horizon, scenario.replications,
                 scenario.budget_cap, allow_large)
    reps = scenario.replications
    labels = [m.label() for m in scenario.mechanisms]
    per_rep: list[dict[str, np.ndarray] | None] = [None] * reps
    if threads > 1 and reps > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=threads) as pool:
            futures = {pool.submit(_simulate_replication, scenario, r): r
                       for r in range(reps)}
            for fut, r in futures.items():
                per_rep[r] = fut.result()
    else:
        for r in range(reps):
            per_rep[r] = _simulate_replication(scenario, r)
    k = scenario.population.n_classes
    t_len = scenario.horizon + 1
    proportions = {label: np.empty((reps, t_len, k)) for label in labels}
    mkv = np.empty((reps, t_len, k))
    for r, rec in enumerate(per_rep):
        for label in labels:
            proportions[label][r] = rec[label]
        mkv[r] = rec["mkv"]
    return RunResult(scenario_name=scenario.name, horizon=scenario.horizon,
                     n_classes=k, labels=labels, proportions=proportions, mkv=mkv)
