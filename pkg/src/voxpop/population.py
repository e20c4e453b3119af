"""Agent features and i.i.d. population sampling.

An agent is described by an immutable feature tuple: initial opinion ``xi``,
class ``kappa`` (0-based, one of K communities), a row of influencer
coefficients ``c0_row`` (length M0, possibly negative), and an adoption
threshold. A :class:`PopulationSpec` is the distributional description those
features are sampled from; a :class:`Population` is one i.i.d. draw of N
agents, stored column-wise in read-only numpy arrays.

Sampling layout: each agent consumes exactly four uniforms from one
counter-based stream, in agent-major order (class, mixture component,
threshold, initial opinion). Agent i therefore owns slots 4i..4i+3
regardless of the population size, so populations of different sizes drawn
with the same seed share their common prefix — convenient for N-sweeps.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .errors import ConfigurationError

_WEIGHT_TOL = 1e-12

# ---------------------------------------------------------------------------
# distributional building blocks


@dataclass(frozen=True)
class ThresholdLaw:
    """Law of the adoption threshold s_n.

    ``uniform01`` is the only law with an analytic macro function; point
    masses and finite discrete laws are allowed but force the empirical
    macro path.
    """

    kind: str  # "uniform01" | "point" | "discrete"
    values: tuple[float, ...] = ()
    weights: tuple[float, ...] = ()

    @classmethod
    def uniform01(cls) -> "ThresholdLaw":
        return cls("uniform01")

    @classmethod
    def point(cls, value: float) -> "ThresholdLaw":
        return cls("point", (float(value),))

    @classmethod
    def discrete(cls, values: Sequence[float], weights: Sequence[float]) -> "ThresholdLaw":
        return cls("discrete", tuple(float(v) for v in values), tuple(float(w) for w in weights))

    def validate(self, where: str = "threshold_law") -> None:
        if self.kind not in ("uniform01", "point", "discrete"):
            raise ConfigurationError(where + ".kind", f"unknown threshold law {self.kind!r}")
        if self.kind == "point" and len(self.values) != 1:
            raise ConfigurationError(where + ".values", "point law takes exactly one value")
        if self.kind == "discrete":
            if not self.values or len(self.values) != len(self.weights):
                raise ConfigurationError(where + ".values", "values and weights must align and be nonempty")
            if any(w < 0 for w in self.weights):
                raise ConfigurationError(where + ".weights", "weights must be nonnegative")
            if abs(sum(self.weights) - 1.0) > _WEIGHT_TOL:
                raise ConfigurationError(where + ".weights", f"weights sum to {sum(self.weights)!r}, not 1")

    def sample(self, u: np.ndarray) -> np.ndarray:
        """Map uniforms in [0,1) to threshold draws (inverse CDF)."""
        if self.kind == "uniform01":
            return u.astype(np.float64)
        if self.kind == "point":
            return np.full(u.shape, self.values[0])
        cum = np.cumsum(self.weights)
        idx = np.minimum(np.searchsorted(cum, u, side="right"), len(self.values) - 1)
        return np.asarray(self.values, dtype=np.float64)[idx]


@dataclass(frozen=True)
class CoefficientMixture:
    """Finite discrete mixture for the influencer-coefficient row of a class.

    Covers every case in scope: a class-deterministic row is a single
    component, heterogeneous classes list several weighted rows.
    """

    weights: tuple[float, ...]
    vectors: tuple[tuple[float, ...], ...]

    @classmethod
    def point(cls, vector: Sequence[float]) -> "CoefficientMixture":
        return cls((1.0,), (tuple(float(v) for v in vector),))

    def validate(self, m0: int, where: str) -> None:
        if not self.weights or len(self.weights) != len(self.vectors):
            raise ConfigurationError(where, "weights and vectors must align and be nonempty")
        if any(w < 0 for w in self.weights):
            raise ConfigurationError(where + ".weights", "weights must be nonnegative")
        if abs(sum(self.weights) - 1.0) > _WEIGHT_TOL:
            raise ConfigurationError(where + ".weights", f"weights sum to {sum(self.weights)!r}, not 1")
        for j, vec in enumerate(self.vectors):
            if len(vec) != m0:
                raise ConfigurationError(f"{where}.vectors[{j}]", f"expected length {m0}, got {len(vec)}")


# ---------------------------------------------------------------------------
# population specification


@dataclass(frozen=True)
class PopulationSpec:
    """Distributional description of a population.

    Fields
    ------
    mu:
        class probabilities, length K, summing to 1.
    inter_class:
        K x K nonnegative matrix c; row k weighs the class proportions in
        the score of a class-k agent.
    influencer_mixture:
        per class, the conditional mixture of the influencer-coefficient row.
    threshold_law:
        law of the adoption threshold (shared by all classes).
    initial_law:
        per-class Bernoulli parameter for the initial opinion xi.
    h:
        probability an agent reconsiders its opinion at a given step; h=1 is
        the fully synchronized dynamic.
    """

    mu: tuple[float, ...]
    inter_class: tuple[tuple[float, ...], ...]
    influencer_mixture: tuple[CoefficientMixture, ...]
    threshold_law: ThresholdLaw
    initial_law: tuple[float, ...]
    h: float = 1.0

    def __post_init__(self):
        self.validate()

    @property
    def n_classes(self) -> int:
        return len(self.mu)

    @property
    def n_influencers(self) -> int:
        return len(self.influencer_mixture[0].vectors[0])

    def validate(self) -> None:
        k = len(self.mu)
        if k == 0:
            raise ConfigurationError("population.mu", "needs at least one class")
        if any(m < 0 for m in self.mu):
            raise ConfigurationError("population.mu", "class probabilities must be nonnegative")
        if abs(sum(self.mu) - 1.0) > _WEIGHT_TOL:
            raise ConfigurationError("population.mu", f"sums to {sum(self.mu)!r}, not 1")
        if len(self.inter_class) != k or any(len(row) != k for row in self.inter_class):
            raise ConfigurationError("population.inter_class", f"must be a {k}x{k} matrix")
        if any(v < 0 for row in self.inter_class for v in row):
            raise ConfigurationError("population.inter_class", "entries must be nonnegative")
        if len(self.influencer_mixture) != k:
            raise ConfigurationError("population.influencer_mixture", f"needs one mixture per class ({k})")
        m0 = len(self.influencer_mixture[0].vectors[0])
        if m0 < 1:
            raise ConfigurationError("population.influencer_mixture", "needs at least one influencer")
        for kk, mix in enumerate(self.influencer_mixture):
            mix.validate(m0, f"population.influencer_mixture[{kk}]")
        self.threshold_law.validate("population.threshold_law")
        if len(self.initial_law) != k:
            raise ConfigurationError("population.initial_law", f"needs one Bernoulli parameter per class ({k})")
        if any(not (0.0 <= q <= 1.0) for q in self.initial_law):
            raise ConfigurationError("population.initial_law", "parameters must lie in [0,1]")
        if not (0.0 < self.h <= 1.0):
            raise ConfigurationError("population.h", f"must lie in (0,1], got {self.h!r}")

    def validate_weight_normalization(self, tol: float = 1e-9) -> None:
        """Optional check of the mass-normalization convention.

        Requires sum_l mu_l c_{k,l} + sum_m c0_{k,j,m} = 1 for every class k
        and mixture component j. Not enforced by default; the model is more
        general.
        """
        mu = np.asarray(self.mu)
        for k, mix in enumerate(self.influencer_mixture):
            row = float(np.dot(mu, np.asarray(self.inter_class[k])))
            for j, vec in enumerate(mix.vectors):
                total = row + float(np.sum(vec))
                if abs(total - 1.0) > tol:
                    raise ConfigurationError(
                        f"population.influencer_mixture[{k}].vectors[{j}]",
                        f"weight normalization requested but mu-weighted row + c0 sums to {total!r}",
                    )


# ---------------------------------------------------------------------------
# sampled population


@dataclass(frozen=True)
class FeatureVector:
    """One agent's immutable characteristics."""

    xi: int
    kappa: int
    c0_row: tuple[float, ...]
    threshold: float


class _AgentView(Sequence):
    """Lazy per-agent view over the columnar arrays."""

    def __init__(self, population: "Population"):
        self._p = population

    def __len__(self) -> int:
        return self._p.n_agents

    def __getitem__(self, n: int) -> FeatureVector:
        p = self._p
        return FeatureVector(
            xi=int(p.xi[n]),
            kappa=int(p.kappa[n]),
            c0_row=tuple(float(v) for v in p.c0[n]),
            threshold=float(p.thresholds[n]),
        )

    def __iter__(self) -> Iterator[FeatureVector]:
        return (self[n] for n in range(len(self)))


@dataclass(frozen=True)
class Population:
    """One i.i.d. sample of N agents, immutable after construction."""

    spec: PopulationSpec
    xi: np.ndarray          # (N,) uint8 initial opinions
    kappa: np.ndarray       # (N,) int64 class indices, 0-based
    c0: np.ndarray          # (N, M0) float64 influencer coefficients
    thresholds: np.ndarray  # (N,) float64
    class_counts: np.ndarray = field(default=None)  # (K,) int64

    def __post_init__(self):
        counts = np.bincount(self.kappa, minlength=self.spec.n_classes)
        if self.class_counts is None:
            object.__setattr__(self, "class_counts", counts)
        for arr in (self.xi, self.kappa, self.c0, self.thresholds, self.class_counts):
            arr.flags.writeable = False

    @property
    def n_agents(self) -> int:
        return int(self.xi.shape[0])

    @property
    def agents(self) -> _AgentView:
        return _AgentView(self)

    def agent(self, n: int) -> FeatureVector:
        return self.agents[n]


def sample_population(spec: PopulationSpec, n: int, seed) -> Population:
    """Draw an i.i.d. population of ``n`` agents.

    Deterministic given (spec, n, seed); seed may be an int or a
    ``numpy.random.SeedSequence``. Each agent consumes a fixed block of four
    uniforms, so the draw for agent i does not depend on n.
    """
    if n < 1:
        raise ValueError(f"population size must be >= 1, got {n}")
    spec.validate()
    if isinstance(seed, np.random.SeedSequence):
        ss = seed
    else:
        ss = np.random.SeedSequence(int(seed))
    rng = np.random.Generator(np.random.Philox(ss))
    u = rng.random((n, 4))

    k = spec.n_classes
    m0 = spec.n_influencers
    cum_mu = np.cumsum(spec.mu)
    kappa = np.minimum(np.searchsorted(cum_mu, u[:, 0], side="right"), k - 1).astype(np.int64)

    c0 = np.empty((n, m0), dtype=np.float64)
    for kk, mix in enumerate(spec.influencer_mixture):
        sel = kappa == kk
        if not np.any(sel):
            continue
        cum_w = np.cumsum(mix.weights)
        comp = np.minimum(np.searchsorted(cum_w, u[sel, 1], side="right"), len(mix.weights) - 1)
        c0[sel] = np.asarray(mix.vectors, dtype=np.float64)[comp]

    thresholds = spec.threshold_law.sample(u[:, 2])
    initial = np.asarray(spec.initial_law, dtype=np.float64)
    xi = (u[:, 3] < initial[kappa]).astype(np.uint8)

    return Population(spec=spec, xi=xi, kappa=kappa, c0=c0, thresholds=thresholds)


def class_proportions(opinions: np.ndarray, population: Population) -> np.ndarray:
    """Per-class proportion of opinion 1 over the whole population.

    Returns p with p_k = (1/N) sum_i opinions_i 1{kappa_i = k}; p lives in
    S_K = {p >= 0, sum p <= 1} and p_k <= class_counts[k]/N.
    """
    opinions = np.asarray(opinions)
    if opinions.shape != (population.n_agents,):
        raise ValueError(
            f"opinions shape {opinions.shape} does not match population size {population.n_agents}"
        )
    counts = np.bincount(
        population.kappa[opinions.astype(bool)], minlength=population.spec.n_classes
    )
    return counts / population.n_agents
