"""Mean influence function phi and its finite-population analogue.

For class proportions p and influencer states x0, the mean influence
function is

    phi_k(p, x0) = P[ c_k . p + c0_n . x0 > s_n  and  kappa_n = k ]

for a fresh agent n drawn from the population spec. With uniform[0,1]
thresholds and finite coefficient mixtures this is available in closed form:

    phi_k(p, x0) = mu_k * sum_j w_{k,j} * clamp01(c_k . p + c0_{k,j} . x0)

where clamp01 realizes P[v > s] for s ~ uniform[0,1] even when scores leave
[0,1] (negative influencer coefficients push them below 0). The empirical
macro-scale function Phi^N replaces the expectation by the average over a
sampled population, with strict inequality (a tie loses, i.e. yields 0).

The Lipschitz constant of phi in l1 is max_{k,l} c_{k,l}: clamping is
1-Lipschitz and the class masses mu_k sum to 1, so mixtures with negative
influencer coefficients do not change the constant.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import UnsupportedOperationError
from .population import Population, PopulationSpec

_SIMPLEX_TOL = 1e-9


def clamp01(v: np.ndarray) -> np.ndarray:
    return np.clip(v, 0.0, 1.0)


def _check_inputs(p: np.ndarray, x0: np.ndarray, k: int, m0: int) -> tuple[np.ndarray, np.ndarray]:
    p = np.asarray(p, dtype=np.float64).reshape(-1)
    x0 = np.asarray(x0).reshape(-1)
    if p.shape != (k,):
        raise ValueError(f"p has shape {p.shape}, expected ({k},)")
    if np.any(p < -_SIMPLEX_TOL) or p.sum() > 1.0 + _SIMPLEX_TOL:
        raise ValueError(f"p={p!r} is not in S_K (componentwise >= 0, sum <= 1)")
    if x0.shape != (m0,):
        raise ValueError(f"x0 has shape {x0.shape}, expected ({m0},)")
    if not np.all((x0 == 0) | (x0 == 1)):
        raise ValueError(f"x0={x0!r} must be binary")
    return p, x0.astype(np.float64)


@dataclass(frozen=True)
class MacroFunction:
    """phi in analytic or empirical mode; callable as macro(p, x0)."""

    mode: str  # "analytic" | "empirical"
    spec: PopulationSpec | None = None
    population: Population | None = None

    @classmethod
    def analytic(cls, spec: PopulationSpec) -> "MacroFunction":
        if spec.threshold_law.kind != "uniform01":
            raise UnsupportedOperationError(
                "analytic macro requires uniform[0,1] thresholds; "
                f"got {spec.threshold_law.kind!r} (use MacroFunction.empirical)"
            )
        return cls(mode="analytic", spec=spec)

    @classmethod
    def empirical(cls, population: Population) -> "MacroFunction":
        return cls(mode="empirical", population=population)

    @property
    def n_classes(self) -> int:
        return self.spec.n_classes if self.mode == "analytic" else self.population.spec.n_classes

    def __call__(self, p: np.ndarray, x0: np.ndarray) -> np.ndarray:
        if self.mode == "analytic":
            return phi_analytic(self, p, x0)
        return phi_empirical(self.population, p, x0)


def phi_analytic(macro: MacroFunction, p: np.ndarray, x0: np.ndarray) -> np.ndarray:
    """Closed-form phi for uniform thresholds and discrete mixtures.

    For a single point-mass coefficient row per class and scores staying in
    [0,1] this reduces to the linear form phi = C p + C0 x0 with C = M_K c
    and C0 = M_K c0 (M_K the diagonal matrix of class masses).
    """
    if macro.mode != "analytic":
        raise UnsupportedOperationError("phi_analytic needs an analytic-mode MacroFunction")
    spec = macro.spec
    p, x0 = _check_inputs(p, x0, spec.n_classes, spec.n_influencers)
    c = np.asarray(spec.inter_class, dtype=np.float64)
    out = np.empty(spec.n_classes)
    for k, mix in enumerate(spec.influencer_mixture):
        base = float(c[k] @ p)
        acc = 0.0
        for w, vec in zip(mix.weights, mix.vectors):
            acc += w * float(clamp01(base + np.dot(vec, x0)))
        out[k] = spec.mu[k] * acc
    return out


def phi_empirical(population: Population, p: np.ndarray, x0: np.ndarray) -> np.ndarray:
    """Empirical macro-scale function Phi^N over a sampled population.

    Phi^N_k(p, x0) = (1/N) sum_n 1{c_k . p + c0_n . x0 > s_n} 1{kappa_n = k},
    strict inequality.
    """
    spec = population.spec
    p, x0 = _check_inputs(p, x0, spec.n_classes, spec.n_influencers)
    c = np.asarray(spec.inter_class, dtype=np.float64)
    base = (c @ p)[population.kappa] + population.c0 @ x0
    adopt = base > population.thresholds
    counts = np.bincount(population.kappa[adopt], minlength=spec.n_classes)
    return counts / population.n_agents


def lipschitz_constant(macro: MacroFunction) -> float:
    """l1 Lipschitz constant K_phi = max_{k,l} c_{k,l} of the analytic phi."""
    if macro.mode != "analytic":
        raise UnsupportedOperationError("K_phi is only defined for the analytic macro function")
    return float(np.max(np.asarray(macro.spec.inter_class)))
