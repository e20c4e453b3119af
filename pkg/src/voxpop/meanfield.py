"""Deterministic-limit recursions and closed-form stationary analytics.

With uniform thresholds on [0, 1] and class point-mass influencer rows,
the limit recursion is affine between influencer switches,

    P(t+1) = (1 - h) P(t) + h (C P(t) + C0 X0(t)),

where C = diag(mu) c and C0 = diag(mu) c0 fold the class masses into the
interaction coefficients. Everything here works at the level of class
proportion vectors; no agent population is involved.

The single-class formulas (fluctuation band, optimal drive cycle, optimal
switch-rate choice, stationary variance and cumulants) assume h = 1.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DomainError
from .influencer import InfluencerPath
from .macro import MacroFunction
from .population import PopulationSpec
from .streams import substream, SCRATCH

_NEAR_UNIT_NORM = 0.999


def _check_unit_interval(name: str, value: float, *, open_right: bool = True,
                         open_left: bool = False) -> float:
    value = float(value)
    lo_ok = value > 0.0 if open_left else value >= 0.0
    hi_ok = value < 1.0 if open_right else value <= 1.0
    if not (lo_ok and hi_ok):
        lo = "(" if open_left else "["
        hi = ")" if open_right else "]"
        raise DomainError(f"{name} must lie in {lo}0, 1{hi}, got {value!r}")
    return value


@dataclass(frozen=True)
class LinearModel:
    """Mass-scaled affine recursion P -> C P + C0 x0, updated at rate h.

    ``coeffs_nonnegative`` and ``mass_bounded`` record whether the raw
    per-class coefficients were nonnegative and summed to at most one,
    which is what keeps the affine map inside the class-proportion set
    without clamping.
    """

    coupling: np.ndarray          # C, (K, K)
    influencer_coupling: np.ndarray  # C0, (K, M0)
    h: float = 1.0
    coeffs_nonnegative: bool = True
    mass_bounded: bool = True

    def __post_init__(self):
        c = np.ascontiguousarray(np.asarray(self.coupling, dtype=np.float64))
        c0 = np.ascontiguousarray(np.asarray(self.influencer_coupling, dtype=np.float64))
        if c.ndim != 2 or c.shape[0] != c.shape[1]:
            raise ConfigurationError("coupling", f"must be square, got shape {c.shape}")
        if c0.ndim != 2 or c0.shape[0] != c.shape[0]:
            raise ConfigurationError(
                "influencer_coupling", f"must have {c.shape[0]} rows, got shape {c0.shape}")
        if not 0.0 < self.h <= 1.0:
            raise ConfigurationError("h", f"must lie in (0, 1], got {self.h!r}")
        norm = float(np.linalg.norm(c))
        if norm >= 1.0:
            raise ConfigurationError(
                "coupling", f"Frobenius norm {norm!r} is not < 1; the recursion need not contract")
        if norm > _NEAR_UNIT_NORM:
            warnings.warn(
                f"coupling norm {norm:.6f} is close to 1; stationary quantities are ill-conditioned",
                stacklevel=2)
        object.__setattr__(self, "coupling", c)
        object.__setattr__(self, "influencer_coupling", c0)
        self.coupling.flags.writeable = False
        self.influencer_coupling.flags.writeable = False

    @classmethod
    def from_rates(cls, mu, inter_class, influencer_rows, h: float = 1.0) -> "LinearModel":
        """Build from class masses and raw per-class coefficient rows."""
        mu = np.asarray(mu, dtype=np.float64)
        c = np.asarray(inter_class, dtype=np.float64)
        c0 = np.atleast_2d(np.asarray(influencer_rows, dtype=np.float64))
        nonneg = bool(np.all(c >= 0.0) and np.all(c0 >= 0.0))
        bounded = bool(np.all(c.sum(axis=1) + c0.sum(axis=1) <= 1.0 + 1e-12))
        return cls(coupling=mu[:, None] * c, influencer_coupling=mu[:, None] * c0,
                   h=h, coeffs_nonnegative=nonneg, mass_bounded=bounded)

    @classmethod
    def from_spec(cls, spec: PopulationSpec) -> "LinearModel":
        """Fold a population description whose influencer rows are class point masses."""
        rows = []
        for k, mixture in enumerate(spec.influencer_mixture):
            if len(mixture.weights) != 1:
                raise ConfigurationError(
                    f"influencer_mixture[{k}]",
                    "affine recursion needs a single coefficient row per class")
            rows.append(mixture.vectors[0])
        mu = np.asarray(spec.mu, dtype=np.float64)
        c = np.asarray(spec.inter_class, dtype=np.float64)
        return cls.from_rates(mu, c, np.asarray(rows, dtype=np.float64), h=spec.h)

    @property
    def n_classes(self) -> int:
        return self.coupling.shape[0]

    @property
    def n_influencers(self) -> int:
        return self.influencer_coupling.shape[1]


def mkv_iterate(model: LinearModel, p0, path: InfluencerPath, t_steps: int,
                rng: np.random.Generator | None = None) -> np.ndarray:
    """Run the affine recursion for t_steps, returning P(0..t_steps), (T+1, K).

    The single-class full-update case (K = 1, h = 1) runs on python floats;
    it is the workhorse behind long stationary-regime sweeps.
    """
    p0 = np.atleast_1d(np.asarray(p0, dtype=np.float64))
    k = model.n_classes
    if p0.shape != (k,):
        raise ValueError(f"p0 must have shape ({k},), got {p0.shape}")
    if t_steps < 0:
        raise ValueError(f"t_steps must be >= 0, got {t_steps}")
    if path.m0 != model.n_influencers:
        raise ValueError(f"path has {path.m0} influencers, model expects {model.n_influencers}")
    x0 = path.realize(t_steps, rng)
    out = np.empty((t_steps + 1, k), dtype=np.float64)
    out[0] = p0
    if k == 1 and model.h == 1.0:
        c = float(model.coupling[0, 0])
        row = model.influencer_coupling[0]
        p = float(p0[0])
        if model.n_influencers == 1:
            c0 = float(row[0])
            flat = out[:, 0]
            for t, x in enumerate(x0[:, 0].tolist()):
                p = c * p + c0 * x if x else c * p
                flat[t + 1] = p
        else:
            drive = (x0 @ row).tolist()
            flat = out[:, 0]
            for t, d in enumerate(drive):
                p = c * p + d
                flat[t + 1] = p
        return out
    h = model.h
    p = p0.copy()
    for t in range(t_steps):
        step = model.coupling @ p + model.influencer_coupling @ x0[t]
        p = (1.0 - h) * p + h * step if h != 1.0 else step
        out[t + 1] = p
    return out


def iterate_macro(macro: MacroFunction, p0, path: InfluencerPath, t_steps: int,
                  h: float = 1.0, rng: np.random.Generator | None = None,
                  x0_path: np.ndarray | None = None) -> np.ndarray:
    """Run the general clamped recursion P(t+1) = (1-h) P(t) + h phi(P(t), X0(t)).

    ``x0_path`` supplies a pre-realized influencer path (shape (t_steps, M0));
    otherwise ``path.realize`` is called.
    """
    p0 = np.atleast_1d(np.asarray(p0, dtype=np.float64))
    k = macro.n_classes
    if p0.shape != (k,):
        raise ValueError(f"p0 must have shape ({k},), got {p0.shape}")
    if t_steps < 0:
        raise ValueError(f"t_steps must be >= 0, got {t_steps}")
    if x0_path is None:
        x0_path = path.realize(t_steps, rng)
    if x0_path.shape[0] < t_steps:
        raise ValueError(f"x0_path has {x0_path.shape[0]} rows, {t_steps} needed")
    out = np.empty((t_steps + 1, k), dtype=np.float64)
    out[0] = p0
    p = p0.copy()
    for t in range(t_steps):
        step = macro(p, x0_path[t])
        p = step if h == 1.0 else (1.0 - h) * p + h * step
        out[t + 1] = p
    return out


def between_switch_closed_form(model: LinearModel, p_at_switch, x0_const, dt: int) -> np.ndarray:
    """P after dt full-update steps under a constant influencer vector.

    Evaluates C^dt p + (I - C^dt)(I - C)^(-1) C0 x0 with the matrix power
    done by repeated squaring, so dt may be very large.
    """
    if model.h != 1.0:
        raise ValueError("closed form assumes full updates (h = 1)")
    if dt < 0:
        raise ValueError(f"dt must be >= 0, got {dt}")
    k = model.n_classes
    p = np.atleast_1d(np.asarray(p_at_switch, dtype=np.float64))
    x0 = np.atleast_1d(np.asarray(x0_const, dtype=np.float64))
    if p.shape != (k,):
        raise ValueError(f"p_at_switch must have shape ({k},), got {p.shape}")
    if x0.shape != (model.n_influencers,):
        raise ValueError(f"x0_const must have shape ({model.n_influencers},), got {x0.shape}")
    eye = np.eye(k)
    c_pow = np.linalg.matrix_power(model.coupling, dt)
    fixed = np.linalg.solve(eye - model.coupling, model.influencer_coupling @ x0)
    return c_pow @ p + (eye - c_pow) @ fixed


def stationary_mean(model: LinearModel, x0_mean) -> np.ndarray:
    """Long-run mean (I - C)^(-1) C0 E[X0] for a stationary influencer law."""
    x0_mean = np.atleast_1d(np.asarray(x0_mean, dtype=np.float64))
    if x0_mean.shape != (model.n_influencers,):
        raise ValueError(f"x0_mean must have shape ({model.n_influencers},), got {x0_mean.shape}")
    eye = np.eye(model.n_classes)
    return np.linalg.solve(eye - model.coupling, model.influencer_coupling @ x0_mean)


def stationary_variance_single_class(c: float, alpha: float, beta: float, c0: float) -> float:
    """Stationary variance of P under a two-state influencer chain, K = 1, h = 1.

    The chain switches 1 -> 0 with probability alpha and 0 -> 1 with
    probability beta per step; its stationary variance c0^2 alpha beta /
    (alpha + beta)^2 is inflated by the geometric memory of the recursion:

        Var = Var(P0_inf) * (1 / (1 - c^2)) * (1 + (1-a-b) c) / (1 - (1-a-b) c).
    """
    if not 0.0 <= c < 1.0:
        raise DomainError(f"c must lie in [0, 1), got {c!r}")
    alpha = _check_unit_interval("alpha", alpha, open_left=True, open_right=False)
    beta = _check_unit_interval("beta", beta, open_left=True, open_right=False)
    r = 1.0 - alpha - beta
    var0 = c0 * c0 * alpha * beta / (alpha + beta) ** 2
    return var0 * (1.0 / (1.0 - c * c)) * (1.0 + r * c) / (1.0 - r * c)


def cumulants_iid_single_class(c: float, cumulants0) -> tuple[float, float, float]:
    """First three stationary cumulants under i.i.d. drive, K = 1, h = 1.

    If the per-step drive c0 X0(t) has cumulants (k1, k2, k3), the
    stationary response sum_s c^s c0 X0(s) has cumulants k_n / (1 - c^n).
    """
    if not 0.0 <= c < 1.0:
        raise DomainError(f"c must lie in [0, 1), got {c!r}")
    k1, k2, k3 = (float(v) for v in cumulants0)
    return (k1 / (1.0 - c), k2 / (1.0 - c * c), k3 / (1.0 - c * c * c))


@dataclass(frozen=True)
class FluctuationBand:
    """Long-run oscillation band of P under a period-2T on/off drive."""

    lower: float   # inf limit: (c^T / (1 + c^T)) c0 / (1 - c)
    upper: float   # sup limit: (1 / (1 + c^T)) c0 / (1 - c)
    ceiling: float  # hard bound c0 / (1 - c), never exceeded from start 0

    @property
    def amplitude(self) -> float:
        return self.upper - self.lower


def fluctuation_limits(c: float, c0: float, half_period: int) -> FluctuationBand:
    """Limits of the oscillation extremes for the single-class on/off drive.

    The extremes obey the pair of recursions

        P_min(k+1) = c^T P_max(k),
        P_max(k)   = c^T P_min(k) + (1 - c^T) c0 / (1 - c),

    whose fixed point is the returned band; P_min = c^T P_max holds exactly.
    """
    if not 0.0 <= c < 1.0:
        raise DomainError(f"c must lie in [0, 1), got {c!r}")
    if c0 <= 0.0:
        raise DomainError(f"c0 must be positive, got {c0!r}")
    if half_period < 1:
        raise ValueError(f"half_period must be >= 1, got {half_period}")
    ceiling = c0 / (1.0 - c)
    ct = c ** half_period
    upper = ceiling / (1.0 + ct)
    lower = ct * upper
    return FluctuationBand(lower=lower, upper=upper, ceiling=ceiling)


@dataclass(frozen=True)
class CyclePlan:
    """Time-average response per unit of on-time across drive half-periods."""

    half_periods: np.ndarray  # 1..t_max
    values: np.ndarray        # V(T) = (1/T) (1 - c^T)/(1 + c^T) c0/(1 - c)
    best_half_period: int
    best_value: float


def optimal_cycle(c: float, c0: float, t_max: int = 50) -> CyclePlan:
    """Tabulate the per-step average lift of a period-2T on/off drive.

    V(T) is strictly decreasing in T, so the best half-period is always 1
    with value c0 / (1 + c); the table makes the comparison explicit.
    """
    if not 0.0 <= c < 1.0:
        raise DomainError(f"c must lie in [0, 1), got {c!r}")
    if c0 <= 0.0:
        raise DomainError(f"c0 must be positive, got {c0!r}")
    if t_max < 1:
        raise ValueError(f"t_max must be >= 1, got {t_max}")
    ts = np.arange(1, t_max + 1)
    ct = c ** ts.astype(np.float64)
    values = (1.0 / ts) * (1.0 - ct) / (1.0 + ct) * (c0 / (1.0 - c))
    best = int(ts[np.argmax(values)])
    assert best == 1, f"per-step average should peak at half-period 1, got {best}"
    return CyclePlan(half_periods=ts, values=values, best_half_period=best,
                     best_value=float(values[0]))


@dataclass(frozen=True)
class DiffusionDecision:
    """Best constant switch-up rate for a mean-reverting influencer chain.

    The discounted objective f(beta) is convex in beta, so its maximum
    over [0, 1] sits at an endpoint. ``threshold`` is the level of theta
    at which the endpoints tie; above it the high rate beta = 1 wins.
    """

    beta: float | None       # 0.0 or 1.0; None when indifferent
    threshold: float         # theta* = rho (1 - rho) / ((1 - rho c)(1 + alpha rho))
    value_at_0: float
    value_at_1: float
    indifferent: bool


def _diffusion_g(beta: np.ndarray, alpha: float, rho: float, c: float) -> np.ndarray:
    """Discounted mean response shift from raising the switch-up rate."""
    return -(beta / (1.0 - rho * c)) * (rho / (1.0 - rho * (1.0 - alpha - beta)))


def diffusion_objective(beta, alpha: float, rho: float, c: float, theta: float) -> np.ndarray:
    """f(beta) = g(beta) + beta theta / (1 - rho); convex in beta."""
    beta = np.asarray(beta, dtype=np.float64)
    return _diffusion_g(beta, alpha, rho, c) + beta * theta / (1.0 - rho)


def optimal_diffusion_decision(alpha: float, rho: float, c: float, theta: float,
                               tie_tol: float = 1e-12) -> DiffusionDecision:
    """Pick the endpoint of [0, 1] maximizing the discounted objective f.

    beta = 1 wins when theta > theta*, beta = 0 when theta < theta*;
    within ``tie_tol`` of theta* the decision is reported as indifferent.
    """
    alpha = _check_unit_interval("alpha", alpha, open_left=True)
    rho = _check_unit_interval("rho", rho, open_left=True)
    if not 0.0 <= c < 1.0:
        raise DomainError(f"c must lie in [0, 1), got {c!r}")
    if theta < 0.0:
        raise DomainError(f"theta must be >= 0, got {theta!r}")
    threshold = rho * (1.0 - rho) / ((1.0 - rho * c) * (1.0 + alpha * rho))
    f0 = float(diffusion_objective(0.0, alpha, rho, c, theta))
    f1 = float(diffusion_objective(1.0, alpha, rho, c, theta))
    if abs(theta - threshold) <= tie_tol:
        return DiffusionDecision(beta=None, threshold=threshold,
                                 value_at_0=f0, value_at_1=f1, indifferent=True)
    beta = 1.0 if theta > threshold else 0.0
    return DiffusionDecision(beta=beta, threshold=threshold,
                             value_at_0=f0, value_at_1=f1, indifferent=False)


@dataclass(frozen=True)
class EchoChamberLimits:
    """Long-run behaviour of the two-class follower/contrarian setup.

    Class 1 averages the influencer's on-fraction 1 - eps; the reported
    asymptotic variance constant is 3 eps (1 - eps) / 4. Class 2 loses a
    nu-fraction of its mass on every on-step, so its mass vanishes.
    """

    class1_mean: float
    class1_variance: float
    class2_limit: float = 0.0


def echo_chamber_limits(epsilon: float, nu: float) -> EchoChamberLimits:
    epsilon = _check_unit_interval("epsilon", epsilon, open_left=True)
    _check_unit_interval("nu", nu, open_left=True, open_right=False)
    return EchoChamberLimits(
        class1_mean=1.0 - epsilon,
        class1_variance=3.0 * epsilon * (1.0 - epsilon) / 4.0,
        class2_limit=0.0,
    )


@dataclass(frozen=True)
class EchoChamberCheck:
    class1_time_mean: float
    class2_final: float
    steps: int


def echo_chamber_check(epsilon: float, nu: float, t_steps: int = 5000,
                       master_seed: int = 0, burn_fraction: float = 0.5) -> EchoChamberCheck:
    """Monte Carlo check of the two-class limit via the within-class recursions.

    Runs rho1(t+1) = (rho1(t) + X0(t)) / 2 and rho2(t+1) = rho2(t)
    (1 - nu X0(t)) with X0 ~ i.i.d. Bernoulli(1 - eps), from rho = (0, 1);
    returns the trailing time-average of rho1 and the final rho2.
    """
    epsilon = _check_unit_interval("epsilon", epsilon, open_left=True)
    nu = _check_unit_interval("nu", nu, open_left=True, open_right=False)
    if t_steps < 2:
        raise ValueError(f"t_steps must be >= 2, got {t_steps}")
    rng = substream(master_seed, SCRATCH, 0)
    x = rng.random(t_steps) < (1.0 - epsilon)
    rho1, rho2 = 0.0, 1.0
    tail_from = int(t_steps * burn_fraction)
    acc = 0.0
    for t, on in enumerate(x.tolist()):
        rho1 = 0.5 * rho1 + 0.5 if on else 0.5 * rho1
        if on:
            rho2 *= 1.0 - nu
        if t >= tail_from:
            acc += rho1
    return EchoChamberCheck(class1_time_mean=acc / (t_steps - tail_from),
                            class2_final=rho2, steps=t_steps)


def burn_in_steps(c: float) -> int:
    """Steps to forget the start: ceil(200 / (1 - c))."""
    if not 0.0 <= c < 1.0:
        raise DomainError(f"c must lie in [0, 1), got {c!r}")
    return math.ceil(200.0 / (1.0 - c))


def thinning_stride(c: float) -> int:
    """Stride between near-independent stationary draws: ceil(50 / (1 - c))."""
    if not 0.0 <= c < 1.0:
        raise DomainError(f"c must lie in [0, 1), got {c!r}")
    return math.ceil(50.0 / (1.0 - c))


def stationary_samples(c: float, c0: float, alpha: float, beta: float,
                       n_samples: int, master_seed: int) -> np.ndarray:
    """Thinned draws of P from the single-class recursion under a two-state chain.

    Starts the chain from its stationary law, discards ``burn_in_steps(c)``
    steps and keeps every ``thinning_stride(c)``-th value. i.i.d. drive
    with success probability q is the special case alpha = 1 - q, beta = q.
    """
    if not 0.0 <= c < 1.0:
        raise DomainError(f"c must lie in [0, 1), got {c!r}")
    alpha = _check_unit_interval("alpha", alpha, open_left=True, open_right=False)
    beta = _check_unit_interval("beta", beta, open_left=True, open_right=False)
    if n_samples < 1:
        raise ValueError(f"n_samples must be >= 1, got {n_samples}")
    burn = burn_in_steps(c)
    stride = thinning_stride(c)
    total = burn + stride * n_samples
    rng = substream(master_seed, SCRATCH, 1)
    u = rng.random(total + 1).tolist()
    x = 1 if u[0] < beta / (alpha + beta) else 0
    p = 0.0
    out = np.empty(n_samples, dtype=np.float64)
    got = 0
    for t in range(total):
        p = c * p + c0 * x if x else c * p
        x = (u[t + 1] >= alpha) if x else (u[t + 1] < beta)
        if t >= burn and (t - burn) % stride == stride - 1:
            out[got] = p
            got += 1
            if got == n_samples:
                break
    return out
