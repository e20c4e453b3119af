"""Exogenous opinion paths of the major influencers.

The M0 influencers form the model's common noise: a binary vector process
X0(t) observed by every agent. Four kinds are supported:

* ``fixed``     — constant vector;
* ``periodic``  — all coordinates equal ``start_state`` on [2kT, (2k+1)T)
  and flipped otherwise, T the half-period;
* ``markov``    — a Markov chain on {0,1}^M0, row-stochastic transition
  matrix over state indices (bit m of the index is coordinate m);
* ``explicit``  — a caller-supplied sequence.

``realize(T)`` returns the path at times 0..T-1 as a (T, M0) uint8 array.
Only ``markov`` consumes randomness.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError

_ROW_TOL = 1e-12


@dataclass(frozen=True)
class InfluencerPath:
    kind: str  # "fixed" | "periodic" | "markov" | "explicit"
    m0: int
    x0: tuple[int, ...] | None = None                     # fixed
    half_period: int | None = None                        # periodic
    start_state: int = 1                                  # periodic
    transition: tuple[tuple[float, ...], ...] | None = None  # markov, (2^M0)^2
    initial: tuple[float, ...] | None = None              # markov, law over states
    sequence: tuple[tuple[int, ...], ...] | None = None   # explicit

    @classmethod
    def fixed(cls, x0) -> "InfluencerPath":
        x0 = tuple(int(v) for v in np.atleast_1d(x0))
        return cls(kind="fixed", m0=len(x0), x0=x0)

    @classmethod
    def periodic(cls, half_period: int, start_state: int = 1, m0: int = 1) -> "InfluencerPath":
        return cls(kind="periodic", m0=m0, half_period=int(half_period), start_state=int(start_state))

    @classmethod
    def markov(cls, transition, initial, m0: int = 1) -> "InfluencerPath":
        q = tuple(tuple(float(v) for v in row) for row in transition)
        return cls(kind="markov", m0=m0, transition=q, initial=tuple(float(v) for v in initial))

    @classmethod
    def two_state(cls, alpha: float, beta: float, initial=None) -> "InfluencerPath":
        """Single influencer with switch rates P[1->0]=alpha, P[0->1]=beta.

        Default initial law is the stationary one, pi = (alpha, beta)/(alpha+beta).
        """
        if initial is None:
            initial = (alpha / (alpha + beta), beta / (alpha + beta))
        return cls.markov([[1.0 - beta, beta], [alpha, 1.0 - alpha]], initial, m0=1)

    @classmethod
    def explicit(cls, sequence) -> "InfluencerPath":
        arr = np.atleast_2d(np.asarray(sequence, dtype=np.int64))
        return cls(kind="explicit", m0=arr.shape[1], sequence=tuple(tuple(int(v) for v in row) for row in arr))

    def __post_init__(self):
        self.validate()

    @property
    def is_random(self) -> bool:
        return self.kind == "markov"

    def validate(self) -> None:
        if self.kind not in ("fixed", "periodic", "markov", "explicit"):
            raise ConfigurationError("influencer.kind", f"unknown kind {self.kind!r}")
        if self.m0 < 1:
            raise ConfigurationError("influencer.m0", "needs at least one influencer")
        if self.kind == "fixed":
            if self.x0 is None or len(self.x0) != self.m0 or any(v not in (0, 1) for v in self.x0):
                raise ConfigurationError("influencer.x0", "must be a binary vector of length m0")
        elif self.kind == "periodic":
            if self.half_period is None or self.half_period < 1:
                raise ConfigurationError("influencer.half_period", "must be >= 1")
            if self.start_state not in (0, 1):
                raise ConfigurationError("influencer.start_state", "must be 0 or 1")
        elif self.kind == "markov":
            n_states = 2 ** self.m0
            q = self.transition
            if q is None or len(q) != n_states or any(len(row) != n_states for row in q):
                raise ConfigurationError("influencer.transition", f"must be {n_states}x{n_states}")
            for i, row in enumerate(q):
                if any(v < 0 for v in row):
                    raise ConfigurationError(f"influencer.transition[{i}]", "entries must be nonnegative")
                if abs(sum(row) - 1.0) > _ROW_TOL:
                    raise ConfigurationError(f"influencer.transition[{i}]", f"row sums to {sum(row)!r}, not 1")
            if self.initial is None or len(self.initial) != n_states:
                raise ConfigurationError("influencer.initial", f"must be a law over {n_states} states")
            if any(v < 0 for v in self.initial) or abs(sum(self.initial) - 1.0) > _ROW_TOL:
                raise ConfigurationError("influencer.initial", "must be a probability vector")
        elif self.kind == "explicit":
            if not self.sequence:
                raise ConfigurationError("influencer.sequence", "must be nonempty")
            if any(len(row) != self.m0 or any(v not in (0, 1) for v in row) for row in self.sequence):
                raise ConfigurationError("influencer.sequence", "rows must be binary vectors of length m0")

    def _decode(self, states: np.ndarray) -> np.ndarray:
        """Map state indices to (len, M0) bit vectors, bit m = coordinate m."""
        bits = (states[:, None] >> np.arange(self.m0)) & 1
        return bits.astype(np.uint8)

    def realize(self, t_steps: int, rng: np.random.Generator | None = None) -> np.ndarray:
        """Path values at times 0..t_steps-1, shape (t_steps, M0)."""
        if t_steps < 0:
            raise ValueError(f"t_steps must be >= 0, got {t_steps}")
        if t_steps == 0:
            return np.zeros((0, self.m0), dtype=np.uint8)
        if self.kind == "fixed":
            return np.tile(np.asarray(self.x0, dtype=np.uint8), (t_steps, 1))
        if self.kind == "periodic":
            t = np.arange(t_steps)
            up = (t // self.half_period) % 2 == 0
            val = np.where(up, self.start_state, 1 - self.start_state).astype(np.uint8)
            return np.repeat(val[:, None], self.m0, axis=1)
        if self.kind == "explicit":
            if len(self.sequence) < t_steps:
                raise ValueError(
                    f"explicit path has {len(self.sequence)} entries, {t_steps} requested"
                )
            return np.asarray(self.sequence[:t_steps], dtype=np.uint8)
        # markov
        if rng is None:
            raise ValueError("a Generator is required to realize a markov path")
        cum_rows = np.cumsum(np.asarray(self.transition, dtype=np.float64), axis=1)
        states = np.empty(t_steps, dtype=np.int64)
        u = rng.random(t_steps + 1)
        state = int(np.searchsorted(np.cumsum(self.initial), u[0], side="right"))
        state = min(state, 2 ** self.m0 - 1)
        rows = [row.tolist() for row in cum_rows]
        us = u[1:].tolist()
        for t in range(t_steps):
            states[t] = state
            row = rows[state]
            uu = us[t]
            s = 0
            while row[s] <= uu and s < len(row) - 1:
                s += 1
            state = s
        return self._decode(states)
