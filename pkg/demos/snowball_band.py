"""The snowball effect: social amplification of a periodic drive.

A single community with social-influence weight c = 0.8 watches one
influencer who alternates 20 steps on, 20 steps off. Each on-step adds
c0 = 0.15 to every agent's adoption score, and the community amplifies
that kick by the factor 1/(1 - c) = 5 over time. This script reproduces
the long-run oscillation band with the affine recursion, compares it to
the closed-form limits, and shows how social inertia (the time to forget
the past) grows with c.

Run: python3 demos/snowball_band.py
The CLI equivalent of the closed form is:
    voxpop analytics fluctuation --c 0.8 --c0 0.15 --T 20
"""

import numpy as np

from voxpop import (InfluencerPath, LinearModel, burn_in_steps,
                    fluctuation_limits, mkv_iterate, optimal_cycle)

C, C0, HALF_PERIOD = 0.8, 0.15, 20

# ---------------------------------------------------------------------------
# 1. The closed-form band: where the oscillation extremes settle.

band = fluctuation_limits(C, C0, HALF_PERIOD)
print("closed-form oscillation band")
print(f"  ceiling c0/(1-c)      = {band.ceiling:.7f}   (never exceeded from P(0)=0)")
print(f"  upper limit (limsup)  = {band.upper:.7f}")
print(f"  lower limit (liminf)  = {band.lower:.7f}")
print(f"  amplitude             = {band.amplitude:.7f}")

# ---------------------------------------------------------------------------
# 2. The recursion itself, long enough to converge: the trailing period's
#    extremes should match the limits to near machine precision.

model = LinearModel.from_rates([1.0], [[C]], [[C0]])
drive = InfluencerPath.periodic(HALF_PERIOD, start_state=1)
trajectory = mkv_iterate(model, [0.0], drive, 20_000)[:, 0]
tail = trajectory[-2 * HALF_PERIOD:]
print("\ntrailing period of a 20000-step run")
print(f"  observed max = {tail.max():.7f}   gap to limit {abs(tail.max() - band.upper):.1e}")
print(f"  observed min = {tail.min():.7f}   gap to limit {abs(tail.min() - band.lower):.1e}")

# ---------------------------------------------------------------------------
# 3. Social inertia: stronger coupling means slower adjustment. The burn-in
#    rule of thumb scales like 1/(1 - c).

print("\nsteps to forget the starting point (burn-in rule)")
for c in (0.0, 0.5, 0.8, 0.9, 0.99):
    print(f"  c = {c:4.2f}  ->  {burn_in_steps(c):6d} steps")

# ---------------------------------------------------------------------------
# 4. If the influencer pays per on-step, short cycles win: the per-step
#    average lift V(T) is strictly decreasing in the half-period T.

plan = optimal_cycle(C, C0, 10)
print("\nper-step average lift of a period-2T on/off drive")
for t, v in zip(plan.half_periods, plan.values):
    marker = "  <- best" if t == plan.best_half_period else ""
    print(f"  T = {t:2d}   V(T) = {v:.6f}{marker}")
print(f"  closed form at T = 1: c0/(1+c) = {C0 / (1 + C):.6f}")
