"""Closed-form analytics of the affine recursion, checked by simulation.

When thresholds are uniform on [0, 1] and scores stay inside [0, 1], the
recursion P(t+1) = c P(t) + c0 X0(t) is affine, and everything about its
stationary regime has a closed form: moments under a two-state influencer
chain, cumulants under i.i.d. kicks, the exactly-uniform law at c = 1/2,
the best on/off drive cycle, the optimal switch-up rate of a restless
influencer, and the echo-chamber limits of a two-community split.

Run: python3 demos/stationary_analytics.py
CLI equivalents: voxpop analytics stationary|cumulants|cycle|diffusion|echo
"""

import numpy as np

from voxpop import (InfluencerPath, LinearModel, cumulants_iid_single_class,
                    echo_chamber_check, echo_chamber_limits, mkv_iterate,
                    optimal_diffusion_decision, stationary_mean,
                    stationary_samples, stationary_variance_single_class)

# ---------------------------------------------------------------------------
# 1. Two-state influencer chain: stationary mean and variance vs a long run.

alpha, beta, c, c0 = 0.2, 0.3, 0.6, 0.4
model = LinearModel.from_rates([1.0], [[c]], [[c0]])
chain = InfluencerPath.two_state(alpha, beta)
trajectory = mkv_iterate(model, [0.0], chain, 200_000,
                         rng=np.random.default_rng(7))[1000:, 0]
mean = stationary_mean(model, [beta / (alpha + beta)])[0]
variance = stationary_variance_single_class(c, alpha, beta, c0)
print("two-state chain  alpha=0.2 beta=0.3 c=0.6 c0=0.4")
print(f"  mean      closed form {mean:.6f}   simulated {trajectory.mean():.6f}")
print(f"  variance  closed form {variance:.6f}   simulated {trajectory.var():.6f}")

# ---------------------------------------------------------------------------
# 2. i.i.d. kicks: cumulants pass through the geometric sum 1/(1 - c^n).
#    At c = 1/2 with Bernoulli(1/2)/2 kicks the stationary law is exactly
#    Uniform[0, 1] — thinned samples agree with the uniform to KS accuracy.

k1, k2, k3 = cumulants_iid_single_class(0.5, (0.25, 0.0625, 0.0))
print("\ni.i.d. Bernoulli(1/2)/2 kicks at c = 1/2")
print(f"  cumulants k1 = {k1:.6f} (uniform: 0.5)   k2 = {k2:.6f} (uniform: {1/12:.6f})"
      f"   k3 = {k3:.6f}")
samples = np.sort(stationary_samples(0.5, 0.5, 0.5, 0.5, 4000, master_seed=7))
grid = np.arange(1, samples.size + 1) / samples.size
ks = max(np.max(grid - samples), np.max(samples - grid + 1.0 / samples.size))
print(f"  KS distance of 4000 thinned samples to Uniform[0,1]: {ks:.4f}")

# ---------------------------------------------------------------------------
# 3. A restless influencer choosing its switch-up rate: the decision is
#    bang-bang and flips exactly at the closed-form threshold theta*.

alpha, rho, c = 0.2, 0.9, 0.5
print("\nrestless influencer  alpha=0.2 rho=0.9 c=0.5")
for theta in (0.10, 0.1386, 0.1387, 0.20):
    decision = optimal_diffusion_decision(alpha, rho, c, theta)
    choice = "indifferent" if decision.indifferent else f"beta = {decision.beta:.0f}"
    print(f"  theta = {theta:.4f}   threshold {decision.threshold:.6f}   ->  {choice}")

# ---------------------------------------------------------------------------
# 4. Echo chamber: followers track the influencer's on-fraction, the
#    contrarian community's opinion mass collapses geometrically.

limits = echo_chamber_limits(epsilon=0.1, nu=0.3)
check = echo_chamber_check(epsilon=0.1, nu=0.3, t_steps=10_000, master_seed=7)
print("\necho chamber  epsilon=0.1 nu=0.3")
print(f"  follower class mean    limit {limits.class1_mean:.3f}   "
      f"simulated {check.class1_time_mean:.3f}")
print(f"  contrarian class mass  limit {limits.class2_limit:.1f}     "
      f"final {check.class2_final:.2e} after {check.steps} steps")
