"""voxpop: binary opinion dynamics under social influence and major influencers.

Agents in K communities flip binary opinions by comparing a weighted blend
of community opinion proportions and exogenous influencer opinions against
personal thresholds. The package simulates the exact N-agent process and
three cheaper information regimes (shared polls, private polls, and the
deterministic-given-influencer recursion), quantifies their approximation
errors against closed-form bounds, and evaluates the affine model's
stationary analytics.
"""

__version__ = "0.1.0"

from .config import (ScenarioConfig, apply_override, list_catalog, load_scenario,
                     parse_influencer, parse_population, parse_scenario,
                     scenario_digest)
from .dynamics import (DEFAULT_BUDGET, Mechanism, MechanismRun, ReplicationContext,
                       RunResult, SimState, check_budget, initial_state, run,
                       step_full, step_meanfield, step_survey_common,
                       step_survey_independent, survey_proportions)
from .errors import (BudgetError, ConfigurationError, DomainError,
                     UnsupportedOperationError, VoxpopError)
from .influencer import InfluencerPath
from .macro import (MacroFunction, clamp01, lipschitz_constant, phi_analytic,
                    phi_empirical)
from .meanfield import (CyclePlan, DiffusionDecision, EchoChamberCheck,
                        EchoChamberLimits, FluctuationBand, LinearModel,
                        between_switch_closed_form, burn_in_steps,
                        cumulants_iid_single_class, diffusion_objective,
                        echo_chamber_check, echo_chamber_limits,
                        fluctuation_limits, iterate_macro, mkv_iterate,
                        optimal_cycle, optimal_diffusion_decision,
                        stationary_mean, stationary_samples,
                        stationary_variance_single_class, thinning_stride)
from .metrics import (ErrorReport, error_sweep, global_error, global_error_curve,
                      growth_factor, local_bound, local_error, write_reports)
from .population import (CoefficientMixture, FeatureVector, Population,
                         PopulationSpec, ThresholdLaw, class_proportions,
                         sample_population)

__all__ = [name for name in dir() if not name.startswith("_")]
