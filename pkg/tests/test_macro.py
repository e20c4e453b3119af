"""Mean influence function: closed form, empirical analogue, Lipschitz bound."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from voxpop import (
    CoefficientMixture,
    MacroFunction,
    Population,
    PopulationSpec,
    ThresholdLaw,
    UnsupportedOperationError,
    clamp01,
    lipschitz_constant,
    phi_analytic,
    phi_empirical,
    sample_population,
)

from test_population import single_class_spec, two_class_spec


def test_clamp01_bounds():
    v = np.array([-0.5, 0.0, 0.3, 1.0, 2.0])
    assert clamp01(v).tolist() == [0.0, 0.0, 0.3, 1.0, 1.0]


def test_analytic_macro_requires_uniform_thresholds():
    spec = single_class_spec(threshold_law=ThresholdLaw.point(0.5))
    with pytest.raises(UnsupportedOperationError, match="uniform"):
        MacroFunction.analytic(spec)
    # the empirical path accepts any threshold law
    pop = sample_population(spec, 10, seed=0)
    MacroFunction.empirical(pop)


def test_single_class_phi_is_clamped_affine():
    macro = MacroFunction.analytic(single_class_spec(c=0.9, c0=0.05))
    # interior: phi(p) = 0.9 p + 0.05, so 1/2 is a fixed point
    assert phi_analytic(macro, [0.5], [1]) == pytest.approx(0.5, abs=1e-15)
    assert phi_analytic(macro, [0.2], [1]) == pytest.approx(0.23, abs=1e-15)
    # with the influencer off the drive term disappears
    assert phi_analytic(macro, [0.2], [0]) == pytest.approx(0.18, abs=1e-15)


def test_phi_clamps_scores_outside_unit_interval():
    spec = single_class_spec(c=2.0, c0=0.5)
    macro = MacroFunction.analytic(spec)
    # score 2*0.9 + 0.5 = 2.3 clamps to 1, times class mass 1
    assert phi_analytic(macro, [0.9], [1]) == pytest.approx(1.0)

    contrarian = PopulationSpec(
        mu=(1.0,),
        inter_class=((0.1,),),
        influencer_mixture=(CoefficientMixture.point([-1.0]),),
        threshold_law=ThresholdLaw.uniform01(),
        initial_law=(0.5,),
        h=1.0,
    )
    macro = MacroFunction.analytic(contrarian)
    # score 0.05 - 1 < 0 clamps to 0
    assert phi_analytic(macro, [0.5], [1]) == pytest.approx(0.0)


def test_two_class_phi_mixes_rows_and_masses():
    spec = two_class_spec()  # mu = (1/2, 1/2), c = [[1/2, 0], [1/3, 1/3]]
    macro = MacroFunction.analytic(spec)
    p = np.array([0.3, 0.1])
    # class 0: mu * clamp(0.5*0.3 + 0.5)         = 0.5 * 0.65
    # class 1: mu * [0.7*clamp(base) + 0.3*clamp(base - 1)], base = (0.3+0.1)/3
    out = phi_analytic(macro, p, [1])
    base1 = (0.3 + 0.1) / 3.0
    assert out[0] == pytest.approx(0.5 * 0.65, abs=1e-15)
    assert out[1] == pytest.approx(0.5 * 0.7 * base1, abs=1e-15)
    # influencer off: the contrarian component contributes again
    out_off = phi_analytic(macro, p, [0])
    assert out_off[1] == pytest.approx(0.5 * base1, abs=1e-15)


def test_phi_input_validation():
    macro = MacroFunction.analytic(single_class_spec())
    with pytest.raises(ValueError, match="shape"):
        phi_analytic(macro, [0.1, 0.2], [1])
    with pytest.raises(ValueError, match="S_K"):
        phi_analytic(macro, [1.5], [1])
    with pytest.raises(ValueError, match="binary"):
        phi_analytic(macro, [0.5], [0.3])


def test_empirical_phi_uses_strict_inequality():
    spec = single_class_spec(c=1.0, c0=0.0, threshold_law=ThresholdLaw.point(0.5))
    pop = Population(
        spec=spec,
        xi=np.zeros(4, dtype=np.uint8),
        kappa=np.zeros(4, dtype=np.int64),
        c0=np.zeros((4, 1)),
        thresholds=np.full(4, 0.5),
    )
    # scores hit the threshold exactly: a tie must not adopt
    assert phi_empirical(pop, [0.5], [1]).tolist() == [0.0]
    assert phi_empirical(pop, [0.5 + 1e-12], [1]).tolist() == [1.0]


def test_empirical_phi_converges_to_analytic():
    spec = two_class_spec()
    pop = sample_population(spec, 100_000, seed=9)
    macro = MacroFunction.analytic(spec)
    for p, x in ([(0.2, 0.2), (1,)], [(0.45, 0.05), (0,)], [(0.0, 0.5), (1,)]):
        exact = phi_analytic(macro, p, x)
        approx = phi_empirical(pop, p, x)
        assert np.all(np.abs(exact - approx) < 4 / np.sqrt(pop.n_agents))


def test_lipschitz_constant_is_max_interclass_entry():
    assert lipschitz_constant(MacroFunction.analytic(single_class_spec(c=0.9))) == 0.9
    assert lipschitz_constant(MacroFunction.analytic(two_class_spec())) == 0.5
    with pytest.raises(UnsupportedOperationError):
        lipschitz_constant(MacroFunction.empirical(sample_population(single_class_spec(), 5, seed=0)))


@settings(max_examples=40, deadline=None)
@given(
    c=st.floats(0.0, 1.5),
    c0=st.floats(-1.0, 1.0),
    p=st.floats(0.0, 1.0),
    x=st.integers(0, 1),
)
def test_phi_stays_within_class_mass(c, c0, p, x):
    macro = MacroFunction.analytic(single_class_spec(c=c, c0=c0))
    out = phi_analytic(macro, [p], [x])
    assert 0.0 <= out[0] <= 1.0
