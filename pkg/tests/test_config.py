"""Scenario JSON parsing, overrides, catalog access, and digests."""

import json

import pytest

from voxpop import (
    ConfigurationError,
    apply_override,
    list_catalog,
    load_scenario,
    parse_scenario,
    scenario_digest,
)
from voxpop.config import parse_set_expression


def raw_scenario(**extra) -> dict:
    base = {
        "spec_version": 1,
        "name": "demo",
        "population": {
            "mu": [1.0],
            "inter_class": [[0.8]],
            "influencer_mixture": [[{"weight": 1.0, "c0": [0.15]}]],
            "threshold_law": {"kind": "uniform01"},
            "initial_law": [0.0],
            "h": 1.0,
        },
        "n_agents": 100,
        "influencer": {"kind": "periodic", "half_period": 20},
        "mechanisms": ["full", "meanfield"],
        "horizon": 50,
        "replications": 2,
        "master_seed": 7,
    }
    base.update(extra)
    return base


# ---------------------------------------------------------------------------
# parsing


def test_parse_scenario_happy_path():
    config = parse_scenario(raw_scenario())
    assert config.name == "demo"
    assert config.population.inter_class == ((0.8,),)
    assert config.influencer.kind == "periodic"
    assert [m.label() for m in config.mechanisms] == ["full", "meanfield"]
    assert config.budget_cap is None
    assert config.outputs == "out"


@pytest.mark.parametrize(
    "mutate,field",
    [
        (lambda r: r.pop("name"), "name"),
        (lambda r: r.pop("population"), "population"),
        (lambda r: r["population"].pop("mu"), "population.mu"),
        (lambda r: r.update(n_agents=0), "n_agents"),
        (lambda r: r.update(n_agents=True), "n_agents"),
        (lambda r: r.update(horizon=-1), "horizon"),
        (lambda r: r.update(horizon="long"), "horizon"),
        (lambda r: r.update(replications=0), "replications"),
        (lambda r: r.update(master_seed=-2), "master_seed"),
        (lambda r: r.update(mechanisms=[]), "mechanisms"),
        (lambda r: r.update(mechanisms=["full", "full"]), "mechanisms"),
        (lambda r: r.update(mechanisms=["common(101)"]), "mechanisms"),
        (lambda r: r.update(spec_version=2), "spec_version"),
        (lambda r: r.update(budget_cap=0), "budget_cap"),
        (lambda r: r["influencer"].update(kind="brownian"), "influencer.kind"),
        (lambda r: r["population"].update(threshold_law={"kind": "gaussian"}),
         "population.threshold_law.kind"),
    ],
)
def test_parse_scenario_names_the_offending_field(mutate, field):
    raw = raw_scenario()
    mutate(raw)
    with pytest.raises(ConfigurationError) as err:
        parse_scenario(raw)
    assert err.value.field == field


def test_influencer_width_must_match_coefficient_rows():
    raw = raw_scenario(influencer={"kind": "fixed", "x0": [1, 0]})
    with pytest.raises(ConfigurationError, match="influencers"):
        parse_scenario(raw)


def test_weight_normalization_enforced_on_request():
    raw = raw_scenario(enforce_weight_normalization=True)
    # 0.8 + 0.15 = 0.95 != 1
    with pytest.raises(ConfigurationError, match="normal"):
        parse_scenario(raw)
    raw["population"]["influencer_mixture"] = [[{"weight": 1.0, "c0": [0.2]}]]
    parse_scenario(raw)


# ---------------------------------------------------------------------------
# overrides


def test_short_overrides_rewrite_single_class_blocks():
    raw = raw_scenario()
    apply_override(raw, "c", 0.5)
    apply_override(raw, "c0", 0.25)
    apply_override(raw, "N", 64)
    apply_override(raw, "T", 10)
    apply_override(raw, "replications", 5)
    apply_override(raw, "seed", 99)
    apply_override(raw, "h", 0.5)
    apply_override(raw, "half_period", 4)
    config = parse_scenario(raw)
    assert config.population.inter_class == ((0.5,),)
    assert config.population.influencer_mixture[0].vectors == ((0.25,),)
    assert config.n_agents == 64
    assert config.horizon == 10
    assert config.replications == 5
    assert config.master_seed == 99
    assert config.population.h == 0.5
    assert config.influencer.half_period == 4


def test_scalar_coefficient_overrides_need_a_single_class():
    raw = raw_scenario()
    raw["population"]["mu"] = [0.5, 0.5]
    with pytest.raises(ConfigurationError, match="single-class"):
        apply_override(raw, "c", 0.5)
    with pytest.raises(ConfigurationError, match="single-class"):
        apply_override(raw, "c0", 0.25)
    # full-matrix form passes through untouched
    apply_override(raw, "c", [[0.1, 0.2], [0.3, 0.4]])
    assert raw["population"]["inter_class"] == [[0.1, 0.2], [0.3, 0.4]]


def test_dotted_overrides_reach_nested_fields():
    raw = raw_scenario()
    apply_override(raw, "population.initial_law", [0.25])
    apply_override(raw, "influencer.start_state", 0)
    config = parse_scenario(raw)
    assert config.population.initial_law == (0.25,)
    assert config.influencer.start_state == 0


def test_mechanisms_override_replaces_the_list():
    raw = raw_scenario()
    apply_override(raw, "mechanisms", ["full", "common(10)"])
    config = parse_scenario(raw)
    assert [m.label() for m in config.mechanisms] == ["full", "common(10)"]
    with pytest.raises(ConfigurationError, match="JSON list"):
        apply_override(raw, "mechanisms", "full")


def test_unknown_override_key_is_an_error():
    with pytest.raises(ConfigurationError, match="unknown override key"):
        apply_override(raw_scenario(), "gamma", 1)


def test_parse_set_expression_decodes_json_values():
    assert parse_set_expression("N=100") == ("N", 100)
    assert parse_set_expression("c=0.5") == ("c", 0.5)
    assert parse_set_expression('mechanisms=["full"]') == ("mechanisms", ["full"])
    assert parse_set_expression("name=alt run") == ("name", "alt run")
    with pytest.raises(ConfigurationError, match="key=value"):
        parse_set_expression("no-equals")
    with pytest.raises(ConfigurationError, match="empty key"):
        parse_set_expression("=5")


# ---------------------------------------------------------------------------
# catalog and files


EXPECTED_CATALOG = {
    "echo_chamber", "fads", "fig1_left", "fig1_right", "fig2", "fig3", "fig4",
    "fig5", "fig6", "fig7", "fig8", "snowball", "toy_half",
}


def test_catalog_lists_the_shipped_scenarios():
    names = list_catalog()
    assert names == sorted(names)
    assert set(names) == EXPECTED_CATALOG


@pytest.mark.parametrize("name", sorted(EXPECTED_CATALOG))
def test_every_catalog_entry_parses(name):
    config, raw = load_scenario(name)
    assert config.name == name
    assert config.replications >= 1
    assert config.description  # every shipped scenario explains itself


def test_catalog_prefix_and_unknown_names():
    direct, _ = load_scenario("snowball")
    prefixed, _ = load_scenario("catalog/snowball")
    assert direct == prefixed
    with pytest.raises(ConfigurationError, match="not in the catalog"):
        load_scenario("fig99")


def test_load_scenario_from_file_with_overrides(tmp_path):
    path = tmp_path / "demo.json"
    path.write_text(json.dumps(raw_scenario()))
    config, raw = load_scenario(str(path), overrides=["N=32", "c=0.5"], seed=123)
    assert config.n_agents == 32
    assert config.master_seed == 123
    assert raw["master_seed"] == 123  # the manifest sees the resolved object
    with pytest.raises(ConfigurationError, match="cannot read"):
        load_scenario(str(tmp_path / "missing.json"))
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ConfigurationError, match="invalid JSON"):
        load_scenario(str(bad))


def test_digest_tracks_content_not_key_order():
    a = raw_scenario()
    b = dict(reversed(list(raw_scenario().items())))
    assert scenario_digest(a) == scenario_digest(b)
    changed = raw_scenario(master_seed=8)
    assert scenario_digest(a) != scenario_digest(changed)
