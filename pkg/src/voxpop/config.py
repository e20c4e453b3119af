"""Scenario configuration: JSON schema, overrides, and the shipped catalog.

A scenario file is a single JSON object:

    {
      "spec_version": 1,
      "name": "snowball",
      "description": "...",
      "population": {
        "mu": [1.0],
        "inter_class": [[0.8]],
        "influencer_mixture": [[{"weight": 1.0, "c0": [0.15]}]],
        "threshold_law": {"kind": "uniform01"},
        "initial_law": [0.0],
        "h": 1.0
      },
      "n_agents": 10000,
      "influencer": {"kind": "periodic", "half_period": 20, "start_state": 1},
      "mechanisms": ["full", "meanfield"],
      "horizon": 200,
      "replications": 10,
      "master_seed": 20260825,
      "outputs": "out"
    }

``--set key=value`` overrides edit the raw object before parsing. Short
keys cover the common single-class knobs (c, c0, N, T, h, seed, ...);
dotted keys address any nested field directly.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .dynamics import Mechanism
from .errors import ConfigurationError
from .influencer import InfluencerPath
from .population import CoefficientMixture, PopulationSpec, ThresholdLaw

SPEC_VERSION = 1


@dataclass(frozen=True)
class ScenarioConfig:
    name: str
    population: PopulationSpec
    n_agents: int
    influencer: InfluencerPath
    mechanisms: tuple[Mechanism, ...]
    horizon: int
    replications: int
    master_seed: int
    outputs: str = "out"
    budget_cap: int | None = None
    description: str = ""
    spec_version: int = SPEC_VERSION
    enforce_weight_normalization: bool = False


def _require(raw: dict, key: str, kind, where: str = ""):
    field = f"{where}{key}"
    if key not in raw:
        raise ConfigurationError(field, "missing required key")
    value = raw[key]
    if kind is int:
        # bool is an int subclass; reject it explicitly
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigurationError(field, f"expected an integer, got {value!r}")
    elif kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigurationError(field, f"expected a number, got {value!r}")
        value = float(value)
    elif not isinstance(value, kind):
        raise ConfigurationError(field, f"expected {kind.__name__}, got {value!r}")
    return value


def _parse_threshold_law(raw, where: str) -> ThresholdLaw:
    if not isinstance(raw, dict):
        raise ConfigurationError(where, f"expected an object, got {raw!r}")
    kind = raw.get("kind")
    if kind == "uniform01":
        return ThresholdLaw.uniform01()
    if kind == "point":
        return ThresholdLaw.point(_require(raw, "value", float, where + "."))
    if kind == "discrete":
        values = _require(raw, "values", list, where + ".")
        weights = _require(raw, "weights", list, where + ".")
        return ThresholdLaw.discrete(values, weights)
    raise ConfigurationError(where + ".kind",
                             f"must be uniform01, point or discrete, got {kind!r}")


def _parse_mixture(raw, where: str) -> CoefficientMixture:
    if not isinstance(raw, list) or not raw:
        raise ConfigurationError(where, "expected a nonempty list of components")
    weights, vectors = [], []
    for i, comp in enumerate(raw):
        if not isinstance(comp, dict):
            raise ConfigurationError(f"{where}[{i}]", f"expected an object, got {comp!r}")
        weights.append(_require(comp, "weight", float, f"{where}[{i}]."))
        c0 = _require(comp, "c0", list, f"{where}[{i}].")
        vectors.append(tuple(float(v) for v in c0))
    return CoefficientMixture(weights=tuple(weights), vectors=tuple(vectors))


def parse_population(raw: dict, where: str = "population") -> PopulationSpec:
    if not isinstance(raw, dict):
        raise ConfigurationError(where, f"expected an object, got {raw!r}")
    mu = _require(raw, "mu", list, where + ".")
    inter_class = _require(raw, "inter_class", list, where + ".")
    mixtures_raw = _require(raw, "influencer_mixture", list, where + ".")
    if len(mixtures_raw) != len(mu):
        raise ConfigurationError(where + ".influencer_mixture",
                                 f"needs one mixture per class ({len(mu)})")
    mixtures = tuple(_parse_mixture(m, f"{where}.influencer_mixture[{k}]")
                     for k, m in enumerate(mixtures_raw))
    law = _parse_threshold_law(raw.get("threshold_law", {"kind": "uniform01"}),
                               where + ".threshold_law")
    initial = _require(raw, "initial_law", list, where + ".")
    h = float(raw.get("h", 1.0))
    return PopulationSpec(
        mu=tuple(float(v) for v in mu),
        inter_class=tuple(tuple(float(v) for v in row) for row in inter_class),
        influencer_mixture=mixtures,
        threshold_law=law,
        initial_law=tuple(float(v) for v in initial),
        h=h)


def parse_influencer(raw: dict, where: str = "influencer") -> InfluencerPath:
    if not isinstance(raw, dict):
        raise ConfigurationError(where, f"expected an object, got {raw!r}")
    kind = raw.get("kind")
    if kind == "fixed":
        return InfluencerPath.fixed(_require(raw, "x0", list, where + "."))
    if kind == "periodic":
        return InfluencerPath.periodic(
            _require(raw, "half_period", int, where + "."),
            start_state=raw.get("start_state", 1),
            m0=raw.get("m0", 1))
    if kind == "markov":
        return InfluencerPath.markov(
            _require(raw, "transition", list, where + "."),
            _require(raw, "initial", list, where + "."),
            m0=raw.get("m0", 1))
    if kind == "explicit":
        return InfluencerPath.explicit(_require(raw, "sequence", list, where + "."))
    raise ConfigurationError(where + ".kind",
                             f"must be fixed, periodic, markov or explicit, got {kind!r}")


def parse_scenario(raw: dict) -> ScenarioConfig:
    """Build and validate a scenario from a raw JSON object."""
    if not isinstance(raw, dict):
        raise ConfigurationError("scenario", "top level must be a JSON object")
    version = raw.get("spec_version", SPEC_VERSION)
    if version != SPEC_VERSION:
        raise ConfigurationError("spec_version",
                                 f"this build reads version {SPEC_VERSION}, got {version!r}")
    name = _require(raw, "name", str)
    if not name:
        raise ConfigurationError("name", "must be nonempty")
    population = parse_population(_require(raw, "population", dict))
    n_agents = _require(raw, "n_agents", int)
    if n_agents < 1:
        raise ConfigurationError("n_agents", f"must be >= 1, got {n_agents}")
    influencer = parse_influencer(_require(raw, "influencer", dict))
    if influencer.m0 != population.n_influencers:
        raise ConfigurationError(
            "influencer", f"path has {influencer.m0} influencers but the population's "
            f"coefficient rows have {population.n_influencers}")
    mech_raw = _require(raw, "mechanisms", list)
    if not mech_raw:
        raise ConfigurationError("mechanisms", "must be nonempty")
    mechanisms = tuple(Mechanism.parse(m) for m in mech_raw)
    labels = [m.label() for m in mechanisms]
    if len(set(labels)) != len(labels):
        raise ConfigurationError("mechanisms", f"duplicate mechanism labels in {labels}")
    for mech in mechanisms:
        if mech.is_survey and mech.m > n_agents:
            raise ConfigurationError(
                "mechanisms", f"{mech.label()} survey exceeds the population size {n_agents}")
    horizon = _require(raw, "horizon", int)
    if horizon < 0:
        raise ConfigurationError("horizon", f"must be >= 0, got {horizon}")
    replications = _require(raw, "replications", int)
    if replications < 1:
        raise ConfigurationError("replications", f"must be >= 1, got {replications}")
    master_seed = _require(raw, "master_seed", int)
    if master_seed < 0:
        raise ConfigurationError("master_seed", f"must be >= 0, got {master_seed}")
    budget_cap = raw.get("budget_cap")
    if budget_cap is not None:
        if isinstance(budget_cap, bool) or not isinstance(budget_cap, int) or budget_cap < 1:
            raise ConfigurationError("budget_cap", f"must be a positive integer, got {budget_cap!r}")
    enforce = bool(raw.get("enforce_weight_normalization", False))
    config = ScenarioConfig(
        name=name, population=population, n_agents=n_agents, influencer=influencer,
        mechanisms=mechanisms, horizon=horizon, replications=replications,
        master_seed=master_seed, outputs=str(raw.get("outputs", "out")),
        budget_cap=budget_cap, description=str(raw.get("description", "")),
        spec_version=version, enforce_weight_normalization=enforce)
    if enforce:
        population.validate_weight_normalization()
    return config


def apply_override(raw: dict, key: str, value) -> None:
    """Apply one --set override to the raw scenario object, in place.

    Short keys: c and c0 rewrite the single-class coefficient blocks
    (lists pass through for multi-class setups), N/n_agents, T/horizon,
    replications, seed/master_seed, h, half_period. Dotted keys write any
    nested field.
    """
    pop = raw.setdefault("population", {})
    if key == "c":
        if isinstance(value, list):
            pop["inter_class"] = value
        else:
            if len(pop.get("mu", [1.0])) != 1:
                raise ConfigurationError("--set c",
                                         "scalar c applies to single-class scenarios only; "
                                         "pass a full matrix as a list of rows")
            pop["inter_class"] = [[float(value)]]
    elif key == "c0":
        if isinstance(value, list):
            pop["influencer_mixture"] = value
        else:
            if len(pop.get("mu", [1.0])) != 1:
                raise ConfigurationError("--set c0",
                                         "scalar c0 applies to single-class scenarios only; "
                                         "pass a full mixture as a list")
            pop["influencer_mixture"] = [[{"weight": 1.0, "c0": [float(value)]}]]
    elif key in ("N", "n_agents"):
        raw["n_agents"] = int(value)
    elif key in ("T", "horizon"):
        raw["horizon"] = int(value)
    elif key == "replications":
        raw["replications"] = int(value)
    elif key in ("seed", "master_seed"):
        raw["master_seed"] = int(value)
    elif key == "h":
        pop["h"] = float(value)
    elif key == "half_period":
        influencer = raw.setdefault("influencer", {})
        influencer["half_period"] = int(value)
    elif key == "mechanisms":
        if not isinstance(value, list):
            raise ConfigurationError("--set mechanisms", "expected a JSON list")
        raw["mechanisms"] = value
    elif "." in key:
        _set_dotted(raw, key, value)
    elif key in ("budget_cap", "outputs", "name", "description"):
        raw[key] = value
    else:
        raise ConfigurationError(f"--set {key}", "unknown override key")


def _set_dotted(raw: dict, dotted: str, value) -> None:
    parts = dotted.split(".")
    node = raw
    for part in parts[:-1]:
        nxt = node.get(part) if isinstance(node, dict) else None
        if not isinstance(nxt, (dict, list)):
            nxt = {}
            node[part] = nxt
        node = nxt
    leaf = parts[-1]
    if isinstance(node, list):
        node[int(leaf)] = value
    else:
        node[leaf] = value


def parse_set_expression(expr: str) -> tuple[str, object]:
    """Split 'key=value', decoding the value as JSON when possible."""
    if "=" not in expr:
        raise ConfigurationError("--set", f"expected key=value, got {expr!r}")
    key, text = expr.split("=", 1)
    key = key.strip()
    if not key:
        raise ConfigurationError("--set", f"empty key in {expr!r}")
    try:
        value = json.loads(text)
    except json.JSONDecodeError:
        value = text
    return key, value


def _catalog_root():
    return resources.files("voxpop").joinpath("catalog")


def list_catalog() -> list[str]:
    """Names of the shipped scenarios, sorted."""
    names = [entry.name[:-5] for entry in _catalog_root().iterdir()
             if entry.name.endswith(".json")]
    return sorted(names)


def _read_scenario_text(ref: str) -> str:
    name = ref[len("catalog/"):] if ref.startswith("catalog/") else ref
    if "/" not in name and "\\" not in name and not name.endswith(".json"):
        entry = _catalog_root().joinpath(name + ".json")
        if entry.is_file():
            return entry.read_text(encoding="utf-8")
        raise ConfigurationError(
            "scenario", f"{name!r} is not in the catalog ({', '.join(list_catalog())}) "
            "and is not a file path")
    path = Path(ref)
    if path.is_file():
        return path.read_text(encoding="utf-8")
    raise ConfigurationError("scenario", f"cannot read scenario file {ref!r}")


def load_scenario(ref: str, overrides=(), seed: int | None = None
                  ) -> tuple[ScenarioConfig, dict]:
    """Resolve a scenario by catalog name or file path, apply overrides,
    and parse. Returns the config plus the resolved raw object (the basis
    for the run manifest's hash)."""
    try:
        raw = json.loads(_read_scenario_text(ref))
    except json.JSONDecodeError as exc:
        raise ConfigurationError("scenario", f"invalid JSON in {ref!r}: {exc}") from exc
    if isinstance(overrides, dict):
        overrides = [f"{k}={json.dumps(v)}" for k, v in overrides.items()]
    for expr in overrides:
        key, value = parse_set_expression(expr)
        apply_override(raw, key, value)
    if seed is not None:
        raw["master_seed"] = int(seed)
    return parse_scenario(raw), raw


def scenario_digest(raw: dict) -> str:
    """Stable content hash of a resolved raw scenario object."""
    canonical = json.dumps(raw, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()
