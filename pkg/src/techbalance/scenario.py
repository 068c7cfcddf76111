"""Scenario documents: parsing, validation, serialization, analysis.

A scenario is a single JSON document bundling everything a match needs:

- ``assets``:  [{"id", "display_name"}]
- ``edges``:   [{"prerequisite", "product", "required_count"}]
- ``dependency_values``: [{"ancestor", "descendant", "value"}]
- ``ceasefire``: [{"asset", "seconds"}]
- ``simulation`` (optional): tick-loop defaults (income, costs, attack
  success, horizon)

Parsing collects every syntax and semantic problem before failing, so a
broken file reports all of its mistakes at once.  ``builtin:battle``
names the scenario shipped inside the package; it also serves as the
reference fixture for the test suite.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Mapping

from . import graph as graph_mod
from . import metrics
from .errors import ScenarioError
from .graph import AssetType, CreationalEdge, CreationalGraph
from .metrics import CeasefirePolicy, DependencyValueMatrix
from .validation import Issue, ValidationReport

BUILTIN_PREFIX = "builtin:"


@dataclass(frozen=True)
class SimulationDefaults:
    """Tick-loop knobs a scenario may override."""

    max_ticks: int = 1200
    income_per_tick: int = 5
    initial_resources: int = 20
    # None means "one of each root asset".
    initial_holdings: Mapping[str, int] | None = None
    cost_factor: int = 10
    costs: Mapping[str, int] = field(default_factory=dict)
    attack_success_probability: float = 0.75


@dataclass
class Scenario:
    name: str
    graph: CreationalGraph
    matrix: DependencyValueMatrix
    policy: CeasefirePolicy
    simulation: SimulationDefaults = field(default_factory=SimulationDefaults)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Scenario):
            return NotImplemented
        return (
            self.name == other.name
            and self.graph == other.graph
            and dict(self.matrix.values) == dict(other.matrix.values)
            and dict(self.policy.durations) == dict(other.policy.durations)
            and self.policy.interpolate == other.policy.interpolate
            and self.simulation == other.simulation
        )


# ---------------------------------------------------------------------------
# Bundled battle scenario
#
# Fourteen assets in a classic base -> economy -> military progression.
# The dependency values and cease-fire table are hand-tuned so that the
# economy spine (base, bank) dwarfs everything downstream of it.
# ---------------------------------------------------------------------------

_BATTLE_ASSETS = [
    ("base", "Base"),
    ("bank", "Bank"),
    ("barrack", "Barrack"),
    ("university", "University"),
    ("n_weapons", "N.weapons"),
    ("diplomat", "Diplomat"),
    ("missile_gs", "Missile GS"),
    ("missile", "Missile"),
    ("soldiers", "Soldiers"),
    ("commander", "Commander"),
    ("armory", "Armory"),
    ("a_helicopter", "A.Helicopter"),
    ("t_helicopter", "T.Helicopter"),
    ("battle_tank", "Battle Tank"),
]

_BATTLE_EDGES = [
    ("base", "bank"),
    ("bank", "barrack"),
    ("bank", "university"),
    ("bank", "armory"),
    ("barrack", "soldiers"),
    ("soldiers", "commander"),
    ("university", "n_weapons"),
    ("university", "diplomat"),
    ("university", "missile_gs"),
    ("missile_gs", "missile"),
    ("armory", "missile"),
    ("armory", "a_helicopter"),
    ("armory", "t_helicopter"),
    ("armory", "battle_tank"),
]

# (ancestor, descendant) -> dependency value; keyed on reachable pairs,
# direct or transitive.  Row sums: base 55, bank 37, barrack 3,
# university 9, missile_gs 1, soldiers 1, armory 8, all leaves 0.
_BATTLE_VALUES = {
    ("base", "bank"): 1,
    ("base", "barrack"): 2,
    ("base", "university"): 3,
    ("base", "n_weapons"): 5,
    ("base", "diplomat"): 5,
    ("base", "missile_gs"): 5,
    ("base", "missile"): 7,
    ("base", "soldiers"): 4,
    ("base", "commander"): 5,
    ("base", "armory"): 3,
    ("base", "a_helicopter"): 5,
    ("base", "t_helicopter"): 5,
    ("base", "battle_tank"): 5,
    ("bank", "barrack"): 1,
    ("bank", "university"): 1,
    ("bank", "n_weapons"): 4,
    ("bank", "diplomat"): 4,
    ("bank", "missile_gs"): 4,
    ("bank", "missile"): 6,
    ("bank", "soldiers"): 3,
    ("bank", "commander"): 4,
    ("bank", "armory"): 1,
    ("bank", "a_helicopter"): 3,
    ("bank", "t_helicopter"): 3,
    ("bank", "battle_tank"): 3,
    ("barrack", "soldiers"): 1,
    ("barrack", "commander"): 2,
    ("university", "n_weapons"): 2,
    ("university", "diplomat"): 2,
    ("university", "missile_gs"): 2,
    ("university", "missile"): 3,
    ("missile_gs", "missile"): 1,
    ("soldiers", "commander"): 1,
    ("armory", "missile"): 2,
    ("armory", "a_helicopter"): 2,
    ("armory", "t_helicopter"): 2,
    ("armory", "battle_tank"): 2,
}

# No-Attack seconds imposed for destroying each asset.
_BATTLE_CEASEFIRE = {
    "base": 900,
    "bank": 550,
    "barrack": 250,
    "university": 400,
    "n_weapons": 0,
    "diplomat": 0,
    "missile_gs": 120,
    "missile": 0,
    "soldiers": 120,
    "commander": 0,
    "armory": 380,
    "a_helicopter": 0,
    "t_helicopter": 0,
    "battle_tank": 0,
}


def battle_scenario() -> Scenario:
    """The bundled battle scenario (fresh instance each call)."""
    return Scenario(
        name="battle",
        graph=CreationalGraph(
            [AssetType(i, d) for i, d in _BATTLE_ASSETS],
            [CreationalEdge(p, q) for p, q in _BATTLE_EDGES],
        ),
        matrix=DependencyValueMatrix(dict(_BATTLE_VALUES)),
        policy=CeasefirePolicy(dict(_BATTLE_CEASEFIRE)),
        simulation=SimulationDefaults(),
    )


_BUILTINS = {"battle": battle_scenario}


def load_scenario(ref: str | Path) -> Scenario:
    """Load ``builtin:<name>`` or a scenario file path."""
    if isinstance(ref, str) and ref.startswith(BUILTIN_PREFIX):
        name = ref[len(BUILTIN_PREFIX):]
        if name not in _BUILTINS:
            raise ScenarioError(
                [Issue("unknown-builtin", f"no builtin scenario named {name!r}; available: "
                       + ", ".join(sorted(_BUILTINS)))]
            )
        return _BUILTINS[name]()
    path = Path(ref)
    text = path.read_text(encoding="utf-8")
    return parse_scenario(text, name=path.stem)


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------


def parse_scenario(text: str, name: str = "scenario") -> Scenario:
    """Parse and fully validate one scenario document.

    Raises :class:`ScenarioError` carrying every collected issue when
    the document is syntactically broken or semantically inconsistent
    (unknown ids, duplicate edges, values on unreachable pairs, a
    non-monotone cease-fire table, ...).
    """
    issues: list[Issue] = []
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(
            [Issue("syntax", exc.msg, f"line {exc.lineno} column {exc.colno}")]
        ) from None
    if not isinstance(doc, dict):
        raise ScenarioError([Issue("syntax", "top level must be a JSON object")])

    known_keys = {"name", "assets", "edges", "dependency_values", "ceasefire", "simulation"}
    for key in doc:
        if key not in known_keys:
            issues.append(Issue("unknown-key", f"unrecognized top-level key {key!r}"))

    assets = _parse_assets(doc.get("assets"), issues)
    edges = _parse_edges(doc.get("edges"), issues)
    values = _parse_values(doc.get("dependency_values"), issues)
    durations, interpolate = _parse_ceasefire(doc.get("ceasefire"), issues)
    simulation = _parse_simulation(doc.get("simulation"), issues)

    if not assets and not any(i.code == "bad-shape" and i.location == "assets" for i in issues):
        issues.append(Issue("no-assets", "no assets defined", "assets"))

    graph = CreationalGraph(assets, edges)
    matrix = DependencyValueMatrix(values)
    policy = CeasefirePolicy(durations, interpolate=interpolate)

    graph_report = graph_mod.validate(graph)
    issues.extend(graph_report.errors)
    issues.extend(metrics.matrix_issues(graph, matrix))
    if not issues:
        # Policy checks need a sane graph+matrix underneath them.
        issues.extend(metrics.validate_policy(policy, graph, matrix).errors)
    if simulation is not None and not issues:
        issues.extend(_check_simulation_ids(simulation, graph))

    if issues:
        raise ScenarioError(issues)

    scenario = Scenario(name=doc.get("name", name), graph=graph, matrix=matrix, policy=policy)
    if simulation is not None:
        scenario.simulation = simulation
    return scenario


def _parse_assets(raw, issues: list[Issue]) -> list[AssetType]:
    if raw is None:
        return []
    if not isinstance(raw, list):
        issues.append(Issue("bad-shape", "`assets` must be a list", "assets"))
        return []
    out = []
    for i, entry in enumerate(raw):
        loc = f"assets[{i}]"
        if not isinstance(entry, dict) or "id" not in entry:
            issues.append(Issue("bad-shape", "asset entries need an `id`", loc))
            continue
        if not isinstance(entry["id"], str) or not entry["id"]:
            issues.append(Issue("bad-shape", "asset `id` must be a non-empty string", loc))
            continue
        out.append(AssetType(entry["id"], str(entry.get("display_name", "") or "")))
    return out


def _parse_edges(raw, issues: list[Issue]) -> list[CreationalEdge]:
    if raw is None:
        return []
    if not isinstance(raw, list):
        issues.append(Issue("bad-shape", "`edges` must be a list", "edges"))
        return []
    out = []
    for i, entry in enumerate(raw):
        loc = f"edges[{i}]"
        if not isinstance(entry, dict) or "prerequisite" not in entry or "product" not in entry:
            issues.append(Issue("bad-shape", "edge entries need `prerequisite` and `product`", loc))
            continue
        count = entry.get("required_count", 1)
        if not isinstance(count, int) or isinstance(count, bool):
            issues.append(Issue("bad-shape", "`required_count` must be an integer", loc))
            continue
        out.append(CreationalEdge(str(entry["prerequisite"]), str(entry["product"]), count))
    return out


def _parse_values(raw, issues: list[Issue]) -> dict[tuple[str, str], int]:
    if raw is None:
        return {}
    if not isinstance(raw, list):
        issues.append(Issue("bad-shape", "`dependency_values` must be a list", "dependency_values"))
        return {}
    out: dict[tuple[str, str], int] = {}
    for i, entry in enumerate(raw):
        loc = f"dependency_values[{i}]"
        if not isinstance(entry, dict) or not {"ancestor", "descendant", "value"} <= entry.keys():
            issues.append(Issue("bad-shape", "value entries need `ancestor`, `descendant`, `value`", loc))
            continue
        if not isinstance(entry["value"], int) or isinstance(entry["value"], bool):
            issues.append(Issue("bad-shape", "`value` must be an integer", loc))
            continue
        pair = (str(entry["ancestor"]), str(entry["descendant"]))
        if pair in out:
            issues.append(Issue("duplicate-value", f"pair ({pair[0]!r}, {pair[1]!r}) valued twice", loc))
            continue
        out[pair] = entry["value"]
    return out


def _parse_ceasefire(raw, issues: list[Issue]) -> tuple[dict[str, int], bool]:
    interpolate = True
    if raw is None:
        return {}, interpolate
    if isinstance(raw, dict):
        # Allow {"interpolate": false, "entries": [...]} for authors who
        # want hard failures on uncovered assets.
        interpolate = bool(raw.get("interpolate", True))
        raw = raw.get("entries", [])
    if not isinstance(raw, list):
        issues.append(Issue("bad-shape", "`ceasefire` must be a list of entries", "ceasefire"))
        return {}, interpolate
    out: dict[str, int] = {}
    for i, entry in enumerate(raw):
        loc = f"ceasefire[{i}]"
        if not isinstance(entry, dict) or "asset" not in entry or "seconds" not in entry:
            issues.append(Issue("bad-shape", "cease-fire entries need `asset` and `seconds`", loc))
            continue
        if not isinstance(entry["seconds"], int) or isinstance(entry["seconds"], bool):
            issues.append(Issue("bad-shape", "`seconds` must be an integer", loc))
            continue
        asset = str(entry["asset"])
        if asset in out:
            issues.append(Issue("duplicate-ceasefire", f"asset {asset!r} listed twice", loc))
            continue
        out[asset] = entry["seconds"]
    return out, interpolate


_SIM_FIELDS = {
    "max_ticks": int,
    "income_per_tick": int,
    "initial_resources": int,
    "cost_factor": int,
    "attack_success_probability": float,
}


def _parse_simulation(raw, issues: list[Issue]) -> SimulationDefaults | None:
    if raw is None:
        return None
    if not isinstance(raw, dict):
        issues.append(Issue("bad-shape", "`simulation` must be an object", "simulation"))
        return None
    defaults = SimulationDefaults()
    for key, kind in _SIM_FIELDS.items():
        if key not in raw:
            continue
        value = raw[key]
        if kind is float:
            ok = isinstance(value, (int, float)) and not isinstance(value, bool)
        else:
            ok = isinstance(value, int) and not isinstance(value, bool)
        if not ok:
            issues.append(Issue("bad-shape", f"`{key}` must be a {kind.__name__}", f"simulation.{key}"))
            continue
        defaults = replace(defaults, **{key: kind(value)})
    if "costs" in raw:
        if isinstance(raw["costs"], dict) and all(
            isinstance(v, int) and not isinstance(v, bool) for v in raw["costs"].values()
        ):
            defaults = replace(defaults, costs=dict(raw["costs"]))
        else:
            issues.append(Issue("bad-shape", "`costs` must map asset ids to integers", "simulation.costs"))
    if "initial_holdings" in raw:
        if isinstance(raw["initial_holdings"], dict) and all(
            isinstance(v, int) and not isinstance(v, bool) and v >= 0
            for v in raw["initial_holdings"].values()
        ):
            defaults = replace(defaults, initial_holdings=dict(raw["initial_holdings"]))
        else:
            issues.append(
                Issue("bad-shape", "`initial_holdings` must map asset ids to counts >= 0", "simulation.initial_holdings")
            )
    if defaults.max_ticks < 1:
        issues.append(Issue("bad-value", "`max_ticks` must be >= 1", "simulation.max_ticks"))
    if not 0.0 <= defaults.attack_success_probability <= 1.0:
        issues.append(
            Issue("bad-value", "`attack_success_probability` must be in [0, 1]", "simulation.attack_success_probability")
        )
    return defaults


def _check_simulation_ids(sim: SimulationDefaults, graph: CreationalGraph) -> list[Issue]:
    issues = []
    for asset_id in sim.costs:
        if asset_id not in graph:
            issues.append(Issue("unknown-asset", f"cost override for unknown asset {asset_id!r}", "simulation.costs"))
    for asset_id in sim.initial_holdings or {}:
        if asset_id not in graph:
            issues.append(Issue("unknown-asset", f"initial holdings for unknown asset {asset_id!r}", "simulation.initial_holdings"))
    return issues


# ---------------------------------------------------------------------------
# Serialization and whole-scenario validation
# ---------------------------------------------------------------------------


def scenario_to_dict(scenario: Scenario) -> dict:
    doc: dict = {
        "name": scenario.name,
        "assets": [
            {"id": a.id, "display_name": a.display_name} for a in scenario.graph.assets
        ],
        "edges": [
            {"prerequisite": e.prerequisite, "product": e.product, "required_count": e.required_count}
            for e in scenario.graph.edges
        ],
        "dependency_values": [
            {"ancestor": a, "descendant": d, "value": v}
            for (a, d), v in scenario.matrix.values.items()
        ],
        "ceasefire": [
            {"asset": a, "seconds": s} for a, s in scenario.policy.durations.items()
        ],
    }
    sim = scenario.simulation
    doc["simulation"] = {
        "max_ticks": sim.max_ticks,
        "income_per_tick": sim.income_per_tick,
        "initial_resources": sim.initial_resources,
        "cost_factor": sim.cost_factor,
        "attack_success_probability": sim.attack_success_probability,
    }
    if sim.costs:
        doc["simulation"]["costs"] = dict(sim.costs)
    if sim.initial_holdings is not None:
        doc["simulation"]["initial_holdings"] = dict(sim.initial_holdings)
    return doc


def serialize_scenario(scenario: Scenario) -> str:
    return json.dumps(scenario_to_dict(scenario), indent=2) + "\n"


def validate_scenario(scenario: Scenario) -> ValidationReport:
    """Re-run the full validation stack on an in-memory scenario."""
    report = graph_mod.validate(scenario.graph)
    for issue in metrics.matrix_issues(scenario.graph, scenario.matrix):
        report.errors.append(issue)
    if report.ok:
        report.extend(metrics.validate_policy(scenario.policy, scenario.graph, scenario.matrix))
    return report


# ---------------------------------------------------------------------------
# Analysis
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AnalysisRow:
    asset: str
    aggregate_value: int
    ceasefire_seconds: int
    source: str  # "explicit" | "interpolated"


def analyze(scenario: Scenario) -> list[AnalysisRow]:
    """Significance and effective cease-fire for every asset.

    Rows are ordered by aggregate value descending (ties by id), the
    same ordering :func:`metrics.significance_ranking` produces.
    """
    durations = metrics.effective_durations(scenario.policy, scenario.graph, scenario.matrix)
    rows = []
    for asset_id, total in metrics.significance_ranking(scenario.graph, scenario.matrix):
        source = "explicit" if asset_id in scenario.policy.durations else "interpolated"
        rows.append(AnalysisRow(asset_id, total, durations[asset_id], source))
    return rows
