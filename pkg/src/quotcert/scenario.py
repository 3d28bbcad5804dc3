"""Declarative JSON scenarios: loading, validation and the shipped corpus."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

import jsonschema

from .actions import ActionSpec, Derivation
from .errors import GradingError, PolynomialSyntaxError, QuotcertError, ScenarioError, UnknownVariableError
from .gitfan import GradingData
from .ideal import Ideal
from .poly import Polynomial, PolynomialRing, rational

SCENARIO_SCHEMA = "scenario-v1.schema.json"
REPORT_SCHEMA = "report-v1.schema.json"

DEFAULT_TASKS = ["verify", "image", "certify"]


def load_schema(name: str) -> dict:
    return json.loads(resources.files("quotcert.schemas").joinpath(name).read_text())


def corpus_names() -> list:
    return sorted(p.name[:-5] for p in resources.files("quotcert.scenarios").iterdir() if p.name.endswith(".json"))


def resolve(path_or_name: str) -> Path | Any:
    """A file path, or the bare name of a shipped scenario."""
    p = Path(path_or_name)
    if p.exists():
        return p
    if path_or_name in corpus_names():
        return resources.files("quotcert.scenarios").joinpath(path_or_name + ".json")
    raise ScenarioError([f"no scenario file or corpus entry named {path_or_name!r}"])


def read_raw(path_or_name) -> dict:
    src = resolve(str(path_or_name))
    try:
        return json.loads(src.read_text())
    except json.JSONDecodeError as exc:
        raise ScenarioError([f"invalid JSON: {exc}"]) from None


@dataclass
class Scenario:
    name: str
    ring: PolynomialRing
    ideal: Ideal
    charts: list
    derivations: list
    invariants: list  # (name, Polynomial)
    grading: list | None = None
    relations: list | None = None
    weights_to_test: list = field(default_factory=list)
    fiber_points: list = field(default_factory=list)
    random_fibers: int = 0
    tasks: list = field(default_factory=lambda: list(DEFAULT_TASKS))
    flags: dict = field(default_factory=dict)
    notes: str = ""

    @property
    def invariant_ring(self) -> PolynomialRing:
        return PolynomialRing([n for n, _ in self.invariants])

    def action_spec(self, localize: Polynomial | str | None = None) -> ActionSpec:
        """The action data; ``localize`` restricts every chart to D(f)."""
        charts = list(self.charts)
        if localize is not None:
            f = self.ring.parse(localize) if isinstance(localize, str) else localize
            charts = [h * f for h in charts]
        return ActionSpec(self.ring, self.derivations, self.invariants, self.ideal, charts, self.grading)

    def grading_data(self, relations: Ideal | None = None) -> GradingData:
        if self.grading is None:
            raise GradingError(f"scenario {self.name} has no grading")
        R = self.invariant_ring
        if relations is None:
            if self.relations is None:
                raise GradingError(f"scenario {self.name} declares no relations; pass them explicitly")
            relations = Ideal(R, self.relations)
        ideal = relations
        return GradingData(R, ideal, self.grading)


def _parse(ring, text, where, diags):
    try:
        return ring.parse(text)
    except PolynomialSyntaxError as exc:
        diags.append(f"{where}: {exc}")
    except UnknownVariableError as exc:
        diags.append(f"{where}: {exc}")
    return None


def _build(raw: dict, diags: list) -> Scenario | None:
    try:
        ring = PolynomialRing(raw["variables"])
    except ValueError as exc:
        diags.append(f"variables: {exc}")
        return None
    ideal = [_parse(ring, t, f"ideal[{i}]", diags) for i, t in enumerate(raw.get("ideal", []))]
    charts = [_parse(ring, t, f"charts[{i}]", diags) for i, t in enumerate(raw.get("charts", ["1"]))]
    derivations = []
    for k, table in enumerate(raw.get("derivations", [])):
        images = {}
        for var, text in table.items():
            if var not in ring:
                diags.append(f"derivations[{k}]: unknown variable {var!r}")
                continue
            images[var] = _parse(ring, text, f"derivations[{k}].{var}", diags)
        if all(v is not None for v in images.values()):
            derivations.append(Derivation(ring, images))
    invariants = []
    names = [e["name"] for e in raw["invariants"]]
    for i, entry in enumerate(raw["invariants"]):
        if entry["name"] in ring:
            diags.append(f"invariants[{i}]: name {entry['name']!r} clashes with a variable")
        invariants.append((entry["name"], _parse(ring, entry["poly"], f"invariants[{i}].poly", diags)))
    if len(set(names)) != len(names):
        diags.append("invariants: names must be distinct")
    grading = raw.get("grading")
    relations = raw.get("relations")
    if grading is not None:
        if len(grading) != len(invariants):
            diags.append(f"grading: {len(grading)} rows for {len(invariants)} invariants")
        elif len({len(r) for r in grading}) != 1:
            diags.append("grading: rows have different lengths")
        elif len(set(names)) == len(names) and not any(n in ring for n in names):
            R = PolynomialRing(names)
            for i, t in enumerate(relations or []):
                g = _parse(R, t, f"relations[{i}]", diags)
                if g is not None:
                    clash = g.is_homogeneous_for(grading)
                    if clash is not None:
                        diags.append(
                            f"relations[{i}]: {g} is not homogeneous, term weights {list(clash[0])} and {list(clash[1])}"
                        )
        for i, w in enumerate(raw.get("weights_to_test", [])):
            if grading and len(w) != len(grading[0]):
                diags.append(f"weights_to_test[{i}]: length {len(w)} does not match the grading rank")
    elif relations or raw.get("weights_to_test"):
        diags.append("relations and weights_to_test need a grading")
    points = []
    for i, p in enumerate(raw.get("fiber_points", [])):
        if len(p) != len(invariants):
            diags.append(f"fiber_points[{i}]: length {len(p)} does not match {len(invariants)} invariants")
            continue
        try:
            points.append([rational(x if isinstance(x, int) else str(x)) for x in p])
        except (ValueError, ZeroDivisionError) as exc:
            diags.append(f"fiber_points[{i}]: {exc}")
    tasks = raw.get("tasks", DEFAULT_TASKS)
    for t in ("gitfan", "semistable", "pipeline"):
        if t in tasks and grading is None:
            diags.append(f"tasks: {t} needs a grading")
    if diags:
        return None
    return Scenario(
        name=raw["name"],
        ring=ring,
        ideal=Ideal(ring, ideal),
        charts=charts,
        derivations=derivations,
        invariants=invariants,
        grading=grading,
        relations=relations,
        weights_to_test=[tuple(w) for w in raw.get("weights_to_test", [])],
        fiber_points=points,
        random_fibers=raw.get("random_fibers", 0),
        tasks=list(tasks),
        flags=dict(raw.get("flags", {})),
        notes=raw.get("notes", ""),
    )


def validate_raw(raw: Any) -> list:
    """All diagnostics for a decoded scenario; empty when valid.  Never runs heavy computation."""
    validator = jsonschema.Draft202012Validator(load_schema(SCENARIO_SCHEMA))
    diags = [
        f"{'/'.join(str(p) for p in err.absolute_path) or '<root>'}: {err.message}"
        for err in sorted(validator.iter_errors(raw), key=lambda e: list(map(str, e.absolute_path)))
    ]
    if diags:
        return diags
    _build(raw, diags)
    return diags


def validate_scenario(path_or_name) -> list:
    try:
        raw = read_raw(path_or_name)
    except ScenarioError as exc:
        return exc.diagnostics
    return validate_raw(raw)


def load_scenario(source) -> Scenario:
    """Load from a path, a corpus name, or an already-decoded dict."""
    raw = source if isinstance(source, dict) else read_raw(source)
    diags = validate_raw(raw)
    if diags:
        raise ScenarioError(diags)
    diags = []
    sc = _build(raw, diags)
    if sc is None:
        raise ScenarioError(diags)
    return sc


def load_corpus() -> list:
    return [load_scenario(n) for n in corpus_names()]


__all__ = [
    "Scenario",
    "corpus_names",
    "load_corpus",
    "load_scenario",
    "validate_scenario",
    "QuotcertError",
    "Polynomial",
]
