"""Run configuration: strict JSON documents validated against a schema."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any

import jsonschema

from .exceptions import ConfigError
from .families import KINDS, FamilyPreset

__all__ = ["SCHEMA", "WalkConfig", "SimulateConfig", "RunConfig", "parse_config", "load_config"]

DEFAULT_EPSILON = 0.05

_INT_LIST = {"type": "array", "items": {"type": "integer"}}
_GENERATORS = {
    "type": "array",
    "minItems": 1,
    "items": {"oneOf": [{"type": "integer"}, _INT_LIST]},
}
_WALK = {
    "type": "object",
    "additionalProperties": False,
    "required": ["moduli", "generators"],
    "properties": {
        "moduli": {"type": "array", "minItems": 1, "items": {"type": "integer", "minimum": 2}},
        "generators": _GENERATORS,
        "require_type": {"type": "boolean"},
    },
}

SCHEMA: dict[str, Any] = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "subcommand": {"type": "string"},
        "walk": _WALK,
        "family": {
            "type": "object",
            "additionalProperties": False,
            "required": ["kind"],
            "properties": {
                "kind": {"enum": list(KINDS)},
                "sizes": {"type": "array", "items": {"type": "integer", "minimum": 1}},
                "pair_rule": {"type": "string"},
                "walks": {"type": "array", "items": _WALK},
            },
        },
        "epsilon": {
            "oneOf": [
                {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
                {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["exp"],
                    "properties": {"exp": {"type": "number", "exclusiveMinimum": 0}},
                },
            ]
        },
        "t_cap": {"type": "integer", "minimum": 1},
        "t_max": {"type": "integer", "minimum": 0},
        "floor": {"type": "number", "minimum": 0},
        "kappa": {"type": "number", "exclusiveMinimum": 0},
        "simulate": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "t": {"type": "integer", "minimum": 0},
                "samples": {"type": "integer", "minimum": 1},
                "seed": {"type": "integer", "minimum": 0, "maximum": 2**64 - 1},
            },
        },
    },
}


@dataclass(frozen=True)
class WalkConfig:
    moduli: tuple[int, ...]
    generators: tuple[tuple[int, ...], ...]
    require_type: bool = False

    @classmethod
    def from_doc(cls, doc: dict) -> WalkConfig:
        gens = tuple((g,) if isinstance(g, int) else tuple(g) for g in doc["generators"])
        return cls(tuple(doc["moduli"]), gens, bool(doc.get("require_type", False)))

    def to_doc(self) -> dict:
        return {"moduli": list(self.moduli), "generators": [list(g) for g in self.generators], "require_type": self.require_type}


@dataclass(frozen=True)
class SimulateConfig:
    t: int = 100
    samples: int = 100_000
    seed: int = 0


@dataclass(frozen=True)
class RunConfig:
    subcommand: str | None = None
    walk: WalkConfig | None = None
    family: FamilyPreset | None = None
    epsilon: float = DEFAULT_EPSILON
    epsilon_neg_log: float | None = None
    t_cap: int | None = None
    t_max: int | None = None
    floor: float | None = None
    kappa: float | None = None
    simulate: SimulateConfig = field(default_factory=SimulateConfig)

    def to_document(self) -> dict:
        doc: dict[str, Any] = {}
        if self.subcommand is not None:
            doc["subcommand"] = self.subcommand
        if self.walk is not None:
            doc["walk"] = self.walk.to_doc()
        if self.family is not None:
            fam: dict[str, Any] = {"kind": self.family.kind, "sizes": list(self.family.sizes)}
            if self.family.pair_rule is not None:
                fam["pair_rule"] = self.family.pair_rule
            if self.family.walks:
                fam["walks"] = [WalkConfig(m, g).to_doc() for m, g in self.family.walks]
            doc["family"] = fam
        doc["epsilon"] = {"exp": self.epsilon_neg_log} if self.epsilon_neg_log is not None else self.epsilon
        for name in ("t_cap", "t_max", "floor", "kappa"):
            value = getattr(self, name)
            if value is not None:
                doc[name] = value
        doc["simulate"] = {"t": self.simulate.t, "samples": self.simulate.samples, "seed": self.simulate.seed}
        return doc

    def dumps(self) -> str:
        return json.dumps(self.to_document(), indent=2, sort_keys=True)


def _error_message(err: jsonschema.ValidationError) -> str:
    where = "/".join(str(p) for p in err.absolute_path) or "<root>"
    return f"config field {where}: {err.message}"


def parse_config(document: str | dict) -> RunConfig:
    """Validate a JSON document (text or parsed) and apply defaults.

    Raises ConfigError naming the offending field.
    """
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from None
    validator = jsonschema.Draft202012Validator(SCHEMA)
    errors = sorted(validator.iter_errors(document), key=lambda e: list(e.absolute_path))
    if errors:
        raise ConfigError(_error_message(jsonschema.exceptions.best_match(errors)))

    walk = WalkConfig.from_doc(document["walk"]) if "walk" in document else None
    family = None
    if "family" in document:
        fam = document["family"]
        walks = tuple(
            (tuple(w["moduli"]), WalkConfig.from_doc(w).generators) for w in fam.get("walks", [])
        )
        try:
            family = FamilyPreset(fam["kind"], tuple(fam.get("sizes", [])), fam.get("pair_rule"), walks)
        except ValueError as exc:
            raise ConfigError(f"config field family: {exc}") from None

    eps = document.get("epsilon", DEFAULT_EPSILON)
    neg_log = None
    if isinstance(eps, dict):
        neg_log = float(eps["exp"])
        eps = math.exp(-neg_log)
    sim = document.get("simulate", {})
    return RunConfig(
        subcommand=document.get("subcommand"),
        walk=walk,
        family=family,
        epsilon=float(eps),
        epsilon_neg_log=neg_log,
        t_cap=document.get("t_cap"),
        t_max=document.get("t_max"),
        floor=document.get("floor"),
        kappa=None if document.get("kappa") is None else float(document["kappa"]),
        simulate=SimulateConfig(**sim),
    )


def load_config(path: str) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(text)
