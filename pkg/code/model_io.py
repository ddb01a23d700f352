#!/usr/bin/env python3
"""
Model and map serialization - JSON documents validated with pydantic

Model document:
    {"states": ["x1","x2"], "agents": 2,
     "relations": {"1": [["x1","x2"]], "2": [["x1","x1"],["x2","x2"]]},
     "valuation": {"p": ["x2"]}}

Map document:
    {"map": {"(x1|x1)": "x1", ...}}
"""

from collections import Counter
from pathlib import Path
from typing import Dict, List, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from errors import ModelInputError, ModelSchemaError, ModelValidationError
from kripke_model import Diagnostic, RelationalStructure, StateMap, validate
from logging_config import get_logger

logger = get_logger(__name__)

PathLike = Union[str, Path]


class ModelDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    states: List[str] = Field(..., description="Ordered carrier; the order defines state positions")
    agents: int = Field(..., ge=1, description="Number of agents n")
    relations: Dict[str, List[Tuple[str, str]]] = Field(default_factory=dict)
    valuation: Dict[str, List[str]] = Field(default_factory=dict)

    @model_validator(mode="after")
    def check_agent_keys(self) -> "ModelDocument":
        for key in self.relations:
            if not key.isdigit() or key.startswith("0") or int(key) > self.agents:
                raise ValueError(f"relation key {key!r} is not an agent in 1..{self.agents}")
        return self

    def duplicate_edges(self) -> List[Diagnostic]:
        diagnostics = []
        for key in sorted(self.relations, key=int):
            counts = Counter(self.relations[key])
            for edge, count in counts.items():
                if count > 1:
                    diagnostics.append(
                        Diagnostic("duplicate-edge", f"edge {edge} of agent {key} listed {count} times", (int(key), *edge))
                    )
        return diagnostics

    def to_structure(self) -> RelationalStructure:
        return RelationalStructure.build(
            self.states,
            self.agents,
            {int(key): edges for key, edges in self.relations.items()},
            self.valuation,
        )

    @classmethod
    def from_structure(cls, model: RelationalStructure) -> "ModelDocument":
        def edge_key(edge: Tuple[str, str]) -> Tuple[int, int]:
            return model.position.get(edge[0], -1), model.position.get(edge[1], -1)

        return cls(
            states=list(model.states),
            agents=model.n_agents,
            relations={
                str(agent): [list(e) for e in sorted(model.relations[agent], key=edge_key)]
                for agent in sorted(model.relations)
            },
            valuation={p: model.sorted_states(model.valuation[p]) for p in model.propositions},
        )


class MapDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    map: Dict[str, str]


def _read(path: PathLike) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ModelInputError(f"cannot read {path}: {exc}") from exc


def _write(path: PathLike, text: str) -> None:
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise ModelInputError(f"cannot write {path}: {exc}") from exc


def parse_model(text: str, origin: str = "<string>") -> RelationalStructure:
    """Decode and validate a model document"""
    try:
        document = ModelDocument.model_validate_json(text)
    except ValidationError as exc:
        raise ModelSchemaError(f"{origin} is not a model document: {exc}") from exc

    model = document.to_structure()
    diagnostics = document.duplicate_edges() + validate(model)
    if diagnostics:
        raise ModelValidationError(f"{origin} is not a valid model", diagnostics)
    return model


def model_to_json(model: RelationalStructure) -> str:
    return ModelDocument.from_structure(model).model_dump_json(indent=2) + "\n"


def load_model(path: PathLike) -> RelationalStructure:
    model = parse_model(_read(path), str(path))
    logger.debug("model_loaded", path=str(path), states=len(model.states), agents=model.n_agents)
    return model


def save_model(model: RelationalStructure, path: PathLike) -> None:
    _write(path, model_to_json(model))
    logger.debug("model_saved", path=str(path), states=len(model.states))


def load_state_map(path: PathLike, source: RelationalStructure, target: RelationalStructure) -> StateMap:
    """Read a map document; totality is left to the consumer to check"""
    try:
        document = MapDocument.model_validate_json(_read(path))
    except ValidationError as exc:
        raise ModelSchemaError(f"{path} is not a map document: {exc}") from exc
    return StateMap(source, target, dict(document.map))


def state_map_to_json(state_map: StateMap) -> str:
    ordered = {s: state_map.mapping[s] for s in state_map.source.states if s in state_map.mapping}
    return MapDocument(map=ordered).model_dump_json(indent=2) + "\n"


def save_state_map(state_map: StateMap, path: PathLike) -> None:
    _write(path, state_map_to_json(state_map))
