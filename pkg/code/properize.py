"""
Finite properization

Given M over X = {x_1..x_m}, build M~ over X × X where (x_j, x_k) is the j-th point of the
k-th copy of X. Every agent but the skew agent copies its relation inside each copy
{(., x_k)}; the skew agent copies it inside each offset block X~_l = {(x_j, x_k) : k - j = l mod m}.
Two distinct points can then never be related by all agents.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Any, Dict, List, Mapping, NamedTuple, Optional, Set, Tuple

from bisimulation import Partition
from errors import ModelInputError, ModelValidationError, SingleAgentError
from kripke_model import Edge, RelationalStructure, StateMap, validate
from logging_config import TransformLogger, get_logger
from morphism import projection_map

logger = get_logger(__name__)
transform_log = TransformLogger("properize")

# Joins the two coordinates of a product state id; forbidden inside source ids
COORDINATE_SEPARATOR = "|"


def state_label(state: Any) -> str:
    """Text id of a finite (str) or lazy (labelled) state"""
    return state if isinstance(state, str) else state.label


class ProductState(NamedTuple):
    """(x_j, x_k): ``base`` is the first coordinate, ``tag`` names the copy"""

    base: Any
    tag: Any

    @property
    def label(self) -> str:
        return f"({state_label(self.base)}{COORDINATE_SEPARATOR}{state_label(self.tag)})"


def parse_product_label(text: str) -> Tuple[str, str]:
    """Split ``(a|b)`` into its coordinate labels"""
    if not (text.startswith("(") and text.endswith(")")) or text.count(COORDINATE_SEPARATOR) != 1:
        raise ModelInputError(f"{text!r} is not a product state id of the form (a|b)")
    base, tag = text[1:-1].split(COORDINATE_SEPARATOR)
    return base, tag


@dataclass(frozen=True)
class ProperizedModel:
    """M~ together with its source and the offset block of every product state"""

    model: RelationalStructure
    source: RelationalStructure
    skew_agent: Optional[int]
    offset_of: Mapping[ProductState, int]

    __hash__ = None

    @property
    def m(self) -> int:
        return len(self.source.states)

    @cached_property
    def _by_id(self) -> Dict[str, ProductState]:
        return {state.label: state for state in self.offset_of}

    def coordinates(self, state_id: str) -> ProductState:
        try:
            return self._by_id[state_id]
        except KeyError:
            raise ModelInputError(f"{state_id!r} is not a state of the properized model") from None

    def block_of(self, state_id: str) -> int:
        return self.offset_of[self.coordinates(state_id)]


def _require_properizable(model: RelationalStructure, skew_agent: Optional[int]) -> None:
    diagnostics = validate(model)
    if diagnostics:
        raise ModelValidationError("cannot properize an invalid model", diagnostics)
    if model.n_agents < 2:
        raise SingleAgentError()
    if skew_agent is not None and skew_agent not in model.agents:
        raise ModelInputError(f"skew agent {skew_agent} is not one of the agents 1..{model.n_agents}")
    reserved = [s for s in model.states if COORDINATE_SEPARATOR in s]
    if reserved:
        raise ModelInputError(
            f"state ids may not contain {COORDINATE_SEPARATOR!r}: {', '.join(map(repr, reserved))}"
        )


def _product(model: RelationalStructure, skew_agent: Optional[int]) -> ProperizedModel:
    xs = model.states
    m = len(xs)
    pos = model.position

    def label(j: int, k: int) -> str:
        return ProductState(xs[j], xs[k]).label

    relations: Dict[int, Set[Edge]] = {}
    for agent in model.agents:
        edges: Set[Edge] = set()
        for source, target in model.relations[agent]:
            j, j2 = pos[source], pos[target]
            if agent == skew_agent:
                # one copy of R_i on each block: both ends keep the offset l
                for offset in range(m):
                    edges.add((label(j, (j + offset) % m), label(j2, (j2 + offset) % m)))
            else:
                for k in range(m):
                    edges.add((label(j, k), label(j2, k)))
        relations[agent] = edges

    valuation = {
        proposition: {label(pos[x], k) for x in extension for k in range(m)}
        for proposition, extension in model.valuation.items()
    }
    offset_of = {
        ProductState(xs[j], xs[k]): (k - j) % m for j in range(m) for k in range(m)
    }
    states = [label(j, k) for j in range(m) for k in range(m)]

    product = RelationalStructure.build(states, model.n_agents, relations, valuation)
    return ProperizedModel(product, model, skew_agent, offset_of)


def properize_finite(
    model: RelationalStructure, skew_agent: int = 1
) -> Tuple[ProperizedModel, StateMap]:
    """Proper model M~ with m² states and the projection π: (x_j, x_k) ↦ x_j onto M"""
    _require_properizable(model, skew_agent)
    with transform_log.timed(
        "properize_finite", input_size=len(model.states), skew_agent=skew_agent
    ) as record:
        properized = _product(model, skew_agent)
        record["output_size"] = len(properized.model.states)
        record["edges"] = properized.model.edge_count()
    return properized, projection_map(properized)


def copy_product(model: RelationalStructure) -> Tuple[ProperizedModel, StateMap]:
    """
    The same carrier with every agent copied along the second coordinate.

    This is m disjoint copies of M. It is bisimilar to M but keeps every improper pair of M,
    which is what the skew agent of ``properize_finite`` avoids.
    """
    _require_properizable(model, None)
    with transform_log.timed("copy_product", input_size=len(model.states)) as record:
        product = _product(model, None)
        record["output_size"] = len(product.model.states)
    return product, projection_map(product)


def partition_blocks(properized: ProperizedModel) -> Partition:
    """The offset blocks X~_0 .. X~_{m-1}, in order of l"""
    members: List[List[str]] = [[] for _ in range(properized.m)]
    for state_id in properized.model.states:
        members[properized.block_of(state_id)].append(state_id)
    return Partition(tuple(frozenset(block) for block in members))


def lift_finite(properized: ProperizedModel, state: str, offset: int) -> str:
    """The unique point of X~_l whose first coordinate is ``state``"""
    source = properized.source
    source.require_state(state)
    m = properized.m
    j = source.position[state]
    return ProductState(state, source.states[(j + offset) % m]).label
