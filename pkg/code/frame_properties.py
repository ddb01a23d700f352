"""
Properness and frame properties of the accessibility relations
"""

from dataclasses import replace
from enum import Enum
from typing import Dict, Iterable, List, NamedTuple, Optional, Set, Tuple

from errors import ModelInputError
from kripke_model import Edge, RelationalStructure, successors
from logging_config import get_logger

logger = get_logger(__name__)


class FrameProperty(str, Enum):
    """The relation properties the properization preserves"""
    REFLEXIVE = "reflexive"
    SYMMETRIC = "symmetric"
    TRANSITIVE = "transitive"
    SERIAL = "serial"
    EUCLIDEAN = "euclidean"


EQUIVALENCE = (FrameProperty.REFLEXIVE, FrameProperty.SYMMETRIC, FrameProperty.TRANSITIVE)


class PropertyCheck(NamedTuple):
    holds: bool
    counterexample: Optional[Tuple[str, ...]] = None

    def __bool__(self) -> bool:
        return self.holds


class ProperCheck(NamedTuple):
    proper: bool
    witness: Optional[Tuple[str, str]] = None

    def __bool__(self) -> bool:
        return self.proper


def is_proper(model: RelationalStructure) -> ProperCheck:
    """No two distinct states are related by every agent; otherwise the first such pair"""
    first_agent = min(model.agents)
    for x in model.states:
        for y in model.sorted_states(successors(model, first_agent, x)):
            if x != y and all(model.related(agent, x, y) for agent in model.agents):
                logger.debug("improper_pair", source=x, target=y)
                return ProperCheck(False, (x, y))
    return ProperCheck(True)


def _ordered_successors(model: RelationalStructure, agent: int, x: str) -> List[str]:
    return model.sorted_states(successors(model, agent, x))


def check_property(model: RelationalStructure, agent: int, prop: FrameProperty) -> PropertyCheck:
    """Whether R_agent has ``prop``; the counterexample is the first violating tuple in state order"""
    model.require_agent(agent)
    prop = FrameProperty(prop)

    if prop is FrameProperty.REFLEXIVE:
        for x in model.states:
            if not model.related(agent, x, x):
                return PropertyCheck(False, (x,))

    elif prop is FrameProperty.SERIAL:
        for x in model.states:
            if not successors(model, agent, x):
                return PropertyCheck(False, (x,))

    elif prop is FrameProperty.SYMMETRIC:
        for x in model.states:
            for y in _ordered_successors(model, agent, x):
                if not model.related(agent, y, x):
                    return PropertyCheck(False, (x, y))

    elif prop is FrameProperty.TRANSITIVE:
        for x in model.states:
            reachable = successors(model, agent, x)
            for y in _ordered_successors(model, agent, x):
                for z in _ordered_successors(model, agent, y):
                    if z not in reachable:
                        return PropertyCheck(False, (x, y, z))

    elif prop is FrameProperty.EUCLIDEAN:
        for x in model.states:
            ordered = _ordered_successors(model, agent, x)
            for y in ordered:
                for z in ordered:
                    if not model.related(agent, y, z):
                        return PropertyCheck(False, (x, y, z))

    return PropertyCheck(True)


def is_equivalence(model: RelationalStructure, agent: int) -> bool:
    return all(check_property(model, agent, prop) for prop in EQUIVALENCE)


def property_table(model: RelationalStructure) -> Dict[int, Dict[FrameProperty, PropertyCheck]]:
    """Every property for every agent"""
    return {
        agent: {prop: check_property(model, agent, prop) for prop in FrameProperty}
        for agent in model.agents
    }


# ==================== CLOSURES ====================

def _adjacency(states: Iterable[str], edges: Set[Edge]) -> Dict[str, Set[str]]:
    table: Dict[str, Set[str]] = {x: set() for x in states}
    for source, target in edges:
        table[source].add(target)
    return table


def _close_once(prop: FrameProperty, states: Tuple[str, ...], edges: Set[Edge]) -> Set[Edge]:
    if prop is FrameProperty.REFLEXIVE:
        return edges | {(x, x) for x in states}
    if prop is FrameProperty.SYMMETRIC:
        return edges | {(y, x) for x, y in edges}
    if prop is FrameProperty.SERIAL:
        dead_ends = set(states) - {x for x, _ in edges}
        return edges | {(x, x) for x in dead_ends}
    if prop is FrameProperty.TRANSITIVE:
        table = _adjacency(states, edges)
        # Warshall: after pivot k, every path through k is shortcut
        for k in states:
            for i in states:
                if k in table[i]:
                    table[i] |= table[k]
        return {(x, y) for x, targets in table.items() for y in targets}
    if prop is FrameProperty.EUCLIDEAN:
        table = _adjacency(states, edges)
        return edges | {(y, z) for targets in table.values() for y in targets for z in targets}
    raise ModelInputError(f"unknown frame property {prop!r}")


def close_under(model: RelationalStructure, agent: int, props: Iterable[FrameProperty]) -> RelationalStructure:
    """
    Smallest-effort superset of R_agent with every requested property.

    Single closures can break each other (a Euclidean step may undo transitivity), so they
    are applied in turn until no pair is added. Pairs only ever get added inside X × X,
    so this terminates.
    """
    model.require_agent(agent)
    requested = {FrameProperty(p) for p in props}
    wanted = [p for p in FrameProperty if p in requested]
    if not wanted:
        raise ModelInputError("close_under needs at least one frame property")
    unknown = [x for pair in model.relations[agent] for x in pair if not model.has_state(x)]
    if unknown:
        raise ModelInputError(f"relation of agent {agent} uses unknown state {unknown[0]!r}")

    edges = set(model.relations[agent])
    rounds = 0
    while True:
        before = len(edges)
        for prop in wanted:
            edges = _close_once(prop, model.states, edges)
        rounds += 1
        if len(edges) == before:
            break

    logger.debug(
        "relation_closed",
        agent=agent,
        properties=[p.value for p in wanted],
        added=len(edges) - len(model.relations[agent]),
        rounds=rounds,
    )
    relations = dict(model.relations)
    relations[agent] = frozenset(edges)
    return replace(model, relations=relations)
