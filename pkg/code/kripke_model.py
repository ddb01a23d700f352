"""
Relational Structures - finite multi-agent Kripke models
The carrier, per-agent accessibility relations and valuation every other module builds on
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Set, Tuple

from errors import ModelInputError
from logging_config import get_logger

logger = get_logger(__name__)

Edge = Tuple[str, str]


@dataclass(frozen=True)
class Diagnostic:
    """One violated model invariant together with the offending element"""

    code: str
    message: str
    element: object = None

    def __str__(self) -> str:
        return f"{self.code}: {self.message}"


@dataclass(frozen=True, eq=True)
class RelationalStructure:
    """
    M = (X, (R_i), v) over an ordered carrier.

    The position of a state in ``states`` is its enumeration index; the properization
    arithmetic depends on it, so two models with the same sets but different orders are
    different models. Relations are keyed by agent index (1-based) and hold every agent
    1..n_agents, empty when the agent has no edges.
    """

    states: Tuple[str, ...]
    n_agents: int
    relations: Mapping[int, FrozenSet[Edge]]
    valuation: Mapping[str, FrozenSet[str]] = field(default_factory=dict)

    __hash__ = None  # relations/valuation are mappings

    @classmethod
    def build(
        cls,
        states: Iterable[str],
        n_agents: int,
        relations: Optional[Mapping[int, Iterable[Iterable[str]]]] = None,
        valuation: Optional[Mapping[str, Iterable[str]]] = None,
    ) -> "RelationalStructure":
        """Normalize plain collections into a model; performs no validation"""
        relations = relations or {}
        normalized: Dict[int, FrozenSet[Edge]] = {
            agent: frozenset() for agent in range(1, max(n_agents, 0) + 1)
        }
        for agent, edges in relations.items():
            normalized[int(agent)] = frozenset((str(a), str(b)) for a, b in edges)
        return cls(
            states=tuple(states),
            n_agents=n_agents,
            relations=normalized,
            valuation={p: frozenset(xs) for p, xs in (valuation or {}).items()},
        )

    @property
    def agents(self) -> range:
        return range(1, self.n_agents + 1)

    @property
    def propositions(self) -> List[str]:
        return sorted(self.valuation)

    def edge_count(self) -> int:
        return sum(len(edges) for edges in self.relations.values())

    @cached_property
    def position(self) -> Dict[str, int]:
        """0-based enumeration index of each state (first occurrence wins)"""
        index: Dict[str, int] = {}
        for pos, state in enumerate(self.states):
            index.setdefault(state, pos)
        return index

    @cached_property
    def _adjacency(self) -> Dict[int, Dict[str, FrozenSet[str]]]:
        adjacency: Dict[int, Dict[str, Set[str]]] = {}
        for agent, edges in self.relations.items():
            table: Dict[str, Set[str]] = {}
            for source, target in edges:
                table.setdefault(source, set()).add(target)
            adjacency[agent] = table
        return {
            agent: {source: frozenset(targets) for source, targets in table.items()}
            for agent, table in adjacency.items()
        }

    def has_state(self, state: str) -> bool:
        return state in self.position

    def require_agent(self, agent: int) -> None:
        if agent not in self.agents:
            raise ModelInputError(f"unknown agent {agent}; model has agents 1..{self.n_agents}")

    def require_state(self, state: str) -> None:
        if state not in self.position:
            raise ModelInputError(f"unknown state {state!r}")

    def related(self, agent: int, source: str, target: str) -> bool:
        return (source, target) in self.relations.get(agent, frozenset())

    def labels(self, state: str) -> FrozenSet[str]:
        """Propositions true at ``state``"""
        return frozenset(p for p, extension in self.valuation.items() if state in extension)

    def extension_of(self, proposition: str) -> FrozenSet[str]:
        return self.valuation.get(proposition, frozenset())

    def sorted_states(self, states: Iterable[str]) -> List[str]:
        """Order a collection of carrier states by enumeration index"""
        return sorted(states, key=lambda s: self.position.get(s, len(self.states)))


def validate(model: RelationalStructure) -> List[Diagnostic]:
    """Return one diagnostic per violated invariant; an empty list means well-formed"""
    diagnostics: List[Diagnostic] = []

    if not model.states:
        diagnostics.append(Diagnostic("empty-carrier", "model has no states"))

    seen: Set[str] = set()
    for state in model.states:
        if state in seen:
            diagnostics.append(Diagnostic("duplicate-state", f"state {state!r} listed twice", state))
        seen.add(state)

    if model.n_agents < 1:
        diagnostics.append(
            Diagnostic("bad-agent-count", f"n_agents must be >= 1, got {model.n_agents}", model.n_agents)
        )

    for agent in sorted(model.relations):
        edges = model.relations[agent]
        if agent not in model.agents:
            diagnostics.append(
                Diagnostic("unknown-agent", f"relation given for agent {agent} outside 1..{model.n_agents}", agent)
            )
        for source, target in sorted(edges):
            for endpoint in (source, target):
                if endpoint not in seen:
                    diagnostics.append(
                        Diagnostic(
                            "dangling-endpoint",
                            f"edge ({source}, {target}) of agent {agent} uses unknown state {endpoint!r}",
                            (agent, source, target),
                        )
                    )
                    break

    for proposition in sorted(model.valuation):
        if not proposition:
            diagnostics.append(Diagnostic("empty-proposition-name", "proposition names must be nonempty"))
        outside = sorted(model.valuation[proposition] - seen)
        for state in outside:
            diagnostics.append(
                Diagnostic(
                    "valuation-outside-carrier",
                    f"v({proposition}) contains unknown state {state!r}",
                    (proposition, state),
                )
            )

    if diagnostics:
        logger.debug("model_invalid", violations=len(diagnostics))
    return diagnostics


def successors(model: RelationalStructure, agent: int, state: str) -> FrozenSet[str]:
    """R_i(x) = {y : x R_i y}"""
    model.require_agent(agent)
    model.require_state(state)
    return model._adjacency.get(agent, {}).get(state, frozenset())


@dataclass(frozen=True)
class StateMap:
    """A map between the carriers of two models, stored as an explicit table"""

    source: RelationalStructure
    target: RelationalStructure
    mapping: Mapping[str, str]

    __hash__ = None

    def __call__(self, state: str) -> str:
        try:
            return self.mapping[state]
        except KeyError:
            raise ModelInputError(f"state {state!r} is not in the domain of the map") from None

    @classmethod
    def identity(cls, model: RelationalStructure) -> "StateMap":
        return cls(model, model, {state: state for state in model.states})

    def diagnostics(self) -> List[str]:
        """Totality and range problems, in source/target state order"""
        problems = [f"source state {s!r} is unmapped" for s in self.source.states if s not in self.mapping]
        problems += [
            f"{s!r} maps to {t!r}, which is not a target state"
            for s, t in self.mapping.items()
            if not self.target.has_state(t)
        ]
        problems += [f"{s!r} is not a source state" for s in self.mapping if not self.source.has_state(s)]
        return problems

    def is_total(self) -> bool:
        return not self.diagnostics()

    def image(self) -> FrozenSet[str]:
        return frozenset(self.mapping[s] for s in self.source.states if s in self.mapping)

    def is_surjective(self) -> bool:
        return self.image() >= frozenset(self.target.states)

    def fiber(self, state: str) -> List[str]:
        """Preimage of a target state, in source order"""
        return [s for s in self.source.states if self.mapping.get(s) == state]

    def compose(self, after: "StateMap") -> "StateMap":
        """``after`` ∘ ``self``: first this map, then ``after``"""
        return StateMap(
            self.source,
            after.target,
            {s: after.mapping[t] for s, t in self.mapping.items() if t in after.mapping},
        )


def disjoint_union(
    left: RelationalStructure, right: RelationalStructure
) -> Tuple[RelationalStructure, StateMap, StateMap]:
    """
    Tagged union of two models over the same agents.

    States of ``left`` become ``1:x`` and states of ``right`` become ``2:x``; the tag is
    split off at the first colon, so any state id is admissible.
    """
    if left.n_agents != right.n_agents:
        raise ModelInputError(
            f"cannot join models with {left.n_agents} and {right.n_agents} agents"
        )

    def tag(side: int, state: str) -> str:
        return f"{side}:{state}"

    states = [tag(1, s) for s in left.states] + [tag(2, s) for s in right.states]
    relations: Dict[int, Set[Edge]] = {agent: set() for agent in left.agents}
    for side, model in ((1, left), (2, right)):
        for agent, edges in model.relations.items():
            relations.setdefault(agent, set()).update((tag(side, a), tag(side, b)) for a, b in edges)

    valuation: Dict[str, Set[str]] = {}
    for side, model in ((1, left), (2, right)):
        for proposition, extension in model.valuation.items():
            valuation.setdefault(proposition, set()).update(tag(side, s) for s in extension)

    union = RelationalStructure.build(states, left.n_agents, relations, valuation)
    into_left = StateMap(left, union, {s: tag(1, s) for s in left.states})
    into_right = StateMap(right, union, {s: tag(2, s) for s in right.states})
    return union, into_left, into_right
