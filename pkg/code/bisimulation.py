"""
Bisimulation engine - signature-based partition refinement

Blocks start from the atomic profile of each state and are split by the set of blocks
each agent can reach, until the number of blocks stops growing. A naive greatest-fixed-point
computation over pairs is kept alongside as an independent oracle.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Dict, FrozenSet, Hashable, Iterable, Iterator, List, Optional, Set, Tuple

from errors import ModelInputError, ModelValidationError
from kripke_model import RelationalStructure, disjoint_union, successors, validate
from logging_config import TransformLogger, get_logger

logger = get_logger(__name__)
transform_log = TransformLogger("bisimulation")


@dataclass(frozen=True)
class Partition:
    """An ordered list of pairwise-disjoint, nonempty blocks"""

    blocks: Tuple[FrozenSet[str], ...]

    def __len__(self) -> int:
        return len(self.blocks)

    def __iter__(self) -> Iterator[FrozenSet[str]]:
        return iter(self.blocks)

    @cached_property
    def _index(self) -> Dict[str, int]:
        return {state: number for number, block in enumerate(self.blocks) for state in block}

    def index_of(self, state: str) -> int:
        try:
            return self._index[state]
        except KeyError:
            raise ModelInputError(f"state {state!r} is not covered by the partition") from None

    def block_of(self, state: str) -> FrozenSet[str]:
        return self.blocks[self.index_of(state)]

    def same_block(self, first: str, second: str) -> bool:
        return self.index_of(first) == self.index_of(second)

    def as_set(self) -> FrozenSet[FrozenSet[str]]:
        """Order-free form, for comparing partitions"""
        return frozenset(self.blocks)

    def problems(self, states: Iterable[str]) -> List[str]:
        """Why this is not a partition of ``states`` (empty when it is)"""
        states = list(states)
        issues = [f"block {n} is empty" for n, block in enumerate(self.blocks) if not block]
        total = sum(len(block) for block in self.blocks)
        covered = frozenset().union(*self.blocks) if self.blocks else frozenset()
        if total != len(covered):
            issues.append("blocks overlap")
        if covered != frozenset(states):
            issues.append("blocks do not cover the carrier exactly")
        return issues

    @classmethod
    def from_labels(cls, states: Iterable[str], label_of: Dict[str, Hashable]) -> "Partition":
        """Group states by label; blocks ordered by first appearance"""
        grouped: Dict[Hashable, List[str]] = {}
        for state in states:
            grouped.setdefault(label_of[state], []).append(state)
        return cls(tuple(frozenset(members) for members in grouped.values()))

    @classmethod
    def from_equivalence(cls, states: Iterable[str], relation: FrozenSet[Tuple[str, str]]) -> "Partition":
        """Classes of an equivalence relation given as a set of pairs"""
        states = list(states)
        placed: Set[str] = set()
        blocks: List[FrozenSet[str]] = []
        for state in states:
            if state in placed:
                continue
            block = frozenset(other for other in states if (state, other) in relation)
            placed |= block
            blocks.append(block)
        return cls(tuple(blocks))


def atomic_profile(model: RelationalStructure, state: str, propositions: List[str]) -> Tuple[bool, ...]:
    return tuple(state in model.extension_of(p) for p in propositions)


def _refine(model: RelationalStructure, rounds: Optional[int] = None) -> Tuple[Dict[str, int], int]:
    """Block numbers after ``rounds`` refinement steps (or at the fixed point); also the steps taken"""
    propositions = model.propositions
    signature = {x: atomic_profile(model, x, propositions) for x in model.states}
    block = _number(model.states, signature)

    steps = 0
    while rounds is None or steps < rounds:
        signature = {
            x: (
                block[x],
                tuple(
                    frozenset(block[y] for y in successors(model, agent, x))
                    for agent in model.agents
                ),
            )
            for x in model.states
        }
        refined = _number(model.states, signature)
        steps += 1
        if len(set(refined.values())) == len(set(block.values())):
            break
        block = refined
    return block, steps


def _number(states: Iterable[str], signature: Dict[str, Hashable]) -> Dict[str, int]:
    numbering: Dict[Hashable, int] = {}
    return {x: numbering.setdefault(signature[x], len(numbering)) for x in states}


def coarsest_bisimulation(model: RelationalStructure) -> Partition:
    """The coarsest partition that respects valuations and is stable under every R_i"""
    diagnostics = validate(model)
    if diagnostics:
        raise ModelValidationError("cannot refine an invalid model", diagnostics)

    with transform_log.timed("coarsest_bisimulation", input_size=len(model.states)) as record:
        block, steps = _refine(model)
        partition = Partition.from_labels(model.states, block)
        record["output_size"] = len(partition)
        record["rounds"] = steps
    return partition


def _check_pointed(first: RelationalStructure, x: str, second: RelationalStructure, y: str) -> None:
    if first.n_agents != second.n_agents:
        raise ModelInputError(
            f"cannot compare models with {first.n_agents} and {second.n_agents} agents"
        )
    first.require_state(x)
    second.require_state(y)


def bisimilar(first: RelationalStructure, x: str, second: RelationalStructure, y: str) -> bool:
    """(first, x) and (second, y) are bisimilar"""
    _check_pointed(first, x, second, y)
    union, into_first, into_second = disjoint_union(first, second)
    partition = coarsest_bisimulation(union)
    return partition.same_block(into_first(x), into_second(y))


def bounded_bisimilar(
    first: RelationalStructure, x: str, second: RelationalStructure, y: str, depth: int
) -> bool:
    """(first, x) and (second, y) agree up to ``depth`` rounds of back-and-forth"""
    if depth < 0:
        raise ModelInputError(f"depth must be >= 0, got {depth}")
    _check_pointed(first, x, second, y)
    union, into_first, into_second = disjoint_union(first, second)
    block, _ = _refine(union, rounds=depth)
    return block[into_first(x)] == block[into_second(y)]


def relational_bisimulation(model: RelationalStructure) -> FrozenSet[Tuple[str, str]]:
    """
    Greatest bisimulation on the model as a set of pairs.

    Starts from all atomically equivalent pairs and deletes pairs that violate forth or
    back until nothing changes. Cubic and then some; meant as an oracle on small models.
    """
    propositions = model.propositions
    profile = {x: atomic_profile(model, x, propositions) for x in model.states}
    relation = {(x, y) for x in model.states for y in model.states if profile[x] == profile[y]}

    def matched(x: str, y: str) -> bool:
        for agent in model.agents:
            succ_x = successors(model, agent, x)
            succ_y = successors(model, agent, y)
            if any(all((u, v) not in relation for v in succ_y) for u in succ_x):
                return False
            if any(all((u, v) not in relation for u in succ_x) for v in succ_y):
                return False
        return True

    changed = True
    while changed:
        changed = False
        for pair in sorted(relation):
            if not matched(*pair):
                relation.discard(pair)
                changed = True
    logger.debug("relational_bisimulation", states=len(model.states), pairs=len(relation))
    return frozenset(relation)
