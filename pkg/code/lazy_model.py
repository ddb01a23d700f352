"""
Lazy countably infinite models

A ``LazyModel`` is a finitely presented structure whose carrier is in bijection with ℤ.
Successors, edges and atomic truth are computed on demand, so the countable
properization can be built over an infinite carrier and inspected through finite
windows produced by ``explore``.
"""

from collections import deque
from dataclasses import dataclass
from math import isqrt
from typing import Any, Callable, Dict, FrozenSet, Hashable, Iterable, List, Mapping, NamedTuple, Optional, Set, Tuple

from errors import ModelInputError, ModelValidationError, SingleAgentError
from kripke_model import Edge, RelationalStructure, StateMap, successors, validate
from logging_config import TransformLogger, get_logger
from properize import ProductState, parse_product_label, state_label
from settings import get_settings

logger = get_logger(__name__)
transform_log = TransformLogger("lazy")


class PeriodicState(NamedTuple):
    """The state ``base`` of copy number ``copy`` in the ℤ-indexed union of copies"""

    base: str
    copy: int

    @property
    def label(self) -> str:
        return f"{self.base}@{self.copy}"


# ==================== BIJECTIONS ====================

def zigzag(z: int) -> int:
    """ℤ → ℕ: 0, -1, 1, -2, 2, ... ↦ 0, 1, 2, 3, 4, ..."""
    return 2 * z if z >= 0 else -2 * z - 1


def unzigzag(n: int) -> int:
    if n < 0:
        raise ModelInputError(f"expected a natural number, got {n}")
    return n // 2 if n % 2 == 0 else -(n + 1) // 2


def cantor_pair(a: int, b: int) -> int:
    return (a + b) * (a + b + 1) // 2 + b


def cantor_unpair(n: int) -> Tuple[int, int]:
    w = (isqrt(8 * n + 1) - 1) // 2
    b = n - w * (w + 1) // 2
    return w - b, b


def pair_index(i: int, j: int) -> int:
    """Bijection ℤ × ℤ → ℤ"""
    return unzigzag(cantor_pair(zigzag(i), zigzag(j)))


def unpair_index(z: int) -> Tuple[int, int]:
    a, b = cantor_unpair(zigzag(z))
    return unzigzag(a), unzigzag(b)


# ==================== LAZY MODEL ====================

@dataclass(frozen=True)
class LazyModel:
    """
    On-demand relational structure over a countably infinite carrier.

    ``state_at`` and ``index_of`` are the two directions of the enumeration f; the oracles
    must be pure. Product models built by ``properize_countable`` keep their ``base`` so
    offsets f(y) - f(x) can be computed.
    """

    n_agents: int
    propositions: FrozenSet[str]
    state_at: Callable[[int], Hashable]
    index_of: Callable[[Hashable], int]
    successor_oracle: Callable[[int, Hashable], Iterable[Hashable]]
    edge_oracle: Callable[[int, Hashable, Hashable], bool]
    valuation_oracle: Callable[[str, Hashable], bool]
    skew_agent: Optional[int] = None
    base: Optional["LazyModel"] = None

    def _require_agent(self, agent: int) -> None:
        if not 1 <= agent <= self.n_agents:
            raise ModelInputError(f"unknown agent {agent}; model has agents 1..{self.n_agents}")

    def successors(self, agent: int, state: Hashable) -> Tuple[Hashable, ...]:
        self._require_agent(agent)
        return tuple(self.successor_oracle(agent, state))

    def related(self, agent: int, source: Hashable, target: Hashable) -> bool:
        self._require_agent(agent)
        return self.edge_oracle(agent, source, target)

    def related_indices(self, agent: int, i: int, j: int) -> bool:
        """The edge oracle addressed through the enumeration"""
        return self.related(agent, self.state_at(i), self.state_at(j))

    def holds(self, proposition: str, state: Hashable) -> bool:
        return self.valuation_oracle(proposition, state)

    def _require_base(self) -> "LazyModel":
        if self.base is None:
            raise ModelInputError("offsets and projections exist only on product models")
        return self.base

    def offset(self, state: ProductState) -> int:
        """f(y) - f(x): the block X~_l containing (x, y)"""
        base = self._require_base()
        return base.index_of(state.tag) - base.index_of(state.base)

    def project(self, state: ProductState) -> Hashable:
        """π₁"""
        self._require_base()
        return state.base

    def lift(self, state: Hashable, offset: int) -> ProductState:
        """The unique member of X~_offset over ``state``: (x, f⁻¹(f(x) + offset))"""
        base = self._require_base()
        return ProductState(state, base.state_at(base.index_of(state) + offset))


def periodic_extension(model: RelationalStructure) -> LazyModel:
    """
    ℤ copies of a finite model, side by side.

    (x, t) R_i (x', t') iff t = t' and x R_i x'. The enumeration interleaves the copies through
    the zig-zag order of ℤ: f(x_s, t) = unzigzag(m·zigzag(t) + s), s the 0-based position of x.
    """
    diagnostics = validate(model)
    if diagnostics:
        raise ModelValidationError("cannot extend an invalid model", diagnostics)

    xs = model.states
    m = len(xs)
    pos = model.position
    ordered: Dict[Tuple[int, str], Tuple[str, ...]] = {
        (agent, x): tuple(model.sorted_states(successors(model, agent, x)))
        for agent in model.agents
        for x in xs
    }

    def state_at(z: int) -> PeriodicState:
        copy_code, s = divmod(zigzag(z), m)
        return PeriodicState(xs[s], unzigzag(copy_code))

    def index_of(state: PeriodicState) -> int:
        try:
            return unzigzag(m * zigzag(state.copy) + pos[state.base])
        except (KeyError, AttributeError, TypeError):
            raise ModelInputError(f"{state!r} is not a state of the periodic extension") from None

    def successor_oracle(agent: int, state: PeriodicState) -> List[PeriodicState]:
        return [PeriodicState(y, state.copy) for y in ordered[(agent, state.base)]]

    def edge_oracle(agent: int, source: PeriodicState, target: PeriodicState) -> bool:
        return source.copy == target.copy and model.related(agent, source.base, target.base)

    def valuation_oracle(proposition: str, state: PeriodicState) -> bool:
        return state.base in model.extension_of(proposition)

    return LazyModel(
        n_agents=model.n_agents,
        propositions=frozenset(model.valuation),
        state_at=state_at,
        index_of=index_of,
        successor_oracle=successor_oracle,
        edge_oracle=edge_oracle,
        valuation_oracle=valuation_oracle,
    )


def properize_countable(base: LazyModel, skew_agent: int = 1) -> LazyModel:
    """
    Countable properization over X × X.

    Non-skew agents: (x, y) R~_i (x', y) iff x R_i x'. Skew agent:
    (x, y) R~ (x', y') iff f(y) - f(x) = f(y') - f(x') and x R x', so each base edge x R x'
    has exactly one lift, y' = f⁻¹(f(y) - f(x) + f(x')).
    """
    if base.n_agents < 2:
        raise SingleAgentError()
    if not 1 <= skew_agent <= base.n_agents:
        raise ModelInputError(f"skew agent {skew_agent} is not one of the agents 1..{base.n_agents}")

    def state_at(z: int) -> ProductState:
        i, j = unpair_index(z)
        return ProductState(base.state_at(i), base.state_at(j))

    def index_of(state: ProductState) -> int:
        return pair_index(base.index_of(state.base), base.index_of(state.tag))

    def offset(state: ProductState) -> int:
        return base.index_of(state.tag) - base.index_of(state.base)

    def successor_oracle(agent: int, state: ProductState) -> List[ProductState]:
        x, y = state
        if agent == skew_agent:
            shift = offset(state)
            return [
                ProductState(x2, base.state_at(base.index_of(x2) + shift))
                for x2 in base.successors(agent, x)
            ]
        return [ProductState(x2, y) for x2 in base.successors(agent, x)]

    def edge_oracle(agent: int, source: ProductState, target: ProductState) -> bool:
        if not base.related(agent, source.base, target.base):
            return False
        if agent == skew_agent:
            return offset(source) == offset(target)
        return source.tag == target.tag

    def valuation_oracle(proposition: str, state: ProductState) -> bool:
        return base.holds(proposition, state.base)

    logger.debug("countable_properization", agents=base.n_agents, skew_agent=skew_agent)
    return LazyModel(
        n_agents=base.n_agents,
        propositions=base.propositions,
        state_at=state_at,
        index_of=index_of,
        successor_oracle=successor_oracle,
        edge_oracle=edge_oracle,
        valuation_oracle=valuation_oracle,
        skew_agent=skew_agent,
        base=base,
    )


# ==================== WINDOWS ====================

@dataclass(frozen=True)
class Window:
    """Finite induced view of a lazy model around ``start``"""

    model: RelationalStructure
    start: str
    frontier: FrozenSet[str]
    states: Mapping[str, Hashable]
    distance: Mapping[str, int]

    __hash__ = None

    @property
    def interior(self) -> FrozenSet[str]:
        return frozenset(self.model.states) - self.frontier


def explore(lazy: LazyModel, start: Hashable, radius: int) -> Window:
    """
    Breadth-first window of all states within ``radius`` forward steps of ``start``.

    Edges are recorded from interior states (distance < radius) only; states at exactly
    ``radius`` form the frontier and their successor sets are left out.
    """
    if radius < 0:
        raise ModelInputError(f"radius must be >= 0, got {radius}")
    limit = get_settings().explore_state_limit

    with transform_log.timed("explore", input_size=radius) as record:
        start_label = state_label(start)
        states: Dict[str, Hashable] = {start_label: start}
        distance: Dict[str, int] = {start_label: 0}
        order: List[str] = [start_label]
        edges: Dict[int, Set[Edge]] = {agent: set() for agent in range(1, lazy.n_agents + 1)}

        queue = deque([start_label])
        while queue:
            current = queue.popleft()
            if distance[current] >= radius:
                continue
            for agent in range(1, lazy.n_agents + 1):
                for successor in lazy.successors(agent, states[current]):
                    label = state_label(successor)
                    known = states.get(label)
                    if known is None:
                        if len(order) >= limit:
                            raise ModelInputError(
                                f"window exceeds {limit} states; lower the radius or raise "
                                "PROPERIZE_EXPLORE_STATE_LIMIT"
                            )
                        states[label] = successor
                        distance[label] = distance[current] + 1
                        order.append(label)
                        queue.append(label)
                    elif known != successor:
                        raise ModelInputError(f"two different states share the label {label!r}")
                    edges[agent].add((current, label))

        valuation = {
            proposition: {label for label in order if lazy.holds(proposition, states[label])}
            for proposition in sorted(lazy.propositions)
        }
        window_model = RelationalStructure.build(order, lazy.n_agents, edges, valuation)
        frontier = frozenset(label for label in order if distance[label] == radius)
        record["output_size"] = len(order)
        record["frontier"] = len(frontier)

    return Window(window_model, start_label, frontier, states, distance)


def _ground(state: Any) -> str:
    while not isinstance(state, str):
        state = state.base
    return state


def window_projection(window: Window, model: RelationalStructure) -> StateMap:
    """π from a window of properize_countable(periodic_extension(M)) onto M"""
    return StateMap(window.model, model, {label: _ground(state) for label, state in window.states.items()})


def parse_periodic_state(text: str, model: RelationalStructure) -> PeriodicState:
    """``x@t`` names copy t of x; a bare state id means copy 0"""
    if model.has_state(text):
        return PeriodicState(text, 0)
    base, sep, copy = text.rpartition("@")
    if sep and model.has_state(base):
        try:
            return PeriodicState(base, int(copy))
        except ValueError:
            pass
    raise ModelInputError(f"{text!r} does not name a state of the periodic extension")


def parse_periodic_product(text: str, model: RelationalStructure) -> ProductState:
    """Parse ``(a|b)`` where each coordinate is read by ``parse_periodic_state``"""
    base, tag = parse_product_label(text)
    return ProductState(parse_periodic_state(base, model), parse_periodic_state(tag, model))
