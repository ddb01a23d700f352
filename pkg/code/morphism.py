"""
Bounded morphism verification

A map h: Ms -> Mt is a bounded morphism when it preserves atomic truth (atomic harmony),
carries every edge x R_i y to h(x) R_i h(y) (forth), and lifts every edge h(x) R_i z to some
x R_i y with h(y) = z (back). Each condition is reported separately with the first
violation in state order.
"""

from dataclasses import dataclass
from typing import TYPE_CHECKING, Collection, Optional, Tuple

from errors import ModelInputError
from kripke_model import RelationalStructure, StateMap, successors
from logging_config import get_logger

if TYPE_CHECKING:
    from properize import ProperizedModel

logger = get_logger(__name__)

ATOMIC = "atomic harmony"
FORTH = "forth"
BACK = "back"
SURJECTIVE = "surjective"


@dataclass(frozen=True)
class ConditionVerdict:
    condition: str
    checked: bool
    passed: bool
    counterexample: Optional[Tuple] = None
    detail: str = ""

    @property
    def status(self) -> str:
        if not self.checked:
            return "SKIP"
        return "PASS" if self.passed else "FAIL"


@dataclass(frozen=True)
class MorphismReport:
    atomic: ConditionVerdict
    forth: ConditionVerdict
    back: ConditionVerdict
    surjective: ConditionVerdict

    @property
    def verdicts(self) -> Tuple[ConditionVerdict, ...]:
        return (self.atomic, self.forth, self.back, self.surjective)

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts if v.checked)

    def __bool__(self) -> bool:
        return self.passed


def _atomic_harmony(source: RelationalStructure, target: RelationalStructure, h: StateMap) -> ConditionVerdict:
    propositions = sorted(set(source.valuation) | set(target.valuation))
    for x in source.states:
        for p in propositions:
            if (x in source.extension_of(p)) != (h(x) in target.extension_of(p)):
                return ConditionVerdict(
                    ATOMIC, True, False, (x, p), f"{p} differs between {x} and {h(x)}"
                )
    return ConditionVerdict(ATOMIC, True, True)


def _forth(source: RelationalStructure, target: RelationalStructure, h: StateMap) -> ConditionVerdict:
    for agent in source.agents:
        for x in source.states:
            for y in source.sorted_states(successors(source, agent, x)):
                if not target.related(agent, h(x), h(y)):
                    return ConditionVerdict(
                        FORTH, True, False, (agent, x, y),
                        f"{x} R{agent} {y} but not {h(x)} R{agent} {h(y)}",
                    )
    return ConditionVerdict(FORTH, True, True)


def _back(
    source: RelationalStructure,
    target: RelationalStructure,
    h: StateMap,
    scope: Optional[Collection[str]],
) -> ConditionVerdict:
    for agent in source.agents:
        for x in source.states:
            if scope is not None and x not in scope:
                continue
            images = {h(y) for y in successors(source, agent, x)}
            for z in target.sorted_states(successors(target, agent, h(x))):
                if z not in images:
                    return ConditionVerdict(
                        BACK, True, False, (agent, x, z),
                        f"{h(x)} R{agent} {z} has no lift from {x}",
                    )
    return ConditionVerdict(BACK, True, True)


def check_bounded_morphism(
    source: RelationalStructure,
    target: RelationalStructure,
    h: StateMap,
    require_surjective: bool = False,
    back_scope: Optional[Collection[str]] = None,
) -> MorphismReport:
    """
    Check atomic harmony, forth, back and (optionally) surjectivity of ``h``.

    ``back_scope`` limits the back condition to the given source states; exploration
    windows use it to skip frontier states whose successor sets are truncated.
    """
    if source.n_agents != target.n_agents:
        raise ModelInputError(
            f"source has {source.n_agents} agents but target has {target.n_agents}"
        )
    h = StateMap(source, target, h.mapping)
    problems = h.diagnostics()
    if problems:
        raise ModelInputError("map is not a total function into the target: " + "; ".join(problems))

    surjective = ConditionVerdict(SURJECTIVE, False, True)
    if require_surjective:
        missing = [z for z in target.states if z not in h.image()]
        surjective = (
            ConditionVerdict(SURJECTIVE, True, False, (missing[0],), f"{missing[0]} has no preimage")
            if missing
            else ConditionVerdict(SURJECTIVE, True, True)
        )

    report = MorphismReport(
        atomic=_atomic_harmony(source, target, h),
        forth=_forth(source, target, h),
        back=_back(source, target, h, None if back_scope is None else frozenset(back_scope)),
        surjective=surjective,
    )
    logger.debug(
        "bounded_morphism_checked",
        passed=report.passed,
        failed=[v.condition for v in report.verdicts if v.checked and not v.passed],
    )
    return report


def projection_map(properized: "ProperizedModel") -> StateMap:
    """π₁: (x_j, x_k) ↦ x_j from M~ onto its source"""
    return StateMap(
        properized.model,
        properized.source,
        {state_id: properized.coordinates(state_id).base for state_id in properized.model.states},
    )
