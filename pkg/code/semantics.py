"""
Satisfaction and extensions over finite relational structures.

Evaluation is bottom-up: every distinct subformula gets its extension computed once,
so a query costs O(|φ| · (|X| + |R|)).
"""

from typing import Dict, FrozenSet

from errors import ModelInputError
from formula import And, Formula, Know, Not, Prop, agents, subformulas
from kripke_model import RelationalStructure, successors


def _check_agents(model: RelationalStructure, formula: Formula) -> None:
    out_of_range = sorted(a for a in agents(formula) if a > model.n_agents)
    if out_of_range:
        raise ModelInputError(
            f"formula uses agent index {out_of_range[0]} but the model has {model.n_agents} agent(s)"
        )


def extensions(model: RelationalStructure, formula: Formula) -> Dict[Formula, FrozenSet[str]]:
    """The extension of every subformula of ``formula``"""
    _check_agents(model, formula)
    carrier = frozenset(model.states)
    table: Dict[Formula, FrozenSet[str]] = {}

    for node in subformulas(formula):
        if isinstance(node, Prop):
            # unlisted propositions are false everywhere
            table[node] = model.extension_of(node.name) & carrier
        elif isinstance(node, Not):
            table[node] = carrier - table[node.operand]
        elif isinstance(node, And):
            table[node] = table[node.left] & table[node.right]
        elif isinstance(node, Know):
            inner = table[node.operand]
            table[node] = frozenset(
                x for x in model.states if successors(model, node.agent, x) <= inner
            )
        else:
            raise TypeError(f"not a formula: {node!r}")
    return table


def extension(model: RelationalStructure, formula: Formula) -> FrozenSet[str]:
    """⟦φ⟧ = {x : M, x ⊨ φ}"""
    return extensions(model, formula)[formula]


def satisfies(model: RelationalStructure, state: str, formula: Formula) -> bool:
    """M, x ⊨ φ"""
    model.require_state(state)
    return state in extension(model, formula)


def is_valid_in(model: RelationalStructure, formula: Formula) -> bool:
    """True at every state of the model"""
    return extension(model, formula) == frozenset(model.states)
