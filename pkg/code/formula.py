"""
Formulas of the epistemic language L_n

    φ ::= p | !φ | φ & ψ | K<i> φ

Only those four constructors are ever stored. ``|`` and ``->`` exist in the concrete
syntax and as sugar functions, both of which desugar to the primitives.
"""

import re
from dataclasses import dataclass, fields
from functools import lru_cache
from typing import Callable, Dict, FrozenSet, Iterable, List, Set, TypeVar, Union

import numpy as np
from lark import Lark, v_args
from lark.exceptions import UnexpectedInput, UnexpectedToken, VisitError
from lark.visitors import Transformer_NonRecursive

from errors import FormulaSyntaxError, ModelInputError

GRAMMAR = r"""
?start: implication

?implication: disjunction
    | disjunction "->" implication      -> implies

?disjunction: conjunction
    | disjunction "|" conjunction       -> either

?conjunction: unary
    | conjunction "&" unary             -> both

?unary: atom
    | "!" unary                         -> negation
    | KNOW unary                        -> knows

?atom: PROP                             -> proposition
    | "(" implication ")"

KNOW: /K[0-9]+/
PROP: /[a-z][a-zA-Z0-9_]*/

%import common.WS
%ignore WS
"""

# Probability that random_formula wraps a generated node in a negation
NEGATION_RATE = 1 / 3


# Atom names the concrete syntax can print and read back
PROPOSITION_NAME = re.compile(r"[a-z][a-zA-Z0-9_]*")


@dataclass(frozen=True, eq=False, repr=False)
class Formula:
    """
    Base of the AST. Nodes are built bottom-up, so each one caches its hash from its
    children's; equality walks both trees with an explicit stack. Formulas nested far
    deeper than the interpreter's recursion limit stay hashable and comparable.
    """

    def __post_init__(self):
        key = tuple(
            value._hash if isinstance(value, Formula) else value
            for value in (getattr(self, field.name) for field in fields(self))
        )
        object.__setattr__(self, "_hash", hash((type(self).__name__,) + key))

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Formula):
            return NotImplemented
        stack = [(self, other)]
        while stack:
            left, right = stack.pop()
            if left is right:
                continue
            if type(left) is not type(right) or left._hash != right._hash:
                return False
            for field in fields(left):
                a, b = getattr(left, field.name), getattr(right, field.name)
                if isinstance(a, Formula):
                    stack.append((a, b))
                elif a != b:
                    return False
        return True

    def __str__(self) -> str:
        return to_text(self)

    def __repr__(self) -> str:
        return to_constructor_text(self)


@dataclass(frozen=True, eq=False, repr=False)
class Prop(Formula):
    name: str

    def __post_init__(self):
        if not isinstance(self.name, str) or not PROPOSITION_NAME.fullmatch(self.name):
            raise ModelInputError(
                f"proposition name {self.name!r} must match {PROPOSITION_NAME.pattern}"
            )
        super().__post_init__()


@dataclass(frozen=True, eq=False, repr=False)
class Not(Formula):
    operand: Formula


@dataclass(frozen=True, eq=False, repr=False)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, eq=False, repr=False)
class Know(Formula):
    agent: int
    operand: Formula

    def __post_init__(self):
        if isinstance(self.agent, bool) or not isinstance(self.agent, int) or self.agent < 1:
            raise ModelInputError(f"agent index must be a positive integer, got {self.agent!r}")
        super().__post_init__()


# ==================== SUGAR ====================

def or_(left: Formula, right: Formula) -> Formula:
    """φ | ψ  ≡  !(!φ & !ψ)"""
    return Not(And(Not(left), Not(right)))


def implies(left: Formula, right: Formula) -> Formula:
    """φ -> ψ  ≡  !(φ & !ψ)"""
    return Not(And(left, Not(right)))


def possible(agent: int, operand: Formula) -> Formula:
    """The dual modality: !K_i !φ"""
    return Not(Know(agent, Not(operand)))


def factivity(agent: int, operand: Formula) -> Formula:
    """K_i φ -> φ; valid on reflexive R_i"""
    return implies(Know(agent, operand), operand)


def positive_introspection(agent: int, operand: Formula) -> Formula:
    """K_i φ -> K_i K_i φ; valid on transitive R_i"""
    return implies(Know(agent, operand), Know(agent, Know(agent, operand)))


def negative_introspection(agent: int, operand: Formula) -> Formula:
    """!K_i φ -> K_i !K_i φ; valid on Euclidean R_i"""
    return implies(Not(Know(agent, operand)), Know(agent, Not(Know(agent, operand))))


# ==================== PARSING ====================

@v_args(inline=True)
class _FormulaBuilder(Transformer_NonRecursive):
    def __init__(self, text: str):
        super().__init__()
        self._text = text

    def proposition(self, token):
        return Prop(str(token))

    def negation(self, operand):
        return Not(operand)

    def knows(self, token, operand):
        agent = int(token[1:])
        if agent < 1:
            raise FormulaSyntaxError("agent index must be positive", self._text, token.start_pos)
        return Know(agent, operand)

    def both(self, left, right):
        return And(left, right)

    def either(self, left, right):
        return or_(left, right)

    def implies(self, left, right):
        return implies(left, right)


@lru_cache(maxsize=1)
def _parser() -> Lark:
    return Lark(GRAMMAR, parser="lalr")


def parse(text: str) -> Formula:
    """Parse concrete syntax into a primitive-only AST"""
    try:
        tree = _parser().parse(text)
    except UnexpectedInput as exc:
        position = getattr(exc, "pos_in_stream", None)
        at_end = isinstance(exc, UnexpectedToken) and exc.token.type == "$END"
        if at_end or position is None or position < 0:
            position = len(text)
        raise FormulaSyntaxError("syntax error", text, position) from None

    try:
        result = _FormulaBuilder(text).transform(tree)
    except VisitError as exc:
        raise exc.orig_exc from None
    except RecursionError:
        raise FormulaSyntaxError("formula nested too deeply", text) from None
    if isinstance(result, Formula):
        return result
    # a bare token can only be a proposition
    return Prop(str(result))


# ==================== PRINTING ====================

T = TypeVar("T")


def _fold(formula: Formula, combine: Callable[[Formula, List[T]], T]) -> T:
    """Bottom-up evaluation over the distinct subformulas, without recursion"""
    values: Dict[Formula, T] = {}
    for node in subformulas(formula):
        values[node] = combine(node, [values[child] for child in children(node)])
    return values[formula]


def _operand_text(operand: Formula, text: str) -> str:
    return f"({text})" if isinstance(operand, And) else text


def _text_of(node: Formula, parts: List[str]) -> str:
    if isinstance(node, Prop):
        return node.name
    if isinstance(node, Not):
        return "!" + _operand_text(node.operand, parts[0])
    if isinstance(node, Know):
        return f"K{node.agent} " + _operand_text(node.operand, parts[0])
    return f"{parts[0]} & {_operand_text(node.right, parts[1])}"


def to_text(formula: Formula) -> str:
    """Minimal parenthesization; ``&`` is left-associative, so only right-nested ``&`` needs parens"""
    return _fold(formula, _text_of)


def _constructor_of(node: Formula, parts: List[str]) -> str:
    if isinstance(node, Prop):
        return f"Prop({node.name})"
    if isinstance(node, Not):
        return f"Not({parts[0]})"
    if isinstance(node, Know):
        return f"Know({node.agent}, {parts[0]})"
    return f"And({parts[0]}, {parts[1]})"


def to_constructor_text(formula: Formula) -> str:
    """Primitive form, e.g. ``Know(1, And(Prop(p), Not(Prop(q))))``"""
    return _fold(formula, _constructor_of)


# ==================== MEASURES ====================

def children(formula: Formula) -> List[Formula]:
    if isinstance(formula, (Not, Know)):
        return [formula.operand]
    if isinstance(formula, And):
        return [formula.left, formula.right]
    if isinstance(formula, Prop):
        return []
    raise TypeError(f"not a formula: {formula!r}")


def subformulas(formula: Formula) -> List[Formula]:
    """Distinct subformulas, every child listed before its parents"""
    ordered: List[Formula] = []
    seen: Set[Formula] = set()
    stack = [(formula, False)]
    while stack:
        node, expanded = stack.pop()
        if node in seen:
            continue
        if expanded:
            seen.add(node)
            ordered.append(node)
            continue
        stack.append((node, True))
        for child in reversed(children(node)):
            if child not in seen:
                stack.append((child, False))
    return ordered


def modal_depth(formula: Formula) -> int:
    """Maximum nesting of K operators"""
    return _fold(
        formula,
        lambda node, depths: depths[0] + 1 if isinstance(node, Know) else max(depths, default=0),
    )


def size(formula: Formula) -> int:
    """Atom, conjunction and knowledge nodes; negations are not counted"""
    return _fold(formula, lambda node, sizes: (0 if isinstance(node, Not) else 1) + sum(sizes))


def agents(formula: Formula) -> FrozenSet[int]:
    return frozenset(node.agent for node in subformulas(formula) if isinstance(node, Know))


def propositions(formula: Formula) -> FrozenSet[str]:
    return frozenset(node.name for node in subformulas(formula) if isinstance(node, Prop))


# ==================== GENERATION ====================

def random_formula(
    n_agents: int,
    pool: Iterable[str],
    max_depth: int,
    size_budget: int,
    seed: Union[int, np.random.Generator],
) -> Formula:
    """
    Draw a formula with modal_depth <= max_depth and size <= size_budget.

    Deterministic for a fixed integer seed. A ``numpy.random.Generator`` may be passed
    instead so callers can draw a reproducible stream of formulas.
    """
    names = sorted(set(pool))
    if not names:
        raise ModelInputError("random_formula needs at least one proposition")
    unprintable = [name for name in names if not PROPOSITION_NAME.fullmatch(name)]
    if unprintable:
        raise ModelInputError(f"proposition names {unprintable} cannot appear in formulas")
    if n_agents < 1:
        raise ModelInputError(f"n_agents must be >= 1, got {n_agents}")
    if max_depth < 0:
        raise ModelInputError(f"max_depth must be >= 0, got {max_depth}")
    if size_budget < 1:
        raise ModelInputError(f"size budget must be >= 1, got {size_budget}")

    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)

    def grow(budget: int, depth: int) -> Formula:
        kinds = ["atom"]
        if budget >= 3:
            kinds.append("and")
        if budget >= 2 and depth > 0:
            kinds.append("know")
        kind = kinds[int(rng.integers(len(kinds)))]

        if kind == "atom":
            node: Formula = Prop(names[int(rng.integers(len(names)))])
        elif kind == "and":
            left_budget = int(rng.integers(1, budget - 1))
            node = And(grow(left_budget, depth), grow(budget - 1 - left_budget, depth))
        else:
            node = Know(int(rng.integers(1, n_agents + 1)), grow(budget - 1, depth - 1))

        if rng.random() < NEGATION_RATE:
            node = Not(node)
        return node

    return grow(size_budget, max_depth)
