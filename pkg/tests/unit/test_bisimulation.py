from itertools import combinations

import pytest
from hypothesis import given, settings

from bisimulation import (
    Partition,
    bisimilar,
    bounded_bisimilar,
    coarsest_bisimulation,
    relational_bisimulation,
)
from errors import ModelInputError
from formula import And, Know, Not, Prop, modal_depth, or_, random_formula
from kripke_model import RelationalStructure, disjoint_union, successors
from properize import properize_finite
from semantics import extensions, satisfies
from strategies import models


def balanced(combine, items):
    items = list(items)
    while len(items) > 1:
        items = [combine(*items[i:i + 2]) if i + 1 < len(items) else items[i] for i in range(0, len(items), 2)]
    return items[0]


def definable_sets(model, depth):
    """
    Every set of states definable by a formula of modal depth <= ``depth``, as
    generators of the Boolean algebra, each paired with a formula that defines it.
    """
    carrier = frozenset(model.states)
    generators = {carrier: or_(Prop("p"), Not(Prop("p")))}
    for name in model.propositions:
        generators.setdefault(model.extension_of(name) & carrier, Prop(name))

    for _ in range(depth):
        # atoms of the algebra: states grouped by membership in every generator
        members = {}
        for x in model.states:
            members.setdefault(tuple(x in s for s in generators), set()).add(x)
        atoms = [
            (
                frozenset(states),
                balanced(And, [f if inside else Not(f) for inside, f in zip(signature, generators.values())]),
            )
            for signature, states in members.items()
        ]
        found = {}
        for count in range(1, len(atoms) + 1):
            for chosen in combinations(atoms, count):
                union = frozenset().union(*(s for s, _ in chosen))
                for agent in model.agents:
                    known = frozenset(x for x in model.states if successors(model, agent, x) <= union)
                    if known not in generators and known not in found:
                        found[known] = Know(agent, balanced(or_, [f for _, f in chosen]))
        if not found:
            break
        generators.update(found)
    return generators


class TestPartition:

    def test_lookup(self):
        partition = Partition((frozenset({"a", "b"}), frozenset({"c"})))
        assert partition.index_of("c") == 1
        assert partition.block_of("a") == {"a", "b"}
        assert partition.same_block("a", "b")
        assert not partition.same_block("a", "c")
        assert partition.problems(["a", "b", "c"]) == []

    def test_problems(self):
        partition = Partition((frozenset({"a", "b"}), frozenset({"b"}), frozenset()))
        problems = partition.problems(["a", "b", "c"])
        assert "block 2 is empty" in problems
        assert "blocks overlap" in problems
        assert "blocks do not cover the carrier exactly" in problems

    def test_uncovered_state(self):
        with pytest.raises(ModelInputError):
            Partition((frozenset({"a"}),)).index_of("z")

    def test_from_equivalence(self):
        relation = frozenset({("a", "a"), ("b", "b"), ("c", "c"), ("a", "c"), ("c", "a")})
        partition = Partition.from_equivalence(["a", "b", "c"], relation)
        assert partition.blocks == (frozenset({"a", "c"}), frozenset({"b"}))


class TestCoarsestBisimulation:

    def test_uniform_model_is_one_block(self):
        model = RelationalStructure.build(["x1", "x2", "x3"], 2, valuation={"p": ["x1", "x2", "x3"]})
        assert len(coarsest_bisimulation(model)) == 1

    def test_atomic_split(self):
        model = RelationalStructure.build(["x1", "x2"], 1, valuation={"p": ["x2"]})
        assert coarsest_bisimulation(model).blocks == (frozenset({"x1"}), frozenset({"x2"}))

    def test_split_by_successors(self):
        # x1 and x2 agree atomically; only x1 sees a p-state
        model = RelationalStructure.build(["x1", "x2", "x3"], 1, {1: [("x1", "x3")]}, {"p": ["x3"]})
        assert len(coarsest_bisimulation(model)) == 3

    def test_product_shares_blocks_with_source(self, universal_model):
        properized, projection = properize_finite(universal_model)
        union, into_product, into_source = disjoint_union(properized.model, universal_model)
        partition = coarsest_bisimulation(union)
        oracle = Partition.from_equivalence(union.states, relational_bisimulation(union))
        assert partition.as_set() == oracle.as_set()
        for state in properized.model.states:
            assert partition.same_block(into_product(state), into_source(projection(state)))

    def test_invalid_model(self):
        with pytest.raises(ModelInputError):
            coarsest_bisimulation(RelationalStructure.build([], 1))

    @given(models(max_states=5))
    def test_agrees_with_relational_oracle(self, model):
        partition = coarsest_bisimulation(model)
        oracle = Partition.from_equivalence(model.states, relational_bisimulation(model))
        assert partition.as_set() == oracle.as_set()
        assert partition.problems(model.states) == []

    @given(models(max_states=5))
    def test_blocks_agree_on_formulas(self, model):
        partition = coarsest_bisimulation(model)
        formulas = [random_formula(model.n_agents, ["p", "q"], 4, 12, seed=seed) for seed in range(20)]
        for block in partition:
            first, *others = sorted(block)
            for formula in formulas:
                truth = satisfies(model, first, formula)
                assert all(satisfies(model, other, formula) == truth for other in others)


    @settings(max_examples=30)
    @given(models(max_states=5))
    def test_blocks_are_formula_equivalence_classes(self, model):
        self.assert_blocks_match_definable_sets(model)

    def test_chain_needs_full_depth(self):
        states = [f"x{j}" for j in range(1, 9)]
        model = RelationalStructure.build(
            states, 2, {1: list(zip(states, states[1:])), 2: [(x, x) for x in states]}, {"p": ["x8"]}
        )
        assert len(coarsest_bisimulation(model)) == 8
        self.assert_blocks_match_definable_sets(model)

    def test_properized_union(self, universal_model):
        properized, _ = properize_finite(universal_model)
        union, _, _ = disjoint_union(properized.model, universal_model)
        self.assert_blocks_match_definable_sets(union)

    @staticmethod
    def assert_blocks_match_definable_sets(model):
        depth = len(model.states)
        definable = definable_sets(model, depth)
        table = extensions(model, balanced(And, list(definable.values())))
        for states, formula in definable.items():
            assert table[formula] == states
            assert modal_depth(formula) <= depth

        profile = {x: tuple(x in states for states in definable) for x in model.states}
        by_formulas = Partition.from_labels(model.states, profile)
        assert coarsest_bisimulation(model).as_set() == by_formulas.as_set()



class TestBisimilar:

    def test_reflexive(self, three_state_model):
        for x in three_state_model.states:
            assert bisimilar(three_state_model, x, three_state_model, x)

    def test_product_states_bisimilar_to_projection(self, three_state_model):
        properized, projection = properize_finite(three_state_model)
        for state in properized.model.states:
            assert bisimilar(properized.model, state, three_state_model, projection(state))

    def test_atomic_disagreement(self):
        with_p = RelationalStructure.build(["x"], 1, valuation={"p": ["x"]})
        without_p = RelationalStructure.build(["x"], 1)
        assert not bisimilar(with_p, "x", without_p, "x")

    def test_mismatched_agents(self, chain_model, single_agent_model):
        with pytest.raises(ModelInputError):
            bisimilar(chain_model, "x1", single_agent_model, "x1")

    def test_unknown_state(self, chain_model):
        with pytest.raises(ModelInputError):
            bisimilar(chain_model, "x1", chain_model, "nowhere")


class TestBoundedBisimilar:

    def test_depth_zero_is_atomic(self):
        # a dead end and a loop agree on atoms but not at depth 1
        dead = RelationalStructure.build(["x"], 1)
        loop = RelationalStructure.build(["x"], 1, {1: [("x", "x")]})
        assert bounded_bisimilar(dead, "x", loop, "x", 0)
        assert not bounded_bisimilar(dead, "x", loop, "x", 1)

    def test_chain_lengths(self):
        def chain(length):
            states = [f"s{k}" for k in range(length + 1)]
            edges = [(states[k], states[k + 1]) for k in range(length)]
            return RelationalStructure.build(states, 1, {1: edges})

        short, long = chain(2), chain(3)
        assert bounded_bisimilar(short, "s0", long, "s0", 2)
        assert not bounded_bisimilar(short, "s0", long, "s0", 3)
        assert not bisimilar(short, "s0", long, "s0")

    def test_negative_depth(self, chain_model):
        with pytest.raises(ModelInputError):
            bounded_bisimilar(chain_model, "x1", chain_model, "x1", -1)

    @given(models(max_states=4), models(max_states=4))
    def test_bisimilar_implies_bounded(self, first, second):
        if first.n_agents != second.n_agents:
            return
        for x in first.states:
            for y in second.states:
                if bisimilar(first, x, second, y):
                    assert all(bounded_bisimilar(first, x, second, y, depth) for depth in range(4))
