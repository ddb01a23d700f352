import pytest
from hypothesis import given

from errors import ModelInputError
from kripke_model import RelationalStructure, StateMap, disjoint_union, successors, validate
from strategies import models


class TestValidate:

    def test_minimal_model_is_valid(self):
        model = RelationalStructure.build(["x1"], 1, {1: [("x1", "x1")]}, {"p": ["x1"]})
        assert validate(model) == []

    def test_dangling_endpoint(self):
        model = RelationalStructure.build(["x1", "x2"], 1, {1: [("x1", "x9")]})
        diagnostics = validate(model)
        assert len(diagnostics) == 1
        assert diagnostics[0].code == "dangling-endpoint"
        assert diagnostics[0].element == (1, "x1", "x9")

    def test_empty_carrier(self):
        codes = [d.code for d in validate(RelationalStructure.build([], 1))]
        assert codes == ["empty-carrier"]

    def test_duplicate_states(self):
        codes = [d.code for d in validate(RelationalStructure.build(["x1", "x1"], 1))]
        assert codes == ["duplicate-state"]

    def test_agent_outside_range(self):
        model = RelationalStructure.build(["x1"], 1, {2: [("x1", "x1")]})
        assert [d.code for d in validate(model)] == ["unknown-agent"]

    def test_bad_agent_count(self):
        model = RelationalStructure.build(["x1"], 0)
        assert "bad-agent-count" in [d.code for d in validate(model)]

    def test_valuation_outside_carrier(self):
        model = RelationalStructure.build(["x1"], 1, valuation={"p": ["x1", "x7"]})
        diagnostics = validate(model)
        assert [d.code for d in diagnostics] == ["valuation-outside-carrier"]
        assert diagnostics[0].element == ("p", "x7")

    def test_empty_proposition_name(self):
        model = RelationalStructure.build(["x1"], 1, valuation={"": []})
        assert [d.code for d in validate(model)] == ["empty-proposition-name"]

    def test_one_diagnostic_per_violation(self):
        model = RelationalStructure.build(["x1", "x1"], 1, {1: [("x1", "y"), ("z", "x1")]})
        assert [d.code for d in validate(model)] == ["duplicate-state", "dangling-endpoint", "dangling-endpoint"]


class TestSuccessors:

    def test_single_successor(self, chain_model):
        assert successors(chain_model, 1, "x1") == {"x2"}

    def test_no_successors(self, chain_model):
        assert successors(chain_model, 1, "x2") == frozenset()

    def test_universal_relation(self, universal_model):
        assert successors(universal_model, 2, "x1") == {"x1", "x2"}

    def test_unknown_agent(self, chain_model):
        with pytest.raises(ModelInputError):
            successors(chain_model, 3, "x1")

    def test_unknown_state(self, chain_model):
        with pytest.raises(ModelInputError):
            successors(chain_model, 1, "x9")

    @given(models())
    def test_successors_match_relation(self, model):
        for agent in model.agents:
            for x in model.states:
                for y in model.states:
                    assert (y in successors(model, agent, x)) == ((x, y) in model.relations[agent])


class TestDisjointUnion:

    def test_cardinality_and_injections(self, loop_model, chain_model):
        union, left, right = disjoint_union(loop_model, chain_model)
        assert len(union.states) == 3
        assert left.is_total() and right.is_total()
        assert left.image() | right.image() == frozenset(union.states)
        assert validate(union) == []

    def test_extensions_double(self, chain_model):
        union, _, _ = disjoint_union(chain_model, chain_model)
        assert len(union.extension_of("p")) == 2 * len(chain_model.extension_of("p"))

    def test_universal_union_has_two_p_states(self, universal_model):
        union, left, right = disjoint_union(universal_model, universal_model)
        assert union.extension_of("p") == {left("x1"), right("x1")}

    def test_mismatched_agents(self, chain_model, single_agent_model):
        with pytest.raises(ModelInputError):
            disjoint_union(chain_model, single_agent_model)

    @given(models(), models())
    def test_successors_carried_per_copy(self, first, second):
        if first.n_agents != second.n_agents:
            return
        union, left, right = disjoint_union(first, second)
        for model, inject in ((first, left), (second, right)):
            for agent in model.agents:
                for x in model.states:
                    expected = {inject(y) for y in successors(model, agent, x)}
                    assert successors(union, agent, inject(x)) == expected
                    assert union.labels(inject(x)) == model.labels(x)

    def test_ids_with_colons_stay_apart(self):
        model = RelationalStructure.build(["1:a", "a"], 1)
        union, left, right = disjoint_union(model, model)
        assert len(set(union.states)) == 4


class TestStateMap:

    def test_identity(self, chain_model):
        identity = StateMap.identity(chain_model)
        assert identity.is_total() and identity.is_surjective()
        assert identity("x2") == "x2"

    def test_missing_source_state(self, chain_model, loop_model):
        partial = StateMap(chain_model, loop_model, {"x1": "x1"})
        assert not partial.is_total()
        assert "unmapped" in partial.diagnostics()[0]

    def test_image_outside_target(self, chain_model, loop_model):
        bad = StateMap(chain_model, loop_model, {"x1": "x1", "x2": "x5"})
        assert any("not a target state" in problem for problem in bad.diagnostics())

    def test_call_outside_domain(self, chain_model):
        with pytest.raises(ModelInputError):
            StateMap(chain_model, chain_model, {})("x1")

    def test_fiber_and_compose(self, chain_model, loop_model):
        collapse = StateMap(chain_model, loop_model, {"x1": "x1", "x2": "x1"})
        assert collapse.fiber("x1") == ["x1", "x2"]
        composed = StateMap.identity(chain_model).compose(collapse)
        assert composed.mapping == collapse.mapping
        assert composed.target is loop_model
