import re

from bisimulation import coarsest_bisimulation
from dot_export import DotOptions, export_dot
from kripke_model import RelationalStructure
from properize import partition_blocks, properize_finite

NODE_LINE = re.compile(r'^\s*"[^"]*" \[label=', re.MULTILINE)
EDGE_LINE = re.compile(r'^\s*"[^"]*" -> "[^"]*"', re.MULTILINE)


class TestExportDot:

    def test_one_state_loop(self):
        model = RelationalStructure.build(["x1"], 1, {1: [("x1", "x1")]})
        text = export_dot(model)
        assert text.startswith('digraph "M" {')
        assert text.endswith("}\n")
        assert len(NODE_LINE.findall(text)) == 1
        assert EDGE_LINE.findall(text) == ['  "x1" -> "x1"']

    def test_node_count_matches_states(self, three_state_model):
        for layout in ("colored", "subgraphs"):
            text = export_dot(three_state_model, DotOptions(layout=layout))
            assert len(NODE_LINE.findall(text)) == 3
            assert len(EDGE_LINE.findall(text)) == three_state_model.edge_count()

    def test_subgraph_per_agent(self, three_state_model):
        text = export_dot(three_state_model, DotOptions(layout="subgraphs"))
        assert text.count("subgraph ") == 3
        assert 'label="agent 2";' in text

    def test_block_highlighting(self, universal_model):
        properized, _ = properize_finite(universal_model)
        text = export_dot(properized.model, DotOptions(highlight=partition_blocks(properized)))
        assert len(NODE_LINE.findall(text)) == 4
        assert len(set(re.findall(r'fillcolor="(\w+)"', text))) == 2

    def test_product_labels_show_coordinates(self, universal_model):
        properized, _ = properize_finite(universal_model)
        text = export_dot(properized.model, DotOptions(show_valuation=False))
        assert r'"(x1|x2)" [label="x1\nx2"];' in text

    def test_valuation_in_label(self, chain_model):
        text = export_dot(chain_model)
        assert r'"x2" [label="x2\n{p}"];' in text

    def test_bisimulation_highlight(self, universal_model):
        partition = coarsest_bisimulation(universal_model)
        text = export_dot(universal_model, DotOptions(highlight=partition))
        assert len(set(re.findall(r'fillcolor="(\w+)"', text))) == len(partition)

    def test_quotes_are_escaped(self):
        model = RelationalStructure.build(['say "hi"'], 1)
        assert r'"say \"hi\""' in export_dot(model)
