"""
Graphviz DOT export of relational structures
"""

from dataclasses import dataclass
from typing import Iterator, Literal, Optional

from bisimulation import Partition
from errors import ModelInputError
from kripke_model import RelationalStructure
from properize import parse_product_label

AGENT_COLORS = ["black", "blue", "red", "darkgreen", "purple", "orange", "brown", "teal"]
BLOCK_COLORS = [
    "lightblue", "lightpink", "palegreen", "khaki", "plum",
    "lightsalmon", "lightcyan", "wheat", "thistle", "honeydew",
]


@dataclass(frozen=True)
class DotOptions:
    layout: Literal["colored", "subgraphs"] = "colored"
    highlight: Optional[Partition] = None
    show_valuation: bool = True
    name: str = "M"


def _gvquote(s: str) -> str:
    return '"{}"'.format(s.replace('"', r"\""))


def _agent_color(agent: int) -> str:
    return AGENT_COLORS[(agent - 1) % len(AGENT_COLORS)]


def _node_label(model: RelationalStructure, state: str, show_valuation: bool) -> str:
    try:
        base, tag = parse_product_label(state)
        label = f"{base}\\n{tag}"
    except ModelInputError:
        label = state
    if show_valuation:
        atoms = sorted(model.labels(state))
        if atoms:
            label += "\\n{" + ", ".join(atoms) + "}"
    return label


def graphviz(model: RelationalStructure, options: DotOptions = DotOptions()) -> Iterator[str]:
    """Produce the DOT text line by line"""
    yield f"digraph {_gvquote(options.name)} {{\n"
    yield "  node [shape=ellipse];\n"

    for state in model.states:
        attributes = [f"label={_gvquote(_node_label(model, state, options.show_valuation))}"]
        if options.highlight is not None:
            block = options.highlight.index_of(state)
            color = BLOCK_COLORS[block % len(BLOCK_COLORS)]
            attributes.append(f'style=filled fillcolor="{color}"')
        yield f"  {_gvquote(state)} [{' '.join(attributes)}];\n"

    for agent in model.agents:
        edges = sorted(
            model.relations[agent],
            key=lambda e: (model.position.get(e[0], -1), model.position.get(e[1], -1)),
        )
        if options.layout == "subgraphs":
            yield f"  subgraph {_gvquote(f'cluster_agent{agent}')} {{\n"
            yield f'    label="agent {agent}";\n'
            for source, target in edges:
                yield f"    {_gvquote(source)} -> {_gvquote(target)};\n"
            yield "  }\n"
        else:
            color = _agent_color(agent)
            for source, target in edges:
                yield (
                    f"  {_gvquote(source)} -> {_gvquote(target)} "
                    f'[color="{color}" label="{agent}"];\n'
                )

    yield "}\n"


def export_dot(model: RelationalStructure, options: Optional[DotOptions] = None) -> str:
    options = options or DotOptions()
    if options.layout not in ("colored", "subgraphs"):
        raise ModelInputError(f"unknown DOT layout {options.layout!r}")
    return "".join(graphviz(model, options))
