"""Graphviz DOT and JSON export of engine values."""
from __future__ import annotations

from typing import List, Union

from .dm import AssemblyOp
from .labels import Boundary, Feature, FeatureBundle, label_text
from .notation import dumps
from .sums import WorkspaceSum
from .trees import Forest, Tree

Value = Union[Tree, Forest, WorkspaceSum, AssemblyOp]

FORMATS = ("dot", "json", "text")


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


class _DotWriter:
    def __init__(self) -> None:
        self.lines: List[str] = []
        self.counter = 0

    def node_id(self) -> str:
        self.counter += 1
        return f"n{self.counter}"

    def tree(self, t: Tree, indent: str = "    ", morph: bool = False) -> str:
        ident = self.node_id()
        label = t.label
        if isinstance(label, Boundary):
            attrs = f"label={_quote(label.bundle.text() + ' @ ' + label.atom.text())} shape=doubleoctagon style=filled fillcolor=gold"
            morph = True
        elif morph or isinstance(label, (Feature, FeatureBundle)):
            attrs = f"label={_quote(label_text(label) or '·')} shape=box fillcolor=lightblue style=filled"
        else:
            attrs = f"label={_quote(label_text(label) or '·')} shape=ellipse"
        self.lines.append(f"{indent}{ident} [{attrs}]")
        for child in t.children:
            child_id = self.tree(child, indent, morph)
            self.lines.append(f"{indent}{ident} -> {child_id}")
        return ident

    def forest(self, f: Forest, indent: str = "    ") -> None:
        for component in f:
            self.tree(component, indent)


def to_dot(value: Value, name: str = "msx") -> str:
    """Syntax vertices as ellipses, morphology as boxes, boundary vertices highlighted."""
    writer = _DotWriter()
    writer.lines.append(f"digraph {_quote(name)} {{")
    writer.lines.append("    node [fontname=Helvetica fontsize=10]")
    if isinstance(value, Tree):
        writer.tree(value)
    elif isinstance(value, Forest):
        writer.forest(value)
    elif isinstance(value, AssemblyOp):
        writer.lines.append("    subgraph cluster_skeleton {")
        writer.lines.append("        label=\"skeleton\"")
        writer.tree(value.skeleton, "        ")
        writer.lines.append("    }")
        for index, arg in enumerate(value.args, start=1):
            writer.lines.append(f"    subgraph cluster_arg{index} {{")
            writer.lines.append(f"        label={_quote(f'S{index}')}")
            if arg is None:
                writer.lines.append(f"        {writer.node_id()} [label=\"1\" shape=plaintext]")
            else:
                writer.tree(arg, "        ", morph=True)
            writer.lines.append("    }")
    else:
        for index, (key, coefficient) in enumerate(value.items(), start=1):
            writer.lines.append(f"    subgraph cluster_term{index} {{")
            writer.lines.append(f"        label={_quote(f'coefficient {coefficient}')}")
            for position, factor in enumerate(key):
                writer.lines.append(f"        subgraph cluster_term{index}_{position} {{")
                writer.lines.append(f"            label={_quote(f'factor {position + 1}')}")
                if factor.is_unit:
                    writer.lines.append(f"            {writer.node_id()} [label=\"1\" shape=plaintext]")
                writer.forest(factor, "            ")
                writer.lines.append("        }")
            writer.lines.append("    }")
    writer.lines.append("}")
    return "\n".join(writer.lines) + "\n"


def export(value: Value, fmt: str = "json") -> str:
    if fmt == "dot":
        return to_dot(value)
    if fmt == "json":
        return dumps(value) + "\n"
    text = value.text if isinstance(value, (Tree, Forest)) else value.text()
    return text + "\n"
