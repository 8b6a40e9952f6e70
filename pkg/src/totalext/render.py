"""DOT export. Precolored items are drawn red, mirroring the figures the
file formats are built around; audits can annotate final charges."""

from __future__ import annotations

from typing import Mapping

from .coloring import PartialTotalColoring
from .embedding import PlanarEmbedding, Subgraph, canonical_edge


def embedding_to_dot(
    emb: PlanarEmbedding,
    precoloring: PartialTotalColoring | None = None,
    vertex_annotations: Mapping[int, str] | None = None,
) -> str:
    H = precoloring.subgraph() if precoloring is not None else Subgraph.empty()
    lines = ["graph G {", "  node [shape=circle];"]
    for v in emb.vertices:
        attrs = []
        label = str(v)
        if precoloring is not None and v in precoloring.vertex_colors:
            label += f"\\n{precoloring.vertex_colors[v]}"
        if vertex_annotations and v in vertex_annotations:
            label += f"\\n{vertex_annotations[v]}"
        attrs.append(f'label="{label}"')
        if v in H.vertices:
            attrs.append("color=red")
            attrs.append("fontcolor=red")
        lines.append(f"  {v} [{', '.join(attrs)}];")
    for u, v in sorted(emb.edges):
        attrs = []
        e = canonical_edge(u, v)
        if precoloring is not None and e in precoloring.edge_colors:
            attrs.append(f'label="{precoloring.edge_colors[e]}"')
        if e in H.edges:
            attrs.append("color=red")
            attrs.append("fontcolor=red")
        suffix = f" [{', '.join(attrs)}]" if attrs else ""
        lines.append(f"  {u} -- {v}{suffix};")
    lines.append("}")
    return "\n".join(lines) + "\n"
