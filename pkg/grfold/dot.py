"""Graphviz export of labelled seeds.

Vertices are pinned to their ``(row, col)`` grid cell so the drawing keeps
the layout of the rectangles seed; frozen vertices are boxed.
"""
from __future__ import annotations

import logging
from typing import Dict, Tuple

import networkx as nx

from .seeds import Seed
from .tableaux import Tableau

LOGGER = logging.getLogger(__name__)


def label_text(label: Tableau) -> str:
    if label.is_single_column:
        return "".join(str(entry) for entry in label.column_entries())
    return "/".join("".join(str(entry) for entry in row) for row in label.rows)


def grid_layout(seed: Seed, spacing: float = 1.5) -> Dict[int, Tuple[float, float]]:
    """Drawing coordinates: columns grow to the right, rows grow downwards."""

    layout = {}
    for vertex in seed.quiver.vertices:
        row, col = vertex.pos if vertex.pos is not None else (0, 0)
        layout[vertex.id] = (col * spacing, -row * spacing)
    return layout


def seed_graph(seed: Seed, include_frozen: bool = True) -> nx.MultiDiGraph:
    """Seed as a multigraph with one edge per unit of arrow multiplicity."""

    quiver = seed.quiver if include_frozen else seed.quiver.mutable_subquiver()
    graph = nx.MultiDiGraph(name=f"gr_{seed.k}_{seed.n}")
    layout = grid_layout(seed)
    for vertex in quiver.vertices:
        x, y = layout[vertex.id]
        graph.add_node(
            vertex.id,
            label=f"{vertex.id} [{label_text(seed.labels[vertex.id])}]",
            shape="box" if vertex.frozen else "ellipse",
            pos=f"{x:g},{y:g}!",
        )
    for source, target, multiplicity in quiver.arrows():
        for _ in range(multiplicity):
            graph.add_edge(source, target)
    LOGGER.debug(
        "Built graph for Gr(%d,%d): %d nodes, %d edges",
        seed.k,
        seed.n,
        graph.number_of_nodes(),
        graph.number_of_edges(),
    )
    return graph


def to_dot(seed: Seed, include_frozen: bool = True) -> str:
    """DOT source with pinned node positions."""

    dot = nx.nx_pydot.to_pydot(seed_graph(seed, include_frozen))
    dot.set("layout", "neato")
    return dot.to_string()


__all__ = ["grid_layout", "label_text", "seed_graph", "to_dot"]
