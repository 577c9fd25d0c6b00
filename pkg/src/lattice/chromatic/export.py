"""
Plain-text renderings of graphs, colourings, Betti numbers and boundary matrices.
"""

from __future__ import annotations

import csv
import io
from typing import Hashable, Iterable, List, Sequence

from .coloring import FiniteGraph
from .homology import ChainComplexData

__all__ = (
    'format_graph_vertex',
    'graph_to_dot',
    'graph_to_edge_list',
    'coloring_to_csv',
    'betti_to_csv',
    'matrix_coordinates',
)


def format_graph_vertex(v: Hashable) -> str:
    if isinstance(v, tuple):
        return ','.join(str(x) for x in v)
    return str(v)


def graph_to_dot(g: FiniteGraph, name: str = 'G') -> str:
    labels = [format_graph_vertex(v) for v in g.vertices]
    lines = [f'graph {name} {{']
    for label in labels:
        lines.append(f'  "{label}";')
    for u, v in g.sorted_edges():
        lines.append(f'  "{labels[u]}" -- "{labels[v]}";')
    for v in sorted(g.loops):
        lines.append(f'  "{labels[v]}" -- "{labels[v]}";')
    lines.append('}')
    return '\n'.join(lines) + '\n'


def graph_to_edge_list(g: FiniteGraph) -> str:
    """One ``u v`` line per edge, loops as ``u u``."""
    labels = [format_graph_vertex(v) for v in g.vertices]
    rows = [f'{labels[u]} {labels[v]}' for u, v in g.sorted_edges()]
    rows.extend(f'{labels[v]} {labels[v]}' for v in sorted(g.loops))
    return ''.join(row + '\n' for row in rows)


def _csv(header: Sequence[str], rows: Iterable[Sequence[object]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator='\n')
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def coloring_to_csv(g: FiniteGraph, coloring: Sequence[int]) -> str:
    return _csv(('vertex', 'color'), ((format_graph_vertex(v), c) for v, c in zip(g.vertices, coloring)))


def betti_to_csv(numbers: Sequence[int]) -> str:
    return _csv(('dimension', 'reduced_betti'), enumerate(numbers))


def matrix_coordinates(data: ChainComplexData, d: int) -> str:
    """``∂_d`` as ``row col value`` lines, nonzero entries only, column-major."""
    lines: List[str] = []
    if 0 <= d < len(data.boundaries):
        for j, col in enumerate(data.boundaries[d]):
            for i, x in col:
                lines.append(f'{i} {j} {x}')
    return ''.join(line + '\n' for line in lines)
