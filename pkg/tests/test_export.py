from fractions import Fraction

from lattice.chromatic.complexes import Complex
from lattice.chromatic.export import (
    betti_to_csv,
    coloring_to_csv,
    format_graph_vertex,
    graph_to_dot,
    graph_to_edge_list,
    matrix_coordinates,
)
from lattice.chromatic.gamma import box_subgraph, quotient_graph, uniform_params
from lattice.chromatic.homology import boundary_matrices


def test_graph_vertex_labels():
    assert format_graph_vertex((1, 0, 2)) == '1,0,2'
    assert format_graph_vertex(3) == '3'


def test_dot():
    g = box_subgraph(uniform_params(1, Fraction(1, 2)), 3)
    assert graph_to_dot(g, 'box') == (
        'graph box {\n'
        '  "0";\n'
        '  "1";\n'
        '  "2";\n'
        '  "0" -- "1";\n'
        '  "1" -- "2";\n'
        '}\n'
    )


def test_edge_list_with_loops():
    g = quotient_graph(uniform_params(1, 2), 2)
    assert graph_to_edge_list(g) == '0 1\n0 0\n1 1\n'
    assert graph_to_edge_list(box_subgraph(uniform_params(2, Fraction(3, 10), 4), 2)) == '0,0 1,1\n'


def test_csv():
    g = box_subgraph(uniform_params(1, Fraction(1, 2)), 3)
    assert coloring_to_csv(g, (0, 1, 0)) == 'vertex,color\n0,0\n1,1\n2,0\n'
    assert betti_to_csv([0, 4]) == 'dimension,reduced_betti\n0,0\n1,4\n'


def test_matrix_coordinates():
    data = boundary_matrices(Complex.from_facets([['a', 'b']]))
    assert matrix_coordinates(data, 1) == '0 0 -1\n1 0 1\n'
    assert matrix_coordinates(data, 0) == '0 0 1\n0 1 1\n'
    assert matrix_coordinates(data, 4) == ''
