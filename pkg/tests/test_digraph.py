import pytest
from hypothesis import given, settings

from dichro.digraph import (
    DIGON,
    NON_ADJACENT,
    SIMPLE_BACKWARD,
    SIMPLE_FORWARD,
    classify_pair,
    complement,
    digon_neighbours,
    find_directed_cycle,
    from_arcs,
    induced,
    join_complete,
    parse_arc_list,
    simple_out_neighbours,
    subset_is_acyclic,
    underlying_edges,
    write_arc_list,
)
from dichro.errors import InputError, ParseError
from dichro.transforms import complete_digraph, directed_cycle

from strategies import digraphs


def test_from_arcs_directed_triangle():
    d = from_arcs(3, [(0, 1), (1, 2), (2, 0)])
    assert d.n == 3 and d.m == 3
    assert d.arcs() == [(0, 1), (1, 2), (2, 0)]


def test_from_arcs_digon_and_singleton():
    digon = from_arcs(2, [(0, 1), (1, 0)])
    assert digon.m == 2 and digon.digon_mask(0) == 0b10
    single = from_arcs(1, [])
    assert single.n == 1 and single.m == 0


def test_from_arcs_collapses_duplicates():
    d = from_arcs(2, [(0, 1), (0, 1), (1, 0)])
    assert d.m == 2


def test_from_arcs_rejects_bad_input():
    with pytest.raises(InputError):
        from_arcs(2, [(0, 2)])
    with pytest.raises(InputError):
        from_arcs(2, [(1, 1)])


def test_join_complete_counts():
    h4 = join_complete(directed_cycle(3), complete_digraph(2))
    assert h4.n == 5
    assert h4.m == 3 + 2 + 2 * 3 * 2  # 17


def test_join_complete_identity_and_digons():
    h = from_arcs(3, [(0, 1)])
    assert join_complete(h, from_arcs(0, [])) == h
    assert join_complete(complete_digraph(1), complete_digraph(1)) == complete_digraph(2)


def test_join_complete_associative():
    a, b, c = directed_cycle(2), from_arcs(1, []), directed_cycle(3)
    left = join_complete(join_complete(a, b), c)
    right = join_complete(a, join_complete(b, c))
    assert left.n == right.n and left.m == right.m
    deg = lambda d: sorted((d.out_degree(v), d.in_degree(v)) for v in range(d.n))
    assert deg(left) == deg(right)
    assert left == right  # block layout makes the relabelling the identity


def test_complement_examples():
    assert complement(complete_digraph(4)).m == 0
    rev = complement(directed_cycle(3))
    assert sorted(rev.arcs()) == [(0, 2), (1, 0), (2, 1)]
    assert complement(from_arcs(2, [])) == complete_digraph(2)


def test_underlying_graph_examples():
    assert underlying_edges(directed_cycle(3)) == [(0, 1), (0, 2), (1, 2)]
    assert len(underlying_edges(complete_digraph(4))) == 6
    assert underlying_edges(from_arcs(3, [(0, 1)])) == [(0, 1)]


def test_induced():
    h4 = join_complete(directed_cycle(3), complete_digraph(2))
    sub, index = induced(h4, [0, 1, 2])
    assert sub == directed_cycle(3)
    assert index == {0: 0, 1: 1, 2: 2}
    same, _ = induced(h4, range(5))
    assert same == h4
    tri, _ = induced(complete_digraph(5), [1, 3, 4])
    assert tri == complete_digraph(3)
    with pytest.raises(InputError):
        induced(h4, [0, 9])


def test_find_directed_cycle():
    assert find_directed_cycle(directed_cycle(3)) == [0, 1, 2]
    assert find_directed_cycle(from_arcs(4, [])) is None
    digon_cycle = find_directed_cycle(from_arcs(3, [(1, 2), (2, 1)]))
    assert digon_cycle is not None and len(digon_cycle) == 2


def test_pair_classification():
    assert classify_pair(complete_digraph(2), 0, 1) == DIGON
    assert classify_pair(directed_cycle(3), 0, 1) == SIMPLE_FORWARD
    assert classify_pair(directed_cycle(3), 1, 0) == SIMPLE_BACKWARD
    assert classify_pair(from_arcs(3, []), 0, 2) == NON_ADJACENT
    with pytest.raises(InputError):
        classify_pair(directed_cycle(3), 1, 1)


def test_bulk_neighbour_queries():
    h4 = join_complete(directed_cycle(3), complete_digraph(2))
    assert digon_neighbours(h4, 0) == {3, 4}
    assert simple_out_neighbours(h4, 0) == {1}


@given(digraphs())
@settings(max_examples=150)
def test_degree_identity(d):
    for v in range(d.n):
        n_out = d.out_degree(v)
        n_in = d.in_degree(v)
        n_digon = d.digon_mask(v).bit_count()
        n_all = (d.out_masks[v] | d.in_masks[v]).bit_count()
        assert n_out + n_in - n_digon == n_all
    assert sum(d.out_degree(v) for v in range(d.n)) == d.m
    assert sum(d.in_degree(v) for v in range(d.n)) == d.m


@given(digraphs())
@settings(max_examples=150)
def test_complement_involution(d):
    assert complement(complement(d)) == d


@given(digraphs())
@settings(max_examples=150)
def test_cycle_detection_matches_sink_peeling(d):
    cycle = find_directed_cycle(d)
    peeled_empty = subset_is_acyclic(d, (1 << d.n) - 1)
    assert (cycle is None) == peeled_empty
    if cycle is not None:
        assert len(set(cycle)) == len(cycle) >= 2
        for a, b in zip(cycle, cycle[1:] + cycle[:1]):
            assert d.has_arc(a, b)


@given(digraphs())
@settings(max_examples=100)
def test_arc_list_round_trip(d):
    text = write_arc_list(d)
    assert parse_arc_list(text) == d
    assert write_arc_list(parse_arc_list(text)) == text


def test_parse_errors_carry_line_numbers():
    with pytest.raises(ParseError):
        parse_arc_list("")
    with pytest.raises(ParseError) as exc:
        parse_arc_list("d 2 1\n0 0\n")
    assert exc.value.line == 2
    with pytest.raises(ParseError):
        parse_arc_list("d 2 2\n0 1\n0 1\n")
    assert parse_arc_list("d 2 1\n0 1\n0 1\n", allow_duplicates=True).m == 1
    with pytest.raises(ParseError):
        parse_arc_list("d 2 5\n0 1\n")
