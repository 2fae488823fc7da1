import numpy as np
import pytest

from rdm2scm import DirectedMixedGraph, InvalidArgumentError, d_separated, graph_equal, to_dot

from dsep_oracle import path_separated, random_dmg, random_query, walk_separated


def chain(*edges, bi=(), nodes=None):
    nodes = nodes or sorted({v for e in list(edges) + list(bi) for v in e})
    return DirectedMixedGraph.make(nodes, edges, bi)


def test_textbook_cases():
    g = chain(("a", "b"), ("b", "c"))
    assert not d_separated(g, {"a"}, {"c"})
    assert d_separated(g, {"a"}, {"c"}, {"b"})
    fork = chain(("b", "a"), ("b", "c"))
    assert d_separated(fork, {"a"}, {"c"}, {"b"})
    coll = chain(("a", "b"), ("c", "b"), ("b", "d"))
    assert d_separated(coll, {"a"}, {"c"})
    assert not d_separated(coll, {"a"}, {"c"}, {"b"})
    assert not d_separated(coll, {"a"}, {"c"}, {"d"})  # descendant of the collider


def test_bidirected_and_cycles():
    g = chain(bi=[("a", "b"), ("b", "c")])
    assert d_separated(g, {"a"}, {"c"})
    assert not d_separated(g, {"a"}, {"c"}, {"b"})
    cyc = chain(("a", "b"), ("b", "c"), ("c", "b"), ("c", "d"))
    assert not d_separated(cyc, {"a"}, {"d"})
    # b is a collider on a -> b <- c -> d, so conditioning on b opens it
    assert not d_separated(cyc, {"a"}, {"d"}, {"b"})
    assert d_separated(cyc, {"a"}, {"d"}, {"c"})


def test_edgeless():
    g = DirectedMixedGraph.make(list("abcde"))
    assert d_separated(g, {"a"}, {"b", "c"}, {"d"})
    assert d_separated(g, {"a"}, {"e"})


def test_query_errors():
    g = chain(("a", "b"), ("b", "c"))
    with pytest.raises(InvalidArgumentError):
        d_separated(g, {"a"}, {"a"})
    with pytest.raises(InvalidArgumentError):
        d_separated(g, {"a"}, {"c"}, {"a"})
    with pytest.raises(InvalidArgumentError):
        d_separated(g, {"a"}, {"zz"})
    loop = chain(("a", "b"), ("b", "b"), ("b", "c"))
    with pytest.raises(InvalidArgumentError, match="remove_self_loops_linear"):
        d_separated(loop, {"a"}, {"c"})


def test_graph_invariants():
    with pytest.raises(InvalidArgumentError):
        DirectedMixedGraph.make(["a"], [], [("a", "a")])
    with pytest.raises(InvalidArgumentError):
        DirectedMixedGraph.make(["a"], [("a", "b")])
    with pytest.raises(InvalidArgumentError):
        DirectedMixedGraph.make(["a", "a"])
    g = DirectedMixedGraph.make(["a", "b"], [("a", "b"), ("a", "b")], [("a", "b"), ("b", "a")])
    assert len(g.directed) == 1 and len(g.bidirected) == 1


def test_graph_equal():
    g1 = DirectedMixedGraph.make(["a", "b", "c"], [("a", "b"), ("c", "b")], [("a", "c")])
    g2 = DirectedMixedGraph.make(["c", "b", "a"], [("c", "b"), ("a", "b")], [("c", "a")])
    assert graph_equal(g1, g1) and graph_equal(g1, g2)
    assert not graph_equal(g1, g1.without_incoming(["b"]))
    assert graph_equal(DirectedMixedGraph.from_data(g1.to_data()), g1)


def test_dot_format():
    assert to_dot(DirectedMixedGraph.make(["x"])) == 'digraph "G" {\n  "x";\n}\n'
    g = DirectedMixedGraph.make(["b", "a"], [("b", "a"), ("a", "a")], [("b", "a")])
    text = to_dot(g, "demo")
    assert text.splitlines() == [
        'digraph "demo" {',
        '  "a";',
        '  "b";',
        '  "a" -> "a";',
        '  "b" -> "a";',
        '  "a" -> "b" [dir=both, style=dashed];',
        "}",
    ]
    assert to_dot(DirectedMixedGraph.make(["a", "b"], [("a", "a"), ("b", "a")], [("a", "b")]), "demo") == text


def test_against_oracles():
    rng = np.random.default_rng(2024)
    for _ in range(200):
        nodes, directed, bidirected = random_dmg(rng, 7)
        g = DirectedMixedGraph.make(nodes, directed, bidirected)
        A, B, C = random_query(rng, nodes)
        got = d_separated(g, A, B, C)
        assert got == path_separated(nodes, directed, bidirected, A, B, C)
        assert got == walk_separated(nodes, directed, bidirected, A, B, C)
        assert got == d_separated(g, B, A, C)
