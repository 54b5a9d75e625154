import itertools
import json
import random
from fractions import Fraction

import pytest

from ramseylift.errors import DomainError, EmbeddingError, StructureError
from ramseylift.harness import random_structure
from ramseylift.orders import LESS, compare_subsets
from ramseylift.structures import (
    Ball,
    ConvUltrametricSpace,
    LinOrderedGraph,
    LinOrderedMetricSpace,
    LinOrderedPoset,
    balls,
    check_embedding,
    compose_embeddings,
    downsets,
    enumerate_embeddings,
    from_json,
    identity_embedding,
    induced_substructure,
    to_json,
    validate_structure,
)

from util import all_posets_on, brute_force_embeddings

DEMO_GRAPH = LinOrderedGraph.build([1, 2, 3, 4], [(1, 2), (2, 3), (2, 4)])
DEMO_SUB = LinOrderedGraph.build([1, 2, 3], [(1, 2), (1, 3)])
ULTRA3 = ConvUltrametricSpace.build(
    ["a", "b", "c"], {("a", "b"): 1, ("a", "c"): 2, ("b", "c"): 2}, [0, 1, 2]
)


def test_demo_graph_valid():
    report = validate_structure(DEMO_GRAPH)
    assert report == {"kind": "graph", "size": 4, "edges": 3}


def test_ultrametric_valid_and_convex():
    report = validate_structure(ULTRA3)
    assert report["attained"] == ["0", "1", "2"]


def test_linear_order_must_extend_partial_order():
    with pytest.raises(StructureError, match="does not extend"):
        LinOrderedPoset.build([2, 1], [(1, 2)])


def test_poset_transitivity_checked():
    with pytest.raises(StructureError, match="transitive"):
        LinOrderedPoset.build([1, 2, 3], [(1, 2), (2, 3)])


def test_graph_edge_shape_checked():
    with pytest.raises(StructureError):
        LinOrderedGraph.build([1, 2], [(1, 1)])
    with pytest.raises(StructureError, match="not declared"):
        LinOrderedGraph.build([1, 2], [(1, 3)])


def test_metric_triangle_checked():
    with pytest.raises(StructureError, match="triangle"):
        LinOrderedMetricSpace.build([1, 2, 3], {(1, 2): 1, (2, 3): 1, (1, 3): 5})


def test_strong_triangle_checked():
    with pytest.raises(StructureError, match="strong triangle"):
        ConvUltrametricSpace.build([1, 2, 3], {(1, 2): 1, (2, 3): 1, (1, 3): 2})


def test_convexity_checked():
    # valid ultrametric, but the radius-1 ball around a is {a, c}
    with pytest.raises(StructureError, match="interval"):
        ConvUltrametricSpace.build(["a", "b", "c"], {("a", "b"): 2, ("a", "c"): 1, ("b", "c"): 2})


def test_spectrum_must_cover_attained():
    with pytest.raises(StructureError, match="missing from spectrum"):
        LinOrderedMetricSpace.build([1, 2], {(1, 2): 1}, [0, 2])


def test_zero_distance_for_distinct_points():
    with pytest.raises(StructureError, match="positive"):
        LinOrderedMetricSpace.build([1, 2], {(1, 2): 0})


# --------------------------------------------------------------------------
# embeddings


def test_demo_embedding_valid():
    f = check_embedding({1: 2, 2: 3, 3: 4}, DEMO_SUB, DEMO_GRAPH)
    assert f.image() == (2, 3, 4)


def test_identity_is_embedding():
    for s in (DEMO_GRAPH, ULTRA3):
        check_embedding(identity_embedding(s).as_dict, s, s)


def test_collapsing_map_rejected():
    with pytest.raises(EmbeddingError, match="injective"):
        check_embedding({1: 2, 2: 2, 3: 4}, DEMO_SUB, DEMO_GRAPH)


def test_order_violation_rejected():
    square = LinOrderedGraph.build([1, 2], [])
    with pytest.raises(EmbeddingError, match="linear order"):
        check_embedding({1: 2, 2: 1}, square, square)


def test_adjacency_reflection_rejected():
    pair = LinOrderedGraph.build([1, 2], [])
    with pytest.raises(EmbeddingError, match="reflected"):
        check_embedding({1: 1, 2: 2}, pair, LinOrderedGraph.build([1, 2], [(1, 2)]))


def test_distance_preservation_rejected():
    near = LinOrderedMetricSpace.build([1, 2], {(1, 2): 1})
    far = LinOrderedMetricSpace.build([1, 2], {(1, 2): 2})
    with pytest.raises(EmbeddingError, match="distance"):
        check_embedding({1: 1, 2: 2}, near, far)


def test_embedding_counts_for_chains():
    chain2 = LinOrderedPoset.build([1, 2], [(1, 2)])
    chain3 = LinOrderedPoset.build([1, 2, 3], [(1, 2), (1, 3), (2, 3)])
    anti2 = LinOrderedPoset.build([1, 2], [])
    assert len(list(enumerate_embeddings(chain2, chain3))) == 3
    assert list(enumerate_embeddings(anti2, chain3)) == []
    embeddings = list(enumerate_embeddings(chain3, chain3))
    assert identity_embedding(chain3) in embeddings


@pytest.mark.parametrize("selector", ["graph", "poset", "ultrametric", "metric"])
def test_enumeration_matches_brute_force(selector):
    rng = random.Random(f"structures:{selector}")
    found_nonempty = 0
    for _ in range(25):
        tgt = random_structure(rng, selector)
        if len(tgt.universe) > 5:
            continue
        src_size = rng.randint(1, min(3, len(tgt.universe)))
        src = induced_substructure(tgt, rng.sample(list(tgt.universe), src_size))
        fast = list(enumerate_embeddings(src, tgt))
        slow = brute_force_embeddings(src, tgt)
        assert {e.mapping for e in fast} == {e.mapping for e in slow}
        assert len(fast) == len(slow)
        found_nonempty += bool(fast)
    assert found_nonempty > 0


@pytest.mark.parametrize("selector", ["graph", "poset", "ultrametric", "metric"])
def test_embedding_composition_closed(selector):
    rng = random.Random(f"structures:compose:{selector}")
    for _ in range(20):
        c = random_structure(rng, selector)
        if len(c.universe) < 2:
            continue
        b = induced_substructure(c, rng.sample(list(c.universe), rng.randint(1, len(c.universe))))
        a = induced_substructure(b, rng.sample(list(b.universe), rng.randint(1, len(b.universe))))
        f = rng.choice(list(enumerate_embeddings(a, b)))
        g = rng.choice(list(enumerate_embeddings(b, c)))
        composite = compose_embeddings(g, f)
        check_embedding(composite.as_dict, a, c)
        ident = identity_embedding(a)
        assert compose_embeddings(f, ident) == f


# --------------------------------------------------------------------------
# downsets and balls


def test_downsets_examples():
    anti2 = LinOrderedPoset.build([1, 2], [])
    chain2 = LinOrderedPoset.build([1, 2], [(1, 2)])
    point = LinOrderedPoset.build([1], [])
    assert downsets(anti2) == (frozenset({1}), frozenset({2}), frozenset({1, 2}))
    assert downsets(chain2) == (frozenset({1}), frozenset({1, 2}))
    assert downsets(point) == (frozenset({1}),)


@pytest.mark.parametrize("n", range(1, 5))
def test_downsets_complete_and_sorted(n):
    for p in all_posets_on(n):
        found = downsets(p)
        # closure and principality
        for d in found:
            assert all(p.below(b, a) <= (b in d) for a in d for b in p.universe)
        for a in p.universe:
            assert p.downset_of(a) in found
        # brute-force completeness
        expected = set()
        for mask in range(1, 1 << n):
            s = frozenset(i + 1 for i in range(n) if mask >> i & 1)
            if all(p.below(b, a) <= (b in s) for a in s for b in p.universe):
                expected.add(s)
        assert set(found) == expected
        # strictly increasing anti-lexicographically
        for a, b in zip(found, found[1:]):
            assert compare_subsets(p.order, "alex", a, b) == LESS


def test_balls_example():
    got = [(tuple(sorted(b.points)), b.radius_index) for b in balls(ULTRA3)]
    assert got == [
        (("a",), 0),
        (("b",), 0),
        (("c",), 0),
        (("a", "b"), 1),
        (("c",), 1),
        (("a", "b", "c"), 2),
    ]


def test_balls_single_point():
    one = ConvUltrametricSpace.build(["a"], {}, [0])
    assert balls(one) == (Ball(frozenset({"a"}), 0),)


def test_balls_keep_equal_sets_with_distinct_radii():
    two = ConvUltrametricSpace.build(["a", "b"], {("a", "b"): 2}, [0, 1, 2])
    got = balls(two)
    assert Ball(frozenset({"a"}), 0) in got
    assert Ball(frozenset({"a"}), 1) in got
    assert len(got) == 5


def test_balls_properties_random():
    rng = random.Random("structures:balls")
    for _ in range(30):
        space = random_structure(rng, "ultrametric")
        found = balls(space)
        assert len(set(found)) == len(found)
        by_radius = {}
        for b in found:
            ranks = sorted(space.order.rank(x) for x in b.points)
            assert ranks[-1] - ranks[0] + 1 == len(ranks)  # convex
            by_radius.setdefault(b.radius_index, []).append(b.points)
        for same in by_radius.values():
            for p, q in itertools.combinations(same, 2):
                assert not (p & q)


# --------------------------------------------------------------------------
# JSON round trip


@pytest.mark.parametrize("selector", ["graph", "poset", "ultrametric", "metric"])
def test_json_round_trip_random(selector):
    rng = random.Random(f"structures:json:{selector}")
    for _ in range(25):
        s = random_structure(rng, selector)
        data = json.loads(json.dumps(to_json(s)))
        assert from_json(data) == s
        assert to_json(from_json(data)) == to_json(s)


def test_json_rationals_exact():
    s = LinOrderedMetricSpace.build(
        [1, 2], {(1, 2): Fraction(7, 3)}, [0, Fraction(7, 3), Fraction(14, 3)]
    )
    data = to_json(s)
    assert data["dist"] == [[1, 2, "7/3"]]
    assert data["spectrum"] == ["0", "7/3", "14/3"]
    assert from_json(data) == s


def test_json_spectrum_defaults_to_attained():
    data = {"kind": "metric", "universe": [1, 2], "dist": [[1, 2, "3/2"]]}
    s = from_json(data)
    assert s.spectrum == (Fraction(0), Fraction(3, 2))


def test_json_errors():
    with pytest.raises(DomainError):
        from_json({"kind": "mystery", "universe": []})
    with pytest.raises(DomainError):
        from_json({"universe": [1]})
    with pytest.raises(DomainError):
        from_json({"kind": "metric", "universe": [1, 2], "dist": [[1, 2, "x"]]})
