"""The canonical end-to-end example for the graph encoding.

A fixed 4-vertex graph, a 3-vertex subgraph, a 16-position 7-parameter
word and the embedding between them; every intermediate value of the
encoding pipeline (variable blocks, vertex images, witness blocks, the
witness word, its composite, and the re-encoded images) is pinned so the
whole construction can be re-checked value by value.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import words as W
from .errors import DomainError
from .graph_encoding import encode_graph, phi_graph, witness_graph
from .structures import LinOrderedGraph, check_embedding

ALPHABET = W.Alphabet(["0"])

GRAPH = LinOrderedGraph.build([1, 2, 3, 4], [(1, 2), (2, 3), (2, 4)])
SUBGRAPH = LinOrderedGraph.build([1, 2, 3], [(1, 2), (1, 3)])
EMBEDDING_MAP = {1: 2, 2: 3, 3: 4}

WORD_TEXT = "0 x1 0 0 x2 0 x1 x3 x3 x4 x2 x5 x6 0 x7 x1"

EXPECTED = {
    "X_1": {2, 7, 16},
    "X_2": {5, 11},
    "X_3": {8, 9},
    "X_4": {10},
    "X_5": {12},
    "X_6": {13},
    "X_7": {15},
    "image_1": {2, 7, 12, 16},
    "image_2": {5, 11, 12, 13, 15},
    "image_3": {8, 9, 13},
    "image_4": {10, 15},
    "block_1": {5, 11, 12},
    "block_2": {8, 9},
    "block_3": {10},
    "block_4": {13},
    "block_5": {15},
    "h": "0 x1 x2 x3 x1 x4 x5",
    "u_h": "0 0 0 0 x1 0 0 x2 x2 x3 x1 x1 x4 0 x5 0",
    "sub_image_1": {5, 11, 12, 13, 15},
    "sub_image_2": {8, 9, 13},
    "sub_image_3": {10, 15},
}


@dataclass
class FixtureCheck:
    name: str
    expected: object
    actual: object

    @property
    def ok(self) -> bool:
        return self.expected == self.actual

    def to_json(self) -> dict:
        def render(v):
            return sorted(v) if isinstance(v, (set, frozenset)) else v

        return {
            "name": self.name,
            "expected": render(self.expected),
            "actual": render(self.actual),
            "ok": self.ok,
        }


def run_fixture(corrupt: str | None = None) -> list[FixtureCheck]:
    """Recompute the full pipeline and compare every pinned value.

    ``corrupt`` perturbs one expected value by name, to demonstrate how a
    mismatch is reported; it must name a known value.
    """
    expected = dict(EXPECTED)
    if corrupt is not None:
        if corrupt not in expected:
            raise DomainError(f"unknown fixture value {corrupt!r}")
        value = expected[corrupt]
        expected[corrupt] = value + " (corrupted)" if isinstance(value, str) else value | {99}

    u = W.parse(WORD_TEXT, ALPHABET)
    checks = []
    for i in range(1, 8):
        checks.append(
            FixtureCheck(f"X_{i}", expected[f"X_{i}"], set(W.variable_positions(u, i)))
        )
    images = phi_graph(GRAPH, u)
    for v in GRAPH.universe:
        checks.append(FixtureCheck(f"image_{v}", expected[f"image_{v}"], set(images[v])))

    f = check_embedding(EMBEDDING_MAP, SUBGRAPH, GRAPH)
    h = witness_graph(GRAPH, SUBGRAPH, f, u)

    enc2 = encode_graph(SUBGRAPH)
    p = len(SUBGRAPH.universe)
    edge_blocks = {}
    for j, e in enumerate(enc2.edge_order):
        vi, vk = sorted(e, key=SUBGRAPH.order.rank)
        edge_blocks[p + j] = images[f(vi)] & images[f(vk)]
    union = frozenset().union(*edge_blocks.values())
    for i, v in enumerate(SUBGRAPH.universe):
        checks.append(
            FixtureCheck(f"block_{i + 1}", expected[f"block_{i + 1}"], set(images[f(v)] - union))
        )
    for j in sorted(edge_blocks):
        checks.append(FixtureCheck(f"block_{j + 1}", expected[f"block_{j + 1}"], set(edge_blocks[j])))

    checks.append(FixtureCheck("h", expected["h"], h.text()))
    composed = W.compose(u, h)
    checks.append(FixtureCheck("u_h", expected["u_h"], composed.text()))
    sub_images = phi_graph(SUBGRAPH, composed)
    for v in SUBGRAPH.universe:
        checks.append(
            FixtureCheck(f"sub_image_{v}", expected[f"sub_image_{v}"], set(sub_images[v]))
        )
        if sub_images[v] != images[f(v)]:
            checks.append(
                FixtureCheck(f"factorization_at_{v}", set(images[f(v)]), set(sub_images[v]))
            )
    return checks
