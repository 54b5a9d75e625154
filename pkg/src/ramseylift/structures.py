"""Finite ordered structures: graphs, posets, ultrametric and metric spaces.

All four kinds carry an explicit linear order on their universe (a
:class:`~ramseylift.orders.BaseOrder`).  Distances are exact rationals;
no floating point is used anywhere.  Construction through the ``build``
classmethods or :func:`from_json` validates every axiom; the raw dataclass
constructors are unchecked so that tests can exercise the validators.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

from .errors import DomainError, EmbeddingError, StructureError
from .orders import BaseOrder, sort_subsets

Rational = Fraction


def parse_rational(value) -> Fraction:
    """Parse ``"p/q"``, ``"p"`` or an int into an exact rational."""
    if isinstance(value, bool):
        raise DomainError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError):
            raise DomainError(f"not a rational: {value!r}") from None
    raise DomainError(f"not a rational: {value!r}")


def format_rational(q: Fraction) -> str:
    """Canonical text form: ``"p"`` for integers, else ``"p/q"`` in lowest terms."""
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# structure kinds


@dataclass(frozen=True)
class LinOrderedGraph:
    order: BaseOrder
    edges: frozenset[frozenset]

    kind = "graph"

    @classmethod
    def build(cls, vertices: Iterable, edges: Iterable[Iterable]) -> "LinOrderedGraph":
        order = BaseOrder(vertices)
        g = cls(order, frozenset(frozenset(e) for e in edges))
        validate_structure(g)
        return g

    @property
    def universe(self) -> tuple:
        return self.order.elements


@dataclass(frozen=True)
class LinOrderedPoset:
    order: BaseOrder
    leq: frozenset[tuple]  # all pairs (a, b) with a below-or-equal b, reflexive pairs included

    kind = "poset"

    @classmethod
    def build(cls, vertices: Iterable, strict_pairs: Iterable[tuple]) -> "LinOrderedPoset":
        order = BaseOrder(vertices)
        pairs = set((a, b) for a, b in strict_pairs)
        pairs.update((v, v) for v in order.elements)
        p = cls(order, frozenset(pairs))
        validate_structure(p)
        return p

    @property
    def universe(self) -> tuple:
        return self.order.elements

    def below(self, a, b) -> bool:
        return (a, b) in self.leq

    def comparable(self, a, b) -> bool:
        return (a, b) in self.leq or (b, a) in self.leq

    def strict_pairs(self) -> list[tuple]:
        return [(a, b) for (a, b) in self.leq if a != b]

    def downset_of(self, a) -> frozenset:
        return frozenset(b for b in self.universe if self.below(b, a))


def _dist_matrix(order: BaseOrder, dist: Mapping) -> tuple[tuple[Fraction, ...], ...]:
    n = len(order)
    mat = [[Fraction(0)] * n for _ in range(n)]
    for (a, b), value in dist.items():
        ra, rb = order.rank(a), order.rank(b)
        mat[ra][rb] = value
        mat[rb][ra] = value
    return tuple(tuple(row) for row in mat)


class _SpaceMixin:
    def d(self, x, y) -> Fraction:
        return self.dmatrix[self.order.rank(x)][self.order.rank(y)]

    @property
    def universe(self) -> tuple:
        return self.order.elements

    def attained(self) -> frozenset[Fraction]:
        """All distances attained, including 0 for a nonempty space."""
        values = {Fraction(0)} if self.universe else set()
        for x, y in itertools.combinations(self.universe, 2):
            values.add(self.d(x, y))
        return frozenset(values)

    def point_ball(self, x, radius: Fraction) -> frozenset:
        return frozenset(y for y in self.universe if self.d(x, y) <= radius)


def _build_space(cls, points, dist, spectrum):
    order = BaseOrder(points)
    dist = {tuple(k): parse_rational(v) for k, v in dict(dist).items()}
    matrix = _dist_matrix(order, dist)
    if spectrum is None:
        values = {Fraction(0)}
        values.update(v for row in matrix for v in row)
        spect = tuple(sorted(values))
    else:
        spect = tuple(sorted(parse_rational(v) for v in spectrum))
    space = cls(order, matrix, spect)
    validate_structure(space)
    return space


@dataclass(frozen=True)
class ConvUltrametricSpace(_SpaceMixin):
    order: BaseOrder
    dmatrix: tuple[tuple[Fraction, ...], ...]
    spectrum: tuple[Fraction, ...]

    kind = "ultrametric"

    @classmethod
    def build(cls, points, dist, spectrum=None) -> "ConvUltrametricSpace":
        return _build_space(cls, points, dist, spectrum)


@dataclass(frozen=True)
class LinOrderedMetricSpace(_SpaceMixin):
    order: BaseOrder
    dmatrix: tuple[tuple[Fraction, ...], ...]
    spectrum: tuple[Fraction, ...]

    kind = "metric"

    @classmethod
    def build(cls, points, dist, spectrum=None) -> "LinOrderedMetricSpace":
        return _build_space(cls, points, dist, spectrum)


STRUCTURE_KINDS = ("graph", "poset", "ultrametric", "metric")


# ---------------------------------------------------------------------------
# validation


def _validate_spectrum(spectrum: tuple[Fraction, ...]) -> None:
    if not spectrum:
        raise StructureError("spectrum must be nonempty")
    if spectrum[0] != 0:
        raise StructureError("spectrum must start at 0")
    for a, b in zip(spectrum, spectrum[1:]):
        if not a < b:
            raise StructureError("spectrum must be strictly increasing")
    if any(v < 0 for v in spectrum):
        raise StructureError("spectrum values must be nonnegative")


def _validate_metric_axioms(space, strong: bool) -> None:
    pts = space.universe
    for x in pts:
        if space.d(x, x) != 0:
            raise StructureError(f"d({x!r},{x!r}) must be 0")
    for x, y in itertools.combinations(pts, 2):
        v = space.d(x, y)
        if v <= 0:
            raise StructureError(f"d({x!r},{y!r}) must be positive for distinct points")
    for x, y, z in itertools.permutations(pts, 3):
        if strong:
            if space.d(x, z) > max(space.d(x, y), space.d(y, z)):
                raise StructureError(
                    f"strong triangle inequality fails on ({x!r},{y!r},{z!r})"
                )
        else:
            if space.d(x, z) > space.d(x, y) + space.d(y, z):
                raise StructureError(f"triangle inequality fails on ({x!r},{y!r},{z!r})")
    if not space.attained() <= set(space.spectrum):
        extra = sorted(space.attained() - set(space.spectrum))
        raise StructureError(
            f"attained distances {[format_rational(v) for v in extra]} missing from spectrum"
        )


def _validate_convexity(space: ConvUltrametricSpace) -> None:
    pts = space.universe
    for x in pts:
        for radius in space.spectrum:
            ball = [space.order.rank(y) for y in space.point_ball(x, radius)]
            if ball and max(ball) - min(ball) + 1 != len(ball):
                raise StructureError(
                    f"ball around {x!r} of radius {format_rational(radius)} is not an interval"
                )


def validate_structure(s) -> dict:
    """Check every axiom of the structure's kind.

    Raises :class:`StructureError` naming the violated axiom and a witness.
    Returns a small report; for the metric kinds it includes the attained
    spectrum.
    """
    kind = getattr(s, "kind", None)
    if kind == "graph":
        for e in s.edges:
            if len(e) != 2:
                raise StructureError(f"edge {set(e)!r} must have exactly 2 vertices")
            for v in e:
                if v not in s.order:
                    raise StructureError(f"edge vertex {v!r} not declared")
        return {"kind": kind, "size": len(s.order), "edges": len(s.edges)}
    if kind == "poset":
        elems = s.universe
        for a, b in s.leq:
            if a not in s.order or b not in s.order:
                raise StructureError(f"relation pair ({a!r},{b!r}) uses undeclared elements")
        for a in elems:
            if not s.below(a, a):
                raise StructureError(f"relation not reflexive at {a!r}")
        for a, b in s.leq:
            if a != b and s.below(b, a):
                raise StructureError(f"relation not antisymmetric on ({a!r},{b!r})")
        for a, b in s.leq:
            for c in elems:
                if s.below(b, c) and not s.below(a, c):
                    raise StructureError(f"relation not transitive via ({a!r},{b!r},{c!r})")
        for a, b in s.leq:
            if a != b and not s.order.rank(a) < s.order.rank(b):
                raise StructureError(
                    f"linear order does not extend the partial order on ({a!r},{b!r})"
                )
        return {"kind": kind, "size": len(s.order), "relation_pairs": len(s.leq)}
    if kind in ("ultrametric", "metric"):
        _validate_spectrum(s.spectrum)
        _validate_metric_axioms(s, strong=(kind == "ultrametric"))
        if kind == "ultrametric":
            _validate_convexity(s)
        return {
            "kind": kind,
            "size": len(s.order),
            "spectrum": [format_rational(v) for v in s.spectrum],
            "attained": [format_rational(v) for v in sorted(s.attained())],
        }
    raise StructureError(f"unknown structure kind: {kind!r}")


# ---------------------------------------------------------------------------
# embeddings


@dataclass(frozen=True)
class Embedding:
    """An injective map between same-kind structures that preserves and
    reflects all relations; build through :func:`check_embedding`."""

    source: object
    target: object
    mapping: tuple[tuple, ...]  # (source element, target element), in source order

    def __call__(self, x):
        return self.as_dict[x]

    @property
    def as_dict(self) -> dict:
        d = self.__dict__.get("_as_dict")
        if d is None:
            d = dict(self.mapping)
            self.__dict__["_as_dict"] = d
        return d

    def image(self) -> tuple:
        return tuple(t for _, t in self.mapping)

    def text(self) -> str:
        return ", ".join(f"{a!r}->{b!r}" for a, b in self.mapping)


def _as_mapping(f) -> dict:
    return f.as_dict if isinstance(f, Embedding) else dict(f)


def compose_embeddings(g: Embedding, f: Embedding) -> Embedding:
    """The composite ``g after f``; embeddings compose to embeddings."""
    if f.target != g.source:
        raise DomainError("embedding composition: inner target differs from outer source")
    return Embedding(f.source, g.target, tuple((a, g(b)) for a, b in f.mapping))


def identity_embedding(s) -> Embedding:
    return Embedding(s, s, tuple((v, v) for v in s.universe))


def check_embedding(f, source, target) -> Embedding:
    """Validate a candidate map as an embedding of ``source`` into ``target``.

    Checks injectivity, strict preservation of the linear order, and the
    kind's relational clauses in both directions; errors name the violated
    clause with a witness pair.
    """
    if source.kind != target.kind:
        raise EmbeddingError(f"kind mismatch: {source.kind} into {target.kind}")
    m = _as_mapping(f)
    for v in source.universe:
        if v not in m:
            raise EmbeddingError(f"map does not cover source element {v!r}")
    for v in m:
        if v not in source.order:
            raise EmbeddingError(f"map defined on non-element {v!r}")
        if m[v] not in target.order:
            raise EmbeddingError(f"image {m[v]!r} of {v!r} not in target")
    images = [m[v] for v in source.universe]
    if len(set(images)) != len(images):
        raise EmbeddingError("map is not injective")
    uni = source.universe
    for a, b in itertools.combinations(uni, 2):  # a < b in source order
        if not target.order.rank(m[a]) < target.order.rank(m[b]):
            raise EmbeddingError(f"linear order not preserved on ({a!r},{b!r})")
    kind = source.kind
    if kind == "graph":
        for a, b in itertools.combinations(uni, 2):
            here = frozenset((a, b)) in source.edges
            there = frozenset((m[a], m[b])) in target.edges
            if here != there:
                clause = "preserved" if here else "reflected"
                raise EmbeddingError(f"adjacency not {clause} on ({a!r},{b!r})")
    elif kind == "poset":
        for a in uni:
            for b in uni:
                here = source.below(a, b)
                there = target.below(m[a], m[b])
                if here != there:
                    clause = "preserved" if here else "reflected"
                    raise EmbeddingError(f"partial order not {clause} on ({a!r},{b!r})")
    else:
        for a, b in itertools.combinations(uni, 2):
            if source.d(a, b) != target.d(m[a], m[b]):
                raise EmbeddingError(
                    f"distance not preserved on ({a!r},{b!r}): "
                    f"{format_rational(source.d(a, b))} vs {format_rational(target.d(m[a], m[b]))}"
                )
    return Embedding(source, target, tuple((v, m[v]) for v in uni))


def _pair_compatible(source, target, a, fa, b, fb) -> bool:
    kind = source.kind
    if kind == "graph":
        return (frozenset((a, b)) in source.edges) == (frozenset((fa, fb)) in target.edges)
    if kind == "poset":
        return source.below(a, b) == target.below(fa, fb) and source.below(b, a) == target.below(
            fb, fa
        )
    return source.d(a, b) == target.d(fa, fb)


def enumerate_embeddings(source, target) -> Iterator[Embedding]:
    """Yield all embeddings of ``source`` into ``target`` exactly once.

    Backtracks over source elements in declared order; since the linear
    order must be preserved, candidate images are strictly increasing, so
    the output is sorted lexicographically by image tuple.
    """
    if source.kind != target.kind:
        raise EmbeddingError(f"kind mismatch: {source.kind} into {target.kind}")
    src = source.universe
    tgt = target.universe
    k = len(src)
    chosen: list = []

    def walk(i: int, lo: int) -> Iterator[Embedding]:
        if i == k:
            yield Embedding(source, target, tuple(zip(src, chosen)))
            return
        for j in range(lo, len(tgt) - (k - i) + 1):
            cand = tgt[j]
            if all(
                _pair_compatible(source, target, src[p], chosen[p], src[i], cand)
                for p in range(i)
            ):
                chosen.append(cand)
                yield from walk(i + 1, j + 1)
                chosen.pop()

    yield from walk(0, 0)


def induced_substructure(s, subset: Iterable):
    """The substructure induced on a subset, keeping the inherited order."""
    keep = set(subset)
    for v in keep:
        if v not in s.order:
            raise DomainError(f"element {v!r} not in structure")
    vertices = [v for v in s.universe if v in keep]
    if s.kind == "graph":
        return LinOrderedGraph.build(vertices, [e for e in s.edges if e <= keep])
    if s.kind == "poset":
        return LinOrderedPoset.build(
            vertices, [(a, b) for (a, b) in s.strict_pairs() if a in keep and b in keep]
        )
    dist = {
        (a, b): s.d(a, b) for a, b in itertools.combinations(vertices, 2)
    }
    cls = ConvUltrametricSpace if s.kind == "ultrametric" else LinOrderedMetricSpace
    return cls.build(vertices, dist, s.spectrum)


# ---------------------------------------------------------------------------
# downsets and balls


def downsets(p: LinOrderedPoset) -> tuple[frozenset, ...]:
    """All nonempty downsets of the poset, strictly increasing under the
    anti-lexicographic subset order of the poset's linear order."""
    elems = p.universe
    found = []
    for mask in range(1, 1 << len(elems)):
        subset = frozenset(elems[i] for i in range(len(elems)) if mask >> i & 1)
        if all(p.below(b, a) <= (b in subset) for a in subset for b in elems):
            found.append(subset)
    return tuple(sort_subsets(p.order, "alex", found))


@dataclass(frozen=True)
class Ball:
    """A ball of an ultrametric space, identified by the pair
    (point set, nominal radius index into the spectrum).

    The same point set can arise at two radii; keeping the index makes
    the componentwise partial order on balls antisymmetric.
    """

    points: frozenset
    radius_index: int

    def leq(self, other: "Ball") -> bool:
        return self.points <= other.points and self.radius_index <= other.radius_index


def balls(space: ConvUltrametricSpace) -> tuple[Ball, ...]:
    """All balls of the space as (point set, radius index) pairs,
    deduplicated on the pair and sorted by radius index then minimum point."""
    out = set()
    for i, radius in enumerate(space.spectrum):
        for x in space.universe:
            out.add(Ball(space.point_ball(x, radius), i))
    return tuple(
        sorted(out, key=lambda b: (b.radius_index, min(space.order.rank(y) for y in b.points)))
    )


# ---------------------------------------------------------------------------
# JSON round trip


def to_json(s) -> dict:
    """Canonical JSON form; round-trips bit-exactly through :func:`from_json`."""
    out = {"kind": s.kind, "universe": list(s.universe)}
    rank = s.order.rank
    if s.kind == "graph":
        out["edges"] = sorted(
            (sorted(e, key=rank) for e in s.edges), key=lambda e: (rank(e[0]), rank(e[1]))
        )
    elif s.kind == "poset":
        out["leq"] = sorted(
            ([a, b] for (a, b) in s.strict_pairs()), key=lambda p: (rank(p[0]), rank(p[1]))
        )
    else:
        out["dist"] = [
            [a, b, format_rational(s.d(a, b))]
            for a, b in itertools.combinations(s.universe, 2)
        ]
        out["spectrum"] = [format_rational(v) for v in s.spectrum]
    return out


def from_json(data: Mapping):
    """Build and validate a structure from its JSON form."""
    try:
        kind = data["kind"]
        universe = list(data["universe"])
    except (KeyError, TypeError) as exc:
        raise DomainError(f"structure JSON missing field: {exc}") from None
    if kind == "graph":
        return LinOrderedGraph.build(universe, [tuple(e) for e in data.get("edges", [])])
    if kind == "poset":
        return LinOrderedPoset.build(universe, [tuple(p) for p in data.get("leq", [])])
    if kind in ("ultrametric", "metric"):
        dist = {}
        for entry in data.get("dist", []):
            if len(entry) != 3:
                raise DomainError(f"bad dist entry: {entry!r}")
            a, b, v = entry
            dist[(a, b)] = parse_rational(v)
        spectrum = data.get("spectrum")
        cls = ConvUltrametricSpace if kind == "ultrametric" else LinOrderedMetricSpace
        return cls.build(universe, dist, spectrum)
    raise DomainError(f"unknown structure kind {kind!r}")
