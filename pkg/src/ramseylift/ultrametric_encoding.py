"""Encoding of convexly ordered ultrametric spaces into ordered posets.

A space with spectrum ``0 = s_0 < ... < s_k`` encodes to the poset of its
balls (as (point set, radius index) pairs) under the componentwise order,
linearly ordered by radius then leftmost point.  Conversely a poset A
yields a space on the k-tuples over A where the distance between two
tuples is s_j for the least j such that they agree from index j on
(s_k when they disagree at the last index), ordered anti-lexicographically.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import BudgetError, DomainError, SpectrumError, VerificationError
from .orders import LESS, compare_tuples
from .structures import (
    Ball,
    ConvUltrametricSpace,
    Embedding,
    LinOrderedPoset,
    balls,
    check_embedding,
    validate_structure,
)

DEFAULT_MAX_POINTS = 4096


@dataclass(frozen=True)
class BallPoset:
    space: ConvUltrametricSpace
    poset: LinOrderedPoset  # elements are Ball values in radius-then-leftmost order


def _check_spectrum(spectrum) -> tuple[Fraction, ...]:
    spect = tuple(spectrum)
    if not spect or spect[0] != 0 or any(not a < b for a, b in zip(spect, spect[1:])):
        raise SpectrumError("spectrum must be sorted, distinct, and start at 0")
    return spect


def encode_ultrametric(space: ConvUltrametricSpace) -> BallPoset:
    """The ball poset of the space.

    Asserts center-independence: every point of a ball generates the same
    point set at the ball's nominal radius.
    """
    spect = _check_spectrum(space.spectrum)
    elems = balls(space)
    for b in elems:
        radius = spect[b.radius_index]
        for y in b.points:
            if space.point_ball(y, radius) != b.points:
                raise VerificationError(
                    f"ball {sorted(b.points)!r} at radius index {b.radius_index} "
                    f"depends on the choice of center"
                )
    pairs = [
        (a, b) for a, b in itertools.permutations(elems, 2) if a.leq(b)
    ]
    poset = LinOrderedPoset.build(elems, pairs)
    return BallPoset(space, poset)


def point_ball_pair(space: ConvUltrametricSpace, x, i: int) -> Ball:
    """The ball around x with nominal radius index i."""
    return Ball(space.point_ball(x, space.spectrum[i]), i)


def dist_ultra_tuples(poset: LinOrderedPoset, spectrum, a: tuple, b: tuple) -> Fraction:
    """Distance between two k-tuples: s_j for the least j with the tuples
    equal from index j on; s_k when no such j exists."""
    spect = _check_spectrum(spectrum)
    k = len(spect) - 1
    if len(a) != k or len(b) != k:
        raise DomainError(f"tuples must have length {k}")
    for entry in itertools.chain(a, b):
        if entry not in poset.order:
            raise DomainError(f"tuple entry {entry!r} is not a poset element")
    j = k
    for p in range(k - 1, -1, -1):
        if a[p] != b[p]:
            break
        j = p
    return spect[j]


def tuple_space_points(poset: LinOrderedPoset, k: int):
    """All k-tuples over the poset's universe."""
    return [tuple(t) for t in itertools.product(poset.universe, repeat=k)]


def decode_poset_ultra(
    poset: LinOrderedPoset,
    spectrum,
    points=None,
    max_points: int = DEFAULT_MAX_POINTS,
) -> ConvUltrametricSpace:
    """The tuple space over the poset, on all |A|^k tuples or a given subset.

    Validates the ultrametric axioms and ball convexity of whatever is
    materialized.  Refuses to build more than ``max_points`` points.
    """
    spect = _check_spectrum(spectrum)
    k = len(spect) - 1
    if points is None:
        total = len(poset.universe) ** k
        if total > max_points:
            raise BudgetError(
                f"full tuple space has {total} points, above the bound {max_points}"
            )
        pts = tuple_space_points(poset, k)
    else:
        pts = [tuple(p) for p in points]
        if len(pts) > max_points:
            raise BudgetError(f"{len(pts)} points requested, above the bound {max_points}")
        if len(set(pts)) != len(pts):
            raise DomainError("duplicate tuple points")
    pts = sorted(
        pts,
        key=functools.cmp_to_key(lambda s, t: compare_tuples(poset.order, "alex", s, t)),
    )
    dist = {
        (s, t): dist_ultra_tuples(poset, spect, s, t)
        for s, t in itertools.combinations(pts, 2)
    }
    return ConvUltrametricSpace.build(pts, dist, spect)


def phi_ultra(space: ConvUltrametricSpace, poset: LinOrderedPoset, u: Embedding) -> dict:
    """The point map x -> (u(B(x, s_0)), ..., u(B(x, s_{k-1}))).

    ``u`` must embed the ball poset of the space into ``poset``.  Verifies
    injectivity, exact distance preservation, and strict anti-lexicographic
    order preservation of the images.
    """
    ball_poset = encode_ultrametric(space)
    if u.source != ball_poset.poset or u.target != poset:
        raise DomainError("phi requires an embedding of the space's ball poset into the target poset")
    spect = space.spectrum
    k = len(spect) - 1
    images = {
        x: tuple(u(point_ball_pair(space, x, i)) for i in range(k))
        for x in space.universe
    }
    if len(set(images.values())) != len(images):
        raise VerificationError("tuple images are not pairwise distinct")
    for x, y in itertools.combinations(space.universe, 2):
        expected = space.d(x, y)
        got = dist_ultra_tuples(poset, spect, images[x], images[y])
        if got != expected:
            raise VerificationError(
                f"distance of images of {x!r},{y!r} is {got}, expected {expected}"
            )
        if compare_tuples(poset.order, "alex", images[x], images[y]) != LESS:
            raise VerificationError(f"images of {x!r},{y!r} are not alex-increasing")
    return images


def witness_ultra(
    space: ConvUltrametricSpace, subspace: ConvUltrametricSpace, f: Embedding
) -> Embedding:
    """The ball map (P, i) -> (ball of f(min P) at radius s_i, i), an
    embedding of the subspace's ball poset into the space's ball poset.

    Requires both spaces to carry the same spectrum.  Center-independence
    of the image ball is asserted for every point of P.
    """
    if f.source != subspace or f.target != space:
        raise DomainError("witness requires an embedding of the second space into the first")
    if space.spectrum != subspace.spectrum:
        raise SpectrumError("witness requires both spaces to share one spectrum")
    bp1 = encode_ultrametric(space)
    bp2 = encode_ultrametric(subspace)
    mapping = {}
    for b in bp2.poset.universe:
        images = {
            Ball(space.point_ball(f(y), space.spectrum[b.radius_index]), b.radius_index)
            for y in b.points
        }
        if len(images) != 1:
            raise VerificationError(
                f"image ball of {sorted(b.points)!r} depends on the choice of center"
            )
        mapping[b] = images.pop()
    return check_embedding(mapping, bp2.poset, bp1.poset)


def reduce_spectrum(space: ConvUltrametricSpace) -> ConvUltrametricSpace:
    """The same space with its spectrum shrunk to the attained distances plus 0."""
    spect = tuple(sorted(space.attained() | {Fraction(0)}))
    reduced = ConvUltrametricSpace(space.order, space.dmatrix, spect)
    validate_structure(reduced)
    return reduced
