"""Randomized factorization suites and the operational transfer pipeline.

The factorization harness draws random (f, u) pairs for a pair of objects
E embedded in D and checks, per trial, that the encoding map produces an
embedding, that the witness is a valid morphism of the base category, and
that the factorization equation holds exactly.

The transfer pipeline runs the color-lifting argument end to end at tiny
sizes: find (or verify) a base object C that arrows the encoded pair, pull
a coloring of hom(E, G(C)) back along the encoding, locate a monochromatic
base morphism, and exhibit its decoded embedding together with the colors
of all its composites, re-checking every claim on the way.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import graph_encoding as GE
from . import metric_encoding as ME
from . import poset_encoding as PE
from . import ultrametric_encoding as UE
from . import words as W
from .errors import BudgetError, DomainError, PremiseError, VerificationError
from .oracle import (
    ArrowInstance,
    Budget,
    DEFAULT_BUDGET,
    StructureCategory,
    WordCategory,
    decide_arrow,
    decide_gr,
)
from .structures import (
    ConvUltrametricSpace,
    Embedding,
    LinOrderedGraph,
    LinOrderedMetricSpace,
    LinOrderedPoset,
    compose_embeddings,
    enumerate_embeddings,
    identity_embedding,
    induced_substructure,
)

SELECTORS = ("graph", "poset", "ultrametric", "metric")

_GR_ALPHABET = W.Alphabet(["0"])


# ---------------------------------------------------------------------------
# random instances


def random_word(rng: random.Random, alphabet: W.Alphabet, n: int, m: int) -> W.ParameterWord:
    """A uniformly-constructed (not uniformly-distributed) valid word."""
    symbols = []
    used = 0
    for pos in range(n):
        if m - used == n - pos:
            used += 1
            symbols.append(used)
            continue
        candidates = list(range(1, used + 1))
        if used < m:
            candidates.append(used + 1)
        candidates.extend(W.letter_token(j) for j in range(len(alphabet)))
        tok = rng.choice(candidates)
        if tok == used + 1:
            used += 1
        symbols.append(tok)
    return W.validate(symbols, alphabet, m)


def random_graph(rng: random.Random, max_vertices: int = 5) -> LinOrderedGraph:
    n = rng.randint(1, max_vertices)
    vertices = list(range(1, n + 1))
    edges = [e for e in itertools.combinations(vertices, 2) if rng.random() < 0.5]
    return LinOrderedGraph.build(vertices, edges)


def random_poset(rng: random.Random, max_elements: int = 5) -> LinOrderedPoset:
    n = rng.randint(1, max_elements)
    elems = list(range(1, n + 1))
    below = {(a, b) for a, b in itertools.combinations(elems, 2) if rng.random() < 0.4}
    changed = True
    while changed:  # transitive closure
        changed = False
        for (a, b), (c, d) in itertools.product(list(below), repeat=2):
            if b == c and (a, d) not in below:
                below.add((a, d))
                changed = True
    return LinOrderedPoset.build(elems, below)


def _random_spectrum(rng: random.Random, max_size: int) -> tuple[Fraction, ...]:
    pool = sorted({Fraction(rng.randint(1, 12), rng.randint(1, 4)) for _ in range(max_size + 2)})
    size = rng.randint(1, min(max_size - 1, len(pool)))
    return tuple([Fraction(0)] + sorted(rng.sample(pool, size)))


def random_ultrametric(
    rng: random.Random, max_points: int = 5, max_spectrum: int = 4
) -> ConvUltrametricSpace:
    """A random convexly ordered ultrametric space built as a dendrogram:
    consecutive blocks split level by level, so balls are intervals."""
    n = rng.randint(1, max_points)
    points = list(range(1, n + 1))
    spectrum = _random_spectrum(rng, max_spectrum)
    k = len(spectrum) - 1
    dist = {}

    def split(block: list, level: int):
        if level == 0 or len(block) == 1:
            for x, y in itertools.combinations(block, 2):
                dist[(x, y)] = spectrum[max(level, 1)]
            return
        cuts = sorted(rng.sample(range(1, len(block)), rng.randint(0, len(block) - 1)))
        parts = [block[i:j] for i, j in zip([0] + cuts, cuts + [len(block)])]
        for p1, p2 in itertools.combinations(parts, 2):
            for x, y in itertools.product(p1, p2):
                dist[(x, y)] = spectrum[level]
        for part in parts:
            split(part, level - 1)

    if n > 1:
        split(points, k)
    return ConvUltrametricSpace.build(points, dist, spectrum)


def graded_spectrum(rng: random.Random, max_size: int = 5) -> tuple[Fraction, ...]:
    """A random tight spectrum 0 < c < 2c < ... < (k-1)c < top with
    top in ((k-1)c, kc].

    Tight spectra of this shape are exactly the ones for which the
    tuple-space encoding preserves every distance; see the regression test
    on {0,2,3,4} for a tight spectrum outside it.
    """
    c = Fraction(rng.randint(1, 6), rng.randint(1, 3))
    k = rng.randint(1, max_size - 1)
    top = (k - 1) * c + c * Fraction(rng.randint(1, 4), 4)
    return tuple([c * i for i in range(k)] + [top])


def random_metric(
    rng: random.Random, max_points: int = 4, max_spectrum: int = 5
) -> LinOrderedMetricSpace:
    """A random linearly ordered metric space over a random graded tight
    spectrum; distance assignments are rejection-sampled until the triangle
    inequality holds (a constant assignment always does)."""
    n = rng.randint(1, max_points)
    points = list(range(1, n + 1))
    spectrum = graded_spectrum(rng, max_spectrum)
    nonzero = spectrum[1:]
    pairs = list(itertools.combinations(points, 2))
    for _ in range(100):
        dist = {pair: rng.choice(nonzero) for pair in pairs}

        def d(x, y):
            return Fraction(0) if x == y else dist[(x, y) if x < y else (y, x)]

        if all(
            d(x, z) <= d(x, y) + d(y, z)
            for x, y, z in itertools.permutations(points, 3)
        ):
            return LinOrderedMetricSpace.build(points, dist, spectrum)
    flat = {pair: nonzero[-1] for pair in pairs}
    return LinOrderedMetricSpace.build(points, flat, spectrum)


def random_structure(rng: random.Random, selector: str):
    if selector == "graph":
        return random_graph(rng)
    if selector == "poset":
        return random_poset(rng)
    if selector == "ultrametric":
        return random_ultrametric(rng)
    if selector == "metric":
        return random_metric(rng)
    raise DomainError(f"unknown selector {selector!r}; expected one of {SELECTORS}")


def random_embedded_pair(rng: random.Random, selector: str):
    """A random structure D together with a random induced substructure E."""
    D = random_structure(rng, selector)
    size = rng.randint(1, len(D.universe))
    subset = rng.sample(list(D.universe), size)
    E = induced_substructure(D, subset)
    return D, E


def random_superposet_embedding(rng: random.Random, poset: LinOrderedPoset) -> Embedding:
    """A random embedding of the poset into itself or into a copy padded
    with elements incomparable to everything."""
    extra = rng.randint(0, 2)
    if extra == 0:
        return identity_embedding(poset)
    elems = list(poset.universe)
    for i in range(extra):
        elems.insert(rng.randint(0, len(elems)), ("pad", i))
    padded = LinOrderedPoset.build(elems, poset.strict_pairs())
    embeddings = list(enumerate_embeddings(poset, padded))
    return rng.choice(embeddings)


# ---------------------------------------------------------------------------
# selector plumbing


class _WordBased:
    alphabet = _GR_ALPHABET

    def base_category(self):
        return WordCategory(self.alphabet)

    def random_u(self, rng, D):
        m = self.encode_object(D)
        n = m + rng.randint(0, 2)
        return random_word(rng, self.alphabet, n, m)

    def pa_equation_holds(self, D, E, f, u, witness) -> bool:
        lhs = self.phi(D, u)
        rhs = self.phi(E, W.compose(u, witness))
        return all(rhs[x] == lhs[f(x)] for x in E.universe)


class GraphSelector(_WordBased):
    name = "graph"

    def encode_object(self, g):
        return GE.encode_graph(g).object

    def phi(self, g, u):
        return GE.phi_graph(g, u)

    def witness(self, D, E, f, u):
        return GE.witness_graph(D, E, f, u)


class PosetSelector(_WordBased):
    name = "poset"

    def encode_object(self, p):
        return PE.encode_poset(p).object

    def phi(self, p, u):
        return PE.phi_poset(p, u)

    def witness(self, D, E, f, u):
        return PE.witness_poset(D, E, f, u)


class _PosetBased:
    def base_category(self):
        return StructureCategory("poset")

    def random_u(self, rng, D):
        return random_superposet_embedding(rng, self.encode_poset(D))

    def pa_equation_holds(self, D, E, f, u, witness) -> bool:
        lhs = self.phi(D, u.target, u)
        rhs = self.phi(E, u.target, compose_embeddings(u, witness))
        return all(rhs[x] == lhs[f(x)] for x in E.universe)


class UltrametricSelector(_PosetBased):
    name = "ultrametric"

    def encode_poset(self, space):
        return UE.encode_ultrametric(space).poset

    def phi(self, space, poset, u):
        return UE.phi_ultra(space, poset, u)

    def witness(self, D, E, f, u=None):
        return UE.witness_ultra(D, E, f)


class MetricSelector(_PosetBased):
    name = "metric"

    def encode_poset(self, space):
        return ME.encode_metric(space)

    def phi(self, space, poset, u):
        return ME.phi_metric(space, poset, u)

    def witness(self, D, E, f, u=None):
        return ME.witness_metric(D, E, f)


_SELECTOR_IMPLS = {
    "graph": GraphSelector(),
    "poset": PosetSelector(),
    "ultrametric": UltrametricSelector(),
    "metric": MetricSelector(),
}


def selector_impl(name: str):
    try:
        return _SELECTOR_IMPLS[name]
    except KeyError:
        raise DomainError(f"unknown selector {name!r}; expected one of {SELECTORS}") from None


# ---------------------------------------------------------------------------
# factorization harness


@dataclass
class TrialRecord:
    index: int
    trial_seed: str
    phi_ok: bool
    witness_ok: bool
    equation_ok: bool
    error: str | None = None

    @property
    def passed(self) -> bool:
        return self.phi_ok and self.witness_ok and self.equation_ok

    def to_json(self) -> dict:
        return {
            "trial": self.index,
            "seed": self.trial_seed,
            "phi_embedding": self.phi_ok,
            "witness_valid": self.witness_ok,
            "equation_exact": self.equation_ok,
            "error": self.error,
        }


@dataclass
class HarnessReport:
    selector: str
    trials: list[TrialRecord] = field(default_factory=list)
    seed: int = 0

    @property
    def all_passed(self) -> bool:
        return all(t.passed for t in self.trials)

    @property
    def failures(self) -> list[TrialRecord]:
        return [t for t in self.trials if not t.passed]

    def to_json(self) -> dict:
        return {
            "selector": self.selector,
            "seed": self.seed,
            "trials": len(self.trials),
            "failures": [t.to_json() for t in self.failures],
            "all_passed": self.all_passed,
        }


def _run_trial(impl, index: int, trial_seed: str, D, E, f, rng) -> TrialRecord:
    rec = TrialRecord(index, trial_seed, False, False, False)
    if isinstance(impl, _WordBased):
        u = impl.random_u(rng, D)
        try:
            impl.phi(D, u)
            rec.phi_ok = True
        except VerificationError as exc:
            rec.error = f"phi: {exc}"
            return rec
        try:
            witness = impl.witness(D, E, f, u)
            rec.witness_ok = True
        except (VerificationError, DomainError) as exc:
            rec.error = f"witness: {exc}"
            return rec
        rec.equation_ok = impl.pa_equation_holds(D, E, f, u, witness)
    else:
        u = impl.random_u(rng, D)
        try:
            impl.phi(D, u.target, u)
            rec.phi_ok = True
        except VerificationError as exc:
            rec.error = f"phi: {exc}"
            return rec
        try:
            witness = impl.witness(D, E, f)
            rec.witness_ok = True
        except (VerificationError, DomainError) as exc:
            rec.error = f"witness: {exc}"
            return rec
        rec.equation_ok = impl.pa_equation_holds(D, E, f, u, witness)
    if not rec.equation_ok:
        rec.error = "equation: images differ"
    return rec


def pa_harness(
    selector: str,
    D=None,
    E=None,
    trials: int = 200,
    seed: int = 0,
) -> HarnessReport:
    """Run randomized factorization trials.

    With explicit D and E (E must embed into D) every trial draws a fresh
    embedding f and a fresh base morphism u.  Without them each trial draws
    a fresh random pair as well.  Every failure carries the trial seed that
    reproduces it.
    """
    impl = selector_impl(selector)
    report = HarnessReport(selector=selector, seed=seed)
    fixed_embeddings = None
    if (D is None) != (E is None):
        raise DomainError("supply both D and E, or neither")
    if D is not None:
        if selector in ("ultrametric", "metric") and D.spectrum != E.spectrum:
            raise DomainError("D and E must share one spectrum")
        fixed_embeddings = list(enumerate_embeddings(E, D))
        if not fixed_embeddings:
            raise DomainError("E does not embed into D")
    for index in range(trials):
        trial_seed = f"{seed}:{index}"
        rng = random.Random(trial_seed)
        if fixed_embeddings is None:
            dd, ee = random_embedded_pair(rng, selector)
            embeddings = list(enumerate_embeddings(ee, dd))
        else:
            dd, ee, embeddings = D, E, fixed_embeddings
        f = rng.choice(embeddings)
        report.trials.append(_run_trial(impl, index, trial_seed, dd, ee, f, rng))
    return report


# ---------------------------------------------------------------------------
# transfer pipeline


@dataclass
class TransferReport:
    selector: str
    k: int
    seed: int | None
    premise: dict
    coloring: list[int]
    pulled_back: list[int]
    mono_index: int
    mono_color: int
    composites: list[dict]
    verified: bool

    def to_json(self) -> dict:
        return {
            "selector": self.selector,
            "k": self.k,
            "seed": self.seed,
            "premise": self.premise,
            "coloring": self.coloring,
            "pulled_back": self.pulled_back,
            "monochromatic": {"index": self.mono_index, "color": self.mono_color},
            "composites": self.composites,
            "verified": self.verified,
        }


def _match_index(enumerated: list[Embedding], mapping: dict, source, target) -> int:
    probe = Embedding(source, target, tuple((x, mapping[x]) for x in source.universe))
    for i, e in enumerate(enumerated):
        if e == probe:
            return i
    raise VerificationError("an encoded morphism is missing from the enumerated hom set")


def transfer_demo(
    selector: str,
    D,
    E,
    k: int,
    budget: Budget = DEFAULT_BUDGET,
    seed: int = 0,
    C=None,
    coloring=None,
    threads: int = 1,
) -> TransferReport:
    """Execute the color-lifting pipeline end to end and re-check each step.

    Finds (or, when ``C`` is given, verifies) a base object with the arrow
    property for the encoded pair, pulls a coloring of hom(E, G(C)) back
    along the encoding, locates a monochromatic base morphism for the
    pulled-back coloring, and exhibits its decoded embedding with all
    composite colors verified equal.
    """
    impl = selector_impl(selector)
    if not any(True for _ in enumerate_embeddings(E, D)):
        raise DomainError("E does not embed into D")
    if k < 2:
        raise DomainError(f"number of colors must be at least 2, got {k}")
    rng = random.Random(f"{seed}:transfer")
    struct_cat = StructureCategory(selector)

    if isinstance(impl, _WordBased):
        m_obj = impl.encode_object(D)
        ell_obj = impl.encode_object(E)
        premise, n = _gr_premise(impl, m_obj, ell_obj, k, budget, C)
        if 2**n > budget.max_hom:
            raise BudgetError(f"decoded structure would have 2^{n} elements")
        G_C = GE.powerset_graph(n) if selector == "graph" else PE.powerset_poset(n)
        base_cat = impl.base_category()
        hom_FE_C = base_cat.hom(ell_obj, n, budget)
        hom_FD_C = base_cat.hom(m_obj, n, budget)
        hom_FE_FD = base_cat.hom(ell_obj, m_obj, budget)

        def phi_E(u):
            return impl.phi(E, u)

        def phi_D(u):
            return impl.phi(D, u)

        def compose_base(u, v):
            return W.compose(u, v)

        def witness_for(f, u):
            return impl.witness(D, E, f, u)

    else:
        FD = impl.encode_poset(D)
        FE = impl.encode_poset(E)
        spectrum = D.spectrum
        if E.spectrum != spectrum:
            raise DomainError("transfer requires D and E over one spectrum")
        base_cat = impl.base_category()
        premise, C_poset = _poset_premise(base_cat, FE, FD, k, budget, C, threads)
        max_pts = min(UE.DEFAULT_MAX_POINTS, budget.max_hom)
        if selector == "ultrametric":
            G_C = UE.decode_poset_ultra(C_poset, spectrum, max_points=max_pts)
        else:
            G_C = ME.decode_poset_metric(C_poset, spectrum, max_points=max_pts)
        hom_FE_C = base_cat.hom(FE, C_poset, budget)
        hom_FD_C = base_cat.hom(FD, C_poset, budget)
        hom_FE_FD = base_cat.hom(FE, FD, budget)

        def phi_E(u):
            return impl.phi(E, C_poset, u)

        def phi_D(u):
            return impl.phi(D, C_poset, u)

        def compose_base(u, v):
            return compose_embeddings(u, v)

        def witness_for(f, u):
            return impl.witness(D, E, f)

    hom_E_GC = struct_cat.hom(E, G_C, budget)
    if not hom_E_GC:
        raise VerificationError("E does not embed into the decoded structure")
    if coloring is None:
        colors = [rng.randint(1, k) for _ in hom_E_GC]
    else:
        colors = list(coloring)
        if len(colors) != len(hom_E_GC) or any(not 1 <= c <= k for c in colors):
            raise DomainError(
                f"coloring must assign 1..{k} to all {len(hom_E_GC)} morphisms of hom(E, G(C))"
            )

    pulled = []
    for u in hom_FE_C:
        idx = _match_index(hom_E_GC, phi_E(u), E, G_C)
        pulled.append(colors[idx])

    index_of = {m: i for i, m in enumerate(hom_FE_C)}
    mono_index = mono_color = None
    for i, u in enumerate(hom_FD_C):
        met = {pulled[index_of[compose_base(u, v)]] for v in hom_FE_FD}
        if len(met) <= 1:
            mono_index = i
            mono_color = met.pop() if met else 1
            break
    if mono_index is None:
        raise VerificationError(
            "no monochromatic base morphism exists although the premise arrow holds"
        )

    u_star = hom_FD_C[mono_index]
    phi_image = phi_D(u_star)
    big = Embedding(D, G_C, tuple((x, phi_image[x]) for x in D.universe))
    composites = []
    verified = True
    for f in struct_cat.hom(E, D, budget):
        comp = compose_embeddings(big, f)
        comp_idx = _match_index(hom_E_GC, comp.as_dict, E, G_C)
        color = colors[comp_idx]
        v = witness_for(f, u_star)
        uv = compose_base(u_star, v)
        lifted_color = pulled[index_of[uv]]
        factors = _match_index(hom_E_GC, phi_E(uv), E, G_C) == comp_idx
        composites.append(
            {
                "f": struct_cat.morphism_json(f),
                "color": color,
                "witness_color": lifted_color,
                "factorization_exact": factors,
            }
        )
        if color != mono_color or lifted_color != mono_color or not factors:
            verified = False

    return TransferReport(
        selector=selector,
        k=k,
        seed=seed,
        premise=premise,
        coloring=colors,
        pulled_back=pulled,
        mono_index=mono_index,
        mono_color=mono_color,
        composites=composites,
        verified=verified,
    )


def _gr_premise(impl, m_obj: int, ell_obj: int, k: int, budget: Budget, C):
    if C is not None:
        n = int(C)
        verdict = decide_gr(impl.alphabet, n, m_obj, ell_obj, k, budget)
        if not verdict.holds:
            raise PremiseError(
                f"object {n} does not arrow ({m_obj})^({ell_obj})_{k}; "
                f"bad coloring: {list(verdict.bad_coloring.colors)}",
                bad_coloring=verdict.bad_coloring,
            )
        return {"base": "words", "object": n, "counts": verdict.counts, "probed": False}, n
    n = m_obj
    while True:
        verdict = decide_gr(impl.alphabet, n, m_obj, ell_obj, k, budget)
        if verdict.holds:
            return {"base": "words", "object": n, "counts": verdict.counts, "probed": True}, n
        n += 1


def _poset_premise(base_cat, FE, FD, k: int, budget: Budget, C, threads: int):
    if C is not None:
        verdict = decide_arrow(ArrowInstance(base_cat, FE, FD, C, k), budget, threads)
        if not verdict.holds:
            raise PremiseError(
                "the supplied poset does not arrow the encoded pair; "
                f"bad coloring: {list(verdict.bad_coloring.colors)}",
                bad_coloring=verdict.bad_coloring,
            )
        return (
            {"base": "poset", "object": "given", "counts": verdict.counts, "probed": False},
            C,
        )
    n = 1
    while True:
        candidate = PE.powerset_poset(n)
        verdict = decide_arrow(ArrowInstance(base_cat, FE, FD, candidate, k), budget, threads)
        if verdict.holds:
            return (
                {
                    "base": "poset",
                    "object": {"powerset_poset": n},
                    "counts": verdict.counts,
                    "probed": True,
                },
                candidate,
            )
        n += 1
