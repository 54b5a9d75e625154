"""Exhaustive verification of the arrow relation C -> (B)^A_k.

The relation holds when every k-coloring of hom(A, C) admits a morphism
w in hom(B, C) whose composites with hom(A, B) all receive one color.
The oracle enumerates all k^|hom(A,C)| colorings in reflected mixed-radix
Gray order, so each step recolors a single morphism and the per-candidate
color counters update incrementally.  The verdict is deterministic; when
the relation fails the returned bad coloring is re-checkable.

Deciding is generic over a category adapter (objects, hom enumeration,
composition, identity); adapters are provided for the four structure
categories and for the parameter-word category.
"""

from __future__ import annotations

import itertools
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

from .errors import BudgetError, DomainError
from .structures import (
    Embedding,
    compose_embeddings,
    enumerate_embeddings,
    identity_embedding,
)
from . import words as W


@dataclass(frozen=True)
class Budget:
    """Explicit resource bounds; exceeding any of them raises BudgetError."""

    max_hom: int = 10_000
    max_colorings: int = 2_000_000
    wall_ms: int | None = None


DEFAULT_BUDGET = Budget()


class StructureCategory:
    """Structures of one kind with embeddings as morphisms."""

    def __init__(self, kind: str):
        self.kind = kind
        self.name = kind

    def hom(self, a, b, budget: Budget = DEFAULT_BUDGET) -> list[Embedding]:
        out = []
        for e in enumerate_embeddings(a, b):
            out.append(e)
            if len(out) > budget.max_hom:
                raise BudgetError(
                    f"hom set exceeds budget of {budget.max_hom} morphisms"
                )
        return out

    def compose(self, outer, inner):
        return compose_embeddings(outer, inner)

    def identity(self, a):
        return identity_embedding(a)

    def morphism_json(self, e: Embedding):
        return {"map": [[a, b] for a, b in e.mapping]}


class WordCategory:
    """Positive integers with m-parameter words of length n as hom(m, n)."""

    def __init__(self, alphabet: W.Alphabet):
        self.alphabet = alphabet
        self.name = "words"

    def hom(self, a: int, b: int, budget: Budget = DEFAULT_BUDGET) -> list[W.ParameterWord]:
        return list(W.enumerate_words(self.alphabet, b, a, budget.max_hom))

    def compose(self, outer: W.ParameterWord, inner: W.ParameterWord):
        return W.compose(outer, inner)

    def identity(self, a: int):
        return W.identity(self.alphabet, a)

    def morphism_json(self, w: W.ParameterWord):
        return {"word": w.text()}


@dataclass(frozen=True)
class ArrowInstance:
    category: object
    A: object
    B: object
    C: object
    k: int

    def __post_init__(self):
        if self.k < 2:
            raise DomainError(f"number of colors must be at least 2, got {self.k}")


@dataclass(frozen=True)
class Coloring:
    """Colors 1..k assigned to hom(A, C) in its enumeration order."""

    colors: tuple[int, ...]
    k: int

    def __post_init__(self):
        for c in self.colors:
            if not 1 <= c <= self.k:
                raise DomainError(f"color {c} out of range 1..{self.k}")

    @classmethod
    def from_mapping(cls, assignment, hom_ac: Sequence, k: int) -> "Coloring":
        missing = [m for m in hom_ac if m not in assignment]
        if missing:
            raise DomainError(f"coloring is not total: {len(missing)} morphisms uncolored")
        return cls(tuple(assignment[m] for m in hom_ac), k)


@dataclass
class ArrowVerdict:
    holds: bool
    counts: dict
    bad_coloring: Coloring | None = None
    witness: object | None = None
    witness_color: int | None = None

    def to_json(self, category) -> dict:
        out = {"holds": self.holds, "counts": dict(self.counts)}
        if self.bad_coloring is not None:
            out["bad_coloring"] = list(self.bad_coloring.colors)
        if self.witness is not None:
            out["witness"] = category.morphism_json(self.witness)
            out["witness_color"] = self.witness_color
        return out


def _gray_steps(n_digits: int, radix: int):
    """Yield (digit, old_value, new_value) steps of the reflected
    mixed-radix Gray walk through radix^n_digits tuples, one digit per step."""
    a = [0] * n_digits
    f = list(range(n_digits + 1))
    o = [1] * n_digits
    while True:
        j = f[0]
        f[0] = 0
        if j == n_digits:
            return
        old = a[j]
        a[j] += o[j]
        if a[j] == 0 or a[j] == radix - 1:
            o[j] = -o[j]
            f[j] = f[j + 1]
            f[j + 1] = j + 1
        yield j, old, a[j]


class _CompositeTable:
    """Indices of {w . q : q in hom(A,B)} inside hom(A,C), per candidate w."""

    def __init__(self, category, hom_ac, hom_bc, hom_ab):
        index = {}
        for i, m in enumerate(hom_ac):
            index[m] = i
        self.comp_sets: list[tuple[int, ...]] = []
        for w in hom_bc:
            seen = set()
            for q in hom_ab:
                comp = category.compose(w, q)
                i = index.get(comp)
                if i is None:
                    raise DomainError(
                        "composite of candidate and small morphism falls outside hom(A, C)"
                    )
                seen.add(i)
            self.comp_sets.append(tuple(sorted(seen)))
        self.touching: list[list[int]] = [[] for _ in hom_ac]
        for wi, comps in enumerate(self.comp_sets):
            for i in comps:
                self.touching[i].append(wi)


class _MonoTracker:
    """Incremental count of candidates whose composite set is monochromatic."""

    def __init__(self, table: _CompositeTable, k: int, colors: list[int]):
        self.table = table
        self.k = k
        self.counts = []
        self.distinct = []
        self.mono = 0
        for comps in table.comp_sets:
            cnt = [0] * k
            for i in comps:
                cnt[colors[i]] += 1
            self.counts.append(cnt)
            d = sum(1 for c in cnt if c)
            self.distinct.append(d)
            if d <= 1:
                self.mono += 1

    def recolor(self, i: int, old: int, new: int) -> None:
        for wi in self.table.touching[i]:
            cnt = self.counts[wi]
            was = self.distinct[wi]
            cnt[old] -= 1
            if cnt[old] == 0:
                self.distinct[wi] -= 1
            cnt[new] += 1
            if cnt[new] == 1:
                self.distinct[wi] += 1
            now = self.distinct[wi]
            if (was <= 1) != (now <= 1):
                self.mono += 1 if now <= 1 else -1


def _first_mono(table: _CompositeTable, coloring: Coloring):
    """First candidate index (in hom(B,C) order) whose composites share a color."""
    for wi, comps in enumerate(table.comp_sets):
        colors = {coloring.colors[i] for i in comps}
        if len(colors) <= 1:
            color = next(iter(colors)) if colors else 1
            return wi, color
    return None, None


def _search_block(table, k, n, fixed: dict[int, int], cancel: threading.Event | None,
                  deadline: float | None):
    """Walk all colorings with the given digits pinned; return the first bad
    coloring found (as a list of 0-based colors) and the visit count."""
    free = [i for i in range(n) if i not in fixed]
    colors = [0] * n
    for i, c in fixed.items():
        colors[i] = c
    tracker = _MonoTracker(table, k, colors)
    visited = 1
    if tracker.mono == 0:
        return list(colors), visited
    for step, (jf, old, new) in enumerate(_gray_steps(len(free), k)):
        i = free[jf]
        colors[i] = new
        tracker.recolor(i, old, new)
        visited += 1
        if tracker.mono == 0:
            return list(colors), visited
        if step % 1024 == 0:
            if cancel is not None and cancel.is_set():
                return None, visited
            if deadline is not None and time.monotonic() > deadline:
                raise BudgetError("arrow decision exceeded its wall-clock budget")
    return None, visited


def decide_arrow(
    instance: ArrowInstance,
    budget: Budget = DEFAULT_BUDGET,
    threads: int = 1,
) -> ArrowVerdict:
    """Decide C -> (B)^A_k by exhausting all colorings of hom(A, C).

    Refuses (naming the blowup) when a hom set exceeds ``budget.max_hom``
    or ``k^|hom(A,C)|`` exceeds ``budget.max_colorings``.  The verdict is
    the same for any thread count; with several threads the bad coloring
    returned for a failing instance may differ from the serial one.
    """
    cat, k = instance.category, instance.k
    hom_ac = cat.hom(instance.A, instance.C, budget)
    hom_bc = cat.hom(instance.B, instance.C, budget)
    hom_ab = cat.hom(instance.A, instance.B, budget)
    n = len(hom_ac)
    total = k**n
    if total > budget.max_colorings:
        raise BudgetError(
            f"deciding needs k^|hom(A,C)| = {k}^{n} = {total} colorings, "
            f"above the budget of {budget.max_colorings}"
        )
    counts = {
        "hom_AC": n,
        "hom_BC": len(hom_bc),
        "hom_AB": len(hom_ab),
        "colorings_checked": 0,
    }
    table = _CompositeTable(cat, hom_ac, hom_bc, hom_ab)
    deadline = None
    if budget.wall_ms is not None:
        deadline = time.monotonic() + budget.wall_ms / 1000.0
    if not hom_bc:
        counts["colorings_checked"] = 1
        return ArrowVerdict(False, counts, bad_coloring=Coloring((1,) * n, k))
    if n == 0:
        counts["colorings_checked"] = 1
        return ArrowVerdict(True, counts)

    if threads <= 1 or n < 2:
        bad, visited = _search_block(table, k, n, {}, None, deadline)
        counts["colorings_checked"] = visited
        if bad is None:
            return ArrowVerdict(True, counts)
        return ArrowVerdict(
            False, counts, bad_coloring=Coloring(tuple(c + 1 for c in bad), k)
        )

    cancel = threading.Event()
    results: list[tuple[list[int] | None, int]] = [None] * k  # type: ignore[list-item]

    def run(block: int):
        res = _search_block(table, k, n, {n - 1: block}, cancel, deadline)
        if res[0] is not None:
            cancel.set()
        return res

    with ThreadPoolExecutor(max_workers=min(threads, k)) as pool:
        futures = [pool.submit(run, c) for c in range(k)]
        for c, fut in enumerate(futures):
            results[c] = fut.result()
    counts["colorings_checked"] = sum(v for _, v in results)
    for bad, _ in results:
        if bad is not None:
            return ArrowVerdict(
                False, counts, bad_coloring=Coloring(tuple(c + 1 for c in bad), k)
            )
    return ArrowVerdict(True, counts)


def check_coloring(
    instance: ArrowInstance,
    coloring,
    budget: Budget = DEFAULT_BUDGET,
) -> tuple[ArrowVerdict, list[dict]]:
    """Hunt for a monochromatic candidate under one specific coloring.

    Accepts a Coloring or a mapping from morphisms of hom(A, C) to colors.
    Returns the verdict (with the witness when found) and, per candidate,
    the sorted list of color classes its composites meet.
    """
    cat, k = instance.category, instance.k
    hom_ac = cat.hom(instance.A, instance.C, budget)
    hom_bc = cat.hom(instance.B, instance.C, budget)
    hom_ab = cat.hom(instance.A, instance.B, budget)
    if not isinstance(coloring, Coloring):
        coloring = Coloring.from_mapping(dict(coloring), hom_ac, k)
    if len(coloring.colors) != len(hom_ac):
        raise DomainError(
            f"coloring covers {len(coloring.colors)} morphisms, hom(A,C) has {len(hom_ac)}"
        )
    table = _CompositeTable(cat, hom_ac, hom_bc, hom_ab)
    detail = []
    for wi, comps in enumerate(table.comp_sets):
        met = sorted({coloring.colors[i] for i in comps})
        detail.append({"candidate": cat.morphism_json(hom_bc[wi]), "colors_met": met})
    wi, color = _first_mono(table, coloring)
    counts = {
        "hom_AC": len(hom_ac),
        "hom_BC": len(hom_bc),
        "hom_AB": len(hom_ab),
        "colorings_checked": 1,
    }
    if wi is None:
        return ArrowVerdict(False, counts, bad_coloring=coloring), detail
    return (
        ArrowVerdict(True, counts, witness=hom_bc[wi], witness_color=color),
        detail,
    )


def decide_gr(
    alphabet: W.Alphabet,
    n: int,
    m: int,
    ell: int,
    k: int,
    budget: Budget = DEFAULT_BUDGET,
) -> ArrowVerdict:
    """Direct decision of n -> (m)^ell_k for parameter words.

    Deliberately independent of :func:`decide_arrow`: colorings are walked
    in plain odometer order with no incremental bookkeeping, so the two
    routes cross-check each other.  Errors out when no m-parameter word of
    length n exists.
    """
    if k < 2:
        raise DomainError(f"number of colors must be at least 2, got {k}")
    if m > n:
        raise DomainError(f"no word with {m} parameters and length {n} exists")
    n_small = W.count_words(alphabet, n, ell)
    if n_small > budget.max_hom:
        raise BudgetError(f"|W^{n}_{ell}| = {n_small} exceeds the hom budget {budget.max_hom}")
    total = k**n_small
    if total > budget.max_colorings:
        raise BudgetError(
            f"deciding needs k^|W^{n}_{ell}| = {k}^{n_small} = {total} colorings, "
            f"above the budget of {budget.max_colorings}"
        )
    small = list(W.enumerate_words(alphabet, n, ell, budget.max_hom))
    mids = list(W.enumerate_words(alphabet, n, m, budget.max_hom))
    plugs = list(W.enumerate_words(alphabet, m, ell, budget.max_hom))
    index = {w.symbols: i for i, w in enumerate(small)}
    comp = [
        sorted({index[W.compose(u, v).symbols] for v in plugs}) for u in mids
    ]
    counts = {
        "hom_AC": len(small),
        "hom_BC": len(mids),
        "hom_AB": len(plugs),
        "colorings_checked": 0,
    }
    checked = 0
    for assignment in itertools.product(range(k), repeat=len(small)):
        checked += 1
        if not any(len({assignment[i] for i in comps}) <= 1 for comps in comp):
            counts["colorings_checked"] = checked
            return ArrowVerdict(
                False, counts, bad_coloring=Coloring(tuple(c + 1 for c in assignment), k)
            )
    counts["colorings_checked"] = checked
    return ArrowVerdict(True, counts)
