import random

import pytest

from ramseylift.errors import BudgetError, DomainError
from ramseylift.oracle import (
    ArrowInstance,
    Budget,
    Coloring,
    StructureCategory,
    WordCategory,
    _gray_steps,
    check_coloring,
    decide_arrow,
    decide_gr,
)
from ramseylift.structures import LinOrderedPoset
from ramseylift.words import Alphabet, count_words

A0 = Alphabet(["0"])
POSETS = StructureCategory("poset")
POINT = LinOrderedPoset.build([1], [])
CHAIN2 = LinOrderedPoset.build([1, 2], [(1, 2)])
CHAIN3 = LinOrderedPoset.build([1, 2, 3], [(1, 2), (1, 3), (2, 3)])


def test_gray_walk_covers_everything_one_digit_at_a_time():
    for n, k in [(0, 2), (1, 3), (3, 2), (2, 4), (4, 3)]:
        state = [0] * n
        seen = {tuple(state)}
        for j, old, new in _gray_steps(n, k):
            assert state[j] == old and abs(new - old) == 1
            state[j] = new
            assert tuple(state) not in seen
            seen.add(tuple(state))
        assert len(seen) == k**n


def test_three_chain_arrows_two_chain():
    verdict = decide_arrow(ArrowInstance(POSETS, POINT, CHAIN2, CHAIN3, 2))
    assert verdict.holds
    assert verdict.counts == {
        "hom_AC": 3,
        "hom_BC": 3,
        "hom_AB": 2,
        "colorings_checked": 8,
    }


def test_two_chain_fails_with_recheckable_witness():
    inst = ArrowInstance(POSETS, POINT, CHAIN2, CHAIN2, 2)
    verdict = decide_arrow(inst)
    assert not verdict.holds
    assert sorted(verdict.bad_coloring.colors) == [1, 2]
    recheck, detail = check_coloring(inst, verdict.bad_coloring)
    assert not recheck.holds
    assert all(len(d["colors_met"]) == 2 for d in detail)


def test_rigid_self_instance_trivially_holds():
    for k in (2, 3):
        verdict = decide_arrow(ArrowInstance(POSETS, CHAIN3, CHAIN3, CHAIN3, k))
        assert verdict.holds
        assert verdict.counts["hom_BC"] == 1


def test_check_coloring_examples():
    inst = ArrowInstance(POSETS, POINT, CHAIN2, CHAIN3, 2)
    verdict, _ = check_coloring(inst, Coloring((1, 1, 2), 2))
    assert verdict.holds
    assert verdict.witness.image() == (1, 2)
    verdict, _ = check_coloring(inst, Coloring((1, 1, 1), 2))
    assert verdict.holds and verdict.witness_color == 1
    assert verdict.witness.image() == (1, 2)  # first in enumeration order
    bad = ArrowInstance(POSETS, POINT, CHAIN2, CHAIN2, 2)
    verdict, _ = check_coloring(bad, Coloring((1, 2), 2))
    assert not verdict.holds


def test_check_coloring_requires_total_assignment():
    inst = ArrowInstance(POSETS, POINT, CHAIN2, CHAIN3, 2)
    with pytest.raises(DomainError, match="total"):
        hom = POSETS.hom(POINT, CHAIN3)
        Coloring.from_mapping({hom[0]: 1}, hom, 2)
    with pytest.raises(DomainError):
        check_coloring(inst, Coloring((1, 2), 2))


def test_holds_implies_random_colorings_have_witnesses():
    inst = ArrowInstance(POSETS, POINT, CHAIN2, CHAIN3, 2)
    assert decide_arrow(inst).holds
    rng = random.Random("oracle:roundtrip")
    for _ in range(100):
        coloring = Coloring(tuple(rng.randint(1, 2) for _ in range(3)), 2)
        verdict, _ = check_coloring(inst, coloring)
        assert verdict.holds


def test_gr_examples():
    assert decide_gr(A0, 1, 1, 1, 2).holds
    verdict = decide_gr(A0, 2, 2, 1, 2)
    assert not verdict.holds  # the identity cannot flatten 3 words of 2 colors
    with pytest.raises(DomainError, match="no word"):
        decide_gr(A0, 1, 2, 1, 2)


def test_gr_agrees_with_generic_oracle_small():
    cat = WordCategory(A0)
    for n in (1, 2, 3):
        for m in range(1, n + 1):
            for ell in range(1, m + 1):
                direct = decide_gr(A0, n, m, ell, 2)
                generic = decide_arrow(ArrowInstance(cat, ell, m, n, 2))
                assert direct.holds == generic.holds, (n, m, ell)


def test_budget_refusals_name_the_blowup():
    inst = ArrowInstance(POSETS, POINT, CHAIN2, CHAIN3, 2)
    with pytest.raises(BudgetError, match=r"2\^3"):
        decide_arrow(inst, Budget(max_colorings=4))
    with pytest.raises(BudgetError, match="hom"):
        decide_arrow(inst, Budget(max_hom=1))
    with pytest.raises(BudgetError, match=r"2\^31"):
        decide_gr(A0, 5, 2, 1, 2, Budget(max_colorings=100_000))


def test_wall_clock_budget_refusal():
    inst = ArrowInstance(POSETS, POINT, CHAIN2, CHAIN3, 2)
    with pytest.raises(BudgetError, match="wall-clock"):
        decide_arrow(inst, Budget(wall_ms=0))


def test_thread_count_does_not_change_verdicts():
    instances = [
        ArrowInstance(POSETS, POINT, CHAIN2, CHAIN3, 2),
        ArrowInstance(POSETS, POINT, CHAIN2, CHAIN2, 2),
        ArrowInstance(POSETS, CHAIN3, CHAIN3, CHAIN3, 2),
    ]
    for inst in instances:
        serial = decide_arrow(inst, threads=1)
        threaded = decide_arrow(inst, threads=4)
        assert serial.holds == threaded.holds
        if not threaded.holds:
            recheck, _ = check_coloring(inst, threaded.bad_coloring)
            assert not recheck.holds


def test_k_must_be_at_least_two():
    with pytest.raises(DomainError):
        ArrowInstance(POSETS, POINT, CHAIN2, CHAIN3, 1)
    with pytest.raises(DomainError):
        decide_gr(A0, 2, 1, 1, 1)


def test_count_words_matches_hom_sizes():
    cat = WordCategory(A0)
    for n in (1, 2, 3, 4):
        for m in range(0, n + 1):
            assert len(cat.hom(m, n)) == count_words(A0, n, m)


def test_monotonicity_probe_logged_not_asserted():
    # evidence-only probe: when C embeds into a larger C2 and the arrow holds
    # for C, record whether random colorings of hom(A, C2) still admit
    # witnesses; nothing about the outcome is claimed.
    inst_small = ArrowInstance(POSETS, POINT, CHAIN2, CHAIN3, 2)
    assert decide_arrow(inst_small).holds
    chain4 = LinOrderedPoset.build([1, 2, 3, 4], [(a, b) for a in range(1, 5) for b in range(a + 1, 5)])
    inst_big = ArrowInstance(POSETS, POINT, CHAIN2, chain4, 2)
    rng = random.Random("oracle:monotone")
    outcomes = []
    for _ in range(20):
        coloring = Coloring(tuple(rng.randint(1, 2) for _ in range(4)), 2)
        verdict, _ = check_coloring(inst_big, coloring)
        outcomes.append(verdict.holds)
    print(f"monotonicity probe: {sum(outcomes)}/{len(outcomes)} colorings had witnesses")
    assert len(outcomes) == 20
