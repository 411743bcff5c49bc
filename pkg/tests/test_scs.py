"""Exact supersequence solving and the combination census."""

import itertools
import random
from fractions import Fraction

import pytest

from chswitch.errors import BudgetExceeded, DomainError, LimitExceeded
from chswitch.promise import MINIMAL_CH4_PERMS, shift_permutations
from chswitch.scs import (
    CSV_HEADER,
    census,
    census_csv,
    census_sweep,
    greedy_supersequence,
    is_supersequence,
    scs_brute_oracle,
    scs_exact,
)


def test_is_supersequence_basics():
    assert is_supersequence([0, 1, 2], [0, 2])
    assert not is_supersequence([0, 1, 2], [2, 0])
    assert is_supersequence([0, 1, 2], [])
    assert is_supersequence([0], [0])


def test_shift_family_witness_contains_all_orders():
    # the length-7 string covering all four shifted orders of four gates
    witness = [1, 2, 3, 0, 1, 2, 3]
    for pm in shift_permutations(4, 4).perms:
        assert is_supersequence(witness, pm)
    # the same statement read in product order (global reversal)
    for pm in shift_permutations(4, 4).perms:
        assert is_supersequence(witness[::-1], pm[::-1])


def test_single_permutation_is_its_own_scs():
    res = scs_exact([(2, 0, 1)])
    assert res.length == 3
    assert res.witness == (2, 0, 1)


@pytest.mark.parametrize("n", range(2, 7))
def test_shift_family_cost(n):
    res = scs_exact(shift_permutations(n, n).perms)
    assert res.length == 2 * n - 1


def test_minimal_ch4_permutation_cost():
    res = scs_exact(MINIMAL_CH4_PERMS.perms)
    assert res.length == 6


def test_witness_validity_everywhere():
    rng = random.Random(17)
    perms4 = list(itertools.permutations(range(4)))
    for _ in range(50):
        subset = rng.sample(perms4, rng.randint(1, 5))
        res = scs_exact(subset)
        assert len(res.witness) == res.length
        for pm in subset:
            assert is_supersequence(res.witness, pm)


def test_length_bounds():
    rng = random.Random(23)
    perms4 = list(itertools.permutations(range(4)))
    for _ in range(30):
        subset = rng.sample(perms4, rng.randint(1, 6))
        res = scs_exact(subset)
        assert res.length >= 4
        if len(subset) == 1:
            assert res.length == 4
        else:
            assert res.length > 4
        greedy = greedy_supersequence(subset)
        assert res.length <= len(greedy)
        for pm in subset:
            assert is_supersequence(greedy, pm)


def test_adding_a_permutation_never_helps():
    rng = random.Random(31)
    perms4 = list(itertools.permutations(range(4)))
    for _ in range(20):
        subset = rng.sample(perms4, rng.randint(1, 5))
        extra = rng.choice(perms4)
        base = scs_exact(subset).length
        bigger = scs_exact(list(subset) + [extra]).length
        assert bigger >= base


def test_limit_exceeded():
    with pytest.raises(LimitExceeded):
        scs_exact([tuple(range(7))])
    # but a raised cap admits it
    assert scs_exact([tuple(range(7))], n_max=7).length == 7


def test_rejects_non_permutations():
    with pytest.raises(DomainError):
        scs_exact([(0, 0, 1)])
    with pytest.raises(DomainError):
        scs_exact([])


def test_brute_oracle_small_cases():
    assert scs_brute_oracle([(0, 1), (1, 0)], 4) == 3
    assert scs_brute_oracle(shift_permutations(3, 3).perms, 9) == 5
    assert scs_brute_oracle([(1, 0, 2)], 5) == 3
    assert scs_brute_oracle([(0, 1), (1, 0)], 2) is None


def test_oracle_agreement_s3():
    ident = (0, 1, 2)
    others = [pm for pm in itertools.permutations(range(3)) if pm != ident]
    for r in range(0, 6):
        for combo in itertools.combinations(others, r):
            subset = (ident,) + combo
            assert scs_exact(subset).length == scs_brute_oracle(subset, 9)


def test_census_3_4():
    row = census(3, 4)
    assert (row.combos, row.min_len, row.max_len) == (10, 5, 6)
    assert row.avg_len == Fraction(27, 5)
    assert row.avg_qpg == Fraction(9, 5)


def test_census_3_6():
    row = census(3, 6)
    assert row.combos == 1
    assert row.min_len == row.max_len == 7
    assert row.avg_qpg == Fraction(7, 3)


def test_census_4_24():
    row = census(4, 24)
    assert row.combos == 1
    assert row.min_len == row.max_len == 12
    assert row.avg_qpg == 3


def test_census_rejects_bad_p():
    with pytest.raises(DomainError):
        census(3, 1)
    with pytest.raises(DomainError):
        census(3, 7)


def test_census_budget():
    with pytest.raises(BudgetExceeded) as err:
        census(4, 6, budget=10_000)
    assert err.value.payload["required"] == 33649
    # sampled mode sidesteps the budget
    row = census(4, 6, sample=50, seed=9)
    assert row.combos == 50
    assert row.mode == "sample"
    assert row.avg_se is not None


def test_census_sample_reproducible():
    a = census(4, 8, sample=40, seed=123)
    b = census(4, 8, sample=40, seed=123)
    assert a == b


def test_census_deterministic_rerun():
    assert census(3, 4) == census(3, 4)
    assert census_csv([census(3, 4)]) == census_csv([census(3, 4)])


def test_census_sweep_n3_exact():
    rows = census_sweep(3, range(2, 7))
    assert [r.p for r in rows] == [2, 3, 4, 5, 6]
    assert all(r.mode == "exhaustive" for r in rows)
    avg_by_p = {r.p: r.avg_len for r in rows}
    assert avg_by_p[4] == Fraction(27, 5)
    mins = [r.min_len for r in rows]
    maxs = [r.max_len for r in rows]
    assert mins == sorted(mins)
    assert maxs == sorted(maxs)


def test_census_sweep_falls_back_to_sampling():
    rows = census_sweep(4, [4, 6], sample_count=30, seed=1, budget=5000)
    assert rows[0].mode == "exhaustive"
    assert rows[1].mode == "sample"
    assert rows[1].combos == 30


def test_csv_schema():
    text = census_csv([census(3, 4)])
    lines = text.strip().split("\n")
    assert lines[0] == CSV_HEADER
    assert lines[0] == "N,p,combos,mode,min_len,max_len,avg_len,min_qpg,max_qpg,avg_qpg,switch_qpg"
    fields = lines[1].split(",")
    assert fields[:6] == ["3", "4", "10", "exhaustive", "5", "6"]
    assert fields[6] == "5.400000"
    assert fields[9] == "1.800000"
    assert fields[10] == "1.000000"
