"""Exact shortest-common-supersequence costs of ordering sets.

The best known fixed-order simulation of a switch over a set of gate
orderings queries as many gates as there are elements in the shortest
common supersequence (SCS) of the orderings, so exact SCS lengths are
exactly the query costs benchmarked here. Orderings are strings in
application order; SCS length is invariant under globally reversing all
strings, so the convention only shows in the witnesses.

The solver runs A* over canonical states. A state is the antichain of
remaining suffixes: suffixes already contained in another are dropped,
which both shrinks the space and makes memoization content-based. The
heuristic is the largest exact two-string SCS among the remaining
suffixes (suffix lengths minus their LCS), which is admissible and
consistent. Certified optimality plus an independent brute-force oracle
(iterative deepening, used in tests) back every census number.

The census enumerates gate-ordering combinations that contain the
identity ordering, solves each one exactly, and aggregates with integer
sums so averages are exact rationals and results are independent of
enumeration order.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from heapq import heappop, heappush
from typing import Iterable, Sequence

from .errors import BudgetExceeded, DomainError, LimitExceeded

DEFAULT_N_MAX = 6
DEFAULT_COMBO_BUDGET = 10_000
DEFAULT_SAMPLE_COUNT = 100_000

CSV_HEADER = "N,p,combos,mode,min_len,max_len,avg_len,min_qpg,max_qpg,avg_qpg,switch_qpg"


def is_supersequence(s: Sequence[int], t: Sequence[int]) -> bool:
    """Whether t is a (not necessarily contiguous) subsequence of s."""
    it = iter(s)
    return all(c in it for c in t)


@dataclass(frozen=True)
class ScsResult:
    length: int
    witness: tuple[int, ...]


def _normalize_perms(perms: Iterable[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    seqs = tuple(sorted({tuple(int(c) for c in pm) for pm in perms}))
    if not seqs:
        raise DomainError("need at least one ordering")
    n = len(seqs[0])
    for s in seqs:
        if len(s) != n or sorted(s) != list(range(n)):
            raise DomainError(f"{s} is not a permutation of 0..{n - 1}")
    return seqs


@lru_cache(maxsize=None)
def _suffix_lcs(a: tuple[int, ...], b: tuple[int, ...]) -> int:
    la, lb = len(a), len(b)
    row = [0] * (lb + 1)
    for i in range(la - 1, -1, -1):
        new = [0] * (lb + 1)
        for j in range(lb - 1, -1, -1):
            new[j] = 1 + row[j + 1] if a[i] == b[j] else max(row[j], new[j + 1])
        row = new
    return row[0]


def _canonical(suffixes: Iterable[tuple[int, ...]]) -> tuple[tuple[int, ...], ...]:
    """Drop empty suffixes and suffixes subsumed by another, sort the rest."""
    uniq = sorted({s for s in suffixes if s})
    return tuple(
        s for s in uniq if not any(len(s) < len(t) and is_supersequence(t, s) for t in uniq)
    )


def _lower_bound(state: tuple[tuple[int, ...], ...]) -> int:
    if not state:
        return 0
    best = max(len(s) for s in state)
    for a, b in itertools.combinations(state, 2):
        v = len(a) + len(b) - _suffix_lcs(a, b)
        if v > best:
            best = v
    return best


@lru_cache(maxsize=1 << 15)
def _solve(seqs: tuple[tuple[int, ...], ...]) -> ScsResult:
    start = _canonical(seqs)
    best_g: dict[tuple, int] = {start: 0}
    parent: dict[tuple, tuple | None] = {start: None}
    heap: list[tuple[int, int, tuple]] = [(_lower_bound(start), 0, start)]
    while heap:
        f, g, state = heappop(heap)
        if g > best_g.get(state, g):
            continue
        if not state:
            symbols = []
            cur = state
            while parent[cur] is not None:
                cur, c = parent[cur]
                symbols.append(c)
            return ScsResult(g, tuple(reversed(symbols)))
        for c in sorted({s[0] for s in state}):
            nxt = _canonical(tuple(s[1:] if s[0] == c else s for s in state))
            ng = g + 1
            if ng < best_g.get(nxt, ng + 1):
                best_g[nxt] = ng
                parent[nxt] = (state, c)
                heappush(heap, (ng + _lower_bound(nxt), ng, nxt))
    raise AssertionError("search space exhausted without reaching the empty state")


def scs_exact(perms: Iterable[Sequence[int]], n_max: int = DEFAULT_N_MAX) -> ScsResult:
    """Certified-minimal common supersequence of a set of orderings.

    The witness is emitted in application order. Sets over more than
    ``n_max`` symbols are refused (search cost grows quickly).
    """
    seqs = _normalize_perms(perms)
    n = len(seqs[0])
    if n > n_max:
        raise LimitExceeded(f"orderings over {n} symbols exceed n_max={n_max}", n=n, n_max=n_max)
    if len(seqs) == 1:
        return ScsResult(n, seqs[0])
    return _solve(seqs)


def scs_brute_oracle(perms: Iterable[Sequence[int]], l_max: int) -> int | None:
    """Independent SCS length by iterative-deepening enumeration.

    Tries every useful supersequence length L in increasing order and
    searches the strings of that length depth-first, with only the
    obvious feasibility cut (some string needs more symbols than remain).
    Deliberately shares nothing with :func:`scs_exact`. Returns None when
    no common supersequence of length at most ``l_max`` exists.
    """
    seqs = _normalize_perms(perms)
    n = len(seqs[0])
    start = (0,) * len(seqs)

    def found(state: tuple[int, ...], budget: int) -> bool:
        remaining = max(n - pos for pos in state)
        if remaining == 0:
            return True
        if remaining > budget:
            return False
        for c in range(n):
            nxt = tuple(
                pos + 1 if pos < n and seqs[i][pos] == c else pos
                for i, pos in enumerate(state)
            )
            if nxt != state and found(nxt, budget - 1):
                return True
        return False

    for length in range(n, l_max + 1):
        if found(start, length):
            return length
    return None


def greedy_supersequence(perms: Iterable[Sequence[int]]) -> tuple[int, ...]:
    """Majority-merge baseline witness; valid but not generally minimal."""
    seqs = _normalize_perms(perms)
    n = len(seqs[0])
    pos = [0] * len(seqs)
    out: list[int] = []
    while True:
        votes = [0] * n
        for i, s in enumerate(seqs):
            if pos[i] < n:
                votes[s[pos[i]]] += 1
        if not any(votes):
            return tuple(out)
        c = max(range(n), key=lambda sym: votes[sym])
        out.append(c)
        for i, s in enumerate(seqs):
            if pos[i] < n and s[pos[i]] == c:
                pos[i] += 1


# --- census ----------------------------------------------------------------

@dataclass(frozen=True)
class CensusRow:
    """Aggregate SCS statistics over combinations of p orderings of n gates.

    Sums are exact integers so ``avg_len`` is an exact rational;
    queries-per-gate (qpg) values are lengths divided by n. ``avg_se`` is
    the standard error of the sampled mean, None in exhaustive mode.
    """

    n: int
    p: int
    combos: int
    mode: str
    min_len: int
    max_len: int
    sum_len: int
    sum_sq_len: int
    avg_se: float | None = None

    @property
    def avg_len(self) -> Fraction:
        return Fraction(self.sum_len, self.combos)

    @property
    def min_qpg(self) -> Fraction:
        return Fraction(self.min_len, self.n)

    @property
    def max_qpg(self) -> Fraction:
        return Fraction(self.max_len, self.n)

    @property
    def avg_qpg(self) -> Fraction:
        return self.avg_len / self.n

    switch_qpg = 1


def _identity_combos(n: int, p: int) -> Iterable[tuple[tuple[int, ...], ...]]:
    ident = tuple(range(n))
    others = [pm for pm in itertools.permutations(range(n)) if pm != ident]
    for extra in itertools.combinations(others, p - 1):
        yield (ident,) + extra


def _sampled_combos(n: int, p: int, count: int, seed: int):
    ident = tuple(range(n))
    others = [pm for pm in itertools.permutations(range(n)) if pm != ident]
    rng = random.Random(seed)
    for _ in range(count):
        yield (ident,) + tuple(rng.sample(others, p - 1))


def _aggregate(n: int, p: int, combos, mode: str, sample_count: int | None) -> CensusRow:
    count = 0
    mn, mx = None, 0
    total = 0
    total_sq = 0
    for combo in combos:
        length = scs_exact(combo).length
        count += 1
        mn = length if mn is None else min(mn, length)
        mx = max(mx, length)
        total += length
        total_sq += length * length
    se = None
    if mode == "sample" and count > 1:
        mean = total / count
        var = max(total_sq / count - mean * mean, 0.0)
        se = math.sqrt(var / count)
    return CensusRow(n, p, count, mode, mn, mx, total, total_sq, se)


def census(
    n: int,
    p: int,
    sample: int | None = None,
    seed: int = 0,
    budget: int | None = DEFAULT_COMBO_BUDGET,
) -> CensusRow:
    """SCS statistics over combinations of p orderings containing the identity.

    Exhaustive mode (``sample=None``) enumerates all C(n!-1, p-1)
    combinations and refuses when that count exceeds ``budget`` (pass
    ``budget=None`` to lift the cap). Sample mode draws ``sample`` seeded
    uniform combinations instead.
    """
    if n < 2:
        raise DomainError("census needs at least 2 gates")
    if not 2 <= p <= math.factorial(n):
        raise DomainError(f"p must lie in [2, {math.factorial(n)}] for n={n}")
    if sample is None:
        required = math.comb(math.factorial(n) - 1, p - 1)
        if budget is not None and required > budget:
            raise BudgetExceeded(
                f"exhaustive census of (n={n}, p={p}) needs {required} combinations "
                f"(budget {budget}); pass a sample count or raise the budget",
                required=required,
                budget=budget,
            )
        return _aggregate(n, p, _identity_combos(n, p), "exhaustive", None)
    if sample < 1:
        raise DomainError("sample count must be positive")
    return _aggregate(n, p, _sampled_combos(n, p, sample, seed), "sample", sample)


def census_sweep(
    n: int,
    p_values: Iterable[int],
    sample_count: int = DEFAULT_SAMPLE_COUNT,
    seed: int = 0,
    budget: int | None = DEFAULT_COMBO_BUDGET,
) -> list[CensusRow]:
    """One census row per p, exhaustive when affordable, sampled otherwise.

    Sampled rows use ``seed + p`` so the sweep is reproducible while rows
    stay independent.
    """
    rows = []
    for p in p_values:
        required = math.comb(math.factorial(n) - 1, p - 1)
        if budget is None or required <= budget:
            rows.append(census(n, p, budget=None))
        else:
            rows.append(census(n, p, sample=sample_count, seed=seed + p))
    return rows


def census_csv(rows: Iterable[CensusRow]) -> str:
    lines = [CSV_HEADER]
    for r in rows:
        lines.append(
            f"{r.n},{r.p},{r.combos},{r.mode},{r.min_len},{r.max_len},"
            f"{float(r.avg_len):.6f},{float(r.min_qpg):.6f},{float(r.max_qpg):.6f},"
            f"{float(r.avg_qpg):.6f},{float(r.switch_qpg):.6f}"
        )
    return "\n".join(lines) + "\n"


def census_row_json(r: CensusRow) -> dict:
    return {
        "n": r.n,
        "p": r.p,
        "combos": r.combos,
        "mode": r.mode,
        "min_len": r.min_len,
        "max_len": r.max_len,
        "sum_len": r.sum_len,
        "avg_len": float(r.avg_len),
        "avg_len_exact": [r.sum_len, r.combos],
        "min_qpg": float(r.min_qpg),
        "max_qpg": float(r.max_qpg),
        "avg_qpg": float(r.avg_qpg),
        "avg_se": r.avg_se,
        "switch_qpg": 1,
    }
