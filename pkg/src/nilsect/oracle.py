"""Independent brute-force oracle: breadth-first product enumeration.

Enumerates exact products of all nonempty words up to a given length,
hash-consing on the matrices themselves, and reports the first collision
in length-lexicographic order.  Used to cross-check the deciders and as
a semi-decision fallback; shares no code path with them beyond plain
matrix multiplication.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from .errors import MemoryBudgetExceeded
from .matlie import UnipotentMatrix, mul_upper_rows
from .wordcraft import Word

MEMORY_BUDGET_ENV = "DECIDE_MEMORY_BUDGET"
DEFAULT_MEMORY_BUDGET = 2_000_000


@dataclass(frozen=True)
class OracleResult:
    """A collision found by enumeration: one word per side, equal products."""

    words: tuple
    element: UnipotentMatrix


def _memory_budget(explicit):
    if explicit is not None:
        return explicit
    env = os.environ.get(MEMORY_BUDGET_ENV)
    return int(env) if env else DEFAULT_MEMORY_BUDGET


def _plain_rows(mat: UnipotentMatrix):
    """Rows as plain ints when possible (much faster products)."""
    rows = mat.rows
    if all(x.denominator == 1 for row in rows for x in row):
        return tuple(tuple(int(x) for x in row) for row in rows)
    return rows


def _bfs_products(gen_rows, n, depth, state, budget):
    """All products of nonempty words of length <= depth: {rows: letters}.

    Breadth-first with dedup; the first word reaching a product is the
    length-lexicographically least one because levels are expanded in
    insertion order and generators in index order.
    """
    seen = {}
    frontier = {}
    for i, g in enumerate(gen_rows):
        if g not in seen:
            seen[g] = (i,)
            frontier[g] = (i,)
    state[0] += len(seen)
    if state[0] > budget:
        raise MemoryBudgetExceeded(
            f"oracle stored more than {budget} matrices", budget=budget
        )
    for _ in range(depth - 1):
        nxt = {}
        for p, word in frontier.items():
            for i, g in enumerate(gen_rows):
                q = mul_upper_rows(p, g, n)
                if q not in seen:
                    grown = word + (i,)
                    seen[q] = grown
                    nxt[q] = grown
                    state[0] += 1
                    if state[0] > budget:
                        raise MemoryBudgetExceeded(
                            f"oracle stored more than {budget} matrices",
                            budget=budget,
                        )
        if not nxt:
            break
        frontier = nxt
    return seen


def _to_matrix(rows):
    return UnipotentMatrix(rows)


def bfs_oracle(inst, depth: int = 8, *, memory_budget=None):
    """First collision among the instance's sides, or None.

    For an intersection instance: a common product of all generator sets.
    For an orbit instance: matching elements of T<G> and S<H>.  The
    reported collision minimizes (total word length, letter tuples), so
    reruns are deterministic.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    budget = _memory_budget(memory_budget)
    state = [0]

    if hasattr(inst, "systems"):  # intersection instance
        n = inst.n
        maps = []
        for sys in inst.systems:
            gens = [_plain_rows(m) for m in sys.mats]
            maps.append(_bfs_products(gens, n, depth, state, budget))
        smallest = min(maps, key=len)
        common = [
            key for key in smallest if all(key in mp for mp in maps)
        ]
        if not common:
            return None
        best = min(
            common,
            key=lambda key: (
                sum(len(mp[key]) for mp in maps),
                tuple(mp[key] for mp in maps),
            ),
        )
        words = tuple(
            Word.from_letters(sys.K, mp[best])
            for sys, mp in zip(inst.systems, maps)
        )
        return OracleResult(words, _to_matrix(best))

    # orbit instance: T * <G> vs S * <H>
    n = 3
    t_rows = _plain_rows(inst.T.matrix())
    s_rows = _plain_rows(inst.S.matrix())
    g_gens = [_plain_rows(m) for m in inst.G.mats]
    h_gens = [_plain_rows(m) for m in inst.H.mats]
    left_raw = _bfs_products(g_gens, n, depth, state, budget)
    right_raw = _bfs_products(h_gens, n, depth, state, budget)
    left = {}
    for p, w in left_raw.items():
        key = mul_upper_rows(t_rows, p, n)
        if key not in left:
            left[key] = w
    right = {}
    for q, w in right_raw.items():
        key = mul_upper_rows(s_rows, q, n)
        if key not in right:
            right[key] = w
    common = [key for key in left if key in right]
    if not common:
        return None
    best = min(
        common,
        key=lambda key: (len(left[key]) + len(right[key]), left[key], right[key]),
    )
    words = (
        Word.from_letters(inst.G.K, left[best]),
        Word.from_letters(inst.H.K, right[best]),
    )
    return OracleResult(words, _to_matrix(best))
