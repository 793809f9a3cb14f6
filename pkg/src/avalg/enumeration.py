"""Counting averaging words with one idempotent generator and operator.

Here every bracket power is 1, no two brackets are adjacent or nested, and
runs of the generator ``x`` are capped at ``run_cap`` (``math.inf`` lifts the
cap).  Words are graded by *degree* (bracket pairs) and *arity* (number of
``x``'s).  Two independent routes compute the same tables:

* ``census`` generates the words themselves from the grammar

      word          -> 1 | bracketed | associate
      associate     -> run | run bracketed | bracketed run | run bracketed run
      bracketed     -> indecomposable | decomposable
      indecomposable-> [ head-0 word ]
      decomposable  -> indecomposable run bracketed

* ``series`` solves the functional equations of the generating series
  degree by degree in exact integer arithmetic (no radicals).

The degree totals are twice the large Schroeder numbers, with the
indecomposable column giving the Schroeder numbers themselves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Sequence, Tuple, Union

from .words import (
    AveragingWord,
    Bracket,
    BracketedWord,
    Letter,
    arity,
    raw,
    word,
    word_key,
)

__all__ = [
    "BudgetExceeded",
    "compositions",
    "count_compositions",
    "CountTable",
    "Census",
    "census",
    "averaging_words_v",
    "indecomposable_words_v",
    "collapse_runs",
    "expand_runs",
    "BivariateSeries",
    "series",
    "univariate",
    "schroeder",
    "schroeder_sequence",
    "indecomposable_recursion",
    "reduce_to_v1",
    "closed_form",
    "series_value",
]

Cap = Union[int, float]


class BudgetExceeded(RuntimeError):
    """A census or series request would generate more words than allowed."""


def _check_cap(cap: Cap) -> Cap:
    if cap == math.inf:
        return math.inf
    if isinstance(cap, int) and cap >= 1:
        return cap
    raise ValueError("run cap must be a positive integer or math.inf")


# ---------------------------------------------------------------------------
# Compositions

def compositions(m: int, k: int, cap: Cap = math.inf) -> tuple:
    """All ways to write m as k ordered positive parts, each part <= cap."""
    _check_cap(cap)
    if m < 1 or k < 1:
        return ()
    top = m if cap == math.inf else min(m, int(cap))

    def rec(remaining: int, parts_left: int):
        if parts_left == 1:
            if 1 <= remaining <= top:
                yield (remaining,)
            return
        for first in range(1, min(top, remaining - parts_left + 1) + 1):
            for rest in rec(remaining - first, parts_left - 1):
                yield (first,) + rest

    return tuple(rec(m, k))


def count_compositions(m: int, k: int, cap: Cap = math.inf) -> int:
    return len(compositions(m, k, cap))


# ---------------------------------------------------------------------------
# Word generation under the idempotent convention

_X = Letter("x")


def _run_word(m: int) -> BracketedWord:
    return BracketedWord((_X,) * m)


@lru_cache(maxsize=None)
def _gen_indecomposable(cap: Cap, n: int, m: int) -> tuple:
    if n < 1:
        return ()
    return tuple(
        word(Bracket(content, 1)) for content in _gen_head0(cap, n - 1, m)
    )


@lru_cache(maxsize=None)
def _gen_bracketed(cap: Cap, n: int, m: int) -> tuple:
    """Words that start and end with a bracket."""
    out = list(_gen_indecomposable(cap, n, m))
    for n1 in range(1, n):
        for m1 in range(1, m):
            for first in _gen_indecomposable(cap, n1, m1):
                for r in range(1, m - m1):
                    if cap != math.inf and r > cap:
                        break
                    for rest in _gen_bracketed(cap, n - n1, m - m1 - r):
                        out.append(
                            BracketedWord(first.factors + (_X,) * r + rest.factors)
                        )
    return tuple(out)


@lru_cache(maxsize=None)
def _gen_head0(cap: Cap, n: int, m: int) -> tuple:
    """Words starting with a run: run | run bracketed | run bracketed run."""
    out = []
    if n == 0:
        if m >= 1 and (cap == math.inf or m <= cap):
            out.append(_run_word(m))
        return tuple(out)
    for r1 in range(1, m):
        if cap != math.inf and r1 > cap:
            break
        for b in _gen_bracketed(cap, n, m - r1):
            out.append(BracketedWord((_X,) * r1 + b.factors))
        for r2 in range(1, m - r1):
            if cap != math.inf and r2 > cap:
                break
            for b in _gen_bracketed(cap, n, m - r1 - r2):
                out.append(
                    BracketedWord((_X,) * r1 + b.factors + (_X,) * r2)
                )
    return tuple(out)


@lru_cache(maxsize=None)
def _gen_all(cap: Cap, n: int, m: int) -> tuple:
    """Every nontrivial averaging word of the idempotent grammar, sorted."""
    out = list(_gen_head0(cap, n, m))
    out.extend(_gen_bracketed(cap, n, m))
    for r in range(1, m):
        if cap != math.inf and r > cap:
            break
        for b in _gen_bracketed(cap, n, m - r):
            out.append(BracketedWord(b.factors + (_X,) * r))
    return tuple(sorted(out, key=word_key))


# count mirrors, used for budget pre-checks and as a structural cross-check

@lru_cache(maxsize=None)
def _cnt_indecomposable(cap: Cap, n: int, m: int) -> int:
    return _cnt_head0(cap, n - 1, m) if n >= 1 else 0


@lru_cache(maxsize=None)
def _cnt_bracketed(cap: Cap, n: int, m: int) -> int:
    total = _cnt_indecomposable(cap, n, m)
    for n1 in range(1, n):
        for m1 in range(1, m):
            first = _cnt_indecomposable(cap, n1, m1)
            if not first:
                continue
            for r in range(1, m - m1):
                if cap != math.inf and r > cap:
                    break
                total += first * _cnt_bracketed(cap, n - n1, m - m1 - r)
    return total


@lru_cache(maxsize=None)
def _cnt_head0(cap: Cap, n: int, m: int) -> int:
    if n == 0:
        return 1 if m >= 1 and (cap == math.inf or m <= cap) else 0
    total = 0
    for r1 in range(1, m):
        if cap != math.inf and r1 > cap:
            break
        total += _cnt_bracketed(cap, n, m - r1)
        for r2 in range(1, m - r1):
            if cap != math.inf and r2 > cap:
                break
            total += _cnt_bracketed(cap, n, m - r1 - r2)
    return total


@lru_cache(maxsize=None)
def _cnt_all(cap: Cap, n: int, m: int) -> int:
    total = _cnt_head0(cap, n, m) + _cnt_bracketed(cap, n, m)
    for r in range(1, m):
        if cap != math.inf and r > cap:
            break
        total += _cnt_bracketed(cap, n, m - r)
    return total


def averaging_words_v(run_cap: Cap, n: int, m: int) -> tuple:
    """The words of degree n and arity m, canonical order (no trivial word)."""
    return _gen_all(_check_cap(run_cap), n, m)


def indecomposable_words_v(run_cap: Cap, n: int, m: int = -1) -> tuple:
    """Indecomposable words of degree n (all arities when m is omitted).

    Omitting the arity needs a finite run cap, since an indecomposable word
    of degree n has at most 2n - 1 runs of at most cap letters each.
    """
    cap = _check_cap(run_cap)
    if m >= 0:
        return _gen_indecomposable(cap, n, m)
    if cap == math.inf:
        raise ValueError("an explicit arity is required when the run cap is infinite")
    out = []
    for mm in range(1, int(cap) * max(2 * n - 1, 1) + 1):
        out.extend(_gen_indecomposable(cap, n, mm))
    return tuple(sorted(out, key=word_key))


# ---------------------------------------------------------------------------
# Count tables

@dataclass
class CountTable:
    """Exact counts by (degree, arity)."""

    counts: Dict[Tuple[int, int], int]
    run_cap: Cap
    include_one: bool = False
    max_degree: int = 0
    max_arity: int = 0

    def count(self, n: int, m: int) -> int:
        return self.counts.get((n, m), 0)

    def degree_total(self, n: int) -> int:
        return sum(c for (nn, _), c in self.counts.items() if nn == n)

    def degree_totals(self, max_degree: Union[int, None] = None) -> list:
        top = self.max_degree if max_degree is None else max_degree
        return [self.degree_total(n) for n in range(top + 1)]

    def rows(self) -> list:
        return [
            (n, m, c) for (n, m), c in sorted(self.counts.items()) if c
        ]

    def to_json(self) -> dict:
        return {
            "run_cap": "inf" if self.run_cap == math.inf else self.run_cap,
            "include_one": self.include_one,
            "max_degree": self.max_degree,
            "max_arity": self.max_arity,
            "cells": [[n, m, c] for n, m, c in self.rows()],
        }


@dataclass
class Census:
    run_cap: Cap
    include_one: bool
    max_degree: int
    max_arity: int
    a: CountTable
    b: CountTable
    c: CountTable
    d: CountTable
    i: CountTable
    words: Union[dict, None] = None


def census(run_cap: Cap, max_degree: int, max_arity: int, include_one: bool = False,
           list_words: bool = False, budget: int = 10**7) -> Census:
    """Exhaustively generate and count the idempotent-convention words.

    The trivial word contributes 1 at cell (0, 0) when ``include_one`` is
    set.  Raises :class:`BudgetExceeded` when the total number of words to
    generate would exceed ``budget``.
    """
    cap = _check_cap(run_cap)
    cells = [(n, m) for n in range(max_degree + 1) for m in range(max_arity + 1)]
    predicted = sum(_cnt_all(cap, n, m) for n, m in cells if m >= 1)
    if predicted > budget:
        raise BudgetExceeded(
            f"census would generate {predicted} words (budget {budget})"
        )

    tables = {name: {} for name in "abcdi"}
    words = {} if list_words else None
    for n, m in cells:
        if m == 0:
            continue
        all_words = _gen_all(cap, n, m)
        brk = _gen_bracketed(cap, n, m)
        ind = _gen_indecomposable(cap, n, m)
        assert len(all_words) == _cnt_all(cap, n, m)
        if all_words:
            tables["a"][(n, m)] = len(all_words)
        if brk:
            tables["b"][(n, m)] = len(brk)
            tables["i"][(n, m)] = len(ind)
            if len(brk) - len(ind):
                tables["d"][(n, m)] = len(brk) - len(ind)
        if len(all_words) - len(brk):
            tables["c"][(n, m)] = len(all_words) - len(brk)
        if words is not None and all_words:
            words[(n, m)] = all_words
    if include_one:
        tables["a"][(0, 0)] = 1

    def table(name: str, with_one: bool = False) -> CountTable:
        return CountTable(tables[name], cap, with_one, max_degree, max_arity)

    return Census(
        run_cap=cap,
        include_one=include_one,
        max_degree=max_degree,
        max_arity=max_arity,
        a=table("a", include_one),
        b=table("b"),
        c=table("c"),
        d=table("d"),
        i=table("i"),
        words=words,
    )


# ---------------------------------------------------------------------------
# Run collapse: the bijection behind the run-cap reduction

def collapse_runs(w: Union[BracketedWord, AveragingWord]) -> tuple:
    """Replace each maximal x-run by a single x; return (collapsed, run lengths).

    Runs are read left to right in nesting order, and never span a bracket
    boundary.  Together with the composition the collapsed word determines
    the original uniquely.
    """
    w = raw(w)
    lengths = []

    def walk(v: BracketedWord) -> BracketedWord:
        factors = []
        run, sym = 0, ""
        for f in v.factors:
            if isinstance(f, Letter):
                run, sym = run + 1, f.symbol
            else:
                if run:
                    lengths.append(run)
                    factors.append(Letter(sym))
                    run = 0
                factors.append(Bracket(walk(f.core), f.power))
        if run:
            lengths.append(run)
            factors.append(Letter(sym))
        return BracketedWord(tuple(factors))

    collapsed = walk(w)
    return collapsed, tuple(lengths)


def expand_runs(w: Union[BracketedWord, AveragingWord], parts: Sequence[int]) -> BracketedWord:
    """Inverse of :func:`collapse_runs`: the i-th letter becomes a run."""
    w = raw(w)
    parts = list(parts)
    if any(p < 1 for p in parts):
        raise ValueError("run lengths must be positive")
    it = iter(parts)

    def walk(v: BracketedWord) -> BracketedWord:
        factors = []
        for f in v.factors:
            if isinstance(f, Letter):
                try:
                    r = next(it)
                except StopIteration:
                    raise ValueError("composition has fewer parts than letters") from None
                factors.extend([f] * r)
            else:
                factors.append(Bracket(walk(f.core), f.power))
        return BracketedWord(tuple(factors))

    out = walk(w)
    if next(it, None) is not None:
        raise ValueError("composition has more parts than letters")
    return out


# ---------------------------------------------------------------------------
# Generating series, solved coefficientwise

@dataclass(frozen=True)
class BivariateSeries:
    """Truncated series in z (degree) and t (arity) with exact coefficients."""

    kind: str
    max_degree: int
    max_arity: int
    table: tuple  # table[n][m] -> int

    def coeff(self, n: int, m: int) -> int:
        if 0 <= n <= self.max_degree and 0 <= m <= self.max_arity:
            return self.table[n][m]
        return 0

    def row_sum(self, n: int) -> int:
        return sum(self.table[n])

    def evaluate(self, z: float, t: float) -> float:
        total = 0.0
        for n in range(self.max_degree + 1):
            zn = z ** n
            for m in range(self.max_arity + 1):
                c = self.table[n][m]
                if c:
                    total += c * zn * t ** m
        return total

    def cells(self) -> list:
        return [
            (n, m, self.table[n][m])
            for n in range(self.max_degree + 1)
            for m in range(self.max_arity + 1)
            if self.table[n][m]
        ]

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "max_degree": self.max_degree,
            "max_arity": self.max_arity,
            "cells": [[n, m, c] for n, m, c in self.cells()],
        }


@lru_cache(maxsize=None)
def _i_table(N: int, M: int) -> tuple:
    """Coefficients of I from I = zt + t*I^2 + zt*I, degree by degree."""
    i = [[0] * (M + 1) for _ in range(N + 1)]
    for n in range(1, N + 1):
        for m in range(1, M + 1):
            val = 1 if (n == 1 and m == 1) else 0
            if n >= 1 and m >= 1:
                val += i[n - 1][m - 1]
            # (t * I^2)[n][m]: products with both factors of degree >= 1
            for n1 in range(1, n):
                row1 = i[n1]
                row2 = i[n - n1]
                val += sum(
                    row1[m1] * row2[m - 1 - m1]
                    for m1 in range(1, m - 1)
                    if row1[m1] and row2[m - 1 - m1]
                )
            i[n][m] = val
    return tuple(tuple(row) for row in i)


@lru_cache(maxsize=None)
def _b_table(N: int, M: int) -> tuple:
    """Coefficients of B from B = I + t*I*B."""
    i = _i_table(N, M)
    b = [[0] * (M + 1) for _ in range(N + 1)]
    for n in range(1, N + 1):
        for m in range(1, M + 1):
            val = i[n][m]
            for n1 in range(1, n + 1):
                irow = i[n1]
                brow = b[n - n1]
                val += sum(
                    irow[m1] * brow[m - 1 - m1]
                    for m1 in range(1, m)
                    if irow[m1] and brow[m - 1 - m1]
                )
            b[n][m] = val
    return tuple(tuple(row) for row in b)


_KINDS = ("I", "B", "D", "C", "A")


def series(kind: str, max_degree: int, max_arity: int) -> BivariateSeries:
    """The bivariate series for kind in I, B, D, C, A at the idempotent cap 1.

    I satisfies I - zt = zt(1+t) I / (1 - tI); B = I/(1 - tI);
    D = B - I; C = t + (2t + t^2) B; A = 1 + B + C.
    """
    if kind not in _KINDS:
        raise ValueError(f"unknown series kind {kind!r}; expected one of {_KINDS}")
    N, M = max_degree, max_arity
    i = _i_table(N, M)
    b = _b_table(N, M)
    out = [[0] * (M + 1) for _ in range(N + 1)]
    for n in range(N + 1):
        for m in range(M + 1):
            if kind == "I":
                out[n][m] = i[n][m]
            elif kind == "B":
                out[n][m] = b[n][m]
            elif kind == "D":
                out[n][m] = b[n][m] - i[n][m]
            else:
                c = 0
                if n == 0 and m == 1:
                    c = 1
                if m >= 1:
                    c += 2 * b[n][m - 1]
                if m >= 2:
                    c += b[n][m - 2]
                if kind == "C":
                    out[n][m] = c
                else:  # A = 1 + B + C
                    out[n][m] = c + b[n][m] + (1 if n == 0 and m == 0 else 0)
    return BivariateSeries(kind, N, M, tuple(tuple(row) for row in out))


def univariate(kind: str, max_degree: int) -> list:
    """Row sums over arity; the t = 1 specialization of :func:`series`."""
    s = series(kind, max_degree, 2 * max_degree + 1)
    return [s.row_sum(n) for n in range(max_degree + 1)]


# ---------------------------------------------------------------------------
# Schroeder numbers

@lru_cache(maxsize=None)
def schroeder(n: int) -> int:
    """Large Schroeder number by the composition recursion

        s_0 = 1,  s_n = 2 * sum over j, (p_1..p_j) |= n of s_(p_1-1)...s_(p_j-1)
    """
    if n < 0:
        raise ValueError("index must be nonnegative")
    if n == 0:
        return 1
    total = 0
    for j in range(1, n + 1):
        for parts in compositions(n, j):
            prod = 1
            for p in parts:
                prod *= schroeder(p - 1)
            total += prod
    return 2 * total


def schroeder_sequence(count: int) -> list:
    return [schroeder(n) for n in range(count)]


@lru_cache(maxsize=None)
def indecomposable_recursion(n: int) -> int:
    """i_n directly from its own composition recursion (i_1 = 1)."""
    if n < 1:
        return 0
    if n == 1:
        return 1
    total = 0
    for j in range(1, n):
        for parts in compositions(n - 1, j):
            prod = 1
            for p in parts:
                prod *= indecomposable_recursion(p)
            total += prod
    return 2 * total


# ---------------------------------------------------------------------------
# Run-cap reduction: substitute the run series into the cap-1 table

def reduce_to_v1(run_cap: Cap, max_degree: int, max_arity: int,
                 include_one: bool = True) -> CountTable:
    """Counts for an arbitrary run cap from the cap-1 series.

    Each x of a cap-1 word expands independently into a run of length 1..cap,
    so the cap-v series is the cap-1 series with t replaced by
    t + t^2 + ... + t^cap (all powers of t when the cap is infinite).
    """
    cap = _check_cap(run_cap)
    N, M = max_degree, max_arity
    a1 = series("A", N, M)
    g = [0] * (M + 1)
    for m in range(1, M + 1):
        if cap == math.inf or m <= cap:
            g[m] = 1
    # powers of the run series, truncated at M
    gpow = [[0] * (M + 1) for _ in range(M + 2)]
    gpow[0][0] = 1
    for k in range(1, M + 1):
        prev = gpow[k - 1]
        cur = gpow[k]
        for m1 in range(M + 1):
            if prev[m1]:
                for m2 in range(1, M + 1 - m1):
                    if g[m2]:
                        cur[m1 + m2] += prev[m1]
    counts: Dict[Tuple[int, int], int] = {}
    for n in range(N + 1):
        for m in range(M + 1):
            total = 0
            for k in range(M + 1):
                c = a1.coeff(n, k)
                if c:
                    total += c * gpow[k][m]
            if n == 0 and m == 0 and not include_one:
                total -= 1
            if total:
                counts[(n, m)] = total
    return CountTable(counts, cap, include_one, N, M)


# ---------------------------------------------------------------------------
# Closed radical forms (floating point; validated against the series)

def closed_form(kind: str, z: float, t: float) -> float:
    """The radical expression for each series, in double precision."""
    r = math.sqrt(z * z * t * t - (2 * t + 4 * t * t) * z + 1)
    if kind == "I":
        return (1 - z * t - r) / (2 * t)
    if kind == "B":
        return (1 - z * t - 2 * z * t * t - r) / (2 * z * t * t * (1 + t))
    if kind == "D":
        return (
            1 - 2 * z * t - 3 * z * t * t + z * z * t * t + z * z * t ** 3
            + (z * t + z * t * t - 1) * r
        ) / (2 * z * t * t * (1 + t))
    if kind == "C":
        return (2 + t - 2 * z * t - 3 * z * t * t - (2 + t) * r) / (2 * z * t * (1 + t))
    if kind == "A":
        return (1 + t) * (1 - z * t - r) / (2 * z * t * t)
    raise ValueError(f"unknown series kind {kind!r}")


def series_value(kind: str, z: float, t: float, max_degree: int = 25) -> float:
    """Truncated numeric sum of the series, for radical spot checks."""
    s = series(kind, max_degree, 2 * max_degree + 1)
    return s.evaluate(z, t)
