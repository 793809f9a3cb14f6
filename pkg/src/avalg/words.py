"""Bracketed words over a finite alphabet and averaging normal forms.

A bracketed word is a nonempty sequence of factors, where a factor is either
a letter of the alphabet or a bracketed subword ``[w]^s`` (an ``s``-fold
application of the unary operator to ``w``).  Iterated brackets are kept in
canonical power form: the core of a bracket is never itself a single bracket,
so ``[[w]]`` is stored as ``[w]^2``.

An *averaging word* is a bracketed word containing no subword of the shapes
``[u][v]`` (adjacent brackets), ``[[u]v]`` with ``v`` nonempty (a bracket at
the head of a bracket's content), or ``[u[v]^s]`` with ``s >= 2`` and ``u``
nonempty (content ending in a repeated bracket).  Averaging words are the
normal forms of the free averaging algebra; see :mod:`avalg.algebra`.

Concrete text syntax::

    word   := factor+
    factor := IDENT | '[' word ']' power?
    power  := '^' POSINT
    IDENT  := [A-Za-z][A-Za-z0-9_]*

Whitespace between factors is ignored.  The renderer emits a single space
only between two adjacent letters (otherwise they would lex as one
identifier), which keeps ``parse_word(render_word(w)) == w`` exact.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Iterator, Sequence, Union

__all__ = [
    "Letter",
    "Bracket",
    "BracketedWord",
    "Factor",
    "AveragingWord",
    "WordAnalysis",
    "Violation",
    "ForbiddenPattern",
    "WordSyntaxError",
    "InvalidAveragingWord",
    "letter",
    "bracket",
    "word",
    "parse_word",
    "render_word",
    "analyze",
    "validate_averaging",
    "peel",
    "factor_at",
    "depth",
    "breadth",
    "head_index",
    "tail_index",
    "degree",
    "arity",
    "word_size",
    "word_key",
    "letters_of",
    "iter_bracketed_words",
    "iter_averaging_words",
    "random_bracketed_word",
    "random_averaging_word",
]

_IDENT_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*")


class WordSyntaxError(ValueError):
    """Raised on malformed word text; carries the 0-based offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


@dataclass(frozen=True)
class Letter:
    symbol: str

    def __post_init__(self):
        if not _IDENT_RE.fullmatch(self.symbol):
            raise ValueError(f"letter symbol {self.symbol!r} is not an identifier")

    def __str__(self) -> str:
        return self.symbol


@dataclass(frozen=True)
class Bracket:
    """``power``-fold bracket around ``core``, kept in canonical power form."""

    core: "BracketedWord"
    power: int = 1

    def __post_init__(self):
        if self.power < 1:
            raise ValueError("bracket power must be >= 1")
        # Collapse [[w]^p]^q into [w]^(p+q); the inner value is already canonical.
        core, power = self.core, self.power
        if len(core.factors) == 1 and isinstance(core.factors[0], Bracket):
            inner = core.factors[0]
            object.__setattr__(self, "core", inner.core)
            object.__setattr__(self, "power", power + inner.power)

    def __str__(self) -> str:
        return render_word(word(self))


@dataclass(frozen=True)
class BracketedWord:
    factors: tuple  # tuple[Factor, ...], nonempty

    def __post_init__(self):
        factors = tuple(self.factors)
        if not factors:
            raise ValueError("a bracketed word has at least one factor")
        for f in factors:
            if not isinstance(f, (Letter, Bracket)):
                raise TypeError(f"not a word factor: {f!r}")
        object.__setattr__(self, "factors", factors)

    def __str__(self) -> str:
        return render_word(self)


Factor = Union[Letter, Bracket]


def letter(symbol: str) -> Letter:
    return Letter(symbol)


def word(*factors: Factor) -> BracketedWord:
    return BracketedWord(tuple(factors))


def bracket(core: Union[BracketedWord, Factor, "AveragingWord"], power: int = 1) -> Bracket:
    """Bracket ``core`` ``power`` times; accepts a word or a single factor."""
    if isinstance(core, AveragingWord):
        core = core.word
    if isinstance(core, (Letter, Bracket)):
        core = word(core)
    return Bracket(core, power)


# ---------------------------------------------------------------------------
# Basic measures

def breadth(w: BracketedWord) -> int:
    """Number of factors in the standard decomposition."""
    return len(w.factors)


def head_index(w: BracketedWord) -> int:
    """0 if the first factor is a letter, 1 if it is a bracket."""
    return 0 if isinstance(w.factors[0], Letter) else 1


def tail_index(w: BracketedWord) -> int:
    return 0 if isinstance(w.factors[-1], Letter) else 1


def depth(w: BracketedWord) -> int:
    """Maximal bracket nesting; a power-``s`` bracket adds ``s`` levels."""
    return max(
        (f.power + depth(f.core)) if isinstance(f, Bracket) else 0 for f in w.factors
    )


def degree(w: BracketedWord) -> int:
    """Total number of balanced bracket pairs (powers count with multiplicity)."""
    return sum(f.power + degree(f.core) for f in w.factors if isinstance(f, Bracket))


def arity(w: BracketedWord) -> int:
    """Total number of letter occurrences."""
    return sum(
        arity(f.core) if isinstance(f, Bracket) else 1 for f in w.factors
    )


def word_size(w: BracketedWord) -> int:
    """Letters plus bracket pairs; the node count of the word."""
    return arity(w) + degree(w)


def letters_of(w: BracketedWord) -> set:
    """The set of letter symbols occurring in ``w``."""
    out: set = set()
    for f in w.factors:
        if isinstance(f, Letter):
            out.add(f.symbol)
        else:
            out |= letters_of(f.core)
    return out


def word_key(w: Union[BracketedWord, "AveragingWord"]):
    """Canonical sort key: (degree, arity, rendered text)."""
    if isinstance(w, AveragingWord):
        w = w.word
    return (degree(w), arity(w), render_word(w))


# ---------------------------------------------------------------------------
# Parsing and rendering

def parse_word(text: str) -> BracketedWord:
    """Parse the concrete syntax into a canonical-power-form word."""
    pos = 0
    n = len(text)

    def skip_ws(i: int) -> int:
        while i < n and text[i].isspace():
            i += 1
        return i

    def parse_factors(i: int) -> tuple:
        factors = []
        i = skip_ws(i)
        while i < n and text[i] != "]":
            if text[i] == "[":
                start = i
                inner, i = parse_factors(i + 1)
                if i >= n or text[i] != "]":
                    raise WordSyntaxError("unclosed '['", start)
                if not inner:
                    raise WordSyntaxError("empty bracket content", i)
                i += 1
                power = 1
                if i < n and text[i] == "^":
                    m = re.match(r"\d+", text[i + 1:])
                    if not m:
                        raise WordSyntaxError("expected an integer after '^'", i + 1)
                    power = int(m.group())
                    if power == 0:
                        raise WordSyntaxError("zero power", i + 1)
                    i += 1 + m.end()
                factors.append(Bracket(BracketedWord(tuple(inner)), power))
            else:
                m = _IDENT_RE.match(text, i)
                if not m:
                    raise WordSyntaxError(f"unexpected character {text[i]!r}", i)
                factors.append(Letter(m.group()))
                i = m.end()
            i = skip_ws(i)
        return factors, i

    factors, pos = parse_factors(pos)
    if pos < n:
        raise WordSyntaxError("unmatched ']'", pos)
    if not factors:
        raise WordSyntaxError("empty word", 0)
    return BracketedWord(tuple(factors))


def render_word(w: Union[BracketedWord, "AveragingWord"]) -> str:
    """Deterministic inverse of :func:`parse_word`.

    A space separates two adjacent letters; everything else is unspaced and
    nested brackets collapse into ``^s``.
    """
    if isinstance(w, AveragingWord):
        w = w.word
    parts = []
    prev_letter = False
    for f in w.factors:
        if isinstance(f, Letter):
            if prev_letter:
                parts.append(" ")
            parts.append(f.symbol)
            prev_letter = True
        else:
            parts.append("[")
            parts.append(render_word(f.core))
            parts.append("]")
            if f.power > 1:
                parts.append(f"^{f.power}")
            prev_letter = False
    return "".join(parts)


# ---------------------------------------------------------------------------
# Structural analysis

@dataclass(frozen=True)
class WordAnalysis:
    """Standard and block decompositions plus the basic indices.

    ``block_factors`` groups maximal letter runs and single brackets, each
    packaged as a word; on averaging words the two kinds strictly alternate.
    """

    depth: int
    breadth: int
    head: int
    tail: int
    standard_factors: tuple
    block_factors: tuple


def analyze(w: BracketedWord) -> WordAnalysis:
    blocks = []
    run: list = []
    for f in w.factors:
        if isinstance(f, Letter):
            run.append(f)
        else:
            if run:
                blocks.append(BracketedWord(tuple(run)))
                run = []
            blocks.append(word(f))
    if run:
        blocks.append(BracketedWord(tuple(run)))
    return WordAnalysis(
        depth=depth(w),
        breadth=breadth(w),
        head=head_index(w),
        tail=tail_index(w),
        standard_factors=w.factors,
        block_factors=tuple(blocks),
    )


# ---------------------------------------------------------------------------
# Averaging words

class ForbiddenPattern(Enum):
    ADJACENT_BRACKETS = "AdjacentBrackets"
    BRACKET_HEADED = "BracketHeaded"
    POWER_TAIL = "PowerTail"


@dataclass(frozen=True)
class Violation:
    """Leftmost-innermost occurrence of a forbidden pattern.

    ``path`` is a factor-index path from the top word; every index but the
    last descends into a bracket core.  The final index addresses the left
    bracket of an adjacent pair, or the bracket whose content is offending.
    """

    pattern: ForbiddenPattern
    path: tuple


def factor_at(w: BracketedWord, path: Sequence[int]) -> Factor:
    """Resolve a :class:`Violation` path to the factor it addresses."""
    f = w.factors[path[0]]
    for idx in path[1:]:
        assert isinstance(f, Bracket)
        f = f.core.factors[idx]
    return f


def _scan_violation(w: BracketedWord, prefix: tuple = ()) -> Union[Violation, None]:
    for idx, f in enumerate(w.factors):
        if isinstance(f, Bracket):
            found = _scan_violation(f.core, prefix + (idx,))
            if found is not None:
                return found
            core = f.core
            if len(core.factors) >= 2:
                if isinstance(core.factors[0], Bracket):
                    return Violation(ForbiddenPattern.BRACKET_HEADED, prefix + (idx,))
                last = core.factors[-1]
                if isinstance(last, Bracket) and last.power >= 2:
                    return Violation(ForbiddenPattern.POWER_TAIL, prefix + (idx,))
        if (
            idx + 1 < len(w.factors)
            and isinstance(f, Bracket)
            and isinstance(w.factors[idx + 1], Bracket)
        ):
            return Violation(ForbiddenPattern.ADJACENT_BRACKETS, prefix + (idx,))
    return None


class InvalidAveragingWord(ValueError):
    def __init__(self, violation: Violation):
        super().__init__(
            f"forbidden pattern {violation.pattern.value} at path {violation.path}"
        )
        self.violation = violation


@dataclass(frozen=True)
class AveragingWord:
    """A bracketed word certified free of the three forbidden patterns."""

    word: BracketedWord

    def __post_init__(self):
        found = _scan_violation(self.word)
        if found is not None:
            raise InvalidAveragingWord(found)

    def __str__(self) -> str:
        return render_word(self.word)


def validate_averaging(w: BracketedWord) -> Union[AveragingWord, Violation]:
    """Accept ``w`` as an averaging word or report the leftmost-innermost violation."""
    found = _scan_violation(w)
    if found is not None:
        return found
    return AveragingWord(w)


def raw(w: Union[BracketedWord, AveragingWord]) -> BracketedWord:
    return w.word if isinstance(w, AveragingWord) else w


def peel(w: Union[AveragingWord, BracketedWord]) -> tuple:
    """Split a breadth-1 bracket ``[w']^s`` into ``(w', s)``.

    The core of a canonical averaging bracket always has head index 0, so the
    pair is unique.
    """
    v = raw(w)
    if len(v.factors) != 1 or not isinstance(v.factors[0], Bracket):
        raise ValueError("peel needs a word that is a single bracket factor")
    b = v.factors[0]
    return AveragingWord(b.core), b.power


# ---------------------------------------------------------------------------
# Exhaustive enumeration (single-letter alphabet)

def _only(symbols: Sequence[str]) -> str:
    if len(symbols) != 1:
        raise ValueError("exhaustive word enumeration needs a single-letter alphabet")
    return symbols[0]


@lru_cache(maxsize=None)
def _all_words_exact(sym: str, size: int) -> tuple:
    """All canonical bracketed words with ``arity + degree == size``."""
    if size < 1:
        return ()
    out = []
    for k in range(1, size + 1):
        for f in _all_factors_exact(sym, k):
            if k == size:
                out.append(word(f))
            else:
                for rest in _all_words_exact(sym, size - k):
                    out.append(BracketedWord((f,) + rest.factors))
    return tuple(out)


@lru_cache(maxsize=None)
def _all_factors_exact(sym: str, size: int) -> tuple:
    out = []
    if size == 1:
        out.append(Letter(sym))
    for power in range(1, size):
        for core in _all_words_exact(sym, size - power):
            if len(core.factors) == 1 and isinstance(core.factors[0], Bracket):
                continue  # that shape is already produced at a higher power
            out.append(Bracket(core, power))
    return tuple(out)


def iter_bracketed_words(max_size: int, symbol: str = "x") -> Iterator[BracketedWord]:
    """Every canonical bracketed word over one letter with size <= ``max_size``."""
    for size in range(1, max_size + 1):
        yield from _all_words_exact(symbol, size)


@lru_cache(maxsize=None)
def _core_shaped_exact(sym: str, a: int, d: int) -> tuple:
    """Averaging words with head 0 whose tail is a letter or a power-1 bracket.

    These are exactly the words a single bracket can wrap in normal form.
    """
    out = []
    if d == 0:
        if a >= 1:
            out.append(word(*[Letter(sym)] * a))
        return tuple(out)
    # run, then (bracket, run)* pairs, then an optional final power-1 bracket
    for r0 in range(1, a + 1):
        prefix = tuple([Letter(sym)] * r0)
        out.extend(_core_tails(sym, prefix, a - r0, d))
    return tuple(out)


def _core_tails(sym: str, prefix: tuple, a: int, d: int) -> list:
    """Extend ``prefix`` (ending in a letter) by alternating brackets and runs."""
    out = []
    if a == 0 and d == 0:
        out.append(BracketedWord(prefix))
        return out
    if d == 0:
        return out
    # final power-1 bracket
    for core in _core_shaped_exact(sym, a, d - 1):
        out.append(BracketedWord(prefix + (Bracket(core, 1),)))
    # middle bracket (any power) followed by a run and more word
    for bd in range(1, d + 1):
        for b in _tilde_brackets_exact(sym, a_budget=a - 1, d=bd):
            ba = arity(b.core)
            for r in range(1, a - ba + 1):
                mid = prefix + (b,) + tuple([Letter(sym)] * r)
                out.extend(_core_tails(sym, mid, a - ba - r, d - bd))
    return out


@lru_cache(maxsize=None)
def _tilde_brackets_all(sym: str, a: int, d: int) -> tuple:
    """Breadth-1 brackets: any power around a core-shaped word, exact (a, d)."""
    out = []
    for power in range(1, d + 1):
        for core in _core_shaped_exact(sym, a, d - power):
            out.append(Bracket(core, power))
    return tuple(out)


def _tilde_brackets_exact(sym: str, a_budget: int, d: int) -> Iterator[Bracket]:
    for a in range(1, a_budget + 1):
        yield from _tilde_brackets_all(sym, a, d)


@lru_cache(maxsize=None)
def _averaging_exact(sym: str, a: int, d: int) -> tuple:
    """All averaging words over one letter with exact arity ``a`` and degree ``d``."""
    if a < 1:
        return ()
    out = []
    seen = set()

    def emit(w: BracketedWord):
        if w not in seen:
            seen.add(w)
            out.append(w)

    # words with head 0: run followed by alternating structure
    for r0 in range(1, a + 1):
        prefix = tuple([Letter(sym)] * r0)
        for w in _alternating(sym, prefix, a - r0, d, after_run=True):
            emit(w)
    # words with head 1: bracket followed by alternating structure
    if d >= 1:
        for bd in range(1, d + 1):
            for ba in range(1, a + 1):
                for b in _tilde_brackets_all(sym, ba, bd):
                    for w in _alternating(sym, (b,), a - ba, d - bd, after_run=False):
                        emit(w)
    return tuple(out)


def _alternating(sym: str, prefix: tuple, a: int, d: int, after_run: bool) -> list:
    out = []
    if a == 0 and d == 0:
        out.append(BracketedWord(prefix))
        return out
    if after_run:
        if d >= 1:
            for bd in range(1, d + 1):
                for ba in range(1, a + 1):
                    for b in _tilde_brackets_all(sym, ba, bd):
                        out.extend(
                            _alternating(sym, prefix + (b,), a - ba, d - bd, False)
                        )
    else:
        for r in range(1, a + 1):
            out.extend(
                _alternating(sym, prefix + tuple([Letter(sym)] * r), a - r, d, True)
            )
    return out


def iter_averaging_words(
    max_arity: int, max_degree: int, symbol: str = "x"
) -> Iterator[AveragingWord]:
    """Every averaging word over one letter within the given arity/degree bounds."""
    for a in range(1, max_arity + 1):
        for d in range(0, max_degree + 1):
            for w in _averaging_exact(symbol, a, d):
                yield AveragingWord(w)


# ---------------------------------------------------------------------------
# Random generation (seeded; used heavily by the test suite)

def random_bracketed_word(rng, alphabet: Sequence[str] = ("x", "y"), max_size: int = 10,
                          max_power: int = 3) -> BracketedWord:
    """A random canonical bracketed word; not necessarily an averaging word."""

    def gen(budget: int) -> BracketedWord:
        factors = []
        while budget > 0:
            if rng.random() < 0.55 or budget < 3:
                factors.append(Letter(rng.choice(alphabet)))
                budget -= 1
            else:
                power = rng.randint(1, min(max_power, budget - 1))
                core = gen(rng.randint(1, budget - power))
                b = Bracket(core, power)
                factors.append(b)
                budget -= power + word_size(core)
            if factors and rng.random() < 0.25:
                break
        if not factors:
            factors.append(Letter(rng.choice(alphabet)))
        return BracketedWord(tuple(factors))

    return gen(rng.randint(1, max_size))


def random_averaging_word(rng, alphabet: Sequence[str] = ("x", "y"),
                          max_depth: int = 4, max_run: int = 2) -> AveragingWord:
    """A random averaging word of depth <= ``max_depth``."""

    def run() -> list:
        return [Letter(rng.choice(alphabet)) for _ in range(rng.randint(1, max_run))]

    def core_shaped(d: int) -> BracketedWord:
        # head 0; tail a letter or a final power-1 bracket
        factors = run()
        for _ in range(rng.randint(0, 2)):
            if d < 1 or rng.random() < 0.5:
                break
            factors.append(tilde_bracket(d))
            factors.extend(run())
        if d >= 1 and rng.random() < 0.5:
            factors.append(Bracket(core_shaped(d - 1), 1))
        return BracketedWord(tuple(factors))

    def tilde_bracket(d: int) -> Bracket:
        power = rng.randint(1, d)
        return Bracket(core_shaped(d - power), power)

    def gen(d: int) -> BracketedWord:
        factors: list = []
        if d >= 1 and rng.random() < 0.35:
            factors.append(tilde_bracket(d))
        pairs = rng.randint(0 if factors else 1, 2)
        for _ in range(pairs):
            factors.extend(run())
            if d >= 1 and rng.random() < 0.5:
                factors.append(tilde_bracket(d))
            else:
                break
        if not factors:
            factors.extend(run())
        return BracketedWord(tuple(factors))

    return AveragingWord(gen(max_depth))
