import random

import pytest

from avalg.words import (
    AveragingWord,
    Bracket,
    BracketedWord,
    ForbiddenPattern,
    InvalidAveragingWord,
    Letter,
    Violation,
    WordSyntaxError,
    analyze,
    arity,
    breadth,
    degree,
    depth,
    factor_at,
    iter_averaging_words,
    iter_bracketed_words,
    parse_word,
    peel,
    random_averaging_word,
    random_bracketed_word,
    render_word,
    validate_averaging,
    word,
    word_size,
)

x = Letter("x")


def bw(text):
    return parse_word(text)


class TestParse:
    def test_letter_and_bracket(self):
        w = bw("x[x]")
        assert w.factors == (x, Bracket(word(x), 1))

    def test_iterated_bracket_power_form(self):
        w = bw("[x[x]]^2")
        assert len(w.factors) == 1
        b = w.factors[0]
        assert b.power == 2
        assert render_word(b.core) == "x[x]"

    def test_nested_brackets_canonicalize(self):
        assert bw("[[x]]") == word(Bracket(word(x), 2))
        assert bw("[[[x]]^2]^3") == word(Bracket(word(x), 6))

    def test_whitespace_between_factors(self):
        assert bw("x [x] \n y") == bw("x[x]y")

    def test_multichar_identifiers(self):
        w = bw("ab1[x]")
        assert w.factors[0] == Letter("ab1")

    @pytest.mark.parametrize(
        "text",
        ["", "   ", "[]", "[x]^0", "x]", "[x", "1x", "x^2", "[x]^", "x+y"],
    )
    def test_errors_carry_position(self, text):
        with pytest.raises(WordSyntaxError) as err:
            bw(text)
        assert err.value.position >= 0


class TestRender:
    def test_examples(self):
        assert render_word(word(Bracket(word(x), 2))) == "[x]^2"
        assert render_word(word(x, Bracket(word(x), 1), x)) == "x[x]x"
        assert render_word(word(Bracket(word(x, Bracket(word(x), 1)), 1))) == "[x[x]]"

    def test_adjacent_letters_reparse(self):
        w = word(x, Letter("xy"), x)
        assert parse_word(render_word(w)) == w

    def test_round_trip_10000_random_words(self):
        rng = random.Random(20240)
        for _ in range(10000):
            w = random_bracketed_word(rng, alphabet=("x", "y", "ab", "x1"))
            assert parse_word(render_word(w)) == w


class TestAnalyze:
    def test_two_letter_example(self):
        w = bw("x[y[x]]x y[y]")
        info = analyze(w)
        assert (info.depth, info.breadth, info.head, info.tail) == (2, 5, 0, 1)
        assert [render_word(b) for b in info.block_factors] == [
            "x",
            "[y[x]]",
            "x y",
            "[y]",
        ]

    def test_single_letter(self):
        info = analyze(bw("x"))
        assert (info.depth, info.breadth, info.head, info.tail) == (0, 1, 0, 0)

    def test_ladder(self):
        info = analyze(bw("[x]^3"))
        assert (info.depth, info.breadth, info.head, info.tail) == (3, 1, 1, 1)

    def test_letter_run_blocks_are_maximal(self):
        rng = random.Random(7)
        for _ in range(200):
            w = random_bracketed_word(rng)
            blocks = analyze(w).block_factors
            kinds = [isinstance(b.factors[0], Letter) for b in blocks]
            # two letter runs never touch; adjacent brackets may
            assert not any(kinds[i] and kinds[i + 1] for i in range(len(kinds) - 1))

    def test_blocks_alternate_on_averaging_words(self):
        rng = random.Random(8)
        for _ in range(300):
            w = random_averaging_word(rng)
            blocks = analyze(w.word).block_factors
            kinds = [isinstance(b.factors[0], Letter) for b in blocks]
            assert all(kinds[i] != kinds[i + 1] for i in range(len(kinds) - 1))

    def test_depth_of_power_adds_power(self):
        assert depth(bw("[x[x]]^2")) == 3
        assert degree(bw("[x[x]]^2")) == 3
        assert arity(bw("[x[x]]^2")) == 2


class TestValidate:
    def test_accepts_power_word(self):
        got = validate_averaging(bw("[x[x]^2x[x]]"))
        assert isinstance(got, AveragingWord)

    def test_power_tail(self):
        got = validate_averaging(bw("[x[x]^2]"))
        assert isinstance(got, Violation)
        assert got.pattern is ForbiddenPattern.POWER_TAIL

    def test_adjacent_brackets(self):
        got = validate_averaging(bw("[x][x]"))
        assert isinstance(got, Violation)
        assert got.pattern is ForbiddenPattern.ADJACENT_BRACKETS

    def test_bracket_headed(self):
        got = validate_averaging(bw("[[x]x]"))
        assert isinstance(got, Violation)
        assert got.pattern is ForbiddenPattern.BRACKET_HEADED

    def test_violation_path_addresses_pattern(self):
        rng = random.Random(99)
        seen = 0
        for _ in range(3000):
            w = random_bracketed_word(rng, max_size=12)
            got = validate_averaging(w)
            if isinstance(got, AveragingWord):
                continue
            seen += 1
            f = factor_at(w, got.path)
            assert isinstance(f, Bracket)
            if got.pattern is ForbiddenPattern.ADJACENT_BRACKETS:
                parent = w if len(got.path) == 1 else factor_at(w, got.path[:-1]).core
                assert isinstance(parent.factors[got.path[-1] + 1], Bracket)
            elif got.pattern is ForbiddenPattern.BRACKET_HEADED:
                assert isinstance(f.core.factors[0], Bracket)
                assert len(f.core.factors) >= 2
            else:
                assert isinstance(f.core.factors[-1], Bracket)
                assert f.core.factors[-1].power >= 2
        assert seen > 100

    def test_nested_violation_found(self):
        got = validate_averaging(bw("x[x[x][x]]"))
        assert isinstance(got, Violation)
        assert got.pattern is ForbiddenPattern.ADJACENT_BRACKETS
        assert got.path == (1, 1)

    def test_innermost_violation_wins(self):
        # the content is both bracket-headed and has adjacent brackets one
        # level down; the deeper pair is reported
        got = validate_averaging(bw("[[x][x]]"))
        assert isinstance(got, Violation)
        assert got.pattern is ForbiddenPattern.ADJACENT_BRACKETS
        assert got.path == (0, 0)

    def test_constructor_rejects(self):
        with pytest.raises(InvalidAveragingWord):
            AveragingWord(bw("[x][x]"))


class TestPeel:
    def test_power_two(self):
        core, power = peel(bw("[x[x]]^2"))
        assert render_word(core.word) == "x[x]"
        assert power == 2

    def test_power_one(self):
        core, power = peel(bw("[x]"))
        assert render_word(core.word) == "x"
        assert power == 1

    def test_breadth_two_rejected(self):
        with pytest.raises(ValueError):
            peel(bw("x[x]"))

    def test_core_has_head_zero(self):
        rng = random.Random(5)
        for _ in range(300):
            w = random_averaging_word(rng, max_depth=4)
            if breadth(w.word) == 1 and isinstance(w.word.factors[0], Bracket):
                core, power = peel(w)
                assert power >= 1
                assert isinstance(core.word.factors[0], Letter)


class TestInvariants:
    def test_generated_averaging_words_validate(self):
        rng = random.Random(11)
        for _ in range(2000):
            w = random_averaging_word(rng, max_depth=5)
            assert depth(w.word) <= 5
            assert isinstance(validate_averaging(w.word), AveragingWord)

    def test_breadth_positive_and_depth_zero_iff_bracketless(self):
        rng = random.Random(13)
        for _ in range(1000):
            w = random_bracketed_word(rng)
            assert breadth(w) >= 1
            has_bracket = any(isinstance(f, Bracket) for f in w.factors)
            assert (depth(w) == 0) == (not has_bracket)

    def test_every_split_of_averaging_word_validates(self):
        # splits of the standard factor sequence, exhaustive at small size
        count = 0
        for aw in iter_averaging_words(max_arity=7, max_degree=3):
            w = aw.word
            if depth(w) > 3:
                continue
            for cut in range(1, len(w.factors)):
                left = BracketedWord(w.factors[:cut])
                right = BracketedWord(w.factors[cut:])
                assert isinstance(validate_averaging(left), AveragingWord)
                assert isinstance(validate_averaging(right), AveragingWord)
                count += 1
        assert count > 1000

    def test_exhaustive_words_are_distinct_and_canonical(self):
        words = list(iter_bracketed_words(7))
        assert len(words) == len(set(words))
        for w in words:
            assert word_size(w) <= 7
            assert parse_word(render_word(w)) == w

    def test_exhaustive_counts_are_catalan(self):
        # one-letter canonical words by size satisfy W = z(1+W)^2: the
        # counts are Catalan numbers, here computed from the binomial form
        import math as m

        def catalan(n):
            return m.comb(2 * n, n) // (n + 1)

        by_size = {}
        for w in iter_bracketed_words(8):
            by_size[word_size(w)] = by_size.get(word_size(w), 0) + 1
        assert [by_size[s] for s in range(1, 9)] == [catalan(s) for s in range(1, 9)]

    def test_averaging_enumeration_matches_filter(self):
        # independent route: filter all bracketed words by the validator
        by_filter = {
            w
            for w in iter_bracketed_words(6)
            if isinstance(validate_averaging(w), AveragingWord)
        }
        by_construction = {
            aw.word
            for aw in iter_averaging_words(max_arity=6, max_degree=5)
            if word_size(aw.word) <= 6
        }
        assert by_construction == by_filter
