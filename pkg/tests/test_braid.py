from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from braidmat.braid import (
    DiagramWord,
    Over,
    PairCountMatrix,
    ProjectionWord,
    cn_matrix,
    concat,
    concat_all,
    crossing_matrix,
    embed,
    forget,
    is_pure,
    mirror,
    ou_matrix,
    permutation,
)
from braidmat.errors import InvalidMatrix, InvalidWord, MismatchedStrandCount, OffsetOutOfRange

from gen import random_pure_word, sorting_letters

L, R = Over.LEFT, Over.RIGHT


def W(n, *letters):
    return ProjectionWord(n, letters)


def pairs(n, d):
    return PairCountMatrix.from_pairs(n, d)


@st.composite
def words(draw, min_n=2, max_n=7, max_len=16):
    n = draw(st.integers(min_n, max_n))
    letters = draw(st.lists(st.integers(1, n - 1), max_size=max_len))
    return ProjectionWord(n, tuple(letters))


@st.composite
def diagrams(draw, max_n=6, max_len=14):
    n = draw(st.integers(2, max_n))
    letters = draw(st.lists(st.tuples(st.integers(1, n - 1), st.sampled_from([L, R])), max_size=max_len))
    return DiagramWord(n, tuple(letters))


class TestPermutation:
    def test_empty_is_identity(self):
        assert permutation(W(3)) == (1, 2, 3)

    def test_single_letter(self):
        assert permutation(W(2, 1)) == (2, 1)

    def test_back_and_forth(self):
        assert permutation(W(3, 1, 2, 2, 1)) == (1, 2, 3)


class TestCN:
    def test_empty(self):
        assert cn_matrix(W(3)) == PairCountMatrix.zeros(3)

    def test_two_strands(self):
        assert cn_matrix(W(2, 1, 1)) == pairs(2, {(1, 2): 2})

    def test_label_tracking(self):
        assert cn_matrix(W(3, 1, 2, 2, 1)) == pairs(3, {(1, 2): 2, (1, 3): 2})

    @given(words())
    def test_symmetric_zero_diagonal_and_length(self, w):
        M = cn_matrix(w)
        assert M.is_symmetric() and M.has_zero_diagonal()
        assert M.total() == 2 * len(w)


class TestPurity:
    def test_examples(self):
        assert is_pure(W(2, 1, 1))
        assert not is_pure(W(2, 1))
        assert not is_pure(W(3, 1, 2, 1))
        assert permutation(W(3, 1, 2, 1)) == (3, 2, 1)

    @given(words())
    def test_pure_iff_even(self, w):
        assert is_pure(w) == cn_matrix(w).is_even()

    @given(words())
    def test_sorted_words_are_pure(self, w):
        fixed = ProjectionWord(w.n, w.letters + tuple(sorting_letters(permutation(w))))
        assert is_pure(fixed)


class TestConcat:
    def test_empty_is_identity(self):
        w = W(3, 1, 2)
        assert concat(W(3), w) == w

    def test_additive_two_strands(self):
        w = concat(W(2, 1, 1), W(2, 1, 1))
        assert w.letters == (1, 1, 1, 1)
        assert cn_matrix(w).entry(1, 2) == 4

    def test_disjoint_pieces_add(self):
        a, b = W(3, 1, 1), W(3, 2, 2)
        assert cn_matrix(concat(a, b)) == cn_matrix(a) + cn_matrix(b)

    def test_mismatch(self):
        with pytest.raises(MismatchedStrandCount):
            concat(W(2, 1), W(3, 1))

    def test_concat_all(self):
        assert concat_all(3, [W(3, 1), W(3, 2), W(3)]).letters == (1, 2)

    @given(st.integers(0, 2**32), words())
    def test_pure_prefix_is_additive(self, seed, b):
        a = random_pure_word(random.Random(seed), b.n, 8)
        assert cn_matrix(concat(a, b)) == cn_matrix(a) + cn_matrix(b)

    def test_impure_prefix_can_break_additivity(self):
        a, b = W(3, 1), W(3, 2)
        # after a, the strand at position 2 is label 1, so b crosses labels 1 and 3
        assert cn_matrix(concat(a, b)) != cn_matrix(a) + cn_matrix(b)


class TestMirrorEmbed:
    def test_mirror_examples(self):
        assert mirror(W(2, 1)).letters == (1,)
        m = mirror(W(3, 1, 1))
        assert m.letters == (2, 2)
        assert cn_matrix(m) == pairs(3, {(2, 3): 2})

    @given(words(min_n=6, max_n=6))
    def test_mirror_reverses_matrix(self, w):
        assert cn_matrix(mirror(w)) == cn_matrix(w).reverse()

    def test_embed_examples(self):
        w = W(3, 1, 2, 2, 1)
        e = embed(w, 6, 3)
        assert e.letters == (3, 4, 4, 3)
        M = cn_matrix(e)
        assert M.entry(3, 4) == 2 and M.entry(3, 5) == 2 and M.total() == cn_matrix(w).total()
        assert embed(w, 3, 1) == w
        e2 = embed(W(2, 1, 1), 4, 2)
        assert e2.letters == (2, 2) and cn_matrix(e2).entry(2, 3) == 2

    def test_embed_out_of_range(self):
        with pytest.raises(OffsetOutOfRange):
            embed(W(3, 1), 4, 3)
        with pytest.raises(OffsetOutOfRange):
            embed(W(3, 1), 4, 0)


class TestDiagrams:
    def test_ou_examples(self):
        assert ou_matrix(DiagramWord(2, ((1, L),))) == PairCountMatrix.from_rows([[0, 1], [0, 0]])
        assert ou_matrix(DiagramWord(2, ((1, L), (1, L)))) == PairCountMatrix.from_rows([[0, 1], [1, 0]])
        assert ou_matrix(DiagramWord(2)) == PairCountMatrix.zeros(2)

    def test_crossing_examples(self):
        assert crossing_matrix(DiagramWord(2, ((1, L), (1, L)))) == PairCountMatrix.from_rows([[0, 1], [1, 0]])
        assert crossing_matrix(DiagramWord(2, ((1, L), (1, R)))) == PairCountMatrix.zeros(2)
        assert crossing_matrix(DiagramWord(3)) == PairCountMatrix.zeros(3)

    def test_forget(self):
        assert forget(DiagramWord(3)).letters == ()
        assert forget(DiagramWord(2, ((1, L),))).letters == (1,)
        assert forget(DiagramWord(3, ((2, R), (1, L)))).letters == (2, 1)

    @given(diagrams())
    def test_ou_plus_transpose_is_cn(self, d):
        U = ou_matrix(d)
        assert U + U.transpose() == cn_matrix(forget(d))

    @given(diagrams())
    def test_positive_diagrams_have_c_equal_u(self, d):
        pos = DiagramWord(d.n, tuple((k, L) for k, _ in d.letters))
        assert crossing_matrix(pos) == ou_matrix(pos)

    @given(diagrams())
    def test_text_round_trip(self, d):
        assert DiagramWord.parse(d.to_text(), d.n) == d


class TestValidation:
    def test_bad_letters(self):
        with pytest.raises(InvalidWord):
            ProjectionWord(3, (3,))
        with pytest.raises(InvalidWord):
            ProjectionWord(3, (0,))
        with pytest.raises(InvalidWord):
            ProjectionWord(17, ())
        with pytest.raises(InvalidWord):
            DiagramWord.parse("*1")
        with pytest.raises(InvalidWord):
            ProjectionWord.parse("1 x")

    def test_parse(self):
        assert ProjectionWord.parse("2 3 3 2") == W(4, 2, 3, 3, 2)
        assert ProjectionWord.parse("1", 5).n == 5
        assert DiagramWord.parse("+2 -3").letters == ((2, L), (3, R))

    def test_matrix_json(self):
        M = pairs(3, {(1, 2): 2, (2, 3): 4})
        assert PairCountMatrix.from_json(M.to_json()) == M
        assert PairCountMatrix.from_json('[[0,1],[1,0]]').entry(1, 2) == 1
        with pytest.raises(InvalidMatrix):
            PairCountMatrix.from_json({"n": 3, "matrix": [[0, 1], [1, 0]]})
        with pytest.raises(InvalidMatrix):
            PairCountMatrix.from_rows([[0, 1]])


@settings(max_examples=50)
@given(words(), words())
def test_concat_mismatch_or_length(a, b):
    if a.n == b.n:
        assert len(concat(a, b)) == len(a) + len(b)
    else:
        with pytest.raises(MismatchedStrandCount):
            concat(a, b)
