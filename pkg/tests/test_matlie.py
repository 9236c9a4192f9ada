import random
from fractions import Fraction

import pytest

from nilsect import (
    GeneratorSystem,
    NilpotentMatrix,
    UnipotentMatrix,
    bch_log,
    bracket,
    check_unipotent,
    delta_table,
    exp_nilpotent,
    is_two_step,
    log_unipotent,
    parikh,
    product_of_word,
    Word,
)

from conftest import h3, nil3, random_nilpotent, random_unipotent


def test_check_unipotent():
    assert check_unipotent([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert not check_unipotent([[1, 0], [1, 1]])
    assert check_unipotent(h3(1, 1, 1))
    assert not check_unipotent([[2, 0], [0, 1]])
    assert not check_unipotent([[1, 0, 0], [0, 1]])  # malformed, still total


def test_constructor_rejects_bad_matrices():
    with pytest.raises(ValueError):
        UnipotentMatrix([[1, 0], [1, 1]])
    with pytest.raises(ValueError):
        UnipotentMatrix([[2, 0], [0, 1]])
    with pytest.raises(ValueError):
        NilpotentMatrix([[1, 0], [0, 0]])


def test_log_examples():
    assert log_unipotent(UnipotentMatrix.identity(3)).is_zero()
    assert log_unipotent(h3(1, 0, 0)) == nil3(1, 0, 0)
    # only the corner changes: c - a*b/2
    assert log_unipotent(h3(1, 1, 1)) == nil3(1, 1, Fraction(1, 2))


def test_exp_examples():
    assert exp_nilpotent(NilpotentMatrix.zero(3)) == UnipotentMatrix.identity(3)
    assert exp_nilpotent(nil3(1, 0, 0)) == h3(1, 0, 0)
    assert exp_nilpotent(nil3(1, 1, Fraction(1, 2))) == h3(1, 1, 1)


def test_log_exp_round_trip(rng):
    for n in (2, 3, 4, 5, 6):
        for _ in range(25):
            m = random_unipotent(rng, n, bound=20)
            assert exp_nilpotent(log_unipotent(m)) == m
            x = random_nilpotent(rng, n, bound=20)
            assert log_unipotent(exp_nilpotent(x)) == x


def test_bracket_examples():
    x = log_unipotent(h3(1, 0, 0))
    y = log_unipotent(h3(0, 1, 0))
    assert bracket(x, x).is_zero()
    assert bracket(x, y) == nil3(0, 0, 1)
    assert bracket(y, x) == nil3(0, 0, -1)
    with pytest.raises(ValueError):
        bracket(x, NilpotentMatrix.zero(4))


def test_bracket_bilinear_antisymmetric(rng):
    for _ in range(30):
        x = random_nilpotent(rng, 4, bound=9)
        y = random_nilpotent(rng, 4, bound=9)
        z = random_nilpotent(rng, 4, bound=9)
        assert bracket(x, y) == -bracket(y, x)
        assert bracket(x + z, y) == bracket(x, y) + bracket(z, y)
        c = Fraction(rng.randint(-5, 5), rng.randint(1, 5))
        assert bracket(c * x, y) == c * bracket(x, y)


def test_h3_bracket_vanishes_iff_superdiagonals_dependent(rng):
    for _ in range(60):
        x = random_nilpotent(rng, 3, bound=5)
        y = random_nilpotent(rng, 3, bound=5)
        det = x[0, 1] * y[1, 2] - x[1, 2] * y[0, 1]
        assert bracket(x, y).is_zero() == (det == 0)


def test_is_two_step():
    assert is_two_step(GeneratorSystem([h3(1, 0, 0), h3(0, 1, 0), h3(2, 3, 4)]))
    assert is_two_step(GeneratorSystem([h3(1, 2, 3)]))  # cyclic
    # in UT(4): {I+E12, I+E23, I+E34} has a nonzero triple commutator
    def e(i, j):
        rows = [[1 if a == b else 0 for b in range(4)] for a in range(4)]
        rows[i][j] = 1
        return UnipotentMatrix(rows)

    bad = GeneratorSystem([e(0, 1), e(1, 2), e(2, 3)])
    assert not is_two_step(bad)
    # explicit check that the triple commutator is nontrivial
    g1, g2, g3 = bad.mats
    c12 = g1.inverse() * g2.inverse() * g1 * g2
    outer = c12.inverse() * g3.inverse() * c12 * g3
    assert outer != UnipotentMatrix.identity(4)
    assert outer[0, 3] != 0


def test_bch_log_examples():
    x, y = h3(1, 0, 0), h3(0, 1, 0)
    gens = GeneratorSystem([x, y])
    assert bch_log(gens, (1, 0), {}) == gens.log(0)
    assert bch_log(gens, (1, 1), {(0, 1): 1}) == log_unipotent(x * y)
    assert bch_log(gens, (1, 1), {(0, 1): -1}) == log_unipotent(y * x)
    assert log_unipotent(x * y) == nil3(1, 1, Fraction(1, 2))
    assert log_unipotent(y * x) == nil3(1, 1, Fraction(-1, 2))


def test_bch_log_requires_two_step():
    def e(i, j):
        rows = [[1 if a == b else 0 for b in range(4)] for a in range(4)]
        rows[i][j] = 1
        return UnipotentMatrix(rows)

    bad = GeneratorSystem([e(0, 1), e(1, 2), e(2, 3)])
    with pytest.raises(ValueError):
        bch_log(bad, (1, 1, 1), {})


def test_bch_matches_products_on_short_words(rng):
    # cross-module consistency: log(product(w)) == bch from word statistics
    for _ in range(20):
        gens = GeneratorSystem(
            [
                h3(rng.randint(-2, 2), rng.randint(-2, 2), rng.randint(-2, 2))
                for _ in range(3)
            ]
        )
        for _ in range(10):
            length = rng.randint(0, 8)
            letters = [rng.randrange(3) for _ in range(length)]
            w = Word.from_letters(3, letters)
            lhs = log_unipotent(product_of_word(gens, w))
            rhs = bch_log(gens, parikh(w), delta_table(w))
            assert lhs == rhs


def test_product_of_word():
    x, y = h3(1, 0, 0), h3(0, 1, 0)
    gens = GeneratorSystem([x, y])
    assert product_of_word(gens, Word(2)) == UnipotentMatrix.identity(3)
    assert product_of_word(gens, Word.from_letters(2, [0])) == x
    assert product_of_word(gens, Word.from_letters(2, [0, 1])) == h3(1, 1, 1)
    with pytest.raises(IndexError):
        product_of_word(gens, Word.from_letters(3, [2]))


def test_product_of_word_run_length_powers():
    x = h3(1, 2, 3)
    gens = GeneratorSystem([x])
    w = Word(1, [(0, 1000)])
    assert product_of_word(gens, w) == x**1000


def test_inverse_and_powers(rng):
    for _ in range(20):
        m = random_unipotent(rng, 5, bound=10)
        assert m * m.inverse() == UnipotentMatrix.identity(5)
        assert m**3 == m * m * m
        assert m**-2 == (m.inverse()) ** 2
        assert m**0 == UnipotentMatrix.identity(5)


def test_matrices_hashable_immutable():
    m = h3(1, 2, 3)
    assert hash(m) == hash(h3(1, 2, 3))
    with pytest.raises(AttributeError):
        m.n = 4
