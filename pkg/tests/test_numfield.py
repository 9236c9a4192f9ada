import random
from fractions import Fraction

import pytest

from nilsect import (
    GeneratorSystem,
    HeisenbergElemK,
    NumberField,
    UnipotentMatrix,
    embed_heisenberg,
    is_two_step,
    regular_representation,
)

SQRT2 = NumberField([-2, 0, 1])  # t^2 - 2
CBRT2 = NumberField([-2, 0, 0, 1])  # t^3 - 2


def rand_elem(rng, field, span=5):
    return field.element(
        [Fraction(rng.randint(-span, span), rng.randint(1, 3)) for _ in range(field.degree)]
    )


def matmul(A, B):
    d = len(A)
    return tuple(
        tuple(sum(A[i][k] * B[k][j] for k in range(d)) for j in range(d))
        for i in range(d)
    )


def test_field_multiplication_examples():
    r2 = SQRT2.alpha()
    assert (r2 * r2) == SQRT2.from_rational(2)
    x = SQRT2.element([3, -7])
    assert SQRT2.one() * x == x
    assert r2.inverse().coords == (0, Fraction(1, 2))


def test_field_inverse(rng):
    for field in (SQRT2, CBRT2):
        for _ in range(30):
            x = rand_elem(rng, field)
            if x.is_zero():
                continue
            assert x * x.inverse() == field.one()
    with pytest.raises(ValueError):
        SQRT2.zero().inverse()


def test_field_mismatch_rejected():
    with pytest.raises(ValueError):
        SQRT2.alpha() + CBRT2.alpha()


def test_regular_representation_examples():
    assert regular_representation(SQRT2.one()) == ((1, 0), (0, 1))
    R = regular_representation(SQRT2.alpha())
    assert R == ((0, 2), (1, 0))


def test_representation_is_ring_homomorphism(rng):
    for field in (SQRT2, CBRT2):
        for _ in range(60):
            a = rand_elem(rng, field)
            b = rand_elem(rng, field)
            assert matmul(
                regular_representation(a), regular_representation(b)
            ) == regular_representation(a * b)
            add = regular_representation(a + b)
            expect = tuple(
                tuple(
                    x + y
                    for x, y in zip(regular_representation(a)[i], regular_representation(b)[i])
                )
                for i in range(field.degree)
            )
            assert add == expect


def test_irreducibility_guard():
    with pytest.raises(ValueError):
        NumberField([-1, 0, 1])  # (t-1)(t+1)
    with pytest.raises(ValueError):
        NumberField([0, 0, 1])  # t^2
    with pytest.raises(ValueError):
        NumberField([6, -5, 1])  # (t-2)(t-3)
    with pytest.raises(ValueError):
        NumberField([2, 0, 0])  # not monic
    # degree 1 always fine: the field is Q itself
    q = NumberField([5, 1])
    assert q.alpha() == q.from_rational(-5)


def rand_heis(rng, field, n=3):
    return HeisenbergElemK(
        n,
        [rand_elem(rng, field, 3) for _ in range(n - 2)],
        [rand_elem(rng, field, 3) for _ in range(n - 2)],
        rand_elem(rng, field, 3),
    )


def test_embed_identity():
    assert embed_heisenberg(
        HeisenbergElemK.identity(3, SQRT2)
    ) == UnipotentMatrix.identity(6)


def test_embed_block_structure():
    h = HeisenbergElemK(3, [SQRT2.alpha()], [SQRT2.zero()], SQRT2.zero())
    m = embed_heisenberg(h)
    assert m.n == 6
    # (1,2) block in Heisenberg coordinates holds the multiplication
    # matrix of sqrt(2)
    assert m[0, 2] == 0 and m[0, 3] == 2
    assert m[1, 2] == 1 and m[1, 3] == 0


def test_embed_multiplicative(rng):
    for field, n in ((SQRT2, 3), (SQRT2, 4), (CBRT2, 3)):
        for _ in range(25):
            h1, h2 = rand_heis(rng, field, n), rand_heis(rng, field, n)
            assert embed_heisenberg(h1 * h2) == embed_heisenberg(h1) * embed_heisenberg(h2)
            assert embed_heisenberg(h1.inverse()) == embed_heisenberg(h1).inverse()


def test_embedded_sets_are_two_step(rng):
    for field, n in ((SQRT2, 3), (CBRT2, 3), (SQRT2, 4)):
        gens = GeneratorSystem(
            [embed_heisenberg(rand_heis(rng, field, n)) for _ in range(4)]
        )
        assert is_two_step(gens)


def bits_of(mat_like) -> int:
    total = 0
    for row in mat_like:
        for x in row:
            f = Fraction(x)
            total += f.numerator.bit_length() + f.denominator.bit_length()
    return total


def test_embedding_bitsize_monitor(rng):
    # monitored bound, deliberately loose: output size stays within a
    # generous quadratic envelope of the input size
    for _ in range(20):
        h = rand_heis(rng, SQRT2, 3)
        source = [e.coords for e in list(h.a) + list(h.b) + [h.c]]
        in_bits = max(16, bits_of(source))
        out_bits = bits_of(embed_heisenberg(h).rows)
        assert out_bits <= 64 * in_bits * in_bits
