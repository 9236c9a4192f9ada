import random
from fractions import Fraction

import pytest

from nilsect import GeneratorSystem, NilpotentMatrix, UnipotentMatrix


def h3(a, b, c) -> UnipotentMatrix:
    return UnipotentMatrix([[1, a, c], [0, 1, b], [0, 0, 1]])


def nil3(a, b, c) -> NilpotentMatrix:
    return NilpotentMatrix([[0, a, c], [0, 0, b], [0, 0, 0]])


def random_unipotent(rng: random.Random, n: int, bound: int = 100) -> UnipotentMatrix:
    rows = [
        [
            Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
            if j > i
            else (1 if i == j else 0)
            for j in range(n)
        ]
        for i in range(n)
    ]
    return UnipotentMatrix(rows)


def random_nilpotent(rng: random.Random, n: int, bound: int = 100) -> NilpotentMatrix:
    rows = [
        [
            Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
            if j > i
            else 0
            for j in range(n)
        ]
        for i in range(n)
    ]
    return NilpotentMatrix(rows)


def random_h3_system(rng: random.Random, k: int, bound: int = 2) -> GeneratorSystem:
    return GeneratorSystem(
        [
            h3(
                rng.randint(-bound, bound),
                rng.randint(-bound, bound),
                rng.randint(-bound, bound),
            )
            for _ in range(k)
        ]
    )


@pytest.fixture
def rng():
    return random.Random(20240817)
