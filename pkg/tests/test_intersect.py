import random

import pytest

from nilsect import (
    GeneratorSystem,
    IntersectionInstance,
    UnipotentMatrix,
    Verdict,
    Word,
    bfs_oracle,
    build_condition_space,
    decide_intersection,
    extract_witness,
    verify_witness,
)

from conftest import h3, random_h3_system


def make(instance_sets):
    return IntersectionInstance([GeneratorSystem(s) for s in instance_sets])


X, Y, Z = h3(1, 0, 0), h3(0, 1, 0), h3(0, 0, 1)


def test_condition_space_single_shared_generator():
    inst = make([[X], [X]])
    space = build_condition_space(inst, [frozenset({0}), frozenset({0})])
    assert space.contains([1, 1])
    assert space.contains([5, 5])
    assert not space.contains([1, 2])


def test_condition_space_disjoint_generators():
    inst = make([[X], [Y]])
    space = build_condition_space(inst, [frozenset({0}), frozenset({0})])
    # the a-entry forces l11 = 0, the b-entry forces l21 = 0
    assert space.contains([0, 0])
    assert not space.contains([1, 0])
    assert not space.contains([0, 1])


def test_condition_space_empty_supports_has_no_pair_coords():
    inst = make([[X, Y], [Z]])
    space = build_condition_space(inst, [frozenset(), frozenset()])
    assert all(name[0] == "l" for name in space.coords)


def test_rejects_non_two_step():
    def e(i, j):
        rows = [[1 if a == b else 0 for b in range(4)] for a in range(4)]
        rows[i][j] = 1
        return UnipotentMatrix(rows)

    with pytest.raises(ValueError):
        IntersectionInstance([[e(0, 1), e(1, 2)], [e(2, 3)]])


def test_shared_generator_nonempty():
    inst = make([[X], [X]])
    d = decide_intersection(inst)
    assert d.verdict is Verdict.NONEMPTY
    d = extract_witness(inst, d)
    assert verify_witness(inst, d.witnesses)
    assert d.common_element == X ** (len(d.witnesses[0]))


def test_disjoint_singletons_empty():
    d = decide_intersection(make([[X], [Y]]))
    assert d.verdict is Verdict.EMPTY


def test_commutator_instance_nonempty_with_witness():
    inst = make([[X, Y, X.inverse(), Y.inverse()], [Z]])
    d = decide_intersection(inst)
    assert d.verdict is Verdict.NONEMPTY
    d = extract_witness(inst, d)
    assert verify_witness(inst, d.witnesses)
    # the common element is a power of the central generator
    ce = d.common_element
    assert ce[0, 1] == 0 and ce[1, 2] == 0 and ce[0, 2] > 0


def test_mixed_products_nonempty():
    inst = make([[X * Y, Y * X], [X, Y]])
    d = extract_witness(inst, decide_intersection(inst))
    assert d.verdict is Verdict.NONEMPTY
    assert verify_witness(inst, d.witnesses)


def test_witness_extraction_requires_nonempty():
    inst = make([[X], [Y]])
    d = decide_intersection(inst)
    with pytest.raises(ValueError):
        extract_witness(inst, d)


def test_verify_witness_examples():
    inst = make([[X], [X]])
    assert verify_witness(inst, [Word.from_letters(1, [0]), Word.from_letters(1, [0])])
    inst = make([[X], [Y]])
    assert not verify_witness(
        inst, [Word.from_letters(1, [0]), Word.from_letters(1, [0])]
    )
    inst = make([[X, Y], [X, Y]])
    w = Word.from_letters(2, [0, 1])
    assert verify_witness(inst, [w, w])


def test_monotone_support_loop(rng):
    # the summed support size never grows along the trace
    for _ in range(40):
        inst = IntersectionInstance(
            [random_h3_system(rng, rng.randint(1, 3)) for _ in range(2)]
        )
        d = decide_intersection(inst)
        sizes = [
            sum(len(s) for s in step["supports"]) for step in d.trace
        ]
        assert all(a >= b for a, b in zip(sizes, sizes[1:]))
        assert d.details["iterations"] <= sum(s.K for s in inst.systems) + 1


def test_homogeneity_of_verdict(rng):
    # replacing each generator A by A^k preserves the verdict
    for _ in range(15):
        sets = [
            [
                h3(rng.randint(-2, 2), rng.randint(-2, 2), rng.randint(-2, 2))
                for _ in range(rng.randint(1, 3))
            ]
            for _ in range(2)
        ]
        k = rng.randint(2, 4)
        base = decide_intersection(make(sets))
        powered = decide_intersection(
            make([[m**k for m in s] for s in sets])
        )
        assert base.verdict == powered.verdict


def test_oracle_agreement_sample(rng):
    # small version of the acceptance criterion
    for _ in range(60):
        inst = IntersectionInstance(
            [random_h3_system(rng, rng.randint(1, 3)) for _ in range(2)]
        )
        d = decide_intersection(inst)
        found = bfs_oracle(inst, 6)
        if d.verdict is Verdict.EMPTY:
            assert found is None
        else:
            d = extract_witness(inst, d)
            assert verify_witness(inst, d.witnesses)


def test_identity_problem_specialization(rng):
    ident = UnipotentMatrix.identity(3)
    for _ in range(25):
        sys = random_h3_system(rng, rng.randint(1, 3))
        inst = IntersectionInstance([sys, GeneratorSystem([ident])])
        d = decide_intersection(inst)
        found = bfs_oracle(inst, 6)
        if found is not None:
            assert d.verdict is Verdict.NONEMPTY
        if d.verdict is Verdict.EMPTY:
            assert found is None


def test_three_way_intersection():
    assert decide_intersection(make([[X], [X], [X]])).verdict is Verdict.NONEMPTY
    assert decide_intersection(make([[X], [X], [Y]])).verdict is Verdict.EMPTY
    inst = make([[X, Y], [X * Y], [X * Y * X * Y]])
    d = extract_witness(inst, decide_intersection(inst))
    assert d.verdict is Verdict.NONEMPTY
    assert verify_witness(inst, d.witnesses)


def test_single_set_instance():
    d = decide_intersection(make([[X, Y]]))
    assert d.verdict is Verdict.NONEMPTY
