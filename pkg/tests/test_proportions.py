import itertools

import numpy as np
import pytest

import oracles
from conftest import RandomInstance, algebra, load_spec, random_relation, rel
from propalg.algebra import FiniteAlgebra
from propalg.errors import CarrierError, SignatureError
from propalg.proportions import (
    ProportionRelation,
    RelationFamily,
    check_cross_symmetry,
    check_determinism,
    check_family_transitivity,
    check_inner_symmetry,
    check_p_transitivity,
    check_reflexivity,
    rel_holds,
)
from propalg.verdict import Qualifier

N = FiniteAlgebra.nat_succ(window=16)
A4 = algebra("A", [1, 2, 3, 4])


@pytest.fixture(scope="module")
def boolean():
    return load_spec("boolean.spec")


def test_difference_values():
    D = ProportionRelation.difference(N)
    assert rel_holds(D, 2, 5, 7, 10)
    assert not rel_holds(D, 1, 2, 3, 5)
    # exact beyond the window
    assert rel_holds(D, 1000, 1001, 5, 6)


def test_difference_needs_integers():
    with pytest.raises(CarrierError):
        ProportionRelation.difference(A4)


def test_boolean_xor_characterization(boolean):
    X = boolean.relation("xor")
    for q in itertools.product([0, 1], repeat=4):
        a, b, c, d = q
        labels = tuple(str(x) for x in q)
        assert rel_holds(X, *labels) == ((a == b) == (c == d))
    assert rel_holds(X, "0", "1", "1", "0") and not rel_holds(X, "0", "0", "0", "1")
    with pytest.raises(CarrierError):
        ProportionRelation.boolean_xor(A4)


def test_witness_on_integers_accepts_doubling():
    Z = FiniteAlgebra.int_plus()
    W = ProportionRelation.witness(Z, depth=3)
    assert rel_holds(W, 0, 0, 1, 2)
    assert str(W.witness_term(0, 0, 1, 2)) == "z+z"
    assert rel_holds(W, 7, 7, -3, -3)
    assert not rel_holds(W, 0, 1, 0, 2)  # a term cannot map 0 to two values
    assert W.qualifier == Qualifier.DEPTH


def test_witness_depth_monotone_on_integers():
    Z = FiniteAlgebra.int_plus(window=4)
    xs = Z.codes()
    prev = None
    for depth in (1, 2, 3):
        T = ProportionRelation.witness(Z, depth=depth).tensor(xs, xs)
        if prev is not None:
            assert not (prev & ~T).any()
        prev = T


def test_witness_matches_oracle_on_tables(rng):
    for _ in range(40):
        n, m = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        sig = [("u", 1)] if rng.random() < 0.6 else [("u", 1), ("b", 2)]
        inst = RandomInstance(rng, n, m, sig=sig)
        depth = int(rng.integers(1, 3))
        W = ProportionRelation.witness(inst.A, inst.B, depth=depth)
        want = oracles.witness_relation(inst.UA, inst.tabA, inst.UB, inst.tabB, inst.sig, depth)
        got = {q for q in itertools.product(inst.UA, inst.UA, inst.UB, inst.UB)
               if rel_holds(W, *q)}
        assert got == want


def test_witness_needs_shared_signature():
    B = algebra("B", [0, 1], [("S", 1)], {"S": {(0,): 1, (1,): 0}})
    with pytest.raises(SignatureError):
        ProportionRelation.witness(A4, B)


def test_extensional_membership_and_closure():
    R = rel(A4, A4, [(1, 2, 3, 4)])
    assert rel_holds(R, 1, 2, 3, 4) and not rel_holds(R, 3, 4, 1, 2)
    C = rel(A4, A4, [(1, 2, 3, 4)], closure=True)
    assert rel_holds(C, 3, 4, 1, 2)


def test_inner_symmetry():
    v = check_inner_symmetry(rel(A4, A4, [(1, 2, 3, 4)]))
    assert not v.holds and v.values == (3, 4, 1, 2)
    assert check_inner_symmetry(ProportionRelation.difference(N)).holds


def test_cross_symmetry():
    B = algebra("B", [5, 6])
    fam = RelationFamily([rel(A4, B, [(1, 2, 5, 6)]), rel(B, A4, [(5, 6, 1, 2)])])
    assert check_cross_symmetry(fam, "A", "B").holds
    fam = RelationFamily([rel(A4, B, [(1, 2, 5, 6)]), rel(B, A4, [])])
    v = check_cross_symmetry(fam, "A", "B")
    assert not v.holds and v.values == (1, 2, 5, 6)
    D = ProportionRelation.difference(N)
    assert check_cross_symmetry(RelationFamily([D]), "N", "N").holds
    with pytest.raises(CarrierError):
        RelationFamily([rel(A4, B, [])]).get("B", "A")
    assert check_cross_symmetry(RelationFamily([rel(A4, B, [(1, 2, 5, 6)])]).with_mirrors(),
                                "A", "B").holds


def test_reflexivity():
    A2 = algebra("A", [0, 1])
    v = check_reflexivity(rel(A2, A2, []))
    # the canonical first violation is (0, 0); (0, 1) is a violation as well
    assert not v.holds and v.values == (0, 0)
    assert not rel_holds(rel(A2, A2, []), 0, 1, 0, 1)
    assert check_reflexivity(ProportionRelation.difference(N)).holds


def test_determinism():
    B = algebra("B", [5, 6])
    v = check_determinism(rel(B, B, [(5, 5, 5, 6)]))
    assert not v.holds and v.values == (5, 6)
    assert check_determinism(ProportionRelation.difference(N)).holds


def test_p_transitivity_witness():
    R = rel(A4, A4, [(1, 2, 3, 4), (3, 4, 1, 3)], closure=True)
    v = check_p_transitivity(R)
    assert not v.holds
    # canonical first chain violation; the textbook chain (1,2,3,4,1,3) also breaks it
    assert v.values == (1, 2, 3, 4, 1, 2)
    t = (1, 2, 3, 4, 1, 3)
    assert rel_holds(R, *t[:4]) and rel_holds(R, *t[2:]) and not rel_holds(R, 1, 2, 1, 3)


@pytest.mark.parametrize("check", [check_inner_symmetry, check_reflexivity, check_determinism,
                                   check_p_transitivity])
def test_closed_form_relations_satisfy_axioms(check, boolean):
    assert check(ProportionRelation.difference(N), 6).holds
    assert check(ProportionRelation.difference(FiniteAlgebra.int_plus(window=5))).holds
    assert check(boolean.relation("xor")).holds


def test_witness_relation_identity_and_symmetry(rng):
    for _ in range(20):
        inst = RandomInstance(rng, int(rng.integers(1, 5)), sig=[("u", 1)])
        W = ProportionRelation.witness(inst.A, depth=2)
        # the identity term accepts every a:a :: c:c
        for a, c in itertools.product(inst.UA, repeat=2):
            assert rel_holds(W, a, a, c, c)
        assert check_inner_symmetry(W).holds


def test_witness_relation_need_not_be_reflexive():
    # u is constant, so no injective term maps 0 to 1: 0:1 :: 0:1 has no witness
    A = algebra("A", [0, 1], [("u", 1)], {"u": {(0,): 0, (1,): 0}})
    v = check_reflexivity(ProportionRelation.witness(A, depth=3))
    assert not v.holds and v.values == (0, 1)


def test_axiom_checkers_match_oracle(rng):
    for _ in range(120):
        n = int(rng.integers(1, 4))
        U = list(range(n))
        A = algebra("A", U)
        Rs = random_relation(rng, U, float(rng.uniform(0.1, 0.9)), symmetric=rng.random() < 0.5)
        R = rel(A, A, Rs)
        for check, ref in [(check_inner_symmetry, oracles.symmetry),
                           (check_reflexivity, oracles.reflexivity),
                           (check_determinism, oracles.determinism),
                           (check_p_transitivity, oracles.transitivity)]:
            v = check(R)
            holds, wit = ref(U, Rs)
            assert v.holds == holds, check.__name__
            if not holds:
                assert v.values == wit, check.__name__


def test_family_transitivity():
    B = algebra("B", [5, 6])
    RAB = rel(A4, B, [(1, 2, 5, 6)])
    RBB = rel(B, B, [(5, 6, 6, 5)])
    v = check_family_transitivity(RAB, RBB)
    assert not v.holds and v.values == (1, 2, 5, 6, 6, 5)
    assert check_family_transitivity(RAB, rel(B, B, [(5, 6, 5, 6)])).holds


def test_mirror_and_restrict():
    R = rel(A4, A4, [(1, 2, 3, 4)])
    M = R.mirrored()
    assert rel_holds(M, 3, 4, 1, 2) and not rel_holds(M, 1, 2, 3, 4)
    S = algebra("S", [1, 2])
    Rr = rel(A4, A4, [(1, 2, 1, 2), (1, 2, 3, 4)]).restrict(S)
    assert rel_holds(Rr, 1, 2, 1, 2) and Rr.quads == {(1, 2, 1, 2)}


def test_tensor_matches_holds(rng):
    W = ProportionRelation.witness(FiniteAlgebra.int_plus(window=3), depth=2)
    xs = W.source.codes()
    T = W.tensor(xs, xs)
    for q in itertools.product(range(len(xs)), repeat=4):
        assert T[q] == rel_holds(W, *(int(xs[i]) for i in q))
    assert np.asarray(T).dtype == bool
