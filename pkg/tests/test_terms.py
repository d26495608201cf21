import itertools

import numpy as np
import pytest

import oracles
from conftest import RandomInstance
from propalg.algebra import FiniteAlgebra, Signature
from propalg.errors import SignatureError
from propalg.terms import (
    Z,
    affine_form,
    app,
    check_term,
    enumerate_unary_terms,
    eval_codes,
    eval_term,
    term_function_injective,
    term_functions,
)

PLUS = Signature.parse("+/2,0/0,1/0")


@pytest.mark.parametrize("depth,count", [(0, 3), (1, 12), (2, 147), (3, 21612)])
def test_term_counts_for_plus_zero_one(depth, count):
    # counts cross-checked against the brute-force term oracle
    assert sum(1 for _ in enumerate_unary_terms(PLUS, depth)) == count
    assert len(oracles.syntactic_terms(PLUS.ops, depth)) == count


def test_unary_signature_has_one_term_per_depth():
    sig = Signature.parse("S/1")
    terms = list(enumerate_unary_terms(sig, 4))
    assert [str(t) for t in terms] == ["z", "S(z)", "S(S(z))", "S(S(S(z)))", "S(S(S(S(z))))"]
    assert [t.depth for t in terms] == [0, 1, 2, 3, 4]


def test_enumeration_order_prefix():
    terms = [str(t) for t in enumerate_unary_terms(PLUS, 1)]
    assert terms[:4] == ["z", "0", "1", "z+z"]
    d2 = list(enumerate_unary_terms(PLUS, 2))
    assert [str(t) for t in d2[:len(terms)]] == terms


def test_enumeration_is_duplicate_free_and_depth_sorted():
    terms = list(enumerate_unary_terms(PLUS, 2))
    assert len(set(terms)) == len(terms)
    depths = [t.depth for t in terms]
    assert depths == sorted(depths)


def test_rendering():
    t = app("+", app("+", Z, Z), app("1"))
    assert str(t) == "(z+z)+1"
    assert str(app("f", Z, app("c"))) == "f(z, c)"


def test_eval_exact_integers():
    Zi = FiniteAlgebra.int_plus(window=4)
    t = app("+", app("+", Z, Z), app("1"))
    assert eval_term(Zi, t, 5) == 11
    assert eval_term(Zi, t, -100) == -199  # outside the window: still exact
    assert list(eval_codes(Zi, t, np.array([0, 1, -1]))) == [1, 3, -1]


def test_affine_forms_and_injectivity():
    assert affine_form(app("+", app("+", Z, Z), app("1"))) == (2, 1)
    assert affine_form(app("S", app("S", Z))) == (1, 2)
    Zi = FiniteAlgebra.int_plus()
    assert term_function_injective(Zi, app("+", Z, Z))
    assert not term_function_injective(Zi, app("+", app("0"), app("1")))


def test_check_term_arity():
    with pytest.raises(SignatureError):
        check_term(PLUS, app("+", Z))
    with pytest.raises(SignatureError):
        check_term(PLUS, app("S", Z))


@pytest.mark.parametrize("depth,total,injective", [(1, 6, 3), (2, 15, 10), (3, 45, 36)])
def test_integer_term_function_counts(depth, total, injective):
    # distinct affine forms realized by the terms (oracle: symbolic evaluation of every term)
    funcs = term_functions([FiniteAlgebra.int_plus()], depth)
    assert len(funcs) == total
    assert sum(1 for (f,) in funcs if f[0] != 0) == injective


def test_tabular_term_functions_match_oracle(rng):
    for _ in range(60):
        n = int(rng.integers(1, 4))
        sig = [("u", 1), ("b", 2)] if rng.random() < 0.5 else [("u", 1), ("c", 0)]
        inst = RandomInstance(rng, n, sig=sig)
        depth = int(rng.integers(1, 3))
        got = {tuple(int(x) for x in f[0]) for f in term_functions([inst.A], depth)}
        want = {tuple(oracles.evaluate(t, inst.tabA, x) for x in inst.UA)
                for t in oracles.syntactic_terms(inst.sig, depth)}
        assert got == want


def test_injectivity_matches_oracle(rng):
    for _ in range(40):
        inst = RandomInstance(rng, int(rng.integers(1, 5)), sig=[("u", 1)])
        for t in itertools.islice(enumerate_unary_terms(inst.A.signature, 3), 4):
            vals = [int(eval_term(inst.A, t, x)) for x in inst.UA]
            assert term_function_injective(inst.A, t) == (len(set(vals)) == len(vals))
