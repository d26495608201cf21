import itertools
import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from propalg.algebra import FiniteAlgebra, Mapping, Signature  # noqa: E402
from propalg.proportions import ProportionRelation  # noqa: E402
from propalg.specfile import parse_spec  # noqa: E402

SPECS = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "specs")


def spec_path(name):
    return os.path.join(SPECS, name)


def load_spec(name, **kw):
    with open(spec_path(name), encoding="utf-8") as fh:
        return parse_spec(fh.read(), **kw)


def algebra(name, universe, sig=(), tables=None):
    return FiniteAlgebra(name, universe, Signature(tuple(sig)), tables or {})


def rel(A, B, quads, closure=False, name="R"):
    return ProportionRelation.extensional(A, B, quads, symmetric_closure=closure, name=name)


def fmap(A, B, graph, name="F"):
    return Mapping.from_graph(A, B, dict(graph), name=name)


class RandomInstance:
    """Random labels-level data plus the matching package objects."""

    def __init__(self, rng, n, m=None, sig=(("u", 1),), symmetric=True, density=None):
        m = n if m is None else m
        self.sig = tuple(sig)
        self.UA = list(range(n))
        self.UB = list(range(10, 10 + m))
        self.tabA = {op: {a: int(rng.choice(self.UA))
                          for a in itertools.product(self.UA, repeat=k)} for op, k in self.sig}
        self.tabB = {op: {a: int(rng.choice(self.UB))
                          for a in itertools.product(self.UB, repeat=k)} for op, k in self.sig}
        p = float(rng.uniform(0.2, 0.9)) if density is None else density
        self.RA = random_relation(rng, self.UA, p, symmetric)
        self.RB = random_relation(rng, self.UB, p, symmetric)
        self.F = {a: int(rng.choice(self.UB)) for a in self.UA}
        self.A = algebra("A", self.UA, self.sig, self.tabA)
        self.B = algebra("B", self.UB, self.sig, self.tabB)
        self.rA = rel(self.A, self.A, self.RA, name="rA")
        self.rB = rel(self.B, self.B, self.RB, name="rB")
        self.map = fmap(self.A, self.B, self.F)


def random_relation(rng, U, p, symmetric=True):
    R = set()
    for q in itertools.product(U, repeat=4):
        if rng.random() < p:
            R.add(q)
            if symmetric:
                R.add((q[2], q[3], q[0], q[1]))
    return R


def random_per(rng, U, reflexive=False):
    """A random symmetric, p-transitive relation: a partial equivalence on pairs."""
    pairs = list(itertools.product(U, repeat=2))
    k = int(rng.integers(1, len(pairs) + 1))
    lo = 0 if reflexive else -1
    cls = {p: int(rng.integers(lo, k)) for p in pairs}
    return {p + q for p in pairs for q in pairs if cls[p] >= 0 and cls[p] == cls[q]}


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# acceptance results as (number, title, passed, seconds, note); printed after the run
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num, title, passed, secs, note in sorted(ACCEPTANCE):
        status = "PASS" if passed else "FAIL"
        extra = f"  [{note}]" if note else ""
        terminalreporter.write_line(f"{status}  {num}. {title} ({secs:.2f} s){extra}")
