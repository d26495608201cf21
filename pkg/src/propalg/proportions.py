"""The 4-ary proportion relation a:b::c:d over an ordered pair of algebras.

Slots a, b range over the source algebra and c, d over the target. A
relation is one of:

* ``extensional``: an explicit set of quadruples,
* ``difference``: a - b = c - d on an integer algebra,
* ``boolean-xor``: (a = b and c = d) or (a != b and c != d) on two-element sets,
* ``witness``: some injective unary term t of bounded depth has t(a) = b
  and t(c) = d.  Sound, not complete: "false" means no witness up to the depth.
"""
from __future__ import annotations

import numpy as np

from . import kernels
from ._sweep import first_violation
from .errors import CarrierError, SignatureError
from .terms import _eval_scalar, enumerate_unary_terms, term_function_injective, term_functions
from .verdict import Qualifier, combine, fail, ok

DEFAULT_DEPTH = 3
# 6-tuple sweeps over integer windows use at most this window
AXIOM_WINDOW = 8

KINDS = ("extensional", "difference", "boolean-xor", "witness")


def _same(A, B):
    return A is B or A.same_structure(B)


class ProportionRelation:
    def __init__(self, kind, source, target, *, quads=frozenset(), symmetric_closure=False,
                 depth=None, name=None, dense=None):
        if kind not in KINDS:
            raise ValueError(f"unknown relation kind {kind!r}")
        self.kind = kind
        self.source = source
        self.target = target
        self.quads = frozenset(quads)
        self.symmetric_closure = symmetric_closure
        self.depth = depth
        self.name = name or kind
        self.dense = dense
        self._forms = None
        self.terms_enumerated = 0  # distinct term functions behind a witness relation
        if dense is not None:
            dense.setflags(write=False)

    # -- constructors -----------------------------------------------------

    @classmethod
    def extensional(cls, source, target, quads, symmetric_closure=False, name=None):
        if not (source.is_tabular and target.is_tabular):
            raise CarrierError("extensional relations need tabular algebras")
        quads = frozenset(tuple(q) for q in quads)
        n, m = source.size, target.size
        T = np.zeros((n, n, m, m), dtype=bool)
        for q in quads:
            if len(q) != 4:
                raise CarrierError(f"{q} is not a quadruple")
            a, b, c, d = q
            T[source.encode(a), source.encode(b), target.encode(c), target.encode(d)] = True
        if symmetric_closure and _same(source, target):
            T |= T.transpose(2, 3, 0, 1)
        return cls("extensional", source, target, quads=quads,
                   symmetric_closure=symmetric_closure, name=name, dense=T)

    @classmethod
    def from_tensor(cls, source, target, T, name=None):
        T = np.array(T, dtype=bool)
        if T.shape != (source.size, source.size, target.size, target.size):
            raise CarrierError("tensor shape does not match the algebras")
        quads = frozenset(
            (source.decode(a), source.decode(b), target.decode(c), target.decode(d))
            for a, b, c, d in zip(*np.nonzero(T)))
        return cls("extensional", source, target, quads=quads, name=name, dense=T)

    @classmethod
    def difference(cls, algebra, target=None, name=None):
        target = algebra if target is None else target
        if algebra.is_tabular or not _same(algebra, target):
            raise CarrierError("difference relations need one integer algebra on both sides")
        return cls("difference", algebra, target, name=name)

    @classmethod
    def boolean_xor(cls, source, target=None, name=None):
        target = source if target is None else target
        if not (source.is_tabular and target.is_tabular and source.size == 2 == target.size):
            raise CarrierError("boolean-xor needs two-element universes on both sides")
        a, b, c, d = np.ix_(*[np.arange(2)] * 4)
        T = np.broadcast_to((a == b) == (c == d), (2, 2, 2, 2)).copy()
        return cls("boolean-xor", source, target, name=name, dense=T)

    @classmethod
    def witness(cls, source, target=None, depth=DEFAULT_DEPTH, name=None):
        target = source if target is None else target
        if depth < 1:
            raise ValueError("witness depth must be positive")
        if not source.signature.same_as(target.signature):
            raise SignatureError("witness relations need a shared signature")
        if source.is_tabular != target.is_tabular:
            raise CarrierError("witness relations need algebras of one backing")
        rel = cls("witness", source, target, depth=depth, name=name)
        funcs = term_functions((source, target), depth)
        rel.terms_enumerated = len(funcs)
        if source.is_tabular:
            inj = [f for f in funcs
                   if len(np.unique(f[0])) == source.size and len(np.unique(f[1])) == target.size]
            ta = np.array([f[0] for f in inj], dtype=np.int64)
            tb = np.array([f[1] for f in inj], dtype=np.int64)
            rel.dense = kernels.witness_tensor(ta, tb)
            rel.dense.setflags(write=False)
        else:
            if not _same(source, target):
                raise CarrierError("integer witness relations need one algebra on both sides")
            forms = sorted({f[0] for f in funcs if f[0][0] != 0})
            rel._forms = forms
        return rel

    # -- evaluation ---------------------------------------------------------

    @property
    def homogeneous(self):
        return _same(self.source, self.target)

    @property
    def qualifier(self):
        q = combine(self.source.qualifier, self.target.qualifier)
        return combine(q, Qualifier.DEPTH) if self.kind == "witness" else q

    def holds_codes(self, a, b, c, d):
        """Vectorized membership over broadcastable code arrays."""
        if self.dense is not None:
            return self.dense[a, b, c, d]
        if self.kind == "difference":
            return (np.asarray(a) - b) == (np.asarray(c) - d)
        return self._witness_int(a, b, c, d)

    def _witness_int(self, a, b, c, d):
        a, b, c, d = np.broadcast_arrays(*(np.asarray(x, dtype=np.int64) for x in (a, b, c, d)))
        forms = self._forms
        ks = np.array([f[0] for f in forms], dtype=np.int64)
        cs = np.array([f[1] for f in forms], dtype=np.int64)
        kmin, cmin = int(ks.min()), int(cs.min())
        lut = np.zeros((int(ks.max()) - kmin + 1, int(cs.max()) - cmin + 1), dtype=bool)
        lut[ks - kmin, cs - cmin] = True
        da, db = c - a, d - b
        nz = da != 0
        step = np.where(nz, da, 1)
        k = db // step
        c0 = b - k * a
        ki, ci = k - kmin, c0 - cmin
        inside = (nz & (db == k * step) & (ki >= 0) & (ki < lut.shape[0])
                  & (ci >= 0) & (ci < lut.shape[1]))
        out = np.zeros(a.shape, dtype=bool)
        out[inside] = lut[ki[inside], ci[inside]]
        same = ~nz & (b == d)
        if same.any():
            hit = np.zeros(a.shape, dtype=bool)
            for kk, cc in forms:
                hit |= b == kk * a + cc
            out |= same & hit
        return out

    def __call__(self, a, b, c, d):
        return rel_holds(self, a, b, c, d)

    def tensor(self, xs=None, ys=None):
        """Dense R over xs x xs x ys x ys (defaults: universes / windows)."""
        xs = self.source.codes() if xs is None else xs
        ys = self.target.codes() if ys is None else ys
        return np.broadcast_to(self.holds_codes(*np.ix_(xs, xs, ys, ys)),
                               (len(xs), len(xs), len(ys), len(ys))).copy()

    def witness_term(self, a, b, c, d):
        """First term in enumeration order justifying a:b::c:d, or ``None``."""
        if self.kind != "witness":
            raise ValueError("only witness relations carry terms")
        A, B = self.source, self.target
        ca, cb, cc, cd = A.encode(a), A.encode(b), B.encode(c), B.encode(d)
        for t in enumerate_unary_terms(A.signature, self.depth):
            if (_eval_scalar(A, t, ca) == cb and _eval_scalar(B, t, cc) == cd
                    and term_function_injective(A, t) and term_function_injective(B, t)):
                return t
        return None

    def mirrored(self, name=None):
        """The relation on (target, source) with R'(c,d,a,b) = R(a,b,c,d)."""
        name = name or f"{self.name}~"
        if self.kind == "extensional":
            quads = frozenset((c, d, a, b) for a, b, c, d in self.quads)
            return ProportionRelation("extensional", self.target, self.source, quads=quads,
                                      symmetric_closure=self.symmetric_closure, name=name,
                                      dense=self.dense.transpose(2, 3, 0, 1).copy())
        if self.kind == "difference":
            return ProportionRelation.difference(self.target, self.source, name=name)
        if self.kind == "boolean-xor":
            return ProportionRelation.boolean_xor(self.target, self.source, name=name)
        return ProportionRelation.witness(self.target, self.source, self.depth, name=name)

    def restrict(self, sub_source, sub_target=None, name=None):
        """Extensional restriction to subalgebras given by label subsets."""
        sub_target = sub_source if sub_target is None else sub_target
        xs = np.array([self.source.encode(x) for x in sub_source.universe])
        ys = np.array([self.target.encode(y) for y in sub_target.universe])
        return ProportionRelation.from_tensor(sub_source, sub_target, self.tensor(xs, ys),
                                              name=name or f"{self.name}|")

    def __repr__(self):
        return f"ProportionRelation({self.name}: {self.kind} on {self.source.name}, {self.target.name})"


def rel_holds(R, a, b, c, d):
    """Whether a:b::c:d holds in ``R`` (labels)."""
    A, B = R.source, R.target
    codes = (A.encode(a), A.encode(b), B.encode(c), B.encode(d))
    return bool(R.holds_codes(*(np.int64(x) for x in codes)))


class RelationFamily:
    """Relations indexed by ordered pairs of algebra names."""

    def __init__(self, relations=()):
        self.assignment = {}
        for R in relations:
            self.add(R)

    def add(self, R, key=None):
        key = key or (R.source.name, R.target.name)
        if key != (R.source.name, R.target.name):
            raise CarrierError(f"relation {R.name} does not live on {key}")
        self.assignment[key] = R
        return self

    def get(self, A, B):
        try:
            return self.assignment[(A, B)]
        except KeyError:
            raise CarrierError(f"family has no relation on ({A}, {B})") from None

    def with_mirrors(self):
        fam = RelationFamily(self.assignment.values())
        for (A, B), R in self.assignment.items():
            if (B, A) not in fam.assignment:
                fam.add(R.mirrored())
        return fam


# -- axiom checkers ---------------------------------------------------------

def _homogeneous(R, what):
    if not R.homogeneous:
        raise CarrierError(f"{what} needs a relation with source = target; "
                           "use check_cross_symmetry for pairs")


def _labels(A, codes):
    return tuple(A.decode(c) for c in codes)


def check_inner_symmetry(R, window=None):
    """R(a,b,c,d) <=> R(c,d,a,b); the witness is the first quadruple that is
    missing although its mirror is present."""
    _homogeneous(R, "inner symmetry")
    xs = R.source.codes(window)
    idx, swept = first_violation(
        [xs] * 4, lambda a, b, c, d: ~R.holds_codes(a, b, c, d) & R.holds_codes(c, d, a, b))
    if idx is None:
        return ok(R.qualifier, swept=swept)
    return fail("abcd", _labels(R.source, xs[list(idx)]), R.qualifier, swept=swept)


def check_cross_symmetry(fam, A, B, window=None):
    """fam(A,B)(a,b,c,d) <=> fam(B,A)(c,d,a,b) over a,b in A and c,d in B."""
    R, S = fam.get(A, B), fam.get(B, A)
    xs, ys = R.source.codes(window), R.target.codes(window)
    idx, swept = first_violation(
        [xs, xs, ys, ys], lambda a, b, c, d: R.holds_codes(a, b, c, d) != S.holds_codes(c, d, a, b))
    q = combine(R.qualifier, S.qualifier)
    if idx is None:
        return ok(q, swept=swept)
    vals = _labels(R.source, xs[list(idx[:2])]) + _labels(R.target, ys[list(idx[2:])])
    return fail("abcd", vals, q, swept=swept)


def check_reflexivity(R, window=None):
    _homogeneous(R, "reflexivity")
    xs = R.source.codes(window)
    idx, swept = first_violation([xs, xs], lambda a, b: ~R.holds_codes(a, b, a, b))
    if idx is None:
        return ok(R.qualifier, swept=swept)
    return fail("ab", _labels(R.source, xs[list(idx)]), R.qualifier, swept=swept)


def check_determinism(R, window=None):
    """R(a,a,a,d) implies d = a."""
    _homogeneous(R, "determinism")
    xs = R.source.codes(window)
    idx, swept = first_violation([xs, xs], lambda a, d: R.holds_codes(a, a, a, d) & (a != d))
    if idx is None:
        return ok(R.qualifier, swept=swept)
    return fail("ad", _labels(R.source, xs[list(idx)]), R.qualifier, swept=swept)


def _axiom_window(A, window):
    if A.is_tabular:
        return None
    return min(A.window, AXIOM_WINDOW) if window is None else window


def check_p_transitivity(R, window=None):
    """R(a,b,c,d) and R(c,d,e,f) imply R(a,b,e,f), over all 6-tuples.

    Integer algebras are swept over ``window`` (default: the algebra window
    capped at ``AXIOM_WINDOW``).
    """
    _homogeneous(R, "p-transitivity")
    xs = R.source.codes(_axiom_window(R.source, window))
    T = R.tensor(xs, xs)
    v = kernels.first_chain_violation(T, T)
    swept = len(xs) ** 6
    if v[0] < 0:
        return ok(R.qualifier, swept=swept)
    return fail("abcdef", _labels(R.source, xs[list(v)]), R.qualifier, swept=swept)


def check_family_transitivity(R_AB, R_BB, window=None):
    """R_AB(a,b,c,d) and R_BB(c,d,e,f) imply R_AB(a,b,e,f)."""
    if not _same(R_AB.target, R_BB.source) or not R_BB.homogeneous:
        raise CarrierError("family transitivity needs relations on (A,B) and (B,B)")
    xs = R_AB.source.codes(_axiom_window(R_AB.source, window))
    ys = R_AB.target.codes(_axiom_window(R_AB.target, window))
    T1 = R_AB.tensor(xs, ys)
    T2 = R_BB.tensor(ys, ys)
    v = kernels.first_chain_violation(T1, T2)
    q = combine(R_AB.qualifier, R_BB.qualifier)
    swept = len(xs) ** 2 * len(ys) ** 4
    if v[0] < 0:
        return ok(q, swept=swept)
    vals = _labels(R_AB.source, xs[list(v[:2])]) + _labels(R_AB.target, ys[list(v[2:])])
    return fail("abcdef", vals, q, swept=swept)
