"""Decision procedures for proportional subalgebras, homomorphisms,
congruences, functors, and functional proportionality.

Theorem-shaped checks (``kernel_is_p_congruence``, ``aip_from_pfunctor``,
the monoid checks, ``pfunctor_transfer``, ``pfunctors_functionally_proportional``)
raise :class:`PreconditionError` when a hypothesis fails and
:class:`InconsistencyError` when the conclusion fails under the hypotheses.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from ._sweep import first_violation, first_violations
from .algebra import (
    Mapping,
    _bijective_verdict,
    compose,
    is_congruence,
    is_homomorphism,
    is_subalgebra,
    kernel,
)
from .errors import CarrierError, InconsistencyError, PreconditionError, SignatureError
from .proportions import ProportionRelation, check_family_transitivity, check_inner_symmetry, \
    check_p_transitivity, _same
from .verdict import Verdict, combine, fail, ok


@dataclass(frozen=True)
class PAlgebra:
    """An algebra bundled with a proportion relation on itself."""

    algebra: object
    relation: ProportionRelation

    def __post_init__(self):
        R = self.relation
        if not (_same(R.source, self.algebra) and _same(R.target, self.algebra)):
            raise CarrierError(f"relation {R.name} does not live on {self.algebra.name}")

    @property
    def name(self):
        return self.algebra.name


def _check_map(F, A, B):
    if not _same(F.source, A) or not _same(F.target, B):
        raise CarrierError(f"{F.name} is not a map {A.name} -> {B.name}")


def _decode(A, codes):
    return tuple(A.decode(c) for c in codes)


def is_p_subalgebra(sub, sup):
    """Whether ``sub`` is a subalgebra of ``sup`` whose relation agrees with
    ``sup``'s on all quadruples of ``sub``.

    ``sub.relation`` is whatever the caller supplies: pass
    ``sup.relation.restrict(sub_algebra)`` to compare against the restriction.
    """
    S, A = sub.algebra, sup.algebra
    if not (S.is_tabular and A.is_tabular):
        raise CarrierError("p-subalgebra checks need tabular algebras")
    if not set(map(str, S.universe)) <= set(map(str, A.universe)):
        raise CarrierError(f"{S.name} is not a subset of {A.name}")
    if not S.signature.same_as(A.signature):
        raise SignatureError("sub- and super-algebra signatures differ")
    closed = is_subalgebra(S.universe, A)
    if not closed:
        raise PreconditionError(f"{S.name} is not closed under the operations of {A.name}",
                                failed="closure", verdict=closed)
    emb = np.array([A.encode(x) for x in S.universe], dtype=np.int64)
    incl = Mapping.from_graph(S, A, emb)
    hom = is_homomorphism(incl)
    if not hom:
        return Verdict(False, hom.witness, detail="operation tables differ", swept=hom.swept)
    xs = S.codes()
    idx, swept = first_violation(
        [xs] * 4,
        lambda a, b, c, d: sub.relation.holds_codes(a, b, c, d)
        != sup.relation.holds_codes(emb[a], emb[b], emb[c], emb[d]))
    if idx is None:
        return ok(swept=hom.swept + swept)
    q = tuple(int(i) for i in idx)
    side = "only in sub" if sub.relation.holds_codes(*q) else "only in sup"
    return fail("abcd", _decode(S, q), detail=side, swept=hom.swept + swept)


def _quad_sweep(F, PA, PB, directions):
    """Sweep quadruples of F's source comparing PA's relation with PB's on images.

    ``directions`` selects "=>" (source proportion lost in the target) and/or
    "<=" (target proportion not reflected); "=>" violations are reported first.
    """
    RA, RB = PA.relation, PB.relation
    xs = F.source.codes()

    def masks(a, b, c, d):
        src = RA.holds_codes(a, b, c, d)
        tgt = RB.holds_codes(F(a), F(b), F(c), F(d))
        out = []
        if "=>" in directions:
            out.append(src & ~tgt)
        if "<=" in directions:
            out.append(~src & tgt)
        return out

    k, idx, swept = first_violations([xs] * 4, masks)
    q = combine(RA.qualifier, RB.qualifier)
    if k is None:
        return ok(q, swept=swept)
    return fail("abcd", _decode(F.source, xs[list(idx)]), q,
                detail=f"direction {directions[k]}", swept=swept)


def is_p_homomorphism(F, PA, PB):
    """A homomorphism with PA(a,b,c,d) <=> PB(F a, F b, F c, F d) for all quadruples.

    The witness is the first quadruple losing a proportion ("=>"); only when
    there is none, the first quadruple gaining one ("<=").
    """
    _check_map(F, PA.algebra, PB.algebra)
    hom = is_homomorphism(F)
    if not hom:
        return Verdict(False, hom.witness, hom.qualifier, "not a homomorphism", hom.swept)
    v = _quad_sweep(F, PA, PB, ("=>", "<="))
    return Verdict(v.holds, v.witness, combine(v.qualifier, hom.qualifier), v.detail,
                   v.swept + hom.swept)


def satisfies_aip(F, PA, PB):
    """PA(a,b,c,d) implies PB(F a, F b, F c, F d); F need not be a homomorphism."""
    _check_map(F, PA.algebra, PB.algebra)
    return _quad_sweep(F, PA, PB, ("=>",))


def is_p_isomorphism(F, PA, PB):
    v = is_p_homomorphism(F, PA, PB)
    if not v:
        return v
    return _bijective_verdict(F, v.qualifier, v.swept)


def is_p_congruence(theta, PA):
    """A congruence whose blockwise replacements keep every proportion."""
    A = PA.algebra
    cong = is_congruence(theta, A)
    if not cong:
        return Verdict(False, cong.witness, detail="not a congruence", swept=cong.swept)
    bo = np.ascontiguousarray(theta.block_of)
    T = np.ascontiguousarray(PA.relation.tensor())
    v = kernels.first_saturation_violation(T, bo, bo)
    if v[0] < 0:
        return ok(PA.relation.qualifier, swept=cong.swept + A.size ** 8)
    return fail(("a", "b", "c", "d", "a'", "b'", "c'", "d'"), _decode(A, v),
                PA.relation.qualifier, swept=cong.swept + A.size ** 8)


def kernel_is_p_congruence(F, PA, PB):
    pre = is_p_homomorphism(F, PA, PB)
    if not pre:
        raise PreconditionError(f"{F.name} is not a p-homomorphism", "p-homomorphism", pre)
    v = is_p_congruence(kernel(F), PA)
    if not v:
        raise InconsistencyError(f"kernel of p-homomorphism {F.name} is not a p-congruence", v)
    return v


def is_p_functor(F, R):
    """R(a, b, F a, F b) for all a, b of F's source."""
    if not (_same(R.source, F.source) and _same(R.target, F.target)):
        raise CarrierError(f"relation {R.name} does not live on ({F.source.name}, {F.target.name})")
    xs = F.source.codes()
    idx, swept = first_violation([xs, xs], lambda a, b: ~R.holds_codes(a, b, F(a), F(b)))
    if idx is None:
        return ok(R.qualifier, swept=swept)
    return fail("ab", _decode(F.source, xs[list(idx)]), R.qualifier, swept=swept)


def _require(verdict, what, msg=None):
    if not verdict:
        raise PreconditionError(msg or f"precondition failed: {what}", what, verdict)


def _endomap(F, PA):
    _check_map(F, PA.algebra, PA.algebra)


def aip_from_pfunctor(F, PA):
    """For a p-functor on a symmetric, p-transitive p-algebra, check the AIP."""
    _endomap(F, PA)
    _require(check_inner_symmetry(PA.relation), "symmetry")
    _require(check_p_transitivity(PA.relation), "p-transitivity")
    _require(is_p_functor(F, PA.relation), "p-functor")
    v = satisfies_aip(F, PA, PA)
    if not v:
        raise InconsistencyError(f"p-functor {F.name} violates the AIP", v)
    return v


def is_p_idempotent(F, PA):
    """R(F a, F b, F F a, F F b) for all a, b."""
    _endomap(F, PA)
    R = PA.relation
    xs = F.source.codes()
    idx, swept = first_violation(
        [xs, xs], lambda a, b: ~R.holds_codes(F(a), F(b), F(F(a)), F(F(b))))
    if idx is None:
        return ok(R.qualifier, swept=swept)
    return fail("ab", _decode(F.source, xs[list(idx)]), R.qualifier, swept=swept)


def _power(F, k):
    def run(c):
        for _ in range(k):
            c = F(c)
        return c
    return run


def power_proportionality(F, PA, m, n):
    """R(F^m a, F^m b, F^n a, F^n b) for all a, b.

    Requires a symmetric, p-transitive relation and a p-idempotent F.
    """
    _endomap(F, PA)
    if m < 0 or n < 0:
        raise ValueError("powers must be non-negative")
    R = PA.relation
    _require(check_inner_symmetry(R), "symmetry")
    _require(check_p_transitivity(R), "p-transitivity")
    _require(is_p_idempotent(F, PA), "p-idempotency")
    Fm, Fn = _power(F, m), _power(F, n)
    xs = F.source.codes()
    idx, swept = first_violation(
        [xs, xs], lambda a, b: ~R.holds_codes(Fm(a), Fm(b), Fn(a), Fn(b)))
    if idx is None:
        return ok(R.qualifier, swept=swept)
    return fail("ab", _decode(F.source, xs[list(idx)]), R.qualifier, swept=swept)


def _compositions(Fs, A):
    yield Mapping.identity(A)
    for F in Fs:
        for G in Fs:
            yield compose(F, G)


def check_phom_monoid_closure(Fs, PA):
    """Identity and all pairwise composites of p-homomorphisms are p-homomorphisms."""
    for F in Fs:
        _endomap(F, PA)
        _require(is_p_homomorphism(F, PA, PA), "p-homomorphism",
                 f"{F.name} is not a p-homomorphism")
    swept = 0
    for H in _compositions(Fs, PA.algebra):
        v = is_p_homomorphism(H, PA, PA)
        swept += v.swept
        if not v:
            raise InconsistencyError(f"composite {H.name} is not a p-homomorphism", v)
    return ok(PA.relation.qualifier, swept=swept)


def check_pfunctor_monoid_closure(Fs, PA):
    """Identity and all pairwise composites of p-functors are p-functors.

    On a p-transitive relation a failure is an inconsistency. Without
    p-transitivity the check still runs and a failing composite is returned
    as a counterexample with witness (first, then, a, b).
    """
    R = PA.relation
    for F in Fs:
        _endomap(F, PA)
        _require(is_p_functor(F, R), "p-functor", f"{F.name} is not a p-functor")
    transitive = check_p_transitivity(R)
    swept = 0
    ident = Mapping.identity(PA.algebra)
    v = is_p_functor(ident, R)
    if not v:
        if transitive:
            raise InconsistencyError("identity is not a p-functor", v)
        return fail(("first", "then", "a", "b"), ("identity", "identity") + v.values,
                    v.qualifier, "identity fails without reflexivity", v.swept)
    for F in Fs:
        for G in Fs:
            H = compose(F, G)
            v = is_p_functor(H, R)
            swept += v.swept
            if not v:
                if transitive:
                    raise InconsistencyError(f"composite {H.name} is not a p-functor", v)
                return fail(("first", "then", "a", "b"), (F.name, G.name) + v.values,
                            v.qualifier, "closure failure without p-transitivity", swept)
    return ok(R.qualifier, detail="" if transitive else "relation is not p-transitive",
              swept=swept)


@dataclass(frozen=True)
class FPReport:
    forward: Verdict   # F -> G
    backward: Verdict  # G -> F
    both: Verdict      # F :: G


def _directed(F, G, D):
    xs = F.source.codes()
    idx, swept = first_violation(
        [xs, xs], lambda a, b: ~D.holds_codes(F(a), F(b), G(a), G(b)))
    if idx is None:
        return ok(D.qualifier, swept=swept)
    return fail("ab", _decode(F.source, xs[list(idx)]), D.qualifier, swept=swept)


def functional_compare(F, G, R, D=None):
    """Compare F, G : A -> B via R on (B, B).

    ``D`` is an optional directed relation; without one both directions use
    ``R`` and therefore agree for symmetric relations.
    """
    if not (_same(F.source, G.source) and _same(F.target, G.target)):
        raise CarrierError("functional comparison needs maps with a common source and target")
    if not (_same(R.source, F.target) and _same(R.target, F.target)):
        raise CarrierError(f"relation {R.name} does not live on {F.target.name}")
    D = R if D is None else D
    fwd = _directed(F, G, D)
    bwd = _directed(G, F, D)
    if fwd and bwd:
        both = ok(combine(fwd.qualifier, bwd.qualifier), swept=fwd.swept + bwd.swept)
    else:
        first = fwd if not fwd else bwd
        both = Verdict(False, first.witness, first.qualifier,
                       "F -> G fails" if not fwd else "G -> F fails", fwd.swept + bwd.swept)
    return FPReport(fwd, bwd, both)


def pfunctor_transfer(F, G, R_AB, R_BB):
    """If F is a p-functor, F -> G under R_BB and the family is p-transitive,
    G is a p-functor."""
    _require(check_family_transitivity(R_AB, R_BB), "p-transitivity")
    _require(is_p_functor(F, R_AB), "p-functor", f"{F.name} is not a p-functor")
    _require(_directed(F, G, R_BB), "F -> G")
    v = is_p_functor(G, R_AB)
    if not v:
        raise InconsistencyError(f"{G.name} is not a p-functor despite F -> G", v)
    return v


def pfunctors_functionally_proportional(F, G, PA):
    R = PA.relation
    _endomap(F, PA)
    _endomap(G, PA)
    _require(check_inner_symmetry(R), "symmetry")
    _require(check_p_transitivity(R), "p-transitivity")
    _require(is_p_functor(F, R), "p-functor", f"{F.name} is not a p-functor")
    _require(is_p_functor(G, R), "p-functor", f"{G.name} is not a p-functor")
    rep = functional_compare(F, G, R)
    if not rep.both:
        raise InconsistencyError(f"p-functors {F.name}, {G.name} are not functionally "
                                 "proportional", rep.both)
    return rep.both


@dataclass(frozen=True)
class CompositionFPReport:
    plain: Verdict        # F :: G
    composed: Verdict     # F∘H :: G∘H
    converse_asserted: bool
    verdict: Verdict


def composition_respects_fp(F, G, H, R):
    """F :: G implies F∘H :: G∘H; the converse is asserted only for surjective H."""
    plain = functional_compare(F, G, R).both
    composed = functional_compare(compose(H, F), compose(H, G), R).both
    sur = H.is_surjective() is True
    q = combine(plain.qualifier, composed.qualifier)
    note = "" if sur else "converse not asserted: H is not known to be surjective"
    if plain and not composed:
        v = fail(("direction",), ("=>",), q, "F::G but not F∘H::G∘H", plain.swept + composed.swept)
    elif sur and composed and not plain:
        v = fail(("direction",), ("<=",), q, "F∘H::G∘H but not F::G", plain.swept + composed.swept)
    else:
        v = ok(q, note, plain.swept + composed.swept)
    return CompositionFPReport(plain, composed, sur, v)
