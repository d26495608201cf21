"""Exhaustive and randomized search over small algebras, symmetric
extensional relations, and maps for separating instances.

Exhaustive mode walks the component streams (operation tables, relations)
by increasing index sum, so every instance of an infinite-looking product
is reached after finitely many steps; maps are enumerated in full, in
lexicographic order of their graphs, inside each outer combination. The
first instance with the goal property is returned, which makes the result
independent of timing.
"""
from __future__ import annotations

import hashlib
import itertools
import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .algebra import FiniteAlgebra, Mapping, Signature, compose, is_homomorphism
from .errors import PropAlgError
from .proportions import ProportionRelation, check_determinism, check_inner_symmetry, \
    check_p_transitivity, check_reflexivity
from .propstruct import PAlgebra, check_pfunctor_monoid_closure, is_p_functor, \
    is_p_homomorphism, is_p_idempotent, satisfies_aip
from .specfile import SpecFile, algebra_decl, build, map_decl, parse_spec, relation_decl

MAX_SIZE = 5
RELATION_CONSTRAINTS = ("symmetry", "reflexivity", "determinism", "p-transitivity")
MAP_CONSTRAINTS = ("homomorphism", "p-homomorphism", "p-functor", "AIP", "surjective")


# -- relation streams -------------------------------------------------------

def quad_orbits(n):
    """Orbits of quadruples of an n-element set under (a,b,c,d) <-> (c,d,a,b).

    Each orbit is the pair (p, q), p <= q, of pair indices p = a*n+b and
    q = c*n+d; flat quadruple indices are p*n*n + q and q*n*n + p.
    """
    P = n * n
    return [(p, q) for p in range(P) for q in range(p, P)]


def orbit_count(n):
    P = n * n
    return P * (P + 1) // 2


def bell(k):
    """Bell number B_k via the Bell triangle."""
    row = [1]
    for _ in range(k):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]


def _check_size(n):
    if not 1 <= n <= MAX_SIZE:
        raise ValueError(f"universe sizes must lie in 1..{MAX_SIZE}, got {n}")


class RelationStream:
    """Symmetric relations on an n-element set satisfying ``constraints``.

    Without p-transitivity the stream runs over bitmasks of the free orbits
    in increasing order (forced orbits set or cleared). With p-transitivity
    a symmetric relation is a partial equivalence on pairs, generated as
    restricted growth strings: pair p gets class -1 (outside the domain) or
    a class number, and R(a,b,c,d) iff both pairs share a class.
    """

    def __init__(self, n, constraints=(), *, nontransitive=False):
        _check_size(n)
        self.n = n
        self.constraints = frozenset(constraints) | {"symmetry"}
        self.transitive = "p-transitivity" in self.constraints
        self.reflexive = "reflexivity" in self.constraints
        self.deterministic = "determinism" in self.constraints
        if nontransitive and self.transitive:
            raise ValueError("p-transitivity cannot be both required and excluded")
        self.nontransitive = nontransitive
        P = n * n
        on, off, free = [], [], []
        for p, q in quad_orbits(n):
            a, b = divmod(p, n)
            c, d = divmod(q, n)
            if p == q and self.reflexive:
                on.append((p, q))
            elif self.deterministic and _breaks_determinism(a, b, c, d):
                off.append((p, q))
            else:
                free.append((p, q))
        self._base = np.zeros((P, P), dtype=bool)
        for p, q in on:
            self._base[p, q] = self._base[q, p] = True
        self._free = free

    @property
    def count(self):
        """Closed-form stream length, or None when a filter makes it unknown."""
        if self.nontransitive:
            return None
        if self.transitive:
            if self.deterministic:
                return None
            P = self.n * self.n
            return bell(P) if self.reflexive else bell(P + 1)
        return 2 ** len(self._free)

    def _tensor(self, M):
        return M.reshape(self.n, self.n, self.n, self.n)

    def __iter__(self):
        gen = self._pers() if self.transitive else self._masks()
        for T in gen:
            if self.nontransitive and kernels.first_chain_violation(T, T)[0] < 0:
                continue
            yield T

    def _from_mask(self, mask):
        M = self._base.copy()
        j = 0
        while mask:
            if mask & 1:
                p, q = self._free[j]
                M[p, q] = M[q, p] = True
            mask >>= 1
            j += 1
        return self._tensor(M)

    def _masks(self):
        for mask in range(2 ** len(self._free)):
            yield self._from_mask(mask)

    def _from_labels(self, g):
        g = np.asarray(g)
        M = (g[:, None] == g[None, :]) & (g[:, None] >= 0)
        return self._tensor(M)

    def _pers(self):
        n, P = self.n, self.n * self.n
        g = [0] * P
        lo = 0 if self.reflexive else -1

        def rec(p, k):
            if p == P:
                yield self._from_labels(g)
                return
            for lab in range(lo, k + 1):
                g[p] = lab
                if self._det_ok(g, p):
                    yield from rec(p + 1, max(k, lab + 1))

        yield from rec(0, 0)

    def _det_ok(self, g, p):
        if not self.deterministic or g[p] < 0:
            return True
        n = self.n
        a, b = divmod(p, n)
        if a == b:
            # (a,a) against every already-labelled (a,d), d != a
            return all(g[a * n + d] != g[p] for d in range(a))
        if b > a:
            return g[a * n + a] != g[p]
        return True

    def sample(self, rng):
        """A uniform-ish random member (rejection for the filters)."""
        for _ in range(10_000):
            if self.transitive:
                P = self.n * self.n
                k = int(rng.integers(1, P + 1))
                g = rng.integers(0 if self.reflexive else -1, k, size=P)
                if self.deterministic and not all(self._det_ok(g, p) for p in range(P)):
                    continue
                T = self._from_labels(g)
            else:
                bits = rng.integers(0, 2, size=len(self._free))
                M = self._base.copy()
                for j in np.flatnonzero(bits):
                    p, q = self._free[j]
                    M[p, q] = M[q, p] = True
                T = self._tensor(M)
            if self.nontransitive and kernels.first_chain_violation(T, T)[0] < 0:
                continue
            return T
        raise PropAlgError("could not sample a relation satisfying the constraints")


def _breaks_determinism(a, b, c, d):
    # orbits containing some (x,x,x,y) with y != x
    return (a == b == c and d != a) or (c == d == a and b != a)


class CrossRelationStream:
    """All relations on (A, B) pairs, full relation first, then by the set of
    absent quadruples in increasing bitmask order."""

    def __init__(self, n, m):
        _check_size(n)
        _check_size(m)
        self.shape = (n, n, m, m)
        self.bits = n * n * m * m

    @property
    def count(self):
        return 2 ** self.bits

    def __iter__(self):
        for mask in range(2 ** self.bits):
            T = np.ones(self.bits, dtype=bool)
            j = 0
            while mask:
                if mask & 1:
                    T[j] = False
                mask >>= 1
                j += 1
            yield T.reshape(self.shape)

    def sample(self, rng):
        return rng.integers(0, 2, size=self.shape).astype(bool)


class AlgebraStream:
    """Every algebra on labels ``labels`` over ``signature``: operation
    tables in lexicographic order (first operation varies slowest)."""

    def __init__(self, name, labels, signature):
        self.name = name
        self.labels = tuple(labels)
        self.signature = signature
        n = len(self.labels)
        self.shapes = [(op, (n,) * k) for op, k in signature.ops]

    @property
    def count(self):
        n = len(self.labels)
        return math.prod(n ** (n ** k) for _, k in self.signature.ops)

    def _make(self, flat_tables):
        tables = {op: np.array(t, dtype=np.int64).reshape(shape)
                  for (op, shape), t in zip(self.shapes, flat_tables)}
        return FiniteAlgebra(self.name, self.labels, self.signature, tables)

    def __iter__(self):
        n = len(self.labels)
        for combo in _lazy_product([lambda s=shape: itertools.product(range(n),
                                                                      repeat=math.prod(s))
                                    for _, shape in self.shapes]):
            yield self._make(combo)

    def sample(self, rng):
        n = len(self.labels)
        return self._make([rng.integers(0, n, size=math.prod(s)) for _, s in self.shapes])


def _lazy_product(factories):
    """itertools.product over iterables rebuilt on demand (no materialization)."""
    if not factories:
        yield ()
        return
    head, rest = factories[0], factories[1:]
    for x in head():
        for tail in _lazy_product(rest):
            yield (x,) + tail


class _Cached:
    """Random access into a lazily consumed stream."""

    def __init__(self, stream):
        self._it = iter(stream)
        self._items = []
        length = getattr(stream, "count", None)
        self.length = length if isinstance(length, int) else None  # None: unknown until exhausted

    def get(self, i):
        if self.length is not None and i >= self.length:
            return None
        while len(self._items) <= i:
            try:
                self._items.append(next(self._it))
            except StopIteration:
                self.length = len(self._items)
                return None
        return self._items[i]


def _tuples_with_sum(bounds, s):
    """Index tuples with the given sum, lexicographic, respecting known bounds."""
    if len(bounds) == 1:
        b = bounds[0]
        if b is None or s < b:
            yield (s,)
        return
    hi = s if bounds[0] is None else min(s, bounds[0] - 1)
    for i in range(hi + 1):
        for rest in _tuples_with_sum(bounds[1:], s - i):
            yield (i,) + rest


def dovetail(streams):
    """Yield (index tuple, items) over the product of ``streams`` by
    increasing index sum; each tuple appears exactly once."""
    caches = [_Cached(s) for s in streams]
    if not caches:
        yield (), ()
        return
    s = 0
    while True:
        bounds = [c.length for c in caches]
        if any(b == 0 for b in bounds):
            return
        if all(b is not None for b in bounds) and s > sum(b - 1 for b in bounds):
            return
        for idx in _tuples_with_sum(bounds, s):
            items = []
            for c, i in zip(caches, idx):
                x = c.get(i)
                if x is None:
                    break
                items.append(x)
            else:
                yield idx, tuple(items)
        s += 1


def enumerate_relations(n, constraints=()):
    """Deterministic duplicate-free stream of symmetric relations (as dense
    boolean tensors) on an n-element set satisfying ``constraints``."""
    bad = set(constraints) - set(RELATION_CONSTRAINTS)
    if bad:
        raise ValueError(f"unknown relation constraints {sorted(bad)}")
    return RelationStream(n, constraints)


# -- spaces, goals, results -------------------------------------------------

@dataclass(frozen=True)
class SearchSpace:
    source_size: int
    target_size: int | None = None
    signature: Signature = field(default_factory=Signature)
    relation_constraints: frozenset = frozenset({"symmetry"})
    map_constraints: frozenset = frozenset()
    max_instances: int = 10_000_000
    max_seconds: float = 60.0
    seed: int | None = None

    def __post_init__(self):
        if self.target_size is None:
            object.__setattr__(self, "target_size", self.source_size)
        _check_size(self.source_size)
        _check_size(self.target_size)
        rc = frozenset(self.relation_constraints) | {"symmetry"}
        bad = rc - set(RELATION_CONSTRAINTS)
        if bad:
            raise ValueError(f"unknown relation constraints {sorted(bad)}")
        mc = frozenset(self.map_constraints)
        bad = mc - set(MAP_CONSTRAINTS)
        if bad:
            raise ValueError(f"unknown map constraints {sorted(bad)}")
        object.__setattr__(self, "relation_constraints", rc)
        object.__setattr__(self, "map_constraints", mc)
        if self.max_instances <= 0 or self.max_seconds <= 0:
            raise ValueError("budgets must be positive")

    @property
    def randomized(self):
        return self.seed is not None


@dataclass
class Exhibit:
    """A separating instance: spec-file declarations plus the checks
    (with expected outcomes) that demonstrate the separation."""

    goal: str
    spec: SpecFile
    checks: list  # (check name, argument names, expected outcome string)
    index: tuple = ()
    digest: str | None = None  # as stored in the file; None for fresh exhibits

    def to_text(self, path="<file>"):
        prop = GOALS[self.goal].property if self.goal in GOALS else self.goal
        self.spec.directives = [f"exhibit: {self.goal} ({prop})",
                                f"replay: propalg replay {path}",
                                f"digest: {declarations_digest(self.spec)}"]
        self.spec.directives += [f"expect: {name} {' '.join(args)} -> {outcome}"
                                 for name, args, outcome in self.checks]
        return self.spec.to_text()

    @classmethod
    def from_text(cls, text):
        spec = parse_spec(text)
        goal, checks, digest = None, [], None
        for d in spec.directives:
            if d.startswith("exhibit:"):
                goal = d.split()[1]
            elif d.startswith("digest:"):
                digest = d.split()[1]
            elif d.startswith("expect:"):
                body = d[len("expect:"):].strip()
                if "->" not in body:
                    raise PropAlgError(f"malformed expect line: {d!r}")
                lhs, outcome = body.split("->", 1)
                words = lhs.split()
                if not words:
                    raise PropAlgError(f"malformed expect line: {d!r}")
                checks.append((words[0], tuple(words[1:]), outcome.strip()))
        if not checks:
            raise PropAlgError("exhibit file has no expect lines")
        return cls(goal or "unknown", spec, checks, digest=digest)


def declarations_digest(spec):
    """sha256 of the canonical serialization of the declarations."""
    text = SpecFile(spec.declarations).to_text()
    return "sha256:" + hashlib.sha256(text.encode()).hexdigest()[:32]


@dataclass
class SearchReport:
    goal: str
    status: str            # "found", "exhausted" or "budget"
    exhibit: Exhibit | None
    visited: int
    space_size: int | None  # closed-form instance count, if known
    elapsed: float
    mode: str
    seed: int | None = None
    detail: str = ""

    def to_dict(self):
        return {"goal": self.goal, "status": self.status, "mode": self.mode, "seed": self.seed,
                "visited": self.visited, "space_size": self.space_size,
                "elapsed": round(self.elapsed, 6), "detail": self.detail,
                "index": list(self.exhibit.index) if self.exhibit else None}


def outcome(v):
    """Canonical outcome string of a verdict (what ``# expect:`` lines store)."""
    if v.holds:
        return "holds"
    return "fails " + " ".join(f"{s}={x}" for s, x in v.witness)


# -- check registry used by exhibits and replay -----------------------------

def _pa(spec, rel):
    R = spec.relation(rel)
    return PAlgebra(R.source, R)


def _closure(spec, rel, f, g):
    return check_pfunctor_monoid_closure([spec.map(f), spec.map(g)], _pa(spec, rel))


def _composite(spec, rel, f, g):
    """p-functor check of G after F."""
    return is_p_functor(compose(spec.map(f), spec.map(g)), spec.relation(rel))


CHECKS = {
    "homomorphism": lambda s, f: is_homomorphism(s.map(f)),
    "p-homomorphism": lambda s, f, ra, rb: is_p_homomorphism(s.map(f), _pa(s, ra), _pa(s, rb)),
    "aip": lambda s, f, ra, rb: satisfies_aip(s.map(f), _pa(s, ra), _pa(s, rb)),
    "p-functor": lambda s, f, r: is_p_functor(s.map(f), s.relation(r)),
    "p-idempotent": lambda s, f, r: is_p_idempotent(s.map(f), _pa(s, r)),
    "p-functor-closure": _closure,
    "p-functor-composite": _composite,
    "symmetry": lambda s, r: check_inner_symmetry(s.relation(r)),
    "reflexivity": lambda s, r: check_reflexivity(s.relation(r)),
    "determinism": lambda s, r: check_determinism(s.relation(r)),
    "p-transitivity": lambda s, r: check_p_transitivity(s.relation(r)),
}


@dataclass
class ReplayReport:
    results: list     # (check, args, expected, actual)
    mismatches: list  # subset of results with expected != actual

    @property
    def ok(self):
        return not self.mismatches


def replay(exhibit):
    """Re-run every check named by ``exhibit`` and compare the outcomes."""
    results = []
    for name, args, expected in exhibit.checks:
        if name not in CHECKS:
            raise PropAlgError(f"unknown check {name!r} in exhibit")
        try:
            actual = outcome(CHECKS[name](exhibit.spec, *args))
        except TypeError:
            raise PropAlgError(f"check {name!r} got the wrong number of arguments") from None
        except PropAlgError as e:
            actual = f"error {e}"
        results.append((name, args, expected, actual))
    if exhibit.digest is not None:
        results.append(("digest", (), exhibit.digest, declarations_digest(exhibit.spec)))
    return ReplayReport(results, [r for r in results if r[2] != r[3]])


# -- goals --------------------------------------------------------------------

@dataclass(frozen=True)
class Goal:
    name: str
    property: str
    endo: bool
    implied: frozenset = frozenset()   # relation constraints the goal adds
    nontransitive: bool = False


GOALS = {g.name: g for g in (
    Goal("hom-not-phom", "hom and not p-hom", endo=False),
    Goal("phom-not-pfunctor", "p-hom and not p-functor", endo=False),
    Goal("pfunctor-not-phom", "p-functor and not p-hom on a p-transitive algebra", endo=True,
         implied=frozenset({"p-transitivity"})),
    Goal("aip-not-pfunctor", "AIP and not p-functor on a p-transitive algebra", endo=True,
         implied=frozenset({"p-transitivity"})),
    Goal("phom-not-pidempotent", "p-hom and not p-idempotent", endo=True),
    Goal("closure-failure", "p-functors whose composite is not a p-functor, "
         "on a relation that is not p-transitive", endo=True, nontransitive=True),
)}


def _labels(n, start=1):
    return tuple(str(i) for i in range(start, start + n))


def _rel(A, B, T, name):
    return ProportionRelation.from_tensor(A, B, T, name=name)


def _maps(A, B):
    for g in itertools.product(range(B.size), repeat=A.size):
        yield np.array(g, dtype=np.int64)


class _Instance:
    """One outer combination: algebras and relations; maps vary inside."""

    def __init__(self, goal, space, items):
        self.goal, self.space = goal, space
        if goal.endo:
            self.A, T = items
            self.B = self.A
            self.RA = _rel(self.A, self.A, T, "rA")
            self.PA = self.PB = PAlgebra(self.A, self.RA)
        elif goal.name == "hom-not-phom":
            self.A, self.B, TA, TB = items
            self.RA = _rel(self.A, self.A, TA, "rA")
            self.RB = _rel(self.B, self.B, TB, "rB")
            self.PA, self.PB = PAlgebra(self.A, self.RA), PAlgebra(self.B, self.RB)
        else:
            self.A, self.B, TB, TX = items
            self.TB = TB
            self.RB = _rel(self.B, self.B, TB, "rB")
            self.RX = _rel(self.A, self.B, TX, "rAB")
            self.PB = PAlgebra(self.B, self.RB)

    def map_ok(self, F, PA, PB, R_cross):
        mc = self.space.map_constraints
        if "surjective" in mc and not F.is_surjective():
            return False
        if "homomorphism" in mc and not is_homomorphism(F):
            return False
        if "p-homomorphism" in mc and not is_p_homomorphism(F, PA, PB):
            return False
        if "AIP" in mc and not satisfies_aip(F, PA, PB):
            return False
        if "p-functor" in mc and not is_p_functor(F, R_cross):
            return False
        return True


def _relation_ok(R, constraints):
    if "reflexivity" in constraints and not check_reflexivity(R):
        return False
    if "determinism" in constraints and not check_determinism(R):
        return False
    if "p-transitivity" in constraints and not check_p_transitivity(R):
        return False
    return True


def _evaluate(inst, graphs):
    """Return the checks list and the maps if the instance separates, else None.

    ``graphs`` holds one graph (two for closure-failure).
    """
    g = inst.goal
    A, B = inst.A, inst.B
    if g.name == "closure-failure":
        F = Mapping.from_graph(A, A, graphs[0], name="F")
        G = Mapping.from_graph(A, A, graphs[1], name="G")
        R = inst.RA
        if not (inst.map_ok(F, inst.PA, inst.PA, R) and inst.map_ok(G, inst.PA, inst.PA, R)):
            return None
        if not (is_p_functor(F, R) and is_p_functor(G, R)):
            return None
        if is_p_functor(compose(F, G), R):
            return None
        return ["p-functor F rA", "p-functor G rA", "p-transitivity rA",
                "p-functor-composite rA F G"], {"F": F, "G": G}, None
    F = Mapping.from_graph(A, B, graphs[0], name="F")
    if g.name == "phom-not-pfunctor":
        if not is_homomorphism(F):
            return None
        TA = kernels.pullback(np.ascontiguousarray(inst.TB), np.ascontiguousarray(graphs[0]))
        RA = _rel(A, A, TA, "rA")
        if not _relation_ok(RA, inst.space.relation_constraints):
            return None
        PA = PAlgebra(A, RA)
        if not inst.map_ok(F, PA, inst.PB, inst.RX):
            return None
        if not is_p_homomorphism(F, PA, inst.PB) or is_p_functor(F, inst.RX):
            return None
        return ["homomorphism F", "p-homomorphism F rA rB", "p-functor F rAB"], {"F": F}, RA
    PA, PB = inst.PA, inst.PB
    RX = inst.RA if g.endo else None
    if not inst.map_ok(F, PA, PB, RX):
        return None
    if g.name == "hom-not-phom":
        if is_homomorphism(F) and not is_p_homomorphism(F, PA, PB):
            return ["homomorphism F", "p-homomorphism F rA rB"], {"F": F}, None
    elif g.name == "pfunctor-not-phom":
        if is_p_functor(F, inst.RA) and not is_p_homomorphism(F, PA, PA):
            return ["p-transitivity rA", "p-functor F rA", "p-homomorphism F rA rA"], {"F": F}, None
    elif g.name == "aip-not-pfunctor":
        if satisfies_aip(F, PA, PA) and not is_p_functor(F, inst.RA):
            return ["p-transitivity rA", "aip F rA rA", "p-functor F rA"], {"F": F}, None
    elif g.name == "phom-not-pidempotent":
        if is_p_homomorphism(F, PA, PA) and not is_p_idempotent(F, PA):
            return ["p-homomorphism F rA rA", "p-idempotent F rA"], {"F": F}, None
    return None


def _make_exhibit(inst, found, index):
    checks_txt, maps, RA_derived = found
    algebras = [inst.A] if inst.goal.endo else [inst.A, inst.B]
    rels = []
    if inst.goal.endo or inst.goal.name == "hom-not-phom":
        rels.append(inst.RA)
    if RA_derived is not None:
        rels.append(RA_derived)
    if not inst.goal.endo:
        rels.append(inst.RB)
        if inst.goal.name == "phom-not-pfunctor":
            rels.append(inst.RX)
    decls = [algebra_decl(A) for A in algebras]
    decls += [relation_decl(R) for R in rels]
    decls += [map_decl(F) for F in maps.values()]
    spec = build(SpecFile(decls))
    checks = []
    for line in checks_txt:
        name, *args = line.split()
        checks.append((name, tuple(args), outcome(CHECKS[name](spec, *args))))
    return Exhibit(inst.goal.name, spec, checks, index)


def _streams(goal, space):
    n, m = space.source_size, space.target_size
    rc = space.relation_constraints | goal.implied
    sig = space.signature
    if goal.endo:
        return [AlgebraStream("A", _labels(n), sig),
                RelationStream(n, rc, nontransitive=goal.nontransitive)]
    A = AlgebraStream("A", _labels(n), sig)
    B = AlgebraStream("B", _labels(m, n + 1), sig)
    if goal.name == "hom-not-phom":
        return [A, B, RelationStream(n, rc), RelationStream(m, rc)]
    return [A, B, RelationStream(m, rc), CrossRelationStream(n, m)]


def find_separation(space, goal):
    """First instance of ``goal`` in ``space`` (see the module docstring).

    Returns a :class:`SearchReport`; ``status`` is "found" (with an
    exhibit), "exhausted" (the whole space was swept: no instance exists at
    these sizes) or "budget" (stopped early; counters tell how far it got).
    """
    if goal not in GOALS:
        raise ValueError(f"unknown goal {goal!r}; choose from {sorted(GOALS)}")
    g = GOALS[goal]
    if g.endo and space.source_size != space.target_size:
        raise ValueError(f"goal {goal} concerns endomaps: source and target sizes must agree")
    streams = _streams(g, space)
    n_maps = 2 if g.name == "closure-failure" else 1
    map_count = space.target_size ** space.source_size
    counts = [s.count for s in streams]
    size = None
    if all(c is not None for c in counts):
        size = math.prod(counts) * map_count ** n_maps
    t0 = time.perf_counter()
    visited = 0
    mode = "random" if space.randomized else "exhaustive"

    def report(status, exhibit=None, detail=""):
        return SearchReport(goal, status, exhibit, visited, size, time.perf_counter() - t0,
                            mode, space.seed, detail)

    if space.randomized:
        rng = np.random.default_rng(space.seed)
        while True:
            items = [s.sample(rng) for s in streams]
            inst = _Instance(g, space, items)
            graphs = [rng.integers(0, inst.B.size, size=inst.A.size) for _ in range(n_maps)]
            visited += 1
            found = _evaluate(inst, graphs)
            if found:
                return report("found", _make_exhibit(inst, found, (visited,)))
            if visited >= space.max_instances or time.perf_counter() - t0 > space.max_seconds:
                return report("budget", detail=f"{visited} random instances tried")

    last_sum = 0
    for idx, items in dovetail(streams):
        last_sum = sum(idx)
        inst = _Instance(g, space, items)
        maps = list(_maps(inst.A, inst.B))
        for j, graphs in enumerate(itertools.product(maps, repeat=n_maps)):
            visited += 1
            found = _evaluate(inst, graphs)
            if found:
                return report("found", _make_exhibit(inst, found, idx + (j,)))
            if visited >= space.max_instances or time.perf_counter() - t0 > space.max_seconds:
                return report("budget", detail=f"stopped at outer index {idx}, "
                                               f"index sum {last_sum}")
    return report("exhausted", detail="every instance of the space was visited")
