"""Finite and exact-integer algebras, maps between them, and partitions.

Elements are addressed by *codes*: the universe index for tabular algebras
and the integer itself for the exact-integer algebras (N, S) and (Z, +, 0, 1).
Labels are only for presentation and I/O.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import BackingError, CarrierError, PreconditionError, SignatureError
from .verdict import Qualifier, fail, ok

DEFAULT_WINDOW = 64
# int64 sweeps stay exact as long as windowed values are far from 2**63
MAX_WINDOW = 1 << 24


class Backing(Enum):
    TABULAR = "tabular"
    EXACT_INTEGER = "exact-integer"


@dataclass(frozen=True)
class Signature:
    ops: tuple = ()

    def __post_init__(self):
        ops = tuple((str(n), int(k)) for n, k in self.ops)
        object.__setattr__(self, "ops", ops)
        names = [n for n, _ in ops]
        if len(set(names)) != len(names):
            raise SignatureError(f"duplicate operation names in {names}")
        for n, k in ops:
            if k < 0:
                raise SignatureError(f"negative arity for {n!r}")

    @classmethod
    def parse(cls, text):
        """``"+/2, 0/0, 1/0"`` -> Signature."""
        ops = []
        for part in text.replace(",", " ").split():
            name, _, arity = part.rpartition("/")
            if not name or not arity.isdigit():
                raise SignatureError(f"bad operation declaration {part!r}")
            ops.append((name, int(arity)))
        return cls(tuple(ops))

    @property
    def names(self):
        return tuple(n for n, _ in self.ops)

    def arity(self, name):
        for n, k in self.ops:
            if n == name:
                return k
        raise SignatureError(f"unknown operation {name!r}")

    def __contains__(self, name):
        return name in self.names

    def same_as(self, other):
        return set(self.ops) == set(other.ops)

    def __str__(self):
        return "{" + ", ".join(f"{n}/{k}" for n, k in self.ops) + "}"


NAT_SUCC = Signature((("S", 1),))
INT_PLUS = Signature((("+", 2), ("0", 0), ("1", 0)))


class FiniteAlgebra:
    """An algebra with total operation tables, or one of the two exact-integer
    formula algebras (``nat`` = (N, S), ``int`` = (Z, +, 0, 1)).

    Universally quantified checks over an exact-integer algebra run over its
    window: ``0..W`` for N, and ``0, 1, -1, 2, -2, ..., W, -W`` for Z.
    """

    def __init__(self, name, universe, signature=Signature(), tables=None):
        universe = tuple(universe)
        if not universe:
            raise CarrierError("universes must be nonempty")
        if len(set(universe)) != len(universe):
            raise CarrierError(f"duplicate labels in universe of {name}")
        self.name = name
        self.universe = universe
        self.signature = signature
        self.backing = Backing.TABULAR
        self.integers = None
        self.window = None
        self._index = {lab: i for i, lab in enumerate(universe)}
        n = len(universe)
        tables = tables or {}
        extra = set(tables) - set(signature.names)
        if extra:
            raise SignatureError(f"tables for undeclared operations {sorted(extra)}")
        self.tables = {}
        for op, k in signature.ops:
            if op not in tables:
                raise SignatureError(f"operation {op!r} of {name} has no table")
            self.tables[op] = self._build_table(op, k, tables[op])

    def _build_table(self, op, k, spec):
        n = len(self.universe)
        if isinstance(spec, np.ndarray):
            arr = np.asarray(spec, dtype=np.int64)
            if arr.shape != (n,) * k:
                raise SignatureError(f"table {op!r} has shape {arr.shape}, want {(n,) * k}")
            if arr.size and (arr.min() < 0 or arr.max() >= n):
                raise CarrierError(f"table {op!r} leaves the universe")
        else:
            arr = np.full((n,) * k, -1, dtype=np.int64)
            for args, res in dict(spec).items():
                if not isinstance(args, tuple):
                    args = (args,)
                if len(args) != k:
                    raise SignatureError(f"table {op!r}: {args} does not have arity {k}")
                arr[tuple(self.encode(a) for a in args)] = self.encode(res)
            if (arr < 0).any():
                missing = next(t for t in itertools.product(range(n), repeat=k) if arr[t] < 0)
                raise SignatureError(f"table {op!r} is not total: no entry for "
                                     f"{tuple(self.universe[i] for i in missing)}")
        arr.setflags(write=False)
        return arr

    @classmethod
    def nat_succ(cls, name="N", window=DEFAULT_WINDOW):
        return cls._integer(name, "nat", NAT_SUCC, window)

    @classmethod
    def int_plus(cls, name="Z", window=DEFAULT_WINDOW):
        return cls._integer(name, "int", INT_PLUS, window)

    @classmethod
    def _integer(cls, name, kind, sig, window):
        window = int(window)
        if not 0 <= window <= MAX_WINDOW:
            raise ValueError(f"window must lie in [0, {MAX_WINDOW}]")
        self = cls.__new__(cls)
        self.name = name
        self.universe = None
        self.signature = sig
        self.backing = Backing.EXACT_INTEGER
        self.integers = kind
        self.window = window
        self.tables = {}
        self._index = None
        return self

    def with_window(self, window):
        if self.is_tabular:
            return self
        return FiniteAlgebra._integer(self.name, self.integers, self.signature, window)

    # -- element handling -------------------------------------------------

    @property
    def is_tabular(self):
        return self.backing is Backing.TABULAR

    @property
    def size(self):
        return len(self.universe) if self.is_tabular else None

    @property
    def qualifier(self):
        return Qualifier.EXACT if self.is_tabular else Qualifier.WINDOW

    def codes(self, window=None):
        """Element codes in canonical order (the window for integer algebras)."""
        if self.is_tabular:
            return np.arange(len(self.universe), dtype=np.int64)
        w = self.window if window is None else int(window)
        if self.integers == "nat":
            return np.arange(w + 1, dtype=np.int64)
        out = np.empty(2 * w + 1, dtype=np.int64)
        out[0] = 0
        out[1::2] = np.arange(1, w + 1)
        out[2::2] = -np.arange(1, w + 1)
        return out

    def encode(self, label):
        if self.is_tabular:
            try:
                return self._index[label]
            except KeyError:
                # spec files deliver string labels; accept str(label) matches
                for lab, i in self._index.items():
                    if str(lab) == str(label):
                        return i
                raise CarrierError(f"{label!r} is not an element of {self.name}") from None
        try:
            v = int(label)
        except (TypeError, ValueError):
            raise CarrierError(f"{label!r} is not an integer") from None
        if self.integers == "nat" and v < 0:
            raise CarrierError(f"{v} is not a natural number")
        return v

    def decode(self, code):
        code = int(code)
        return self.universe[code] if self.is_tabular else code

    def contains(self, codes):
        codes = np.asarray(codes)
        if self.is_tabular:
            return (codes >= 0) & (codes < len(self.universe))
        if self.integers == "nat":
            return codes >= 0
        return np.ones(codes.shape, dtype=bool)

    def apply(self, op, *args):
        """Apply ``op`` to code arrays (or ints), elementwise."""
        k = self.signature.arity(op)
        if len(args) != k:
            raise SignatureError(f"{op!r} takes {k} arguments, got {len(args)}")
        if self.is_tabular:
            res = self.tables[op][tuple(args)] if k else self.tables[op][()]
            return res if isinstance(res, np.ndarray) and res.ndim else int(res)
        if op == "S":
            return args[0] + 1
        if op == "+":
            return args[0] + args[1]
        return int(op)  # constants "0" and "1"

    def same_structure(self, other):
        if self.backing is not other.backing:
            return False
        if not self.is_tabular:
            return self.integers == other.integers
        return (self.universe == other.universe and self.signature == other.signature
                and all(np.array_equal(self.tables[o], other.tables[o]) for o in self.tables))

    def __repr__(self):
        if self.is_tabular:
            return f"FiniteAlgebra({self.name!r}, {list(self.universe)}, {self.signature})"
        return f"FiniteAlgebra({self.name!r}, {self.integers}, window={self.window})"


def subalgebra(A, subset, name=None):
    """The subalgebra of tabular ``A`` on ``subset``; raises if not closed."""
    verdict = is_subalgebra(subset, A)
    if not verdict:
        raise PreconditionError(f"{sorted(map(str, subset))} is not closed in {A.name}",
                                failed="closure", verdict=verdict)
    keep = sorted(A.encode(x) for x in subset)
    pos = {c: i for i, c in enumerate(keep)}
    remap = np.vectorize(pos.__getitem__, otypes=[np.int64])
    tables = {}
    for op, k in A.signature.ops:
        t = A.tables[op][np.ix_(*[keep] * k)] if k else A.tables[op]
        tables[op] = remap(t) if t.size else t.astype(np.int64)
    return FiniteAlgebra(name or f"{A.name}_sub", [A.universe[c] for c in keep],
                         A.signature, tables)


class Mapping:
    """A total map between two algebras, vectorized over element codes.

    Tabular sources carry an explicit graph; integer sources carry one of the
    built-in formulas (translate, mod2, identity, negation) or a composite.
    """

    def __init__(self, source, target, fn, *, kind, name=None, graph=None,
                 offset=None, injective=None, surjective=None):
        self.source = source
        self.target = target
        self._fn = fn
        self.kind = kind
        self.name = name or kind
        self.graph = graph
        self.offset = offset
        self._injective = injective
        self._surjective = surjective

    def __call__(self, codes):
        return self._fn(codes)

    def apply_label(self, label):
        return self.target.decode(self(np.int64(self.source.encode(label))))

    @classmethod
    def from_graph(cls, source, target, graph, name=None):
        """``graph`` maps source labels to target labels (dict) or is an array
        of target codes indexed by source code."""
        if not source.is_tabular:
            raise BackingError("explicit graphs need a tabular source")
        n = source.size
        if isinstance(graph, dict):
            arr = np.full(n, -1 if target.is_tabular else 0, dtype=np.int64)
            seen = np.zeros(n, dtype=bool)
            for a, b in graph.items():
                i = source.encode(a)
                arr[i] = target.encode(b)
                seen[i] = True
            if not seen.all():
                missing = source.universe[int(np.argmin(seen))]
                raise CarrierError(f"map is not total: no image for {missing!r}")
        else:
            arr = np.asarray(graph, dtype=np.int64).copy()
            if arr.shape != (n,):
                raise CarrierError("graph length does not match the source universe")
        if not target.contains(arr).all():
            raise CarrierError("map leaves the target universe")
        arr.setflags(write=False)
        return cls(source, target, lambda c, g=arr: g[c], kind="table", name=name, graph=arr)

    @classmethod
    def identity(cls, A, name=None):
        if A.is_tabular:
            return cls.from_graph(A, A, np.arange(A.size), name=name or "identity")
        return cls(A, A, lambda c: c, kind="identity", name=name, offset=0,
                   injective=True, surjective=True)

    @classmethod
    def constant(cls, source, target, label, name=None):
        c = target.encode(label)
        return cls.from_graph(source, target, np.full(source.size, c), name=name)

    @classmethod
    def translate(cls, A, k, name=None):
        """S^k : a -> a + k on an integer algebra."""
        if A.is_tabular:
            raise BackingError("translations need an integer algebra")
        k = int(k)
        if A.integers == "nat" and k < 0:
            raise CarrierError("negative translations leave N")
        surj = A.integers == "int" or k == 0
        return cls(A, A, lambda c: c + k, kind="translate", name=name or f"S^{k}",
                   offset=k, injective=True, surjective=surj)

    @classmethod
    def mod2(cls, source, target, name=None):
        if source.is_tabular:
            raise BackingError("mod2 needs an integer source")
        if not target.is_tabular or target.size != 2:
            raise CarrierError("mod2 needs a two-element target")
        lut = np.array([target.encode("0"), target.encode("1")], dtype=np.int64)
        return cls(source, target, lambda c: lut[np.asarray(c) % 2], kind="mod2",
                   name=name or "mod2", injective=False, surjective=True)

    @classmethod
    def negation(cls, A, name=None):
        if A.is_tabular:
            if A.size != 2:
                raise CarrierError("tabular negation needs a two-element universe")
            return cls.from_graph(A, A, np.array([1, 0]), name=name or "negation")
        if A.integers == "nat":
            raise CarrierError("negation leaves N")
        return cls(A, A, lambda c: -c, kind="negation", name=name,
                   injective=True, surjective=True)

    # -- exact structural facts -----------------------------------------

    def is_injective(self):
        if self.graph is not None:
            return len(np.unique(self.graph)) == len(self.graph)
        return self._injective

    def is_surjective(self):
        if self.graph is not None:
            if not self.target.is_tabular:
                return False
            return len(np.unique(self.graph)) == self.target.size
        return self._surjective

    def same_graph(self, other):
        """Pointwise equality over the source universe (window for integers)."""
        if self.source is not other.source and not self.source.same_structure(other.source):
            return False
        xs = self.source.codes()
        return bool(np.array_equal(self(xs), other(xs)))

    def __repr__(self):
        return f"Mapping({self.name}: {self.source.name} -> {self.target.name})"


def compose(F, G, name=None):
    """The map a -> G(F(a)) (apply ``F`` first)."""
    if F.target is not G.source and not F.target.same_structure(G.source):
        raise CarrierError(f"cannot compose: {F.target.name} is not the source of {G.name}")
    name = name or f"{G.name}∘{F.name}"
    if F.graph is not None:
        return Mapping.from_graph(F.source, G.target, np.asarray(G(F.graph)), name=name)
    if F.offset is not None and G.offset is not None:
        return Mapping.translate(F.source, F.offset + G.offset, name=name)
    inj = True if F.is_injective() and G.is_injective() else None
    sur = True if F.is_surjective() and G.is_surjective() else None
    if G.is_injective() is True and F.is_injective() is False:
        inj = False
    return Mapping(F.source, G.target, lambda c: G(F(c)), kind="composite", name=name,
                   injective=inj, surjective=sur)


def _check_shared_signature(F):
    if not F.source.signature.same_as(F.target.signature):
        raise SignatureError(f"{F.source.name} and {F.target.name} have different signatures")


def _op_tuples(A, k):
    xs = A.codes()
    if k == 0:
        return ()
    grids = np.meshgrid(*[xs] * k, indexing="ij")
    return tuple(g.ravel() for g in grids)


def is_homomorphism(F):
    """F(f(a1..an)) = f(F(a1)..F(an)) for every operation and argument tuple.

    The witness is ``(op, args)`` for the first violation, ops in signature
    order and tuples in lexicographic order of the canonical element order.
    """
    _check_shared_signature(F)
    A, B = F.source, F.target
    swept = 0
    for op, k in A.signature.ops:
        args = _op_tuples(A, k)
        lhs = np.atleast_1d(F(np.asarray(A.apply(op, *args))))
        rhs = np.atleast_1d(B.apply(op, *[F(a) for a in args]))
        bad = lhs != rhs
        swept += bad.size
        if bad.any():
            i = int(np.argmax(bad))
            tup = tuple(A.decode(a[i]) for a in args)
            return fail(("op", "args"), (op, tup), A.qualifier, swept=swept)
    return ok(A.qualifier, swept=swept)


def is_isomorphism(F):
    if not F.target.is_tabular:
        raise BackingError("bijectivity onto an integer algebra is not decidable on a window")
    hom = is_homomorphism(F)
    if not hom:
        return hom
    return _bijective_verdict(F, hom.qualifier, hom.swept)


def _bijective_verdict(F, qualifier, swept=0):
    inj, sur = F.is_injective(), F.is_surjective()
    if inj is None or sur is None:
        raise BackingError(f"bijectivity of {F.name} is unknown")
    if not inj:
        if F.graph is not None:
            xs = F.source.codes()
            img = F.graph
            for i in range(len(xs)):
                j = np.flatnonzero(img == img[i])
                if len(j) > 1:
                    return fail(("x", "y"), (F.source.decode(j[0]), F.source.decode(j[1])),
                                qualifier, "not injective", swept)
        return fail(("x", "y"), ("?", "?"), qualifier, "not injective", swept)
    if not sur:
        if F.target.is_tabular and F.graph is not None:
            missing = np.setdiff1d(F.target.codes(), F.graph)[0]
            return fail(("missing",), (F.target.decode(missing),), qualifier,
                        "not surjective", swept)
        ys = F.target.codes()
        hit = np.isin(ys, F(F.source.codes(F.source.window + abs(F.offset or 0))))
        missing = ys[int(np.argmin(hit))] if not hit.all() else ys[0]
        return fail(("missing",), (F.target.decode(missing),), qualifier,
                    "not surjective", swept)
    return ok(qualifier, swept=swept)


def is_subalgebra(subset, A):
    """Whether ``subset`` is closed under every operation of tabular ``A``."""
    if not A.is_tabular:
        raise BackingError("subalgebra checks need a tabular algebra")
    codes = sorted({A.encode(x) for x in subset})
    member = np.zeros(A.size, dtype=bool)
    member[codes] = True
    arr = np.array(codes, dtype=np.int64)
    swept = 0
    for op, k in A.signature.ops:
        if k == 0:
            res = int(A.tables[op][()])
            swept += 1
            if not member[res]:
                return fail(("op", "args"), (op, ()), swept=swept)
            continue
        grids = [g.ravel() for g in np.meshgrid(*[arr] * k, indexing="ij")]
        res = A.tables[op][tuple(grids)]
        swept += res.size
        bad = ~member[res]
        if bad.any():
            i = int(np.argmax(bad))
            return fail(("op", "args"), (op, tuple(A.decode(g[i]) for g in grids)), swept=swept)
    return ok(swept=swept)


class Partition:
    """An equivalence relation on a tabular universe, stored as block indices.

    Blocks are numbered by their least element, so two partitions with the
    same blocks compare equal.
    """

    def __init__(self, carrier, block_of, name=None):
        block_of = np.asarray(block_of, dtype=np.int64)
        if block_of.shape != (carrier.size,):
            raise CarrierError("block assignment does not cover the universe")
        _, first, inv = np.unique(block_of, return_index=True, return_inverse=True)
        order = np.argsort(np.argsort(first))
        canon = order[inv].astype(np.int64)
        canon.setflags(write=False)
        self.carrier = carrier
        self.block_of = canon
        self.name = name

    @classmethod
    def from_blocks(cls, carrier, blocks, name=None):
        if not carrier.is_tabular:
            raise BackingError("partitions need a tabular carrier")
        block_of = np.full(carrier.size, -1, dtype=np.int64)
        for i, block in enumerate(blocks):
            block = list(block)
            if not block:
                raise CarrierError("blocks must be nonempty")
            for x in block:
                c = carrier.encode(x)
                if block_of[c] >= 0:
                    raise CarrierError(f"{x!r} lies in two blocks")
                block_of[c] = i
        if (block_of < 0).any():
            missing = carrier.universe[int(np.argmax(block_of < 0))]
            raise CarrierError(f"blocks do not cover {missing!r}")
        return cls(carrier, block_of, name)

    @classmethod
    def singletons(cls, carrier):
        return cls(carrier, np.arange(carrier.size))

    @classmethod
    def full(cls, carrier):
        return cls(carrier, np.zeros(carrier.size))

    @property
    def num_blocks(self):
        return int(self.block_of.max()) + 1

    def block_codes(self):
        return [np.flatnonzero(self.block_of == b) for b in range(self.num_blocks)]

    @property
    def blocks(self):
        return tuple(tuple(self.carrier.decode(c) for c in codes) for codes in self.block_codes())

    def related(self, a, b):
        return bool(self.block_of[self.carrier.encode(a)] == self.block_of[self.carrier.encode(b)])

    def __eq__(self, other):
        return (isinstance(other, Partition) and self.carrier is other.carrier
                and np.array_equal(self.block_of, other.block_of))

    def __hash__(self):
        return hash(tuple(self.block_of))

    def __repr__(self):
        return f"Partition({[list(b) for b in self.blocks]})"


def kernel(F):
    """The partition of F's source into fibers of F."""
    if not F.source.is_tabular:
        raise BackingError("kernels need a tabular source")
    _, inv = np.unique(F.graph, return_inverse=True)
    return Partition(F.source, inv)


def is_congruence(theta, A):
    if theta.carrier is not A and not theta.carrier.same_structure(A):
        raise CarrierError("partition lives on a different algebra")
    bo = theta.block_of
    swept = 0
    for op, k in A.signature.ops:
        if k == 0:
            continue
        T = A.tables[op]
        tuples = list(itertools.product(range(A.size), repeat=k))
        # compare each tuple against every blockwise-related tuple
        for args in tuples:
            base = bo[T[args]]
            choices = [np.flatnonzero(bo == bo[a]) for a in args]
            grids = [g.ravel() for g in np.meshgrid(*choices, indexing="ij")]
            res = bo[T[tuple(grids)]]
            swept += res.size
            bad = res != base
            if bad.any():
                i = int(np.argmax(bad))
                other = tuple(A.decode(g[i]) for g in grids)
                return fail(("op", "args", "args'"),
                            (op, tuple(A.decode(a) for a in args), other), swept=swept)
    return ok(swept=swept)


def quotient_algebra(A, theta, name=None):
    verdict = is_congruence(theta, A)
    if not verdict:
        raise PreconditionError("partition is not a congruence", failed="congruence",
                                verdict=verdict)
    reps = np.array([codes[0] for codes in theta.block_codes()], dtype=np.int64)
    bo = theta.block_of
    universe = [f"[{A.decode(r)}]" for r in reps]
    tables = {}
    for op, k in A.signature.ops:
        if k == 0:
            tables[op] = np.array(bo[A.tables[op][()]], dtype=np.int64)
            continue
        qt = bo[A.tables[op][np.ix_(*[reps] * k)]]
        # well-definedness across every representative choice
        full = bo[A.tables[op]]
        if not np.array_equal(full, qt[np.ix_(*[bo] * k)]):
            raise PreconditionError("quotient table is representative-dependent",
                                    failed="congruence")
        tables[op] = qt
    return FiniteAlgebra(name or f"{A.name}/{theta.name or 'theta'}", universe,
                         A.signature, tables)
