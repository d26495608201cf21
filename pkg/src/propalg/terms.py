"""Unary terms over a signature: evaluation, enumeration, injectivity."""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import SignatureError


@dataclass(frozen=True)
class Term:
    """A term in the single variable ``z``; ``op=None`` is the variable."""

    op: str | None = None
    args: tuple = ()

    @property
    def is_var(self):
        return self.op is None

    @property
    def depth(self):
        return 1 + max(a.depth for a in self.args) if self.args else 0

    def __str__(self):
        if self.op is None:
            return "z"
        if not self.args:
            return self.op
        if len(self.args) == 2 and not self.op.isidentifier():
            return _infix(self)
        return f"{self.op}({', '.join(map(str, self.args))})"


def _infix(t):
    def wrap(s):
        return f"({s})" if s.args and len(s.args) == 2 and not s.op.isidentifier() else str(s)
    return f"{wrap(t.args[0])}{t.op}{wrap(t.args[1])}"


Z = Term()


def app(op, *args):
    return Term(op, tuple(args))


def check_term(sig, t):
    if t.is_var:
        return
    k = sig.arity(t.op)
    if k != len(t.args):
        raise SignatureError(f"{t.op!r} has arity {k}, applied to {len(t.args)} terms")
    for a in t.args:
        check_term(sig, a)


def eval_codes(A, t, codes):
    """Evaluate ``t`` at every code in ``codes`` (vectorized, bottom-up)."""
    if t.is_var:
        return codes
    vals = [eval_codes(A, a, codes) for a in t.args]
    res = A.apply(t.op, *vals)
    if not t.args:
        return np.full(np.shape(codes), res, dtype=np.int64) if isinstance(codes, np.ndarray) else res
    return res


def eval_term(A, t, binding):
    """Value of ``t`` at ``z = binding`` (labels in, label out; exact for integers)."""
    check_term(A.signature, t)
    return A.decode(_eval_scalar(A, t, A.encode(binding)))


def _eval_scalar(A, t, code):
    if t.is_var:
        return code
    return A.apply(t.op, *[_eval_scalar(A, a, code) for a in t.args])


def enumerate_unary_terms(sig, depth):
    """Every term over ``sig`` in ``z`` of nesting depth <= ``depth``.

    Order: by depth; within a depth by operation name; within an operation by
    the positions of the children in the stream so far. ``z`` and the
    constants form depth 0.
    """
    if depth < 0:
        raise ValueError("depth must be non-negative")
    ops = sorted(sig.ops)
    level = [Z] + [Term(n) for n, k in ops if k == 0]
    upto = list(level)
    yield from level
    start_prev = 0  # index of the first term of depth d-1 in ``upto``
    for _ in range(depth):
        new = []
        for name, k in ops:
            if k == 0:
                continue
            for idx in itertools.product(range(len(upto)), repeat=k):
                if max(idx) >= start_prev:
                    new.append(Term(name, tuple(upto[i] for i in idx)))
        if not new:
            return
        yield from new
        start_prev = len(upto)
        upto.extend(new)


def affine_form(t):
    """(k, c) with t(z) = k*z + c over the integer signatures {S} and {+, 0, 1}."""
    if t.is_var:
        return 1, 0
    if t.op == "S":
        k, c = affine_form(t.args[0])
        return k, c + 1
    if t.op == "+":
        k1, c1 = affine_form(t.args[0])
        k2, c2 = affine_form(t.args[1])
        return k1 + k2, c1 + c2
    if t.op in ("0", "1"):
        return 0, int(t.op)
    raise SignatureError(f"{t.op!r} is not an integer-algebra operation")


def term_function_injective(A, t):
    """Whether e -> t(e) is injective on ``A`` (exact for integer algebras)."""
    check_term(A.signature, t)
    if A.is_tabular:
        vals = eval_codes(A, t, A.codes())
        return len(np.unique(vals)) == len(vals)
    k, _ = affine_form(t)
    return k != 0


def term_functions(algebras, depth):
    """Distinct tuples of functions realized jointly by terms of depth <= ``depth``.

    ``algebras`` share a signature; each entry of the result holds, per
    algebra, the term's code table (tabular) or affine form (k, c) (integer).
    Built by closing the leaf functions under the operations level by level,
    which yields exactly the functions of the enumerated terms without
    enumerating syntactically distinct duplicates.
    """
    algebras = tuple(algebras)
    sig = algebras[0].signature
    ops = sorted(sig.ops)

    def leaf(A, name):
        if A.is_tabular:
            if name is None:
                return A.codes()
            return np.full(A.size, int(A.tables[name][()]), dtype=np.int64)
        return (1, 0) if name is None else (0, int(name))

    def apply(A, name, vs):
        if A.is_tabular:
            return np.asarray(A.apply(name, *vs), dtype=np.int64)
        if name == "S":
            return vs[0][0], vs[0][1] + 1
        return vs[0][0] + vs[1][0], vs[0][1] + vs[1][1]

    def key(v):
        return tuple(x.tobytes() if isinstance(x, np.ndarray) else x for x in v)

    seen = {}
    for name in [None] + [n for n, k in ops if k == 0]:
        v = tuple(leaf(A, name) for A in algebras)
        seen.setdefault(key(v), v)
    for _ in range(depth):
        funcs = list(seen.values())
        fresh = False
        for name, k in ops:
            if k == 0:
                continue
            for combo in itertools.product(funcs, repeat=k):
                v = tuple(apply(A, name, [c[j] for c in combo]) for j, A in enumerate(algebras))
                kv = key(v)
                if kv not in seen:
                    seen[kv] = v
                    fresh = True
        if not fresh:
            break
    return list(seen.values())
