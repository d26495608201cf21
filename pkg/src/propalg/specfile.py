"""Parser and serializer for the line-oriented spec-file format.

::

    algebra A { universe: 1 2 3 4; op S/1; table S: (1) -> 2; ... }
    algebra N builtin nat-succ window 64
    relation r on A A { extensional: (1,2,3,4) (3,4,1,3); symmetric-closure: on }
    relation d on N N { builtin difference }
    map F : A -> B { 1 -> 5; 2 -> 6; 3 -> 5; 4 -> 6 }
    map T : N -> N builtin translate 2
    partition th on A { {1,3} {2,4} }

Inside braces a newline separates entries like ``;`` does. ``#`` starts a
comment; ``# expect:``, ``# exhibit:``, ``# replay:`` and ``# digest:`` comment lines are kept as
directives for exhibit replay.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .algebra import DEFAULT_WINDOW, FiniteAlgebra, Mapping, Partition, Signature
from .errors import PropAlgError, SpecSyntaxError
from .proportions import DEFAULT_DEPTH, ProportionRelation

_TOKEN = re.compile(r"\n|->|[{}();,:]|(?:(?!->)[^\s{}();,:])+")


@dataclass(frozen=True)
class AlgebraDecl:
    name: str
    builtin: str | None = None
    window: int | None = None
    universe: tuple = ()
    ops: tuple = ()
    tables: tuple = ()  # (op, args, result)
    line: int = 0

    def __eq__(self, other):
        return isinstance(other, AlgebraDecl) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def _key(self):
        return (self.name, self.builtin, self.window, self.universe, self.ops, self.tables)


@dataclass(frozen=True, eq=False)
class RelationDecl:
    name: str
    source: str
    target: str
    kind: str
    quads: tuple = ()
    depth: int | None = None
    symmetric_closure: bool = True
    line: int = 0

    def _key(self):
        return (self.name, self.source, self.target, self.kind, self.quads, self.depth,
                self.symmetric_closure)

    def __eq__(self, other):
        return isinstance(other, RelationDecl) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())


@dataclass(frozen=True, eq=False)
class MapDecl:
    name: str
    source: str
    target: str
    builtin: str | None = None
    arg: int | None = None
    pairs: tuple = ()
    line: int = 0

    def _key(self):
        return (self.name, self.source, self.target, self.builtin, self.arg, self.pairs)

    def __eq__(self, other):
        return isinstance(other, MapDecl) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())


@dataclass(frozen=True, eq=False)
class PartitionDecl:
    name: str
    carrier: str
    blocks: tuple = ()
    line: int = 0

    def _key(self):
        return (self.name, self.carrier, self.blocks)

    def __eq__(self, other):
        return isinstance(other, PartitionDecl) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())


class SpecFile:
    """Parsed declarations plus the objects they denote."""

    def __init__(self, declarations=(), directives=()):
        self.declarations = list(declarations)
        self.directives = list(directives)
        self.algebras = {}
        self.relations = {}
        self.maps = {}
        self.partitions = {}

    def __eq__(self, other):
        return isinstance(other, SpecFile) and self.declarations == other.declarations

    def algebra(self, name):
        return _lookup(self.algebras, name, "algebra")

    def relation(self, name):
        return _lookup(self.relations, name, "relation")

    def map(self, name):
        return _lookup(self.maps, name, "map")

    def partition(self, name):
        return _lookup(self.partitions, name, "partition")

    def to_text(self):
        out = [f"# {d}" for d in self.directives]
        out.extend(serialize_decl(d) for d in self.declarations)
        return "\n".join(out) + "\n"


def _lookup(table, name, kind):
    try:
        return table[name]
    except KeyError:
        raise SpecSyntaxError(f"no {kind} named {name!r}") from None


class _Tokens:
    def __init__(self, text):
        self.toks = []
        for lineno, line in enumerate(text.splitlines(), 1):
            code = line.split("#", 1)[0]
            for m in _TOKEN.finditer(code):
                self.toks.append((m.group(), lineno, m.start() + 1))
            self.toks.append(("\n", lineno, len(code) + 1))
        self.i = 0

    def peek(self, skip_nl=True):
        j = self.i
        while skip_nl and j < len(self.toks) and self.toks[j][0] == "\n":
            j += 1
        return self.toks[j] if j < len(self.toks) else (None, self.last_line, 0)

    @property
    def last_line(self):
        return self.toks[-1][1] if self.toks else 1

    def next(self, skip_nl=True):
        while skip_nl and self.i < len(self.toks) and self.toks[self.i][0] == "\n":
            self.i += 1
        if self.i >= len(self.toks):
            raise SpecSyntaxError("unexpected end of input", self.last_line)
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, value, skip_nl=True):
        tok, line, col = self.next(skip_nl)
        if tok != value:
            raise SpecSyntaxError(f"expected {value!r}, found {tok!r}", line, col)
        return line

    def word(self, what="name"):
        tok, line, col = self.next()
        if tok in ("{", "}", "(", ")", ";", ",", ":", "->", "\n"):
            raise SpecSyntaxError(f"expected {what}, found {tok!r}", line, col)
        return tok, line

    def integer(self, what="integer"):
        tok, line = self.word(what)
        try:
            return int(tok)
        except ValueError:
            raise SpecSyntaxError(f"expected {what}, found {tok!r}", line) from None

    def at_separator(self):
        tok = self.peek(skip_nl=False)[0]
        return tok in (";", "\n")

    def skip_separators(self):
        while self.peek(skip_nl=False)[0] in (";", "\n"):
            self.i += 1


def parse_spec(text, window=None, depth=None):
    """Parse spec-file ``text`` and build every declared object.

    ``window`` overrides the window of builtin integer algebras and ``depth``
    is the default depth of ``builtin witness`` relations.
    """
    directives = []
    for line in text.splitlines():
        s = line.strip()
        for tag in ("# expect:", "# exhibit:", "# replay:", "# digest:"):
            if s.startswith(tag):
                directives.append(s[2:])
    tk = _Tokens(text)
    decls = []
    while tk.peek()[0] is not None:
        tok, line, col = tk.next()
        if tok == "algebra":
            decls.append(_parse_algebra(tk, line))
        elif tok == "relation":
            decls.append(_parse_relation(tk, line))
        elif tok == "map":
            decls.append(_parse_map(tk, line))
        elif tok == "partition":
            decls.append(_parse_partition(tk, line))
        else:
            raise SpecSyntaxError(f"unknown declaration {tok!r}", line, col)
    spec = SpecFile(decls, directives)
    build(spec, window=window, depth=depth)
    return spec


def _parse_algebra(tk, line):
    name, _ = tk.word("algebra name")
    tok, l2, c2 = tk.next()
    if tok == "builtin":
        kind, kl = tk.word("builtin algebra")
        if kind not in ("nat-succ", "int-plus"):
            raise SpecSyntaxError(f"unknown builtin algebra {kind!r}", kl)
        window = None
        if tk.peek(skip_nl=False)[0] == "window":
            tk.next()
            window = tk.integer("window")
        return AlgebraDecl(name, builtin=kind, window=window, line=line)
    if tok != "{":
        raise SpecSyntaxError(f"expected '{{' or 'builtin', found {tok!r}", l2, c2)
    universe, ops, tables = [], [], []
    while True:
        tk.skip_separators()
        tok, l3, c3 = tk.next()
        if tok == "}":
            break
        if tok == "universe":
            tk.expect(":")
            while not tk.at_separator() and tk.peek(skip_nl=False)[0] != "}":
                universe.append(tk.word("element")[0])
        elif tok == "op":
            decl, l4 = tk.word("operation")
            opname, _, arity = decl.rpartition("/")
            if not opname or not arity.isdigit():
                raise SpecSyntaxError(f"bad operation declaration {decl!r}", l4)
            ops.append((opname, int(arity)))
        elif tok == "table":
            opname, l4 = tk.word("operation")
            tk.expect(":")
            tk.expect("(")
            args = []
            while tk.peek()[0] != ")":
                args.append(tk.word("argument")[0])
                if tk.peek()[0] == ",":
                    tk.next()
            tk.expect(")")
            tk.expect("->")
            res = tk.word("result")[0]
            tables.append((opname, tuple(args), res, l4))
        else:
            raise SpecSyntaxError(f"unexpected {tok!r} in algebra body", l3, c3)
    return _validated_algebra(name, universe, ops, tables, line)


def _validated_algebra(name, universe, ops, tables, line):
    if not universe:
        raise SpecSyntaxError(f"algebra {name} declares no universe", line)
    if len(set(universe)) != len(universe):
        raise SpecSyntaxError(f"algebra {name} repeats a universe element", line)
    arity = dict(ops)
    members = set(universe)
    for op, args, res, l in tables:
        if op not in arity:
            raise SpecSyntaxError(f"table for undeclared operation {op!r}", l)
        if len(args) != arity[op]:
            raise SpecSyntaxError(f"{op!r} has arity {arity[op]} but the table row has "
                                  f"{len(args)} arguments", l)
        for x in args + (res,):
            if x not in members:
                raise SpecSyntaxError(f"{x!r} is not in the universe of {name}", l)
    return AlgebraDecl(name, universe=tuple(universe), ops=tuple(ops),
                       tables=tuple((op, args, res) for op, args, res, _ in tables), line=line)


def _parse_quad(tk):
    tk.expect("(")
    vals = []
    while True:
        vals.append(tk.word("element")[0])
        tok, l, c = tk.next()
        if tok == ")":
            break
        if tok != ",":
            raise SpecSyntaxError(f"expected ',' or ')', found {tok!r}", l, c)
    if len(vals) != 4:
        raise SpecSyntaxError(f"quadruples need 4 elements, got {len(vals)}", l)
    return tuple(vals)


def _parse_relation(tk, line):
    name, _ = tk.word("relation name")
    tk.expect("on")
    src, _ = tk.word("algebra name")
    tgt, _ = tk.word("algebra name")
    tk.expect("{")
    kind, quads, depth, closure = None, [], None, True
    while True:
        tk.skip_separators()
        tok, l, c = tk.next()
        if tok == "}":
            break
        if tok == "extensional":
            tk.expect(":")
            kind = _set_kind(kind, "extensional", l)
            while tk.peek()[0] == "(":
                quads.append(_parse_quad(tk))
        elif tok == "builtin":
            b, bl = tk.word("builtin relation")
            if b == "difference":
                kind = _set_kind(kind, "difference", bl)
            elif b == "boolean-xor":
                kind = _set_kind(kind, "boolean-xor", bl)
            elif b == "witness":
                kind = _set_kind(kind, "witness", bl)
                if tk.peek(skip_nl=False)[0] == "depth":
                    tk.next()
                    depth = tk.integer("depth")
            else:
                raise SpecSyntaxError(f"unknown builtin relation {b!r}", bl)
        elif tok == "symmetric-closure":
            tk.expect(":")
            flag, fl = tk.word("on/off")
            if flag not in ("on", "off"):
                raise SpecSyntaxError(f"symmetric-closure takes on|off, not {flag!r}", fl)
            closure = flag == "on"
        else:
            raise SpecSyntaxError(f"unexpected {tok!r} in relation body", l, c)
    if kind is None:
        raise SpecSyntaxError(f"relation {name} has no body", line)
    return RelationDecl(name, src, tgt, kind, tuple(quads), depth, closure, line)


def _set_kind(old, new, line):
    if old is not None and old != new:
        raise SpecSyntaxError(f"relation mixes {old} and {new}", line)
    return new


def _parse_map(tk, line):
    name, _ = tk.word("map name")
    tok, l, c = tk.next()
    if tok != ":":
        raise SpecSyntaxError("maps need a type: map <name> : <A> -> <B> ...", l, c)
    src, _ = tk.word("algebra name")
    tk.expect("->")
    tgt, _ = tk.word("algebra name")
    tok, l, c = tk.next()
    if tok == "builtin":
        kind, kl = tk.word("builtin map")
        if kind not in ("translate", "mod2", "identity", "negation"):
            raise SpecSyntaxError(f"unknown builtin map {kind!r}", kl)
        arg = tk.integer("translation offset") if kind == "translate" else None
        return MapDecl(name, src, tgt, builtin=kind, arg=arg, line=line)
    if tok != "{":
        raise SpecSyntaxError(f"expected '{{' or 'builtin', found {tok!r}", l, c)
    pairs = []
    while True:
        tk.skip_separators()
        if tk.peek()[0] == "}":
            tk.next()
            break
        a, _ = tk.word("element")
        tk.expect("->")
        b, _ = tk.word("element")
        pairs.append((a, b))
    return MapDecl(name, src, tgt, pairs=tuple(pairs), line=line)


def _parse_partition(tk, line):
    name, _ = tk.word("partition name")
    tk.expect("on")
    carrier, _ = tk.word("algebra name")
    tk.expect("{")
    blocks = []
    while True:
        tok, l, c = tk.next()
        if tok == "}":
            break
        if tok == ";":
            continue
        if tok != "{":
            raise SpecSyntaxError(f"expected a block '{{...}}', found {tok!r}", l, c)
        block = []
        while True:
            tok, l, c = tk.next()
            if tok == "}":
                break
            if tok == ",":
                continue
            block.append(tok)
        blocks.append(tuple(block))
    return PartitionDecl(name, carrier, tuple(blocks), line)


def build(spec, window=None, depth=None):
    """Instantiate the declarations of ``spec`` in order (references resolve backwards)."""
    kinds = {}
    for d in spec.declarations:
        group = type(d).__name__
        if (group, d.name) in kinds:
            raise SpecSyntaxError(f"duplicate declaration of {d.name!r}", d.line)
        kinds[(group, d.name)] = d
        try:
            _build_one(spec, d, window, depth)
        except SpecSyntaxError:
            raise
        except (PropAlgError, ValueError) as e:
            raise SpecSyntaxError(f"{d.name}: {e}", d.line) from e
    return spec


def _resolve(table, name, kind, line):
    if name not in table:
        raise SpecSyntaxError(f"unknown {kind} {name!r}", line)
    return table[name]


def _build_one(spec, d, window, depth):
    if isinstance(d, AlgebraDecl):
        if d.builtin:
            w = window if window is not None else (d.window if d.window is not None
                                                   else DEFAULT_WINDOW)
            ctor = FiniteAlgebra.nat_succ if d.builtin == "nat-succ" else FiniteAlgebra.int_plus
            spec.algebras[d.name] = ctor(d.name, w)
            return
        tables = {op: {} for op, _ in d.ops}
        for op, args, res in d.tables:
            if args in tables[op] and tables[op][args] != res:
                raise SpecSyntaxError(f"conflicting table rows for {op}{args}", d.line)
            tables[op][args] = res
        spec.algebras[d.name] = FiniteAlgebra(d.name, d.universe, Signature(d.ops), tables)
    elif isinstance(d, RelationDecl):
        A = _resolve(spec.algebras, d.source, "algebra", d.line)
        B = _resolve(spec.algebras, d.target, "algebra", d.line)
        if d.kind == "extensional":
            R = ProportionRelation.extensional(A, B, d.quads, d.symmetric_closure, name=d.name)
        elif d.kind == "difference":
            R = ProportionRelation.difference(A, B, name=d.name)
        elif d.kind == "boolean-xor":
            R = ProportionRelation.boolean_xor(A, B, name=d.name)
        else:
            dd = d.depth if d.depth is not None else (depth or DEFAULT_DEPTH)
            R = ProportionRelation.witness(A, B, dd, name=d.name)
        spec.relations[d.name] = R
    elif isinstance(d, MapDecl):
        A = _resolve(spec.algebras, d.source, "algebra", d.line)
        B = _resolve(spec.algebras, d.target, "algebra", d.line)
        if d.builtin is None:
            F = Mapping.from_graph(A, B, dict(d.pairs), name=d.name)
        elif d.builtin == "translate":
            _same_algebra(A, B, d)
            F = Mapping.translate(A, d.arg, name=d.name)
        elif d.builtin == "mod2":
            F = Mapping.mod2(A, B, name=d.name)
        elif d.builtin == "identity":
            _same_algebra(A, B, d)
            F = Mapping.identity(A, name=d.name)
        else:
            _same_algebra(A, B, d)
            F = Mapping.negation(A, name=d.name)
        spec.maps[d.name] = F
    else:
        A = _resolve(spec.algebras, d.carrier, "algebra", d.line)
        spec.partitions[d.name] = Partition.from_blocks(A, d.blocks, name=d.name)


def _same_algebra(A, B, d):
    if A is not B:
        raise SpecSyntaxError(f"builtin map {d.builtin} needs equal source and target", d.line)


def serialize_decl(d):
    if isinstance(d, AlgebraDecl):
        if d.builtin:
            w = f" window {d.window}" if d.window is not None else ""
            return f"algebra {d.name} builtin {d.builtin}{w}"
        lines = [f"algebra {d.name} {{", "  universe: " + " ".join(d.universe)]
        lines += [f"  op {op}/{k}" for op, k in d.ops]
        lines += [f"  table {op}: ({', '.join(args)}) -> {res}" for op, args, res in d.tables]
        return "\n".join(lines + ["}"])
    if isinstance(d, RelationDecl):
        head = f"relation {d.name} on {d.source} {d.target} {{"
        if d.kind == "extensional":
            body = "  extensional: " + " ".join(f"({','.join(q)})" for q in d.quads)
        elif d.kind == "witness":
            body = "  builtin witness" + (f" depth {d.depth}" if d.depth is not None else "")
        else:
            body = f"  builtin {d.kind}"
        lines = [head, body]
        if not d.symmetric_closure:
            lines.append("  symmetric-closure: off")
        return "\n".join(lines + ["}"])
    if isinstance(d, MapDecl):
        head = f"map {d.name} : {d.source} -> {d.target}"
        if d.builtin:
            return head + f" builtin {d.builtin}" + (f" {d.arg}" if d.arg is not None else "")
        return head + " { " + "; ".join(f"{a} -> {b}" for a, b in d.pairs) + " }"
    blocks = " ".join("{" + ",".join(b) + "}" for b in d.blocks)
    return f"partition {d.name} on {d.carrier} {{ {blocks} }}"


def algebra_decl(A):
    """Declaration text object for a tabular algebra (used by ``quotient`` and exhibits)."""
    if not A.is_tabular:
        return AlgebraDecl(A.name, builtin="nat-succ" if A.integers == "nat" else "int-plus",
                           window=A.window)
    import itertools
    tables = []
    for op, k in A.signature.ops:
        for args in itertools.product(range(A.size), repeat=k):
            res = A.tables[op][args]
            tables.append((op, tuple(str(A.decode(a)) for a in args), str(A.decode(res))))
    return AlgebraDecl(A.name, universe=tuple(str(x) for x in A.universe),
                       ops=A.signature.ops, tables=tuple(tables))


def relation_decl(R, closure=False):
    if R.kind == "extensional":
        quads = tuple(sorted(
            tuple(str(x) for x in (R.source.decode(a), R.source.decode(b),
                                   R.target.decode(c), R.target.decode(d)))
            for a, b, c, d in zip(*R.dense.nonzero())))
        return RelationDecl(R.name, R.source.name, R.target.name, "extensional", quads,
                            symmetric_closure=closure)
    return RelationDecl(R.name, R.source.name, R.target.name, R.kind, depth=R.depth)


def map_decl(F):
    if F.graph is None:
        raise PropAlgError("only tabular maps are serialized")
    pairs = tuple((str(F.source.decode(i)), str(F.target.decode(c))) for i, c in enumerate(F.graph))
    return MapDecl(F.name, F.source.name, F.target.name, pairs=pairs)
