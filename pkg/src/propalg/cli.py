"""Command-line front end: ``propalg <subcommand> [options]``.

Exit codes: 0 property holds, 1 property fails (witness printed), 2 usage
or parse error, 3 precondition unmet, 4 internal inconsistency.
"""
from __future__ import annotations

import argparse
import json
import sys
import time

from . import kernels
from .algebra import DEFAULT_WINDOW, Signature, quotient_algebra
from .errors import InconsistencyError, PreconditionError, PropAlgError, SpecSyntaxError
from .proportions import DEFAULT_DEPTH, check_determinism, check_inner_symmetry, \
    check_p_transitivity, check_reflexivity
from .propstruct import (
    PAlgebra,
    check_pfunctor_monoid_closure,
    check_phom_monoid_closure,
    functional_compare,
    is_p_congruence,
    is_p_functor,
    is_p_homomorphism,
    is_p_idempotent,
    is_p_isomorphism,
    kernel_is_p_congruence,
    satisfies_aip,
)
from .search import GOALS, Exhibit, SearchSpace, find_separation, replay
from .specfile import SpecFile, algebra_decl, parse_spec
from .verdict import Verdict

EXIT_HOLDS, EXIT_FAILS, EXIT_USAGE, EXIT_PRECONDITION, EXIT_INCONSISTENT = range(5)
SCHEMA_VERSION = 1


class Report:
    """Verdicts plus statistics; rendered as text or as one JSON document."""

    def __init__(self, command):
        self.command = command
        self.verdicts = []  # (name, Verdict)
        self.extra = {}
        self.terms = 0
        self.error = None
        self.exit_code = EXIT_HOLDS
        self.t0 = time.perf_counter()

    def add(self, name, verdict):
        self.verdicts.append((name, verdict))
        return verdict

    def to_dict(self):
        return {
            "schema": SCHEMA_VERSION,
            "command": self.command,
            "exit_code": self.exit_code,
            "holds": self.exit_code == EXIT_HOLDS,
            "error": self.error,
            "verdicts": [dict(name=n, **v.to_dict()) for n, v in self.verdicts],
            "stats": {
                "tuples_swept": sum(v.swept for _, v in self.verdicts),
                "terms_enumerated": self.terms,
                "wall_time": round(time.perf_counter() - self.t0, 6),
                "backend": kernels.BACKEND,
            },
            **self.extra,
        }

    def to_text(self):
        d = self.to_dict()
        lines = []
        for v in d["verdicts"]:
            head = f"{v['name']}: {'holds' if v['holds'] else 'FAILS'} [{v['qualifier']}]"
            if v["witness"]:
                head += " witness " + " ".join(f"{s}={x}" for s, x in v["witness"])
            if v["detail"]:
                head += f" ({v['detail']})"
            lines.append(head)
        for key, val in self.extra.items():
            if isinstance(val, str) and "\n" in val:
                lines.append(val.rstrip("\n"))
            else:
                lines.append(f"{key}: {json.dumps(val)}")
        if self.error:
            lines.append(f"error: {self.error}")
        s = d["stats"]
        lines.append(f"swept {s['tuples_swept']} tuples, {s['terms_enumerated']} term functions, "
                     f"{s['wall_time']:.3f} s, exit {self.exit_code}")
        return "\n".join(lines)


def _pa(spec, rel):
    R = spec.relation(rel)
    return PAlgebra(R.source, R)


def _count_terms(spec, names):
    return sum(spec.relation(n).terms_enumerated for n in names if n)


def _finish(report, holds):
    report.exit_code = EXIT_HOLDS if holds else EXIT_FAILS


def cmd_check_axioms(spec, args, rep):
    R = spec.relation(args.rel)
    rep.terms = _count_terms(spec, [args.rel])
    w = args.window
    checks = [("symmetry", check_inner_symmetry), ("reflexivity", check_reflexivity),
              ("determinism", check_determinism), ("p-transitivity", check_p_transitivity)]
    wanted = args.axiom or [n for n, _ in checks]
    for name, fn in checks:
        if name in wanted:
            rep.add(name, fn(R, w))
    _finish(rep, all(v.holds for _, v in rep.verdicts))


def cmd_check_phom(spec, args, rep):
    rep.terms = _count_terms(spec, [args.relA, args.relB])
    v = rep.add("p-homomorphism", is_p_homomorphism(spec.map(args.map), _pa(spec, args.relA),
                                                     _pa(spec, args.relB)))
    _finish(rep, v.holds)


def cmd_check_aip(spec, args, rep):
    rep.terms = _count_terms(spec, [args.relA, args.relB])
    v = rep.add("aip", satisfies_aip(spec.map(args.map), _pa(spec, args.relA),
                                     _pa(spec, args.relB)))
    _finish(rep, v.holds)


def cmd_check_piso(spec, args, rep):
    rep.terms = _count_terms(spec, [args.relA, args.relB])
    v = rep.add("p-isomorphism", is_p_isomorphism(spec.map(args.map), _pa(spec, args.relA),
                                                   _pa(spec, args.relB)))
    _finish(rep, v.holds)


def cmd_check_pcong(spec, args, rep):
    rep.terms = _count_terms(spec, [args.rel])
    v = rep.add("p-congruence", is_p_congruence(spec.partition(args.partition),
                                                _pa(spec, args.rel)))
    _finish(rep, v.holds)


def cmd_check_kernel_theorem(spec, args, rep):
    rep.terms = _count_terms(spec, [args.relA, args.relB])
    v = rep.add("kernel-p-congruence", kernel_is_p_congruence(
        spec.map(args.map), _pa(spec, args.relA), _pa(spec, args.relB)))
    _finish(rep, v.holds)


def cmd_check_pfunctor(spec, args, rep):
    rep.terms = _count_terms(spec, [args.rel])
    v = rep.add("p-functor", is_p_functor(spec.map(args.map), spec.relation(args.rel)))
    _finish(rep, v.holds)


def cmd_check_pidem(spec, args, rep):
    rep.terms = _count_terms(spec, [args.rel])
    v = rep.add("p-idempotent", is_p_idempotent(spec.map(args.map), _pa(spec, args.rel)))
    _finish(rep, v.holds)


def cmd_check_monoid(spec, args, rep):
    rep.terms = _count_terms(spec, [args.rel])
    Fs = [spec.map(n) for n in args.maps.split(",") if n]
    if args.kind == "phom":
        v = check_phom_monoid_closure(Fs, _pa(spec, args.rel))
    else:
        v = check_pfunctor_monoid_closure(Fs, _pa(spec, args.rel))
    rep.add(f"{args.kind}-monoid-closure", v)
    _finish(rep, v.holds)


def cmd_compare_functions(spec, args, rep):
    rep.terms = _count_terms(spec, [args.rel])
    r = functional_compare(spec.map(args.map), spec.map(args.map2), spec.relation(args.rel))
    rep.add("F -> G", r.forward)
    rep.add("G -> F", r.backward)
    rep.add("F :: G", r.both)
    _finish(rep, r.both.holds)


def cmd_quotient(spec, args, rep):
    A = spec.algebra(args.algebra)
    Q = quotient_algebra(A, spec.partition(args.partition), name=args.name)
    rep.extra["quotient"] = SpecFile([algebra_decl(Q)]).to_text()
    _finish(rep, True)


def _csv(text):
    return [x.strip() for x in text.split(",") if x.strip()] if text else []


def cmd_search(spec, args, rep):
    sizes = [int(x) for x in _csv(args.sizes)]
    if len(sizes) not in (1, 2):
        raise SpecSyntaxError("--sizes takes N or N,M")
    space = SearchSpace(
        sizes[0], sizes[-1], Signature.parse(args.signature),
        frozenset(_csv(args.relation_constraints)), frozenset(_csv(args.map_constraints)),
        args.max_instances, args.max_seconds, args.seed)
    result = find_separation(space, args.goal)
    rep.extra["search"] = result.to_dict()
    if result.exhibit is not None:
        text = result.exhibit.to_text(args.out or "<exhibit-file>")
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        rep.extra["checks"] = [{"check": name, "args": list(a), "outcome": out}
                               for name, a, out in result.exhibit.checks]
        rep.extra["exhibit"] = text
    _finish(rep, result.status == "found")


def cmd_replay(spec, args, rep):
    with open(args.file, encoding="utf-8") as fh:
        ex = Exhibit.from_text(fh.read())
    res = replay(ex)
    # each verdict states whether the re-run outcome equals the stored one
    for name, a, expected, actual in res.results:
        if expected == actual:
            v = Verdict(True, None, detail=f"reproduced: {actual}")
        else:
            v = Verdict(False, (("expected", expected), ("actual", actual)), detail="mismatch")
        rep.add(" ".join((name,) + a), v)
    rep.extra["replay"] = {"mismatches": len(res.mismatches), "goal": ex.goal}
    _finish(rep, res.ok)


COMMANDS = {
    "check-axioms": (cmd_check_axioms, "check the proportion axioms of a relation"),
    "check-phom": (cmd_check_phom, "is the map a p-homomorphism"),
    "check-aip": (cmd_check_aip, "does the map satisfy the analogical inference principle"),
    "check-piso": (cmd_check_piso, "is the map a p-isomorphism"),
    "check-pcong": (cmd_check_pcong, "is the partition a p-congruence"),
    "check-kernel-theorem": (cmd_check_kernel_theorem,
                             "kernel of a p-homomorphism must be a p-congruence"),
    "check-pfunctor": (cmd_check_pfunctor, "is the map a p-functor"),
    "check-pidem": (cmd_check_pidem, "is the map p-idempotent"),
    "check-monoid": (cmd_check_monoid, "closure of p-homomorphisms / p-functors under composition"),
    "compare-functions": (cmd_compare_functions, "functional proportionality of two maps"),
    "quotient": (cmd_quotient, "print the quotient algebra by a congruence"),
    "search": (cmd_search, "search small instances for a separation"),
    "replay": (cmd_replay, "re-check an exhibit file"),
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--window", type=int, default=None,
                        help=f"integer window W (default {DEFAULT_WINDOW})")
    common.add_argument("--depth", type=int, default=DEFAULT_DEPTH,
                        help="default witness term depth")
    common.add_argument("--threads", type=int, default=None, help="kernel worker threads")
    common.add_argument("--format", choices=("text", "machine"), default="text")
    common.add_argument("--seed", type=int, default=None,
                        help="seed for randomized search (omit for exhaustive)")

    p = argparse.ArgumentParser(prog="propalg", description="Proportional algebra checker.")
    sub = p.add_subparsers(dest="command", required=True)
    subs = {name: sub.add_parser(name, parents=[common], help=h)
            for name, (_, h) in COMMANDS.items()}
    for name, sp in subs.items():
        if name not in ("search",):
            sp.add_argument("file", help="spec file" if name != "replay" else "exhibit file")
    subs["check-axioms"].add_argument("--rel", required=True)
    subs["check-axioms"].add_argument("--axiom", action="append",
                                      choices=("symmetry", "reflexivity", "determinism",
                                               "p-transitivity"))
    for name in ("check-phom", "check-aip", "check-piso", "check-kernel-theorem"):
        subs[name].add_argument("--map", required=True)
        subs[name].add_argument("--relA", required=True)
        subs[name].add_argument("--relB", required=True)
    subs["check-pcong"].add_argument("--partition", required=True)
    subs["check-pcong"].add_argument("--rel", required=True)
    for name in ("check-pfunctor", "check-pidem"):
        subs[name].add_argument("--map", required=True)
        subs[name].add_argument("--rel", required=True)
    subs["check-monoid"].add_argument("--maps", required=True, help="comma-separated map names")
    subs["check-monoid"].add_argument("--rel", required=True)
    subs["check-monoid"].add_argument("--kind", choices=("phom", "pfunctor"), default="pfunctor")
    cf = subs["compare-functions"]
    cf.add_argument("--map", required=True)
    cf.add_argument("--map2", required=True)
    cf.add_argument("--rel", required=True)
    q = subs["quotient"]
    q.add_argument("--algebra", required=True)
    q.add_argument("--partition", required=True)
    q.add_argument("--name", default=None)
    s = subs["search"]
    s.add_argument("--goal", required=True, choices=sorted(GOALS))
    s.add_argument("--sizes", required=True, help="N or N,M (source, target), each <= 5")
    s.add_argument("--signature", default="", help="e.g. 'S/1' or '+/2,0/0'")
    s.add_argument("--relation-constraints", default="",
                   help="comma list of reflexivity, determinism, p-transitivity")
    s.add_argument("--map-constraints", default="",
                   help="comma list of homomorphism, p-homomorphism, p-functor, AIP, surjective")
    s.add_argument("--max-instances", type=int, default=10_000_000)
    s.add_argument("--max-seconds", type=float, default=60.0)
    s.add_argument("--out", default=None, help="write the exhibit to this file")
    return p


def run_command(argv):
    """Run one invocation; returns (Report, exit code)."""
    parser = build_parser()
    rep = Report(["propalg"] + list(argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        rep.exit_code = EXIT_USAGE if e.code else EXIT_HOLDS
        rep.error = "usage error" if e.code else None
        rep.silent = not e.code  # --help already printed everything
        return rep, rep.exit_code
    if args.threads:
        kernels.set_threads(args.threads)
    try:
        spec = None
        if args.command not in ("search", "replay"):
            with open(args.file, encoding="utf-8") as fh:
                spec = parse_spec(fh.read(), window=args.window, depth=args.depth)
        COMMANDS[args.command][0](spec, args, rep)
    except PreconditionError as e:
        rep.exit_code, rep.error = EXIT_PRECONDITION, str(e)
        if e.verdict is not None:
            rep.add(f"precondition {e.failed or ''}".strip(), e.verdict)
    except InconsistencyError as e:
        rep.exit_code, rep.error = EXIT_INCONSISTENT, str(e)
        if e.verdict is not None:
            rep.add("theorem", e.verdict)
    except (SpecSyntaxError, OSError, ValueError) as e:
        rep.exit_code, rep.error = EXIT_USAGE, str(e)
    except PropAlgError as e:
        rep.exit_code, rep.error = EXIT_USAGE, str(e)
    rep.machine = args.format == "machine"
    return rep, rep.exit_code


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    rep, code = run_command(argv)
    if getattr(rep, "silent", False):
        return code
    if getattr(rep, "machine", False):
        print(json.dumps(rep.to_dict(), indent=2, default=str))
    else:
        out = rep.to_text()
        print(out, file=sys.stderr if code == EXIT_USAGE else sys.stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
