"""Command line interface.

Exit codes: 0 success, 1 an axiom or check failed, 2 unreadable input.
Reports are ``KEY: value`` lines; ``--json`` appends a JSON block.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import ainf, fileio, invariants, transfer
from .ainf import AInfMorphism, AInfStructure, InvalidStructure, format_vector
from .fileio import ParseError
from .transfer import DgAlgebra, InvalidAlgebra

DATA = Path(__file__).parent / "data"
SUPERSCRIPT = str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹")


class Failure(Exception):
    """A check failed; exit code 1."""


def resolve(path):
    """A file path, or the name of a shipped data file."""
    p = Path(path)
    if p.exists():
        return p
    for cand in (DATA / path, DATA / f"{path}.json"):
        if cand.exists():
            return cand
    return p


def _load(path):
    try:
        return fileio.load_any(resolve(path))
    except (InvalidAlgebra, InvalidStructure) as exc:
        raise Failure(f"invalid input: {exc}") from None


def _plain(x):
    if isinstance(x, Fraction):
        return fileio.format_rational(x)
    if isinstance(x, dict):
        return {(",".join(k) if isinstance(k, tuple) else str(k)): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    return x


class Report:
    def __init__(self, out):
        self.out = out
        self.data = {}

    def line(self, key, value, data=None):
        print(f"{key}: {value}", file=self.out)
        self.data[key.lower()] = _plain(data if data is not None else value)

    def dump_json(self):
        print(json.dumps(self.data, indent=2, ensure_ascii=False, sort_keys=True), file=self.out)


def _verdict(rep, key, v):
    rep.line(key, "pass" if v else "fail")
    if not v:
        rep.line("WITNESS", str(v.witness), {"word": v.witness.word, "value": v.witness.value})
        if v.message:
            rep.line("REASON", v.message)
    return bool(v)


def cmd_check(args, rep):
    obj = _load(args.file)
    ok = True
    if isinstance(obj, DgAlgebra):
        rep.line("KIND", "cdga" if obj.commutative else "dga")
        rep.line("AXIOMS", "pass")
        if args.cinf and not obj.commutative:
            rep.line("CINF", "fail")
            ok = False
    elif isinstance(obj, AInfStructure):
        rep.line("KIND", "cinf" if obj.cinf else "ainf")
        ok = _verdict(rep, "STASHEFF", ainf.check_stasheff(obj, args.max_degree))
        if ok and (args.cinf or obj.cinf):
            ok = _verdict(rep, "CINF", ainf.check_cinf(obj))
    else:
        rep.line("KIND", "morphism")
        for side, s in (("SOURCE", obj.source), ("TARGET", obj.target)):
            v = ainf.check_stasheff(s, args.max_degree)
            if not v:
                rep.line(f"{side}_STASHEFF", "fail")
                return False
        ok = _verdict(rep, "MORPHISM", ainf.check_morphism(obj, args.max_degree))
        if ok and (args.cinf or obj.cinf):
            ok = _verdict(rep, "CINF", ainf.check_morphism_cinf(obj))
    rep.line("STATUS", "pass" if ok else "fail")
    return ok


def cmd_transfer(args, rep):
    obj = _load(args.file)
    if not isinstance(obj, DgAlgebra):
        raise ParseError("transfer expects a dga or cdga file")
    t = transfer.build_transfer_data(obj, seed=args.seed)
    run = transfer.transfer_cinf if args.cinf else transfer.transfer_ainf
    try:
        H, f = run(obj, t, args.max_arity, args.max_degree)
    except transfer.BoundTooSmall as exc:
        raise ParseError(str(exc)) from None
    except (InvalidAlgebra, transfer.CorrectionUnsolvable) as exc:
        raise Failure(str(exc)) from None
    checks = [ainf.check_stasheff(H, args.max_degree), ainf.check_morphism(f, args.max_degree)]
    if args.cinf:
        checks.append(ainf.check_cinf(H))
    if not all(checks):
        raise Failure("transferred structure failed re-validation")
    text = fileio.dumps(fileio.algebra_to_doc(H))
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        rep.line("STRUCTURE", args.output)
    else:
        rep.out.write(text)
    if args.morphism_output:
        doc = fileio.morphism_to_doc(f, target=fileio.algebra_to_doc(obj))
        Path(args.morphism_output).write_text(fileio.dumps(doc), encoding="utf-8")
        rep.line("MORPHISM", args.morphism_output)
    rep.line("HOMOLOGY", " ".join(f"{n}:{d}" for n, d in H.basis.items()),
             dict(H.basis.items()))
    rep.line("ARITIES", ",".join(str(i) for i in sorted(H.ops)) or "none", sorted(H.ops))
    rep.line("ARITY_BOUND", "exact" if H.arity_bound is None else H.arity_bound)
    return True


def _structure(args):
    obj = _load(args.file)
    if isinstance(obj, AInfMorphism):
        raise ParseError("expected an algebra or structure file, got a morphism")
    if isinstance(obj, DgAlgebra):
        run = transfer.transfer_cinf if obj.commutative else transfer.transfer_ainf
        arity = getattr(args, "max_arity", None) or max(obj.basis.top_degree(), 3)
        obj, _ = run(obj, None, arity, obj.basis.top_degree())
    return obj


def _guard_cinf(fn, *a):
    try:
        return fn(*a)
    except invariants.NotCInfinity as exc:
        raise Failure(f"not a C-infinity structure: {exc}") from None
    except transfer.BoundTooSmall as exc:
        raise Failure(str(exc)) from None


def inv_bar(args, rep):
    s = _structure(args)
    ranks = _guard_cinf(invariants.bar_homology, s, args.max_degree)
    rep.line("BAR", " ".join(f"H{k}:{r}" for k, r in ranks.items()), ranks)
    return True


def inv_pi(args, rep):
    s = _structure(args)
    ranks = _guard_cinf(invariants.pi_ranks, s, args.max_degree)
    rep.line("INDEXING", "pi^(k+1) = H^k(QB)")
    rep.line("PI", " ".join(f"π{str(k).translate(SUPERSCRIPT)}:{r}" for k, r in ranks.items()),
             {str(k): r for k, r in ranks.items()})
    return True


def inv_formality(args, rep):
    s = _structure(args)
    v = _guard_cinf(invariants.formality_verdict, s, args.max_arity)
    rep.line("FORMALITY", v.status)
    rep.line("DEFINITIVE", "yes" if v.definitive else "no", v.definitive)
    rep.line("BOUND", v.bound)
    if v.obstruction:
        ob = v.obstruction
        rep.line("OBSTRUCTION_ARITY", ob["arity"])
        rep.line("OBSTRUCTION", "; ".join(f"{ainf.format_word(w)} -> {format_vector(val)}"
                                          for w, val in sorted(ob["cocycle"].items())),
                 ob["cocycle"])
        rep.line("HARRISON_DIM", len(ob["cohomology_basis"]))
    return True


def inv_classify(args, rep):
    c = invariants.classify_s2s2s5(args.p, args.q, args.p2, args.q2)
    rep.line("CLASSIFICATION", str(c))
    if c.same:
        a, b, cc, d, r = c.matrix
        v = ainf.check_morphism(c.witness, 12)
        rep.line("WITNESS", f"x->{a}x+{b}y y->{cc}x+{d}y z->{r}z", list(c.matrix))
        rep.line("WITNESS_CHECK", "pass" if v else "fail")
    return True


def inv_realize(args, rep):
    if args.map:
        f = _load(args.map)
        if not isinstance(f, AInfMorphism):
            raise ParseError("--map must be a morphism file")
        src, tgt, G = f.source, f.target, f
    else:
        if not (args.source and args.target):
            raise ParseError("realize needs --map, or --source and --target")
        src, tgt = _load(args.source), _load(args.target)
        if not all(isinstance(x, AInfStructure) for x in (src, tgt)):
            raise ParseError("realize expects minimal structure files")
        if src.basis != tgt.basis:
            raise ParseError("--identity needs structures on the same basis")
        G = {a: {a: 1} for a in src.letters}
    try:
        res = invariants.realize_search(src, tgt, G, args.max_arity)
    except ValueError as exc:
        raise Failure(str(exc)) from None
    if res.ok:
        rep.line("REALIZE", "extended")
        rep.line("ARITIES", ",".join(str(i) for i in sorted(res.morphism.components)))
        v = ainf.check_morphism(res.morphism, args.max_degree or 12, args.max_arity)
        rep.line("MORPHISM_CHECK", "pass" if v else "fail")
    else:
        rep.line("REALIZE", f"obstruction at arity {res.arity}")
        rep.line("RESIDUAL", "; ".join(f"{ainf.format_word(w)} -> {format_vector(v)}"
                                       for w, v in sorted(res.residual.items())), res.residual)
    return True


def build_parser():
    ap = argparse.ArgumentParser(prog="cinfinity",
                                 description="A-infinity and C-infinity structures over the rationals")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="validate an algebra, structure or morphism file")
    c.add_argument("file")
    c.add_argument("--max-degree", type=int, required=True)
    c.add_argument("--cinf", action="store_true", help="also require shuffle vanishing")
    c.add_argument("--json", action="store_true")
    c.set_defaults(run=cmd_check)

    t = sub.add_parser("transfer", help="minimal model on cohomology")
    t.add_argument("file")
    t.add_argument("--max-arity", type=int, required=True)
    t.add_argument("--max-degree", type=int, required=True)
    t.add_argument("--seed", type=int)
    t.add_argument("--cinf", action="store_true")
    t.add_argument("-o", "--output")
    t.add_argument("--morphism-output")
    t.add_argument("--json", action="store_true")
    t.set_defaults(run=cmd_transfer)

    inv = sub.add_parser("invariants", help="homotopy invariants of a minimal structure")
    isub = inv.add_subparsers(dest="invariant", required=True)
    b = isub.add_parser("bar", help="bar construction homology ranks")
    b.add_argument("file")
    b.add_argument("--max-degree", type=int, required=True)
    b.set_defaults(run=inv_bar)
    p = isub.add_parser("pi", help="ranks of rational homotopy groups")
    p.add_argument("file")
    p.add_argument("--max-degree", type=int, required=True)
    p.set_defaults(run=inv_pi)
    f = isub.add_parser("formality", help="formality verdict from Harrison obstructions")
    f.add_argument("file")
    f.add_argument("--max-arity", type=int, required=True)
    f.set_defaults(run=inv_formality)
    k = isub.add_parser("classify-example", help="compare two structures on H*(S2 v S2 v S5)")
    for name in ("--p", "--q", "--p2", "--q2"):
        k.add_argument(name, type=fileio.parse_rational, required=True)
    k.set_defaults(run=inv_classify)
    r = isub.add_parser("realize", help="extend a map of cohomology algebras")
    r.add_argument("--map", help="morphism file whose arity-1 component is G")
    r.add_argument("--source")
    r.add_argument("--target")
    r.add_argument("--identity", action="store_true", help="G = identity (default without --map)")
    r.add_argument("--max-arity", type=int, required=True)
    r.add_argument("--max-degree", type=int)
    r.set_defaults(run=inv_realize)
    for sp in (b, p, f, k, r):
        sp.add_argument("--json", action="store_true")
    return ap


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    rep = Report(out)
    try:
        ok = args.run(args, rep)
        code = 0 if ok else 1
    except Failure as exc:
        rep.line("STATUS", "fail")
        rep.line("ERROR", str(exc))
        code = 1
    except ParseError as exc:
        rep.line("STATUS", "error")
        rep.line("ERROR", str(exc))
        code = 2
    if getattr(args, "json", False):
        rep.dump_json()
    return code


if __name__ == "__main__":
    sys.exit(main())
