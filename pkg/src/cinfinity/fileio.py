"""JSON files for algebras, structures and morphisms.

Rationals are strings ``"a"`` or ``"a/b"``.  Output is canonical: generators
in input order, table entries sorted by their inputs, terms by name.
"""
from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path

from .ainf import AInfMorphism, AInfStructure, InvalidStructure
from .graded import GradedBasis
from .transfer import DgAlgebra

KINDS = ("dga", "cdga", "ainf", "cinf")
_RATIONAL = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


class ParseError(ValueError):
    pass


def parse_rational(text):
    if not isinstance(text, str):
        raise ParseError(f"rational must be a string, got {text!r}")
    m = _RATIONAL.match(text)
    if not m:
        raise ParseError(f"malformed rational {text!r}")
    num, den = int(m.group(1)), int(m.group(2) or 1)
    if den == 0:
        raise ParseError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def format_rational(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _vector(terms, where):
    if not isinstance(terms, list):
        raise ParseError(f"{where}: value must be a list of [name, rational] pairs")
    out = {}
    for t in terms:
        if not (isinstance(t, list) and len(t) == 2 and isinstance(t[0], str)):
            raise ParseError(f"{where}: bad term {t!r}")
        c = parse_rational(t[1])
        out[t[0]] = out.get(t[0], Fraction(0)) + c
    return {k: v for k, v in out.items() if v}


def _table(entries, arity, where):
    if not isinstance(entries, list):
        raise ParseError(f"{where}: expected a list of entries")
    table = {}
    for e in entries:
        if not isinstance(e, dict) or "on" not in e or "value" not in e:
            raise ParseError(f"{where}: entries need 'on' and 'value'")
        on = e["on"]
        key = (on,) if isinstance(on, str) else tuple(on)
        if not all(isinstance(n, str) for n in key):
            raise ParseError(f"{where}: 'on' must name generators")
        if arity is not None and len(key) != arity:
            raise ParseError(f"{where}: entry {list(key)} has arity {len(key)}, expected {arity}")
        if key in table:
            raise ParseError(f"{where}: duplicate entry {list(key)}")
        table[key] = _vector(e["value"], where)
    return table


def _basis(doc):
    gens = doc.get("generators")
    if not isinstance(gens, list) or not gens:
        raise ParseError("'generators' must be a nonempty list")
    items = []
    for g in gens:
        if not isinstance(g, dict) or not isinstance(g.get("name"), str) \
                or not isinstance(g.get("degree"), int) or isinstance(g.get("degree"), bool):
            raise ParseError(f"bad generator {g!r}")
        items.append((g["name"], g["degree"]))
    try:
        return GradedBasis(items, unit=doc.get("unit"))
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def algebra_from_doc(doc):
    """DgAlgebra or AInfStructure from a parsed JSON document.

    Structural problems raise ParseError; failing axioms raise the
    validation errors of the corresponding module.
    """
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise ParseError(f"'kind' must be one of {', '.join(KINDS)}")
    basis = _basis(doc)
    diff = {k[0]: v for k, v in _table(doc.get("differential", []), 1, "differential").items()}
    prod = _table(doc.get("product", []), 2, "product")
    if kind in ("dga", "cdga"):
        if doc.get("operations"):
            raise ParseError("dg algebras take 'differential' and 'product', not 'operations'")
        return DgAlgebra(basis, diff, prod, commutative=(kind == "cdga"))
    ops = {}
    raw = doc.get("operations", {})
    if not isinstance(raw, dict):
        raise ParseError("'operations' must map arities to tables")
    for key, entries in raw.items():
        if not re.fullmatch(r"[1-9]\d*", str(key)):
            raise ParseError(f"bad arity {key!r}")
        ops[int(key)] = _table(entries, int(key), f"operations[{key}]")
    if diff:
        ops.setdefault(1, {(k,): v for k, v in diff.items()})
    if prod:
        unit = basis.unit
        ops.setdefault(2, {k: v for k, v in prod.items() if unit not in k})
    bound = doc.get("arity_bound")
    if bound is not None and (not isinstance(bound, int) or isinstance(bound, bool) or bound < 1):
        raise ParseError("'arity_bound' must be a positive integer")
    return AInfStructure(basis, ops, arity_bound=bound, cinf=(kind == "cinf"))


def _entries(table):
    out = []
    for key in sorted(table):
        val = table[key]
        out.append({"on": list(key),
                    "value": [[n, format_rational(c)] for n, c in sorted(val.items()) if c]})
    return out


def _generators(basis):
    return [{"name": n, "degree": d} for n, d in basis.items()]


def algebra_to_doc(obj):
    if isinstance(obj, DgAlgebra):
        unit = obj.unit
        doc = {"kind": "cdga" if obj.commutative else "dga",
               "generators": _generators(obj.basis), "unit": unit,
               "differential": _entries({(k,): v for k, v in obj.d.images.items()}),
               "product": _entries({k: v for k, v in obj.mul.items() if unit not in k})}
        return doc
    if isinstance(obj, AInfStructure):
        doc = {"kind": "cinf" if obj.cinf else "ainf", "generators": _generators(obj.basis)}
        if obj.basis.unit is not None:
            doc["unit"] = obj.basis.unit
        doc["operations"] = {str(i): _entries(op.table) for i, op in sorted(obj.ops.items())}
        if obj.arity_bound is not None:
            doc["arity_bound"] = obj.arity_bound
        return doc
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _compact(x):
    return json.dumps(x, ensure_ascii=False)


def dumps(doc):
    """Stable layout: one line per generator and per table entry."""
    lines = ["{"]
    items = list(doc.items())
    for i, (key, val) in enumerate(items):
        tail = "," if i < len(items) - 1 else ""
        head = f"  {_compact(key)}: "
        if isinstance(val, list) and val:
            lines.append(head + "[")
            lines += [f"    {_compact(v)}" + ("," if j < len(val) - 1 else "") for j, v in enumerate(val)]
            lines.append("  ]" + tail)
        elif isinstance(val, dict) and val and key != "source" and key != "target":
            lines.append(head + "{")
            sub = list(val.items())
            for j, (k, entries) in enumerate(sub):
                stail = "," if j < len(sub) - 1 else ""
                if entries:
                    lines.append(f"    {_compact(k)}: [")
                    lines += [f"      {_compact(v)}" + ("," if m < len(entries) - 1 else "")
                              for m, v in enumerate(entries)]
                    lines.append("    ]" + stail)
                else:
                    lines.append(f"    {_compact(k)}: []" + stail)
            lines.append("  }" + tail)
        elif isinstance(val, dict) and val:
            inner = json.dumps(val, indent=2, ensure_ascii=False).replace("\n", "\n  ")
            lines.append(head + inner + tail)
        else:
            lines.append(head + _compact(val) + tail)
    lines.append("}")
    return "\n".join(lines) + "\n"


def _read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh, parse_float=_no_float)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def _no_float(text):
    raise ParseError(f"floating point number {text} is not allowed; use a rational string")


def loads_algebra(text):
    try:
        doc = json.loads(text, parse_float=_no_float)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON ({exc.msg})") from None
    return algebra_from_doc(doc)


def load_algebra(path):
    return algebra_from_doc(_read_json(path))


def save_algebra(obj, path):
    Path(path).write_text(dumps(algebra_to_doc(obj)), encoding="utf-8")


def as_structure(obj):
    return obj.to_ainf() if isinstance(obj, DgAlgebra) else obj


def morphism_from_doc(doc, root=None):
    if not isinstance(doc, dict) or doc.get("kind") != "morphism":
        raise ParseError("a morphism file needs \"kind\": \"morphism\"")
    ends = []
    for side in ("source", "target"):
        ref = doc.get(side)
        if isinstance(ref, str):
            p = Path(ref)
            if root is not None and not p.is_absolute():
                p = Path(root) / p
            ends.append(as_structure(load_algebra(p)))
        elif isinstance(ref, dict):
            ends.append(as_structure(algebra_from_doc(ref)))
        else:
            raise ParseError(f"'{side}' must be a path or an inline algebra")
    raw = doc.get("components", {})
    if not isinstance(raw, dict):
        raise ParseError("'components' must map arities to tables")
    comps = {}
    for key, entries in raw.items():
        if not re.fullmatch(r"[1-9]\d*", str(key)):
            raise ParseError(f"bad arity {key!r}")
        comps[int(key)] = _table(entries, int(key), f"components[{key}]")
    bound = doc.get("arity_bound")
    return AInfMorphism(ends[0], ends[1], comps, arity_bound=bound, cinf=bool(doc.get("cinf")))


def morphism_to_doc(f, source=None, target=None):
    """``source``/``target`` may be paths or documents; inline documents by default."""
    return {"kind": "morphism",
            "source": source if source is not None else algebra_to_doc(f.source),
            "target": target if target is not None else algebra_to_doc(f.target),
            "components": {str(i): _entries(op.table) for i, op in sorted(f.components.items())},
            **({"arity_bound": f.arity_bound} if f.arity_bound is not None else {}),
            **({"cinf": True} if f.cinf else {})}


def load_morphism(path):
    return morphism_from_doc(_read_json(path), root=Path(path).parent)


def load_any(path):
    """Algebra, structure or morphism, by the ``kind`` field."""
    doc = _read_json(path)
    if isinstance(doc, dict) and doc.get("kind") == "morphism":
        return morphism_from_doc(doc, root=Path(path).parent)
    return algebra_from_doc(doc)


LOAD_ERRORS = (ParseError, InvalidStructure)
