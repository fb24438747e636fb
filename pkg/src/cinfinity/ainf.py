"""A-infinity and C-infinity structures and morphisms.

Operations are stored the way a user writes them: ``m_i`` on the graded
space itself, with ``deg m_i = 2 - i`` and ``deg f_i = 1 - i``.  All identities
(Stasheff relations, morphism equations, composition) are evaluated on the
reduced bar construction, where ``m_i`` becomes a degree +1 map on the
desuspension via :func:`graded.shift_sign`.  Inputs never contain the unit:
units are strict and handled by the reduced convention.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .barcoalg import (extend_coalgebra_map, extend_coderivation, iter_words,
                       shuffle, shuffle_elements, word_degree)
from .exactlin import SparseMatrix, quotient_and_homology, rank, solve
from .graded import as_vector, shift_sign, vadd


class SourceTargetMismatch(ValueError):
    pass


class NotIso(ValueError):
    pass


class InvalidStructure(ValueError):
    pass


@dataclass
class Witness:
    word: tuple
    value: dict

    def __str__(self):
        return f"{format_word(self.word)} -> {format_vector(self.value)}"


@dataclass
class Verdict:
    ok: bool
    witness: Witness | None = None
    message: str = ""

    def __bool__(self):
        return self.ok


def format_word(word):
    if word and isinstance(word[0], tuple):
        return " * ".join("[" + ",".join(w) + "]" for w in word)
    return "[" + ",".join(word) + "]"


def format_vector(vec):
    if not vec:
        return "0"
    parts = []
    for k, c in vec.items():
        name = format_word(k) if isinstance(k, tuple) else k
        parts.append(f"{c}*{name}" if c != 1 else name)
    return " + ".join(parts)


class MultiOp:
    """Multilinear operation of fixed arity and degree given by a sparse table."""

    def __init__(self, arity, degree, table=None):
        self.arity = int(arity)
        self.degree = int(degree)
        clean = {}
        for key, val in (table or {}).items():
            key = tuple(key)
            if len(key) != self.arity:
                raise InvalidStructure(f"entry {key} has the wrong arity for m{self.arity}")
            val = as_vector(val)
            if val:
                clean[key] = val
        self.table = clean

    def __call__(self, *args):
        return dict(self.table.get(tuple(args), {}))

    def __bool__(self):
        return bool(self.table)

    def __eq__(self, other):
        if not isinstance(other, MultiOp):
            return NotImplemented
        return (self.arity, self.degree, self.table) == (other.arity, other.degree, other.table)

    def __repr__(self):
        return f"MultiOp(arity={self.arity}, degree={self.degree}, entries={len(self.table)})"


def _check_table(op, source, target, expected_degree, label):
    if op.degree != expected_degree:
        raise InvalidStructure(f"{label} must have degree {expected_degree}, got {op.degree}")
    for key, val in op.table.items():
        for a in key:
            if a not in source:
                raise InvalidStructure(f"{label}: unknown generator {a!r}")
            if a == source.unit:
                raise InvalidStructure(f"{label}: the unit {a!r} cannot be an input")
        want = sum(source.degree(a) for a in key) + op.degree
        for t in val:
            if t not in target:
                raise InvalidStructure(f"{label}: unknown generator {t!r}")
            if t == target.unit:
                raise InvalidStructure(f"{label}{key}: output leaves the augmentation ideal")
            if target.degree(t) != want:
                raise InvalidStructure(
                    f"{label}{key}: term {t} has degree {target.degree(t)}, expected {want}")


def to_shifted(table, basis):
    """Transport an operation table to the desuspension."""
    out = {}
    for key, val in table.items():
        s = shift_sign([basis.degree(a) for a in key])
        out[key] = val if s == 1 else {t: -c for t, c in val.items()}
    return out


from_shifted = to_shifted  # the sign is an involution


def _coerce_ops(ops, degree_of_arity):
    out = {}
    for i, op in (ops or {}).items():
        i = int(i)
        if not isinstance(op, MultiOp):
            op = MultiOp(i, degree_of_arity(i), op)
        if op.arity != i:
            raise InvalidStructure(f"operation stored under arity {i} has arity {op.arity}")
        if op:
            out[i] = op
    return out


class AInfStructure:
    """An A-infinity structure ``{m_i}`` on a graded basis.

    ``arity_bound`` is the arity through which the structure is specified
    (operations above it are unknown, relations are only checked up to it);
    ``None`` means every operation not listed is exactly zero.
    """

    def __init__(self, basis, ops=None, arity_bound=None, cinf=False):
        self.basis = basis
        self.ops = _coerce_ops(ops, lambda i: 2 - i)
        for i, op in self.ops.items():
            if i < 1:
                raise InvalidStructure("operations start at arity 1")
            _check_table(op, basis, basis, 2 - i, f"m{i}")
        if arity_bound is not None and self.ops and max(self.ops) > arity_bound:
            raise InvalidStructure("operation above the arity bound")
        self.arity_bound = arity_bound
        self.cinf = bool(cinf)

    @property
    def minimal(self):
        return 1 not in self.ops

    @property
    def letters(self):
        return self.basis.reduced

    @cached_property
    def deg(self):
        """Desuspended degrees of the bar letters."""
        return {a: self.basis.degree(a) - 1 for a in self.basis.reduced}

    @cached_property
    def shifted(self):
        return {i: to_shifted(op.table, self.basis) for i, op in self.ops.items()}

    def op(self, i):
        return self.ops.get(i, MultiOp(i, 2 - i))

    @property
    def max_arity(self):
        return max(self.ops, default=0)

    def relation_arity(self):
        """Largest arity at which the Stasheff relations can be nontrivial."""
        if self.arity_bound is not None:
            return self.arity_bound
        return max(2 * self.max_arity - 1, 1)

    def higher_ops_vanish(self):
        return all(i <= 2 for i in self.ops)

    def __eq__(self, other):
        if not isinstance(other, AInfStructure):
            return NotImplemented
        return (self.basis == other.basis and self.ops == other.ops
                and self.arity_bound == other.arity_bound and self.cinf == other.cinf)

    def __repr__(self):
        return (f"AInfStructure({self.basis!r}, arities={sorted(self.ops)}, "
                f"bound={self.arity_bound}, cinf={self.cinf})")


class AInfMorphism:
    """A-infinity morphism ``{f_i}: source -> target`` (``deg f_i = 1 - i``)."""

    def __init__(self, source, target, components=None, arity_bound=None, cinf=False):
        self.source = source
        self.target = target
        self.components = _coerce_ops(components, lambda i: 1 - i)
        for i, op in self.components.items():
            _check_table(op, source.basis, target.basis, 1 - i, f"f{i}")
        self.arity_bound = arity_bound
        self.cinf = bool(cinf)

    @cached_property
    def shifted(self):
        return {i: to_shifted(op.table, self.source.basis) for i, op in self.components.items()}

    def component(self, i):
        return self.components.get(i, MultiOp(i, 1 - i))

    @property
    def max_arity(self):
        return max(self.components, default=0)

    def __repr__(self):
        return f"AInfMorphism(arities={sorted(self.components)}, bound={self.arity_bound})"


def identity_morphism(s):
    return AInfMorphism(s, s, {1: {(a,): {a: 1} for a in s.letters}}, cinf=s.cinf)


def strict_part(s):
    """The graded algebra ``(M, m2)`` underlying a minimal structure."""
    ops = {2: s.ops[2]} if 2 in s.ops else {}
    return AInfStructure(s.basis, ops, cinf=s.cinf)


def bar_differential(s):
    """The coderivation ``d_beta`` of the reduced bar construction."""
    return extend_coderivation(s.shifted, s.deg, degree=1)


def bar_map(f, max_length=None):
    """The coalgebra map ``B(f)`` between reduced bar constructions."""
    return extend_coalgebra_map(f.shifted, f.source.deg, degree=0, max_length=max_length)


def _project(tables, elem):
    """Length-one projection of a family applied to whole words of ``elem``."""
    out = {}
    for w, c in elem.items():
        t = tables.get(len(w))
        if t:
            img = t.get(w)
            if img:
                vadd(out, img, c)
    return out


def _useful_degree(basis):
    """Largest desuspended degree a bar letter of ``basis`` can have."""
    return max((basis.degree(a) - 1 for a in basis.reduced), default=-1)


def check_stasheff(s, max_degree, max_arity=None, full=False):
    """Verify ``d_beta o d_beta = 0`` on bar words of degree <= ``max_degree``.

    By default the length-one projection is checked on words up to the
    relation arity, which is equivalent since ``d_beta^2`` is a coderivation;
    ``full=True`` expands the whole square instead.
    """
    limit = max_arity or s.relation_arity()
    d = bar_differential(s)
    if not full:
        # the projection has degree +2; beyond the top letter it is zero
        max_degree = min(max_degree, _useful_degree(s.basis) - 2)
    for w in iter_words(s.letters, s.deg, limit, max_degree=max_degree):
        once = d({w: 1})
        val = d(once) if full else _project(s.shifted, once)
        if val:
            return Verdict(False, Witness(w, val), "d o d is nonzero")
    return Verdict(True)


def shuffle_defect(table, deg, letters, arity, degrees=None):
    """First ``(u, v, value)`` with ``op(u * v) != 0``, or ``None``."""
    for w in iter_words(letters, deg, arity, length=arity):
        if degrees is not None and word_degree(w, deg) not in degrees:
            continue
        for k in range(1, arity):
            u, v = w[:k], w[k:]
            val = {}
            for x, c in shuffle(u, v, deg).items():
                img = table.get(x)
                if img:
                    vadd(val, img, c)
            if val:
                return u, v, val
    return None


def _table_degrees(table, deg):
    return {word_degree(k, deg) for k in table}


def check_cinf(s):
    """Verify every ``m_i`` (i >= 2) vanishes on shuffles of basis words."""
    for i in sorted(s.shifted):
        if i < 2:
            continue
        table = s.shifted[i]
        hit = shuffle_defect(table, s.deg, s.letters, i, _table_degrees(table, s.deg))
        if hit:
            u, v, val = hit
            return Verdict(False, Witness((u, v), val),
                           f"m{i} does not vanish on the shuffle {format_word((u, v))}")
    return Verdict(True)


def check_shuffle_derivation(s, max_length, max_degree=None):
    """Verify ``d(u * v) = d(u) * v + (-1)^|u| u * d(v)`` for words of total length <= ``max_length``.

    The witness word is the pair ``(u, v)`` and its value the difference.
    """
    d = bar_differential(s)
    deg = s.deg
    for u in iter_words(s.letters, deg, max_length - 1, max_degree=max_degree):
        rest = None if max_degree is None else max_degree - word_degree(u, deg)
        for v in iter_words(s.letters, deg, max_length - len(u), max_degree=rest):
            diff = d(shuffle(u, v, deg))
            vadd(diff, shuffle_elements(d({u: 1}), {v: 1}, deg), -1)
            sign = -1 if word_degree(u, deg) % 2 else 1
            vadd(diff, shuffle_elements({u: 1}, d({v: 1}), deg), -sign)
            if diff:
                return Verdict(False, Witness((u, v), diff),
                               f"d is not a derivation on {format_word(u)} * {format_word(v)}")
    return Verdict(True)


def check_morphism_cinf(f):
    for i in sorted(f.shifted):
        if i < 2:
            continue
        table = f.shifted[i]
        hit = shuffle_defect(table, f.source.deg, f.source.letters, i,
                             _table_degrees(table, f.source.deg))
        if hit:
            u, v, val = hit
            return Verdict(False, Witness((u, v), val),
                           f"f{i} does not vanish on the shuffle {format_word((u, v))}")
    return Verdict(True)


def morphism_arity(f):
    bounds = [b for b in (f.arity_bound, f.source.arity_bound, f.target.arity_bound)
              if b is not None]
    if bounds:
        return min(bounds)
    kf = max(f.max_arity, 1)
    return max(kf + f.source.max_arity - 1, f.target.max_arity * kf, 1)


def morphism_defect(f, word):
    """``p1 (F d - d' F)`` on one source word."""
    d = bar_differential(f.source)
    lhs = _project(f.shifted, d({word: 1}))
    F = extend_coalgebra_map(f.shifted, f.source.deg, max_length=max(f.target.max_arity, 1))
    rhs = _project(f.target.shifted, F({word: 1}))
    return vadd(lhs, rhs, -1)


def check_morphism(f, max_degree, max_arity=None):
    """Verify that ``B(f)`` is a chain map on source words of degree <= ``max_degree``."""
    limit = max_arity or morphism_arity(f)
    d = bar_differential(f.source)
    F = extend_coalgebra_map(f.shifted, f.source.deg, max_length=max(f.target.max_arity, 1))
    max_degree = min(max_degree, _useful_degree(f.target.basis) - 1)
    for w in iter_words(f.source.letters, f.source.deg, limit, max_degree=max_degree):
        lhs = _project(f.shifted, d({w: 1}))
        rhs = _project(f.target.shifted, F({w: 1}))
        vadd(lhs, rhs, -1)
        if lhs:
            return Verdict(False, Witness(w, lhs), "B(f) is not a chain map")
    return Verdict(True)


def _bounded(*bounds):
    bounds = [b for b in bounds if b is not None]
    return min(bounds) if bounds else None


def compose(g, f, max_arity=None):
    """The composite ``g o f`` computed through ``B(g) o B(f)``."""
    if f.target is not g.source and not (f.target.basis == g.source.basis
                                          and f.target.ops == g.source.ops):
        raise SourceTargetMismatch("target of f is not the source of g")
    bound = _bounded(f.arity_bound, g.arity_bound)
    limit = max_arity or bound or max(f.max_arity * g.max_arity, 1)
    src = f.source
    F = extend_coalgebra_map(f.shifted, src.deg, max_length=max(g.max_arity, 1))
    top = _useful_degree(g.target.basis)
    comps = {}
    for n in range(1, limit + 1):
        table = {}
        for w in iter_words(src.letters, src.deg, n, length=n, max_degree=top):
            val = _project(g.shifted, F({w: 1}))
            if val:
                table[w] = val
        if table:
            comps[n] = from_shifted(table, src.basis)
    return AInfMorphism(src, g.target, comps,
                        arity_bound=bound if max_arity is None else max_arity,
                        cinf=f.cinf and g.cinf)


def _degree_blocks(basis):
    blocks = {}
    for a in basis.reduced:
        blocks.setdefault(basis.degree(a), []).append(a)
    return blocks


def homology_in_degree(s, k):
    """Representatives (dicts) of a basis of ``H^k(M, m1)`` on the reduced part."""
    blocks = _degree_blocks(s.basis)
    cur = blocks.get(k, [])
    prev = blocks.get(k - 1, [])
    nxt = blocks.get(k + 1, [])
    m1 = s.op(1).table
    def mat(src, tgt):
        row = {t: i for i, t in enumerate(tgt)}
        ent = {}
        for j, a in enumerate(src):
            for t, c in m1.get((a,), {}).items():
                ent[row[t], j] = c
        return SparseMatrix(len(tgt), len(src), ent)
    dim, reps = quotient_and_homology(mat(prev, cur), mat(cur, nxt))
    return [{cur[i]: c for i, c in enumerate(r) if c} for r in reps], cur, prev


def is_weak_equivalence(f, max_degree):
    """True iff ``f1`` is a quasi-isomorphism of ``(M, m1)`` in degrees <= ``max_degree``."""
    src, tgt = f.source, f.target
    f1 = f.component(1).table
    degrees = set(src.basis.degree(a) for a in src.letters) | set(
        tgt.basis.degree(a) for a in tgt.letters)
    for k in sorted(d for d in degrees if d <= max_degree):
        reps, _, _ = homology_in_degree(src, k)
        treps, tcur, tprev = homology_in_degree(tgt, k)
        if len(reps) != len(treps):
            return False
        if not reps:
            continue
        # images must be independent modulo boundaries in the target
        images = []
        for r in reps:
            img = {}
            for a, c in r.items():
                vadd(img, f1.get((a,), {}), c)
            images.append(img)
        m1 = tgt.op(1).table
        bounds = []
        for a in tprev:
            bounds.append(m1.get((a,), {}))
        index = {t: i for i, t in enumerate(tcur)}
        cols = [{index[t]: c for t, c in v.items()} for v in bounds + images]
        m = SparseMatrix.from_columns(cols, len(tcur))
        rb = rank(SparseMatrix.from_columns(cols[:len(bounds)], len(tcur)))
        if rank(m) - rb != len(reps):
            return False
    return True


def _invert_degreewise(f1_table, src, tgt):
    """Inverse of ``f1`` as a table ``{(t,): {a: c}}``; raises NotIso."""
    sb, tb = _degree_blocks(src.basis), _degree_blocks(tgt.basis)
    inv = {}
    for k in set(sb) | set(tb):
        a_names, t_names = sb.get(k, []), tb.get(k, [])
        if len(a_names) != len(t_names):
            raise NotIso(f"f1 is not bijective in degree {k}")
        if not a_names:
            continue
        row = {t: i for i, t in enumerate(t_names)}
        ent = {}
        for j, a in enumerate(a_names):
            for t, c in f1_table.get((a,), {}).items():
                ent[row[t], j] = c
        m = SparseMatrix(len(t_names), len(a_names), ent)
        for i, t in enumerate(t_names):
            e = [Fraction(0)] * len(t_names)
            e[i] = Fraction(1)
            x = solve(m, e)
            if x is None:
                raise NotIso(f"f1 is singular in degree {k}")
            img = {a_names[j]: c for j, c in enumerate(x) if c}
            if img:
                inv[(t,)] = img
    return inv


def invert_iso(f, max_arity=None):
    """Inverse ``g`` with ``g o f = id`` through ``max_arity``, solved arity by arity."""
    src, tgt = f.source, f.target
    limit = max_arity or f.arity_bound or max(f.max_arity, 1) * 4
    psi = {1: _invert_degreewise(f.component(1).table, src, tgt)}
    inv1 = extend_coalgebra_map({1: psi[1]}, tgt.deg)
    top = _useful_degree(src.basis)
    for n in range(2, limit + 1):
        F = extend_coalgebra_map(f.shifted, src.deg, max_length=n - 1)
        table = {}
        for w in iter_words(tgt.letters, tgt.deg, n, length=n, max_degree=top):
            v = inv1({w: 1})
            if not v:
                continue
            val = _project(psi, F(v))
            if val:
                table[w] = {a: -c for a, c in val.items()}
        if table:
            psi[n] = table
    comps = {n: from_shifted(t, tgt.basis) for n, t in psi.items()}
    return AInfMorphism(tgt, src, comps, arity_bound=limit, cinf=f.cinf)


def morphisms_agree(f, g, max_degree, max_arity):
    """Compare two morphisms componentwise on words up to the given bounds."""
    for n in range(1, max_arity + 1):
        a = f.component(n).table
        b = g.component(n).table
        for w in iter_words(f.source.letters, f.source.deg, n, length=n, max_degree=max_degree):
            if a.get(w, {}) != b.get(w, {}):
                return False
    return True
