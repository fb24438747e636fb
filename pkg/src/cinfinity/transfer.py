"""Homotopy transfer from a finite (c)dg algebra to a minimal structure on its cohomology."""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .ainf import AInfMorphism, AInfStructure, _project, from_shifted
from .barcoalg import extend_coalgebra_map, extend_coderivation, iter_words
from .exactlin import SparseMatrix, kernel_basis, reduce_against, row_space, solve
from .graded import GradedBasis, GradedMap, as_vector, vadd


class InvalidAlgebra(ValueError):
    """An axiom fails; ``axiom`` names it."""

    def __init__(self, axiom, detail=""):
        super().__init__(f"{axiom}: {detail}" if detail else axiom)
        self.axiom = axiom


class BoundTooSmall(ValueError):
    pass


class CorrectionUnsolvable(RuntimeError):
    pass


def _mul_table(basis, product):
    """Full product table, unit entries filled in and checked."""
    e = basis.unit
    table = {}
    for key, val in product.items():
        a, b = key
        for n in key:
            if n not in basis:
                raise InvalidAlgebra("generators", f"unknown generator {n!r}")
        val = as_vector(val)
        if e is not None and e in key:
            other = b if a == e else a
            if val != as_vector({other: 1}):
                raise InvalidAlgebra("unit", f"{a}*{b} must equal {other}")
            continue
        for t in val:
            if t not in basis:
                raise InvalidAlgebra("generators", f"unknown generator {t!r}")
            if basis.degree(t) != basis.degree(a) + basis.degree(b):
                raise InvalidAlgebra("homogeneity", f"{a}*{b} has a term {t} of the wrong degree")
            if t == e:
                raise InvalidAlgebra("augmentation", f"{a}*{b} has a unit component")
        if val:
            table[a, b] = val
    if e is not None:
        for n in basis.names:
            table[e, n] = {n: Fraction(1)}
            if n != e:
                table[n, e] = {n: Fraction(1)}
    return table


class DgAlgebra:
    """Finite dg algebra with a named basis, a unit and an augmentation.

    ``differential`` maps generator names to vectors, ``product`` maps pairs of
    names to vectors; missing entries are zero and unit products may be omitted.
    Every axiom is checked on construction.
    """

    def __init__(self, basis, differential=None, product=None, commutative=False):
        if basis.unit is None:
            raise InvalidAlgebra("unit", "a unit generator is required")
        if basis.degree(basis.unit) != 0:
            raise InvalidAlgebra("unit", "the unit must have degree 0")
        if any(basis.degree(n) < 0 for n in basis):
            raise InvalidAlgebra("grading", "degrees must be nonnegative")
        self.basis = basis
        self.unit = basis.unit
        self.commutative = bool(commutative)
        try:
            self.d = GradedMap(basis, basis, 1, differential or {})
        except ValueError as exc:
            raise InvalidAlgebra("homogeneity", str(exc)) from None
        self.mul = _mul_table(basis, product or {})
        self._validate()

    def times(self, u, v):
        out = {}
        for a, x in u.items():
            for b, y in v.items():
                img = self.mul.get((a, b))
                if img:
                    vadd(out, img, x * y)
        return out

    def sign(self, a):
        return -1 if self.basis.degree(a) % 2 else 1

    def _validate(self):
        names = self.basis.names
        e = self.unit
        if self.d({e: 1}):
            raise InvalidAlgebra("unit", "d(unit) must vanish")
        for a in names:
            if self.d(self.d({a: 1})):
                raise InvalidAlgebra("d^2", f"d(d({a})) != 0")
            if e in self.d.images.get(a, {}):
                raise InvalidAlgebra("augmentation", f"d({a}) has a unit component")
        for a in names:
            for b in names:
                ab = self.times({a: 1}, {b: 1})
                lhs = self.d(ab)
                rhs = self.times(self.d({a: 1}), {b: 1})
                vadd(rhs, self.times({a: 1}, self.d({b: 1})), self.sign(a))
                if lhs != rhs:
                    raise InvalidAlgebra("leibniz", f"d({a}*{b})")
                if self.commutative:
                    s = -1 if (self.basis.degree(a) * self.basis.degree(b)) % 2 else 1
                    ba = self.times({b: 1}, {a: 1})
                    if ab != {k: s * v for k, v in ba.items()}:
                        raise InvalidAlgebra("commutativity", f"{a}*{b} vs {b}*{a}")
        for a in names:
            for b in names:
                ab = self.times({a: 1}, {b: 1})
                if not ab:
                    continue
                for c in names:
                    if self.times(ab, {c: 1}) != self.times({a: 1}, self.times({b: 1}, {c: 1})):
                        raise InvalidAlgebra("associativity", f"({a}*{b})*{c}")

    def to_ainf(self):
        red = set(self.basis.reduced)
        ops = {1: {(a,): v for a, v in self.d.images.items() if a in red},
               2: {k: v for k, v in self.mul.items() if k[0] in red and k[1] in red}}
        return AInfStructure(self.basis, ops, cinf=self.commutative)

    def __repr__(self):
        kind = "cdga" if self.commutative else "dga"
        return f"DgAlgebra({kind}, {self.basis!r})"


@dataclass
class TransferData:
    homology_basis: GradedBasis
    section: GradedMap
    projection: GradedMap
    homotopy: GradedMap


def _dense(vec, names):
    return [vec.get(n, Fraction(0)) for n in names]


def _named(dense, names):
    return {names[i]: c for i, c in enumerate(dense) if c}


def build_transfer_data(a, seed=None):
    """Splitting ``A = im(section) + im(d) + complement`` degree by degree.

    Representatives are reduced modulo boundaries, and each homology generator
    is named after the leading basis element of its representative.  A seed
    perturbs representatives by boundaries and complements by cycles.
    """
    rng = random.Random(seed) if seed is not None else None
    basis = a.basis
    blocks = {}
    for n in basis.reduced:
        blocks.setdefault(basis.degree(n), []).append(n)
    hgens, section, projection, homotopy = [], {}, {}, {}
    e = a.unit
    hgens.append((e, 0))
    section[e] = {e: 1}
    projection[e] = {e: 1}
    lifted = []  # (boundary vector, preimage vector) for the current degree
    degrees = sorted(blocks)
    for k in range(degrees[0], degrees[-1] + 1) if degrees else []:
        cur = blocks.get(k, [])
        nxt = blocks.get(k + 1, [])
        if not cur:
            lifted = []
            continue
        row = {t: i for i, t in enumerate(nxt)}
        ent = {}
        for j, n in enumerate(cur):
            for t, c in a.d.images.get(n, {}).items():
                ent[row[t], j] = c
        dk = SparseMatrix(len(nxt), len(cur), ent)
        cycles = kernel_basis(dk)
        bounds = [_dense(b, cur) for b, _ in lifted]
        redB, pivB = row_space(bounds, len(cur))
        rem = []
        for z in cycles:
            r = reduce_against({j: c for j, c in enumerate(z) if c}, redB, pivB)
            if r:
                rem.append(r)
        reps, pivR = row_space(rem, len(cur))
        redZ, pivZ = row_space(cycles, len(cur))
        comp = []
        for j in range(len(cur)):
            if j not in set(pivZ):
                v = [Fraction(0)] * len(cur)
                v[j] = Fraction(1)
                comp.append(v)
        rep_vecs = [[r.get(j, Fraction(0)) for j in range(len(cur))] for r in reps]
        if rng is not None:
            for v in rep_vecs:
                for b in bounds:
                    c = rng.randint(-2, 2)
                    for j in range(len(cur)):
                        v[j] += c * b[j]
            for v in comp:
                for z in cycles:
                    c = rng.randint(-2, 2)
                    for j in range(len(cur)):
                        v[j] += c * z[j]
        names = [cur[p] for p in pivR]
        for nm, v in zip(names, rep_vecs):
            hgens.append((nm, k))
            section[nm] = _named(v, cur)
        # coordinates in the adapted basis reps | bounds | comp
        cols = rep_vecs + bounds + comp
        m = SparseMatrix.from_columns([{i: c for i, c in enumerate(v) if c} for v in cols], len(cur))
        nr, nb = len(rep_vecs), len(bounds)
        for i, n in enumerate(cur):
            rhs = [Fraction(0)] * len(cur)
            rhs[i] = Fraction(1)
            x = solve(m, rhs)
            projection[n] = {names[r]: x[r] for r in range(nr) if x[r]}
            h = {}
            for b in range(nb):
                if x[nr + b]:
                    vadd(h, lifted[b][1], x[nr + b])
            homotopy[n] = h
        lifted = []
        for v in comp:
            img = a.d(_named(v, cur))
            lifted.append((img, _named(v, cur)))
    hb = GradedBasis(hgens, unit=e)
    return TransferData(hb, GradedMap(hb, basis, 0, section), GradedMap(basis, hb, 0, projection),
                        GradedMap(basis, basis, -1, homotopy))


def _top_shift(basis):
    return max((basis.degree(n) - 1 for n in basis.reduced), default=-1)


def _exact_bound(h_basis, a_basis, max_arity):
    """``None`` if no operation above ``max_arity`` can be nonzero, else ``max_arity``."""
    letters = h_basis.reduced
    if not letters:
        return None
    lo = min(h_basis.degree(n) - 1 for n in letters)
    if lo >= 1 and (max_arity + 1) * lo > _top_shift(a_basis):
        return None
    return max_arity


def transfer_ainf(a, t=None, max_arity=4, max_degree=None):
    """Minimal A-infinity structure on ``H(A)`` and the weak equivalence to ``A``.

    Arity by arity, ``U = -p1(F d_H - d_A F)`` is evaluated with the new
    components set to zero; then ``m_n = pi U`` and ``f_n = -h U``.
    """
    if max_degree is not None and max_degree < a.basis.top_degree():
        raise BoundTooSmall(
            f"max degree {max_degree} is below the top degree {a.basis.top_degree()} of the algebra")
    t = t or build_transfer_data(a)
    A = a.to_ainf()
    hb = t.homology_basis
    hdeg = {n: hb.degree(n) - 1 for n in hb.reduced}
    top = _top_shift(a.basis)
    phi = {1: {(n,): dict(t.section.images[n]) for n in hb.reduced if t.section.images.get(n)}}
    beta = {}
    for n in range(2, max_arity + 1):
        F = extend_coalgebra_map(phi, hdeg, max_length=2)
        dH = extend_coderivation(beta, hdeg)
        bn, fn = {}, {}
        for w in iter_words(hb.reduced, hdeg, n, length=n, max_degree=top):
            E = _project(phi, dH({w: 1}))
            vadd(E, _project(A.shifted, F({w: 1})), -1)
            if not E:
                continue
            U = {k: -c for k, c in E.items()}
            m = t.projection(U)
            m.pop(hb.unit, None)
            if m:
                bn[w] = m
            f = t.homotopy(U)
            if f:
                fn[w] = {k: -c for k, c in f.items()}
        if bn:
            beta[n] = bn
        if fn:
            phi[n] = fn
    bound = _exact_bound(hb, a.basis, max_arity)
    ops = {n: from_shifted(tab, hb) for n, tab in beta.items()}
    H = AInfStructure(hb, ops, arity_bound=bound)
    comps = {n: from_shifted(tab, hb) for n, tab in phi.items()}
    return H, AInfMorphism(H, A, comps, arity_bound=bound)


def transfer_cinf(a, t=None, max_arity=4, max_degree=None):
    """As :func:`transfer_ainf`, landing in C-infinity structures.

    When the transferred operations fail to vanish on shuffles, a Harrison
    correction is applied arity by arity; an unsolvable step raises
    :class:`CorrectionUnsolvable`.
    """
    from .ainf import check_cinf, check_morphism_cinf, compose, invert_iso
    from .hoch import harrison_correct

    if not a.commutative:
        raise InvalidAlgebra("commutativity", "C-infinity transfer needs a commutative algebra")
    H, f = transfer_ainf(a, t, max_arity, max_degree)
    if check_cinf(H) and check_morphism_cinf(f):
        H.cinf = True
        f.source.cinf = True
        f.cinf = True
        return H, f
    H2, P = harrison_correct(H, max_arity)
    # f o P^{-1} connects the corrected structure to A
    g = compose(f, invert_iso(P, max_arity), max_arity=max_arity)
    if not check_cinf(H2):
        raise CorrectionUnsolvable("the corrected structure still fails shuffle vanishing")
    if not check_morphism_cinf(g):
        raise CorrectionUnsolvable("the connecting morphism does not vanish on shuffles")
    H2.cinf = True
    g.cinf = True
    return H2, g
