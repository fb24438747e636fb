"""Hochschild and Harrison cochains of a graded algebra, braces and twisting cochains.

A cochain in ``C^{n,m}`` is a table ``{n-tuple of reduced names: vector}``
whose values have degree (input degree) + m; arity 0 means a single
element.  Cochains are normalized: the unit never appears as an input.
On the desuspension a cochain in ``C^{n,m}`` has degree ``n + m - 1``;
the differential is ``df = (-1)^{|f|} f{b2} - b2{f}`` there, so that a
family ``m = m3 + m4 + ...`` is twisting (``dm = m{m}``) exactly when the
Stasheff relations hold.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .ainf import (AInfMorphism, AInfStructure, _project, compose, from_shifted,
                   shuffle_defect, to_shifted)
from .barcoalg import extend_coalgebra_map, extend_coderivation, iter_words, shuffle
from .exactlin import SparseMatrix, kernel_basis, rank, reduce_against, row_space, solve
from .graded import koszul_sign, shift_sign, vadd


class HochBase:
    """The strict graded algebra ``(H, m2)`` underlying a structure, unit products included."""

    def __init__(self, s):
        if isinstance(s, HochBase):
            s = s.structure
        self.structure = s
        self.basis = s.basis
        self.unit = s.basis.unit
        self.letters = s.basis.reduced
        self.udeg = s.basis.degrees
        self.sdeg = {n: d - 1 for n, d in self.udeg.items()}
        mul = {k: dict(v) for k, v in s.op(2).table.items()}
        if self.unit is not None:
            for n in s.basis.names:
                mul[self.unit, n] = {n: Fraction(1)}
                mul[n, self.unit] = {n: Fraction(1)}
        self.mul = mul
        self.b2 = to_shifted(mul, s.basis)

    def times(self, u, v):
        out = {}
        for a, x in u.items():
            for b, y in v.items():
                img = self.mul.get((a, b))
                if img:
                    vadd(out, img, x * y)
        return out


def _base(b):
    return b if isinstance(b, HochBase) else HochBase(b)


class HochCochain:
    """Sum of bihomogeneous components ``{(n, m): table}`` over a base algebra."""

    def __init__(self, base, components=None):
        self.base = _base(base)
        comps = {}
        for (n, m), table in (components or {}).items():
            clean = {}
            for key, val in table.items():
                key = tuple(key)
                if len(key) != n:
                    raise ValueError(f"entry {key} does not have arity {n}")
                val = {t: Fraction(c) for t, c in val.items() if c}
                if val:
                    clean[key] = val
            if clean:
                comps[int(n), int(m)] = clean
        self.components = comps

    @classmethod
    def single(cls, base, n, m, table):
        return cls(base, {(n, m): table})

    @classmethod
    def unit_cochain(cls, base):
        base = _base(base)
        return cls(base, {(0, 0): {(): {base.unit: 1}}})

    @classmethod
    def identity(cls, base):
        base = _base(base)
        return cls(base, {(1, 0): {(a,): {a: 1} for a in base.letters}})

    def shifted(self):
        return {k: to_shifted(t, self.base.basis) for k, t in self.components.items()}

    def component(self, n, m):
        return self.components.get((n, m), {})

    def __add__(self, other):
        comps = {k: {w: dict(v) for w, v in t.items()} for k, t in self.components.items()}
        for k, t in other.components.items():
            acc = comps.setdefault(k, {})
            for w, v in t.items():
                cur = acc.setdefault(w, {})
                vadd(cur, v)
                if not cur:
                    del acc[w]
        return HochCochain(self.base, comps)

    def scale(self, c):
        return HochCochain(self.base, {k: {w: {t: c * x for t, x in v.items()} for w, v in tab.items()}
                                       for k, tab in self.components.items()})

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def is_zero(self):
        return not self.components

    def __eq__(self, other):
        if not isinstance(other, HochCochain):
            return NotImplemented
        return self.components == other.components

    def truncate(self, max_arity):
        return HochCochain(self.base, {k: t for k, t in self.components.items() if k[0] <= max_arity})

    def vanishes_on_shuffles(self):
        deg = self.base.sdeg
        for (n, m), tab in self.shifted().items():
            if n >= 2 and shuffle_defect(tab, deg, self.base.letters, n):
                return False
        return True

    def __repr__(self):
        return f"HochCochain({sorted(self.components)})"


def _brace_tables(f_tab, g_list, deg, unit):
    """Shifted brace ``f{g_1,...,g_k}`` of single components.

    ``g_list`` holds ``(table, shifted degree)`` pairs.  Every g_i passing the
    input letters in front of it contributes a Koszul sign.
    """
    k = len(g_list)
    out = {}
    for key, fval in f_tab.items():
        n = len(key)
        for pos in itertools.combinations(range(n), k):
            # letters of key that stay inputs must not be the unit
            if any(key[j] == unit for j in range(n) if j not in pos):
                continue
            choices = []
            for (gtab, _), p in zip(g_list, pos):
                target = key[p]
                choices.append([(v, img[target]) for v, img in gtab.items()
                                if target in img and unit not in v])
            for combo in itertools.product(*choices):
                word = []
                sign = 1
                coef = Fraction(1)
                before = 0
                last = 0
                for i, p in enumerate(pos):
                    for j in range(last, p):
                        word.append(key[j])
                        before += deg[key[j]]
                    v, c = combo[i]
                    sign *= koszul_sign([g_list[i][1]], [before])
                    coef *= c
                    word.extend(v)
                    before += sum(deg[a] for a in v)
                    last = p + 1
                word.extend(key[last:])
                w = tuple(word)
                acc = out.setdefault(w, {})
                vadd(acc, fval, sign * coef)
                if not acc:
                    del out[w]
    return out


def _sdegree(n, m):
    return n + m - 1


def _from_shifted_components(base, comps):
    """Assemble ``{(n, m): shifted table}`` back into a cochain."""
    return HochCochain(base, {k: from_shifted(t, base.basis) for k, t in comps.items() if t})


def _accumulate(acc, key, table, coef=1):
    cur = acc.setdefault(key, {})
    for w, v in table.items():
        slot = cur.setdefault(w, {})
        vadd(slot, v, coef)
        if not slot:
            del cur[w]


def brace(f, gs):
    """``f{g_1, ..., g_k}``; with no ``g`` this is ``f`` itself."""
    if not gs:
        return f
    base = f.base
    deg = dict(base.sdeg)
    fsh = f.shifted()
    gsh = [g.shifted() for g in gs]
    acc = {}
    for (n, m), ftab in fsh.items():
        for combo in itertools.product(*[list(g.items()) for g in gsh]):
            glist = [(tab, _sdegree(gn, gm)) for (gn, gm), tab in combo]
            res = _brace_tables(ftab, glist, deg, base.unit)
            if res:
                arity = n - len(gs) + sum(gn for (gn, _), _ in combo)
                mm = m + sum(gm for (_, gm), _ in combo)
                _accumulate(acc, (arity, mm), res)
    return _from_shifted_components(base, acc)


def cup1(f, g):
    return brace(f, [g])


def hdelta(f):
    """Hochschild differential ``(-1)^{|f|} f{b2} - b2{f}``."""
    base = f.base
    deg = dict(base.sdeg)
    b2 = base.b2
    acc = {}
    for (n, m), tab in f.shifted().items():
        s = -1 if _sdegree(n, m) % 2 else 1
        left = _brace_tables(tab, [(b2, 1)], deg, base.unit)
        right = _brace_tables(b2, [(tab, _sdegree(n, m))], deg, base.unit)
        _accumulate(acc, (n + 1, m), left, s)
        _accumulate(acc, (n + 1, m), right, -1)
    return _from_shifted_components(base, acc)


def cup(f, g):
    """``(f cup g)(a_1..a_{n+k}) = +- f(a_1..a_n) g(a_{n+1}..)``, sign from g passing the first inputs."""
    base = f.base
    udeg = base.udeg
    acc = {}
    for (n1, m1), t1 in f.components.items():
        for (n2, m2), t2 in g.components.items():
            res = {}
            for k1, v1 in t1.items():
                s = koszul_sign([m2], [sum(udeg[a] for a in k1)])
                for k2, v2 in t2.items():
                    val = base.times(v1, v2)
                    if val:
                        slot = res.setdefault(k1 + k2, {})
                        vadd(slot, val, s)
                        if not slot:
                            del res[k1 + k2]
            _accumulate(acc, (n1 + n2, m1 + m2), res)
    return HochCochain(base, acc)


def twisting_cochain(s):
    """The cochain ``m3 + m4 + ...`` of a minimal structure."""
    base = HochBase(s)
    return HochCochain(base, {(i, 2 - i): op.table for i, op in s.ops.items() if i >= 3})


def is_twisting(m, bound):
    """``dm = m{m}`` on all components of arity <= ``bound``."""
    if isinstance(m, AInfStructure):
        m = twisting_cochain(m)
    for (n, k) in m.components:
        if n < 3 or k != 2 - n:
            raise ValueError("a twisting cochain lives in bidegrees (i, 2 - i), i >= 3")
    lhs = hdelta(m).truncate(bound)
    rhs = brace(m, [m]).truncate(bound)
    return lhs == rhs


# coordinates

def cochain_coords(base, n, m):
    """Basis of ``C^{n,m}``: pairs (input word, output name)."""
    base = _base(base)
    udeg = base.udeg
    top = max(udeg.values(), default=0)
    outs = {}
    for t, d in udeg.items():
        outs.setdefault(d, []).append(t)
    coords = []
    if n == 0:
        words = [()]
    else:
        if not base.letters:
            return []
        lo = min(udeg[a] for a in base.letters)
        if lo <= 0 and n > 0:
            # degree-zero letters: enumerate by arity only
            words = list(iter_words(base.letters, udeg, n, length=n))
        else:
            words = list(iter_words(base.letters, udeg, n, length=n, max_degree=top - m))
    for w in words:
        d = sum(udeg[a] for a in w) + m
        for t in outs.get(d, []):
            coords.append((w, t))
    return coords


def to_coords(table, coords):
    index = {c: i for i, c in enumerate(coords)}
    vec = [Fraction(0)] * len(coords)
    for w, val in table.items():
        for t, c in val.items():
            vec[index[w, t]] = c
    return vec


def from_coords(vec, coords):
    table = {}
    for (w, t), c in zip(coords, vec):
        if c:
            table.setdefault(w, {})[t] = c
    return table


def delta_matrix(base, n, m, columns=None):
    """Matrix of ``d: C^{n,m} -> C^{n+1,m}``; ``columns`` restricts to given source vectors."""
    base = _base(base)
    src = cochain_coords(base, n, m)
    tgt = cochain_coords(base, n + 1, m)
    index = {c: i for i, c in enumerate(tgt)}
    if columns is None:
        columns = []
        for i in range(len(src)):
            v = [Fraction(0)] * len(src)
            v[i] = Fraction(1)
            columns.append(v)
    cols = []
    for v in columns:
        f = HochCochain(base, {(n, m): from_coords(v, src)})
        img = hdelta(f).component(n + 1, m)
        col = {}
        for w, val in img.items():
            for t, c in val.items():
                col[index[w, t]] = c
        cols.append(col)
    return SparseMatrix.from_columns(cols, len(tgt)), src, tgt


def shuffle_constraints(base, n, m, coords=None):
    """Rows expressing ``f(u * v) = 0`` for all splits, in the coordinates of ``C^{n,m}``."""
    base = _base(base)
    coords = coords if coords is not None else cochain_coords(base, n, m)
    if n < 2:
        return SparseMatrix(0, len(coords)), coords
    index = {c: i for i, c in enumerate(coords)}
    by_word = {}
    for w, t in coords:
        by_word.setdefault(w, []).append(t)
    outs = {}
    deg = base.sdeg
    rows = []
    seen = set()
    for w in by_word:
        for k in range(1, n):
            u, v = w[:k], w[k:]
            if (u, v) in seen:
                continue
            seen.add((u, v))
            sh = shuffle(u, v, deg)
            if not sh:
                continue
            for t in by_word[w]:
                row = {}
                for x, c in sh.items():
                    j = index.get((x, t))
                    if j is not None:
                        row[j] = row.get(j, 0) + c * shift_sign([base.udeg[a] for a in x])
                row = {j: c for j, c in row.items() if c}
                if row:
                    rows.append(row)
    return SparseMatrix.from_rows(rows, len(coords)), coords


def harrison_basis(base, n, m):
    """Dense basis (in ``cochain_coords``) of the shuffle-vanishing cochains."""
    cons, coords = shuffle_constraints(base, n, m)
    if cons.rows == 0:
        basis = []
        for i in range(len(coords)):
            v = [Fraction(0)] * len(coords)
            v[i] = Fraction(1)
            basis.append(v)
        return basis, coords
    return kernel_basis(cons), coords


def _space(base, n, m, harrison):
    if harrison:
        return harrison_basis(base, n, m)
    coords = cochain_coords(base, n, m)
    out = []
    for i in range(len(coords)):
        v = [Fraction(0)] * len(coords)
        v[i] = Fraction(1)
        out.append(v)
    return out, coords


def cohomology_dim(base, n, m, harrison=False):
    """Dimension of ``Hoch^{n,m}`` (or ``Harr^{n,m}``)."""
    return len(cohomology_basis(base, n, m, harrison))


def cocycle_dim(base, n, m, harrison=False):
    base = _base(base)
    space, _ = _space(base, n, m, harrison)
    if not space:
        return 0
    d_out, _, _ = delta_matrix(base, n, m, space)
    return len(space) - rank(d_out)


def cohomology_basis(base, n, m, harrison=False):
    """Representative cocycle tables of a basis of the cohomology at ``(n, m)``."""
    base = _base(base)
    space, coords = _space(base, n, m, harrison)
    if not space:
        return []
    d_out, _, _ = delta_matrix(base, n, m, space)
    ker = kernel_basis(d_out)
    cycles = []
    for k in ker:
        v = [Fraction(0)] * len(coords)
        for c, s in zip(k, space):
            if c:
                for i, x in enumerate(s):
                    v[i] += c * x
        cycles.append(v)
    if n >= 1:
        prev, _ = _space(base, n - 1, m, harrison)
        if prev:
            d_in, _, _ = delta_matrix(base, n - 1, m, prev)
            bounds = [[d_in.entries.get((i, j), Fraction(0)) for i in range(d_in.rows)]
                      for j in range(d_in.cols)]
        else:
            bounds = []
    else:
        bounds = []
    red, piv = row_space(bounds, len(coords))
    reps = []
    for z in cycles:
        r = reduce_against({i: c for i, c in enumerate(z) if c}, red, piv)
        if r:
            reps.append(z)
            red, piv = row_space([{j: c for j, c in enumerate(x) if c} for x in bounds + reps],
                                 len(coords))
    return [from_coords(z, coords) for z in reps]


# perturbation

def _length_limit(s):
    """Largest word length that can carry a nonzero operation, by degree."""
    letters = s.letters
    if not letters:
        return 1
    lo = min(s.deg.values())
    top = max(s.deg.values())
    if lo < 1:
        return None
    return max((top - 1) // lo, 2)


def pushforward(s, comps, max_arity=None):
    """Structure ``s'`` making ``P = {id, p_2, p_3, ...}`` a morphism ``s -> s'``.

    ``comps`` maps arity >= 2 to tables of degree 1 - arity; arity 1 is the identity.
    Solved arity by arity: ``m'_n = p1 P d(w) - p1 d'_{<n} P(w)``.
    """
    if not s.minimal:
        raise ValueError("pushforward needs a minimal structure")
    limit = max_arity or s.arity_bound or _length_limit(s)
    if limit is None:
        raise ValueError("an arity bound is required for structures with letters of degree <= 1")
    P = AInfMorphism(s, s, {**comps, 1: {(a,): {a: 1} for a in s.letters}})
    Psh = P.shifted
    deg = s.deg
    top = max(deg.values(), default=0)
    d = extend_coderivation(s.shifted, deg)
    mb = {}
    for n in range(2, limit + 1):
        PF = extend_coalgebra_map(Psh, deg, max_length=n - 1)
        tab = {}
        for w in iter_words(s.letters, deg, n, length=n, max_degree=top - 1):
            val = _project(Psh, d({w: 1}))
            vadd(val, _project(mb, PF({w: 1})), -1)
            if val:
                tab[w] = val
        if tab:
            mb[n] = tab
    bound = s.arity_bound if s.arity_bound is not None else max_arity
    new = AInfStructure(s.basis, {n: from_shifted(t, s.basis) for n, t in mb.items()},
                        arity_bound=bound, cinf=False)
    mor = AInfMorphism(s, new, P.components, arity_bound=bound)
    return new, mor


def perturb(s, p, arity=None, max_arity=None):
    """Push ``s`` forward along ``{id, p}`` for a single cochain ``p`` of arity ``arity``.

    ``p`` may be a table or a :class:`HochCochain` with one component.
    """
    if isinstance(s, HochCochain):
        raise TypeError("pass the structure, not its twisting cochain")
    if isinstance(p, HochCochain):
        if not p.components:
            return pushforward(s, {}, max_arity)
        ((arity, _), table), = p.components.items()
    else:
        table = p
        if arity is None:
            arity = len(next(iter(table))) if table else 2
    return pushforward(s, {arity: table} if table else {}, max_arity)


@dataclass
class Degeneracy:
    degenerate: bool
    arity: int
    certificate: list = field(default_factory=list)
    structure: AInfStructure | None = None
    obstruction: dict | None = None

    def __bool__(self):
        return self.degenerate


def _operation_limit(s, max_arity):
    lim = max_arity
    if s.arity_bound is not None:
        lim = min(lim, s.arity_bound)
    return lim


def try_degenerate(s, max_arity, harrison=False):
    """Kill ``m3, m4, ...`` by perturbations, or report the first obstruction.

    Each step solves ``d p = -m_n`` with ``p`` in ``C^{n-1, 2-n}`` (shuffle
    vanishing in Harrison mode); the certificate lists the morphisms
    ``{id, p}`` in the order applied.
    """
    if not s.minimal:
        raise ValueError("try_degenerate needs a minimal structure")
    cur = s
    cert = []
    limit = _operation_limit(s, max_arity)
    for n in range(3, limit + 1):
        mn = cur.op(n).table
        if not mn:
            continue
        base = HochBase(cur)
        space, coords = _space(base, n - 1, 2 - n, harrison)
        tgt = cochain_coords(base, n, 2 - n)
        rhs = [-c for c in to_coords(mn, tgt)]
        x = None
        if space:
            D, _, _ = delta_matrix(base, n - 1, 2 - n, space)
            x = solve(D, rhs)
        elif not any(rhs):
            x = []
        if x is None:
            return Degeneracy(False, n, cert, cur, {
                "arity": n, "cocycle": mn,
                "cohomology_basis": cohomology_basis(base, n, 2 - n, harrison),
                "harrison": harrison})
        p = [Fraction(0)] * len(coords)
        for c, v in zip(x, space):
            if c:
                for i, y in enumerate(v):
                    p[i] += c * y
        ptab = from_coords(p, coords)
        new, mor = perturb(cur, ptab, n - 1, max_arity=cur.arity_bound or limit)
        if new.op(n).table:
            raise RuntimeError(f"perturbation did not remove m{n}")
        cert.append(mor)
        cur = new
    return Degeneracy(True, limit, cert, cur, None)


def harrison_correct(s, max_arity):
    """Iso ``P: s -> s'`` with ``s'`` vanishing on shuffles through ``max_arity``.

    Solves ``S(m_n + d p) = 0`` arity by arity, ``S`` the shuffle evaluation.
    """
    from .transfer import CorrectionUnsolvable

    base = HochBase(s)
    if shuffle_defect(s.shifted.get(2, {}), s.deg, s.letters, 2):
        raise CorrectionUnsolvable("m2 is not graded commutative")
    cur = s
    total = None
    limit = _operation_limit(s, max_arity)
    for n in range(3, limit + 1):
        tab = cur.shifted.get(n, {})
        if not tab or not shuffle_defect(tab, cur.deg, cur.letters, n):
            continue
        S, tgt = shuffle_constraints(base, n, 2 - n)
        src = cochain_coords(base, n - 1, 2 - n)
        D, _, _ = delta_matrix(base, n - 1, 2 - n)
        lhs = S @ D
        mvec = to_coords(cur.op(n).table, tgt)
        rhs = [-c for c in S.matvec(mvec)]
        x = solve(lhs, rhs)
        if x is None:
            raise CorrectionUnsolvable(f"no Harrison correction at arity {n}")
        new, mor = perturb(cur, from_coords(x, src), n - 1, max_arity=cur.arity_bound or limit)
        total = mor if total is None else compose(mor, total, max_arity=limit)
        cur = new
    if total is None:
        total = AInfMorphism(s, s, {1: {(a,): {a: 1} for a in s.letters}})
    return cur, total
