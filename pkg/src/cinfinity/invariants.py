"""Invariants of minimal structures: bar homology, homotopy ranks, formality, realization."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .ainf import AInfMorphism, _project, bar_differential, check_cinf, from_shifted
from .barcoalg import decomposable_span, extend_coalgebra_map, iter_words, shuffle
from .exactlin import SparseMatrix, kernel_basis, rank, reduce_against, row_space, solve
from .graded import GradedMap, vadd
from .hoch import HochBase, cocycle_dim, try_degenerate
from .transfer import BoundTooSmall


class NotCInfinity(ValueError):
    pass


@dataclass
class ComplexPresentation:
    """Cochain complex given degreewise: ``bases[k]`` and ``d[k]: C^k -> C^{k+1}``."""
    bases: dict
    d: dict

    def __post_init__(self):
        for k, m in self.d.items():
            nxt = self.d.get(k + 1)
            if nxt is not None and m.cols and nxt.rows and not (nxt @ m).is_zero():
                raise ValueError(f"d o d != 0 at degree {k}")

    def dims(self):
        return {k: len(b) for k, b in self.bases.items()}

    def _rank(self, k):
        m = self.d.get(k)
        return rank(m) if m is not None and m.rows and m.cols else 0

    def homology_ranks(self, degrees=None):
        out = {}
        for k in (degrees if degrees is not None else sorted(self.bases)):
            out[k] = len(self.bases.get(k, [])) - self._rank(k) - self._rank(k - 1)
        return out


def _require_connected(s):
    if not s.letters:
        return
    if min(s.deg.values()) < 1:
        raise BoundTooSmall("bar computations need generators of degree >= 2 besides the unit")


def _matrix(images, src, tgt):
    index = {w: i for i, w in enumerate(tgt)}
    ent = {}
    for j, w in enumerate(src):
        for x, c in images(w).items():
            ent[index[x], j] = c
    return SparseMatrix(len(tgt), len(src), ent)


def bar_complex(s, max_degree):
    """The reduced bar construction in total degrees ``0..max_degree + 1``."""
    _require_connected(s)
    d = bar_differential(s)
    bases = {0: [()]}
    for k in range(1, max_degree + 2):
        bases[k] = list(iter_words(s.letters, s.deg, k, degree=k))
    mats = {0: SparseMatrix(len(bases[1]), 1)}
    for k in range(1, max_degree + 1):
        mats[k] = _matrix(lambda w: d({w: 1}), bases[k], bases[k + 1])
    return ComplexPresentation(bases, mats)


def bar_homology(s, max_degree):
    """Ranks of ``H^k`` of the reduced bar construction, ``0 <= k <= max_degree``."""
    cx = bar_complex(s, max_degree)
    return cx.homology_ranks(range(0, max_degree + 1))


def indecomposables_complex(s, max_degree):
    """Bar construction modulo shuffle-decomposables, degrees ``1..max_degree``."""
    v = check_cinf(s)
    if not v:
        raise NotCInfinity(v.message)
    _require_connected(s)
    d = bar_differential(s)
    quot, reducers = {}, {}
    for k in range(1, max_degree + 2):
        words = list(iter_words(s.letters, s.deg, k, degree=k))
        red, piv = decomposable_span(words, s.deg) if words else ([], [])
        pivset = set(piv)
        quot[k] = [w for i, w in enumerate(words) if i not in pivset]
        reducers[k] = (words, red, piv)
    mats = {}
    for k in range(1, max_degree + 1):
        words, red, piv = reducers[k + 1]
        index = {w: i for i, w in enumerate(words)}

        def image(w):
            img = d({w: 1})
            r = reduce_against({index[x]: c for x, c in img.items()}, red, piv)
            return {words[i]: c for i, c in r.items()}

        mats[k] = _matrix(image, quot[k], quot[k + 1])
    return ComplexPresentation({k: quot[k] for k in range(1, max_degree + 2)}, mats)


def pi_ranks(s, max_degree):
    """Ranks of ``pi^j`` for ``2 <= j <= max_degree``, read off as ``H^{j-1}`` of the indecomposables."""
    cx = indecomposables_complex(s, max(max_degree - 1, 1))
    ranks = cx.homology_ranks(range(1, max_degree))
    return {k + 1: r for k, r in ranks.items()}


def qb_dims(s, max_degree):
    return indecomposables_complex(s, max_degree).dims()


# formality

@dataclass
class FormalityVerdict:
    status: str  # "formal" | "nonformal" | "undecided"
    bound: int
    definitive: bool
    obstruction: dict | None = None
    certificate: list = field(default_factory=list)

    def __str__(self):
        return self.status


def operation_length_bound(basis):
    """Largest arity n >= 3 with ``Hom^{2-n}(H^{(n)}, H) != 0``, 2 if none, None if unbounded."""
    reduced = [basis.degree(a) for a in basis.reduced]
    if not reduced:
        return 2
    if all(d % 2 for d in reduced):
        return 2  # odd inputs force even outputs of positive degree
    lo = min(reduced)
    if lo < 2:
        return None
    top = max(reduced)
    return max((top - 2) // (lo - 1), 2)


def formality_verdict(s, max_arity):
    """Decide degeneracy through Harrison obstructions up to ``max_arity``."""
    v = check_cinf(s)
    if not v:
        raise NotCInfinity(v.message)
    res = try_degenerate(s, max_arity, harrison=True)
    need = operation_length_bound(s.basis)
    if res.degenerate:
        definitive = need is not None and need <= res.arity and (
            s.arity_bound is None or need <= s.arity_bound)
        status = "formal" if definitive else "undecided"
        return FormalityVerdict(status, max_arity, definitive, None, res.certificate)
    n = res.obstruction["arity"]
    base = HochBase(s)
    lower = [cocycle_dim(base, k, 1 - k, harrison=True) for k in range(2, n - 1)]
    definitive = n == 3 or not any(lower)
    status = "nonformal" if definitive else "undecided"
    return FormalityVerdict(status, max_arity, definitive, res.obstruction, res.certificate)


# realization

@dataclass
class Realization:
    ok: bool
    arity: int
    morphism: AInfMorphism | None = None
    residual: dict | None = None

    def __bool__(self):
        return self.ok


def _map_table(G, source):
    if isinstance(G, GradedMap):
        imgs = G.images
    elif isinstance(G, AInfMorphism):
        imgs = {k[0]: v for k, v in G.component(1).table.items()}
    else:
        imgs = G
    return {(a,): dict(imgs[a]) for a in source.letters if imgs.get(a)}


def morphism_relation(src, tgt, comps, w):
    """``p1 (F d - d' F)`` on a word, shifted tables ``comps``."""
    from .barcoalg import extend_coderivation
    d = extend_coderivation(src.shifted, src.deg)
    lhs = _project(comps, d({w: 1}))
    F = extend_coalgebra_map(comps, src.deg, max_length=max(tgt.max_arity, 1))
    return vadd(lhs, _project(tgt.shifted, F({w: 1})), -1)


def realize_search(source, target, G, max_arity):
    """Extend ``G`` to ``{G, g2, g3, ...}`` solving the morphism equation arity by arity.

    The relation at arity n is linear in ``g_{n-1}``; shuffle vanishing is
    imposed when both structures are C-infinity.  Failure reports the first
    arity at which the linear system has no solution.
    """
    g1 = _map_table(G, source)
    for a in source.letters:
        for t in g1.get((a,), {}):
            if target.basis.degree(t) != source.basis.degree(a):
                raise ValueError(f"G does not preserve the degree of {a}")
    cinf = bool(check_cinf(source)) and bool(check_cinf(target))
    comps = {1: g1}  # shifted = unshifted in arity 1
    top_src = max(source.deg.values(), default=0)
    top_tgt = max(target.deg.values(), default=0)
    for w in iter_words(source.letters, source.deg, 2, length=2):
        r = morphism_relation(source, target, comps, w)
        if r:
            raise ValueError(f"G is not multiplicative on {w}")
    for n in range(3, max_arity + 1):
        k = n - 1
        words_n = list(iter_words(source.letters, source.deg, n, length=n, max_degree=top_tgt - 1))
        words_k = list(iter_words(source.letters, source.deg, k, length=k, max_degree=top_tgt))
        unknowns = [(w, t) for w in words_k for t in target.letters
                    if target.deg[t] == sum(source.deg[a] for a in w)]
        eqs = [(w, t) for w in words_n for t in target.letters
               if target.deg[t] == sum(source.deg[a] for a in w) + 1]
        eq_index = {e: i for i, e in enumerate(eqs)}
        base_val = {}
        for w in words_n:
            r = morphism_relation(source, target, comps, w)
            if r:
                base_val[w] = r
        b = [Fraction(0)] * len(eqs)
        for w, r in base_val.items():
            for t, c in r.items():
                b[eq_index[w, t]] = -c
        cols = []
        for (uw, ut) in unknowns:
            trial = dict(comps)
            trial[k] = {uw: {ut: Fraction(1)}}
            col = {}
            for w in words_n:
                r = morphism_relation(source, target, trial, w)
                vadd(r, base_val.get(w, {}), -1)
                for t, c in r.items():
                    col[eq_index[w, t]] = c
            cols.append(col)
        rows = SparseMatrix.from_columns(cols, len(eqs)).row_dicts()
        if cinf and k >= 2:
            index = {u: i for i, u in enumerate(unknowns)}
            for w in words_k:
                for split in range(1, k):
                    sh = shuffle(w[:split], w[split:], source.deg)
                    for t in target.letters:
                        row = {}
                        for x, c in sh.items():
                            j = index.get((x, t))
                            if j is not None:
                                row[j] = row.get(j, 0) + c
                        row = {j: c for j, c in row.items() if c}
                        if row:
                            rows.append(row)
                            b.append(Fraction(0))
        m = SparseMatrix.from_rows(rows, len(unknowns))
        if not unknowns:
            x = [] if not any(b) else None
        else:
            x = solve(m, b)
        if x is None:
            residual = {w: v for w, v in base_val.items()}
            return Realization(False, n, None, residual)
        gk = {}
        for (uw, ut), c in zip(unknowns, x):
            if c:
                gk.setdefault(uw, {})[ut] = c
        if gk:
            comps[k] = gk
    unshifted = {n: from_shifted(t, source.basis) for n, t in comps.items()}
    f = AInfMorphism(source, target, unshifted, arity_bound=max_arity, cinf=cinf)
    return Realization(True, max_arity, f, None)


# the S2 v S2 v S5 classification

@dataclass
class Classification:
    same: bool
    witness: AInfMorphism | None = None
    matrix: tuple | None = None  # (a, b, c, d, r)

    def __str__(self):
        return "same-type" if self.same else "different-type"


def example_iso(a, b, c, d, r, source, target):
    """Arity-one morphism ``x -> a x + b y``, ``y -> c x + d y``, ``z -> r z``."""
    f1 = {("x",): {"x": a, "y": b}, ("y",): {"x": c, "y": d}, ("z",): {"z": r}}
    return AInfMorphism(source, target, {1: f1})


def classify_s2s2s5(p, q, p2, q2):
    """Same type iff both parameter vectors vanish or both are nonzero."""
    from .corpus import example_structure

    p, q, p2, q2 = (Fraction(v) for v in (p, q, p2, q2))
    src, tgt = example_structure(p, q), example_structure(p2, q2)
    zero1, zero2 = not (p or q), not (p2 or q2)
    if zero1 != zero2:
        return Classification(False)
    if zero1:
        one, zero = Fraction(1), Fraction(0)
        return Classification(True, example_iso(one, zero, zero, one, one, src, tgt),
                              (one, zero, zero, one, one))
    # M [v' w'] = [v w] with w = v rotated; then A = M^T and r = det M
    v, w = (p, q), (-q, p)
    v2, w2 = (p2, q2), (-q2, p2)
    det2 = v2[0] * w2[1] - w2[0] * v2[1]
    inv = ((w2[1] / det2, -w2[0] / det2), (-v2[1] / det2, v2[0] / det2))
    M = [[v[0] * inv[0][0] + w[0] * inv[1][0], v[0] * inv[0][1] + w[0] * inv[1][1]],
         [v[1] * inv[0][0] + w[1] * inv[1][0], v[1] * inv[0][1] + w[1] * inv[1][1]]]
    a, b, c, d = M[0][0], M[0][1], M[1][0], M[1][1]
    r = a * d - b * c
    return Classification(True, example_iso(a, b, c, d, r, src, tgt), (a, b, c, d, r))


# Massey products, computed on the chain level

@dataclass
class MasseySet:
    """``{rep + indeterminacy}``, all as cycles of the algebra, modulo boundaries."""
    representative: dict
    indeterminacy: list
    boundaries: list
    names: list

    def contains(self, cycle):
        diff = dict(cycle)
        vadd(diff, self.representative, -1)
        vecs = [[v.get(n, Fraction(0)) for n in self.names] for v in self.boundaries + self.indeterminacy]
        red, piv = row_space(vecs, len(self.names))
        index = {n: i for i, n in enumerate(self.names)}
        rem = reduce_against({index[n]: c for n, c in diff.items()}, red, piv)
        return not rem


def _solve_d(a, target, degree):
    """A preimage of ``target`` under d in the given degree, and the cycles there."""
    src = [n for n in a.basis.by_degree(degree) if n != a.unit]
    tgt = a.basis.by_degree(degree + 1)
    index = {t: i for i, t in enumerate(tgt)}
    ent = {}
    for j, n in enumerate(src):
        for t, c in a.d.images.get(n, {}).items():
            ent[index[t], j] = c
    m = SparseMatrix(len(tgt), len(src), ent)
    rhs = [target.get(t, Fraction(0)) for t in tgt]
    x = solve(m, rhs) if src else (None if any(rhs) else [])
    if x is None:
        return None, []
    pre = {src[j]: c for j, c in enumerate(x) if c}
    cycles = [{src[j]: c for j, c in enumerate(z) if c} for z in kernel_basis(m)] if src else []
    return pre, cycles


def massey_product_set(a, x, y, z):
    """The set ``{[u z - (-1)^{|x|} x v] : du = xy, dv = yz}`` for cycles ``x, y, z``.

    Returns ``None`` when the product is not defined.
    """
    dx = [a.d(v) for v in (x, y, z)]
    if any(dx):
        raise ValueError("Massey products need cycles")
    deg = a.basis.vector_degree
    kx, ky, kz = deg(x), deg(y), deg(z)
    u, zu = _solve_d(a, a.times(x, y), kx + ky - 1)
    v, zv = _solve_d(a, a.times(y, z), ky + kz - 1)
    if u is None or v is None:
        return None
    sx = -1 if kx % 2 else 1
    rep = a.times(u, z)
    vadd(rep, a.times(x, v), -sx)
    indet = [a.times(c, z) for c in zu] + [a.times(x, c) for c in zv]
    total = kx + ky + kz - 1
    names = a.basis.by_degree(total)
    bounds = [a.d({n: 1}) for n in a.basis.by_degree(total - 1)]
    return MasseySet(rep, indet, [b for b in bounds if b], names)
