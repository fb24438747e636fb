"""Built-in algebras: the S2 v S2 v S5 example, spheres, planted models and random families."""
from __future__ import annotations

from fractions import Fraction

from .ainf import AInfStructure
from .exactlin import SparseMatrix, kernel_basis, solve
from .graded import GradedBasis, vadd
from .transfer import DgAlgebra


def example_basis():
    return GradedBasis([("e", 0), ("x", 2), ("y", 2), ("z", 5)], unit="e")


def example_m3(p, q):
    """The arity-3 table forced by shuffle vanishing, with parameters (p, q)."""
    p, q = Fraction(p), Fraction(q)
    return {("x", "x", "y"): {"z": p}, ("y", "x", "x"): {"z": -p},
            ("x", "y", "y"): {"z": q}, ("y", "y", "x"): {"z": -q}}


def example_structure(p, q):
    """C-infinity structure on H*(S2 v S2 v S5) with ``m3(x,x,y) = p z``, ``m3(x,y,y) = q z``."""
    return AInfStructure(example_basis(), {3: example_m3(p, q)}, cinf=True)


def sphere_structure(n):
    return AInfStructure(GradedBasis([("e", 0), ("s", n)], unit="e"), {}, cinf=True)


def sphere_dga(n, name="s"):
    return DgAlgebra(GradedBasis([("e", 0), (name, n)], unit="e"), commutative=True)


def formal_example_cdga():
    """H*(S2 v S2 v S5) itself, zero differential and zero products."""
    return DgAlgebra(example_basis(), commutative=True)


def massey_dga():
    """Twelve-dimensional cdga with a nontrivial triple Massey product <a, b, c>."""
    gens = [("1", 0), ("a", 2), ("b", 2), ("c", 2), ("u", 3), ("v", 3),
            ("ab", 4), ("bc", 4), ("ac", 4), ("uc", 5), ("av", 5), ("abc", 6)]
    basis = GradedBasis(gens, unit="1")
    d = {"u": {"ab": 1}, "v": {"bc": 1}, "uc": {"abc": 1}, "av": {"abc": 1}}
    prod = {}

    def both(x, y, val):
        prod[x, y] = val
        prod[y, x] = val  # everything multiplied here has an even factor

    both("a", "b", {"ab": 1})
    both("b", "c", {"bc": 1})
    both("a", "c", {"ac": 1})
    both("u", "c", {"uc": 1})
    both("a", "v", {"av": 1})
    both("ab", "c", {"abc": 1})
    both("ac", "b", {"abc": 1})
    both("bc", "a", {"abc": 1})
    return DgAlgebra(basis, d, prod, commutative=True)


def y_model_cdga(p, q):
    """Truncated cdga whose transferred m3 realizes the parameters (p, q)."""
    gens = [("1", 0), ("x", 2), ("y", 2), ("u", 3), ("v", 3), ("w", 3),
            ("xx", 4), ("xy", 4), ("yy", 4), ("z", 5)]
    basis = GradedBasis(gens, unit="1")
    d = {"u": {"xx": 1}, "v": {"xy": 1}, "w": {"yy": 1}}
    prod = {}
    for a, b, val in [("x", "x", {"xx": 1}), ("x", "y", {"xy": 1}), ("y", "y", {"yy": 1}),
                      ("u", "y", {"z": p}), ("v", "y", {"z": q})]:
        prod[a, b] = val
        prod[b, a] = val
    return DgAlgebra(basis, d, prod, commutative=True)


# random truncated free algebras

def _monomials_comm(gens, top):
    """Graded-commutative monomials (sorted tuples) of degree in [1, top]."""
    out = []
    names = [g for g, _ in gens]
    deg = dict(gens)

    def rec(start, mono, d):
        if mono:
            out.append(tuple(mono))
        for i in range(start, len(names)):
            g = names[i]
            nd = d + deg[g]
            if nd > top:
                continue
            if deg[g] % 2 and mono and mono[-1] == g:
                continue
            rec(i if deg[g] % 2 == 0 else i + 1, mono + [g], nd)

    rec(0, [], 0)
    return out


def _monomials_assoc(gens, top):
    out = []
    deg = dict(gens)

    def rec(mono, d):
        if mono:
            out.append(tuple(mono))
        for g, k in gens:
            if d + k <= top:
                rec(mono + [g], d + k)

    rec([], 0)
    return out


def _comm_product(m1, m2, deg, order=None):
    """Product of sorted monomials: (sign, monomial) or None.

    Letters are sorted by ``order`` (generator position), by name if omitted.
    """
    key = order.__getitem__ if order else (lambda g: g)
    letters = list(m1) + list(m2)
    sign = 1
    # bubble sort, counting odd transpositions
    for i in range(len(letters)):
        for j in range(len(letters) - 1 - i):
            if key(letters[j]) > key(letters[j + 1]):
                if deg[letters[j]] % 2 and deg[letters[j + 1]] % 2:
                    sign = -sign
                letters[j], letters[j + 1] = letters[j + 1], letters[j]
    for i in range(len(letters) - 1):
        if letters[i] == letters[i + 1] and deg[letters[i]] % 2:
            return None
    return sign, tuple(letters)


def _name(mono):
    return "*".join(mono)


def free_truncated(gens, top, diff, commutative, unit="1"):
    """Free (graded-commutative) algebra on ``gens`` modulo degrees above ``top``.

    ``diff`` maps generator names to polynomials ``{monomial: coef}``; it is
    extended by the Leibniz rule.
    """
    deg = dict(gens)
    order = {g: i for i, (g, _) in enumerate(gens)}
    monos = _monomials_comm(gens, top) if commutative else _monomials_assoc(gens, top)
    mdeg = {m: sum(deg[g] for g in m) for m in monos}
    names = {m: _name(m) for m in monos}
    present = set(monos)

    def mult(m1, m2):
        if commutative:
            r = _comm_product(m1, m2, deg, order)
            if r is None or r[1] not in present:
                return {}
            return {r[1]: r[0]}
        m = m1 + m2
        return {m: 1} if m in present else {}

    def d_mono(m):
        out = {}
        pre = 0
        for i, g in enumerate(m):
            head, tail = m[:i], m[i + 1:]
            for poly_m, c in diff.get(g, {}).items():
                s = -1 if pre % 2 else 1
                left = mult(head, poly_m) if head else {poly_m: 1}
                for lm, lc in left.items():
                    full = mult(lm, tail) if tail else {lm: 1}
                    vadd(out, full, s * c * lc)
            pre += deg[g]
        return {k: v for k, v in out.items() if k in present}

    basis = GradedBasis([(unit, 0)] + [(names[m], mdeg[m]) for m in monos], unit=unit)
    dtab = {}
    for m in monos:
        img = d_mono(m)
        if img:
            dtab[names[m]] = {names[k]: v for k, v in img.items()}
    prod = {}
    for m1 in monos:
        for m2 in monos:
            img = mult(m1, m2)
            if img:
                prod[names[m1], names[m2]] = {names[k]: v for k, v in img.items()}
    return DgAlgebra(basis, dtab, prod, commutative=commutative)


def _random_cocycle(rng, alg, degree):
    """Random cocycle of the given degree in a DgAlgebra (possibly zero)."""
    cur = alg.basis.by_degree(degree)
    cur = [n for n in cur if n != alg.unit]
    if not cur:
        return {}
    nxt = [n for n in alg.basis.by_degree(degree + 1)]
    row = {t: i for i, t in enumerate(nxt)}
    ent = {}
    for j, n in enumerate(cur):
        for t, c in alg.d.images.get(n, {}).items():
            ent[row[t], j] = c
    ker = kernel_basis(SparseMatrix(len(nxt), len(cur), ent))
    out = {}
    for z in ker:
        c = rng.randint(-2, 2)
        for j, v in enumerate(z):
            if v:
                vadd(out, {cur[j]: v}, c)
    return out


def _random_differential(rng, gens, top, commutative, tries=4):
    """Differentials on generators, each a random cocycle of the algebra on earlier ones."""
    diff = {}
    for i, (g, dg) in enumerate(gens):
        if not i:
            continue
        sub = free_truncated(gens[:i], top, diff, commutative)
        for _ in range(tries):
            z = _random_cocycle(rng, sub, dg + 1)
            if z:
                diff[g] = {tuple(n.split("*")): c for n, c in z.items()}
                break
    return diff


def _draw(rng, degrees, top, commutative, max_dim, min_dim, max_gens, randomize_basis, killers=False):
    """Truncated free algebra on random generators with random differentials.

    With ``killers`` an extra generator is often placed one degree below a
    product of two others, so that its differential can kill that product.
    """
    monomials = _monomials_comm if commutative else _monomials_assoc
    lo = min(degrees)
    for _ in range(500):
        k = rng.randint(1, max_gens)
        gens = [rng.choice(degrees) for _ in range(k)]
        if killers and rng.random() < 0.7:
            a, b = rng.choice(gens), rng.choice(gens)
            if lo <= a + b - 1 <= top:
                gens.append(a + b - 1)
        gens = [(f"g{i}", d) for i, d in enumerate(sorted(gens))]
        t = rng.randint(gens[-1][1], top)
        size = len(monomials(gens, t)) + 1
        if not min_dim <= size <= max_dim:
            continue
        alg = free_truncated(gens, t, _random_differential(rng, gens, t, commutative), commutative)
        if randomize_basis and rng.random() < 0.5:
            alg = change_basis(alg, rng)
        return alg
    raise RuntimeError("could not draw a small algebra")


def random_free_dga(rng, commutative=True, max_dim=12, top=8, min_degree=2, max_gens=3, min_dim=1):
    """Random truncated free (c)dga of dimension in ``[min_dim, max_dim]``.

    Generator degrees are biased towards the bottom of ``[min_degree, top - 1]``.
    """
    degrees = _biased(min_degree, max(min_degree, top - 1))
    return _draw(rng, degrees, top, commutative, max_dim, min_dim, max_gens, True, killers=True)


def _biased(lo, hi):
    out = []
    for d in range(lo, hi + 1):
        out += [d] * max(1, 4 - (d - lo))
    return out


def window_cdga(rng, n, min_dim=1):
    """Random truncated free cdga with generators in degrees >= n, cut above 3n - 2."""
    top = 3 * n - 2
    return _draw(rng, _biased(n, top), top, True, 12, min_dim, 2, True, killers=True)


def change_basis(alg, rng):
    """Same algebra in a random unipotent basis per degree (names kept)."""
    b = alg.basis
    new_of_old = {}
    old_of_new = {}
    for k in b.degree_range():
        names = [n for n in b.by_degree(k) if n != alg.unit]
        m = len(names)
        if not m:
            continue
        # columns: new basis vector j = e_j + sum_{i<j} c_ij e_i
        cols = []
        for j in range(m):
            v = {names[j]: Fraction(1)}
            for i in range(j):
                c = rng.randint(-2, 2)
                if c:
                    v[names[i]] = Fraction(c)
            cols.append(v)
            old_of_new[names[j]] = v
        mat = SparseMatrix.from_columns([{names.index(n): c for n, c in v.items()} for v in cols], m)
        for i, n in enumerate(names):
            rhs = [Fraction(0)] * m
            rhs[i] = Fraction(1)
            x = solve(mat, rhs)
            new_of_old[n] = {names[j]: c for j, c in enumerate(x) if c}
    e = alg.unit
    old_of_new[e] = {e: Fraction(1)}
    new_of_old[e] = {e: Fraction(1)}

    def to_new(vec):
        out = {}
        for n, c in vec.items():
            vadd(out, new_of_old[n], c)
        return out

    d = {n: to_new(alg.d(old_of_new[n])) for n in b.names}
    prod = {}
    for x in b.reduced:
        for y in b.reduced:
            img = to_new(alg.times(old_of_new[x], old_of_new[y]))
            if img:
                prod[x, y] = img
    return DgAlgebra(b, {k: v for k, v in d.items() if v}, prod, commutative=alg.commutative)


def random_example_iso(rng, p, q):
    """Random (A, r) with ``det A != 0`` and ``r != 0``; returns ``(a, b, c, d, r)``."""
    while True:
        a, b, c, d = (Fraction(rng.randint(-4, 4)) for _ in range(4))
        if a * d - b * c:
            break
    r = Fraction(rng.choice([-3, -2, -1, 1, 2, 3]))
    return a, b, c, d, r
