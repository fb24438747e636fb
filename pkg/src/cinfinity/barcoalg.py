"""Tensor coalgebra on a desuspended graded basis.

A word is a tuple of generator names; ``deg`` maps every name to its
desuspended degree.  A bar element is a dict ``word -> Fraction``.  Families
of multilinear maps are given as ``{arity: {word: {name: coef}}}`` tables,
already expressed on the desuspension.
"""
from __future__ import annotations

from .exactlin import row_space
from .graded import koszul_sign, vadd


def word_degree(word, deg):
    return sum(deg[a] for a in word)


def element_add(acc, elem, coef=1):
    return vadd(acc, elem, coef)


def comultiply(word):
    """All deconcatenations ``(prefix, suffix)`` of a word, empty ends included."""
    word = tuple(word)
    return [(word[:i], word[i:]) for i in range(len(word) + 1)]


def coproduct(elem):
    out = {}
    for w, c in elem.items():
        for pair in comultiply(w):
            v = out.get(pair, 0) + c
            if v:
                out[pair] = v
            else:
                out.pop(pair, None)
    return out


def shuffle(u, v, deg):
    """Signed sum of all (|u|,|v|)-shuffles of two words.

    A letter b of ``v`` placed before a letter a of ``u`` contributes
    the Koszul sign of the pair.
    """
    u, v = tuple(u), tuple(v)
    out = {}
    # suffix degree sums of u
    tail = [0] * (len(u) + 1)
    for i in range(len(u) - 1, -1, -1):
        tail[i] = tail[i + 1] + deg[u[i]]

    def rec(i, j, prefix, sign):
        if i == len(u):
            key = prefix + v[j:]
        elif j == len(v):
            key = prefix + u[i:]
        else:
            rec(i + 1, j, prefix + (u[i],), sign)
            rec(i, j + 1, prefix + (v[j],), sign * koszul_sign([tail[i]], [deg[v[j]]]))
            return
        c = out.get(key, 0) + sign
        if c:
            out[key] = c
        else:
            out.pop(key, None)

    rec(0, 0, (), 1)
    return out


def shuffle_elements(x, y, deg):
    out = {}
    for u, a in x.items():
        for v, b in y.items():
            vadd(out, shuffle(u, v, deg), a * b)
    return out


def extend_coderivation(beta, deg, degree=1):
    """The coderivation whose projection to word length 1 is ``beta``.

    ``beta[j]`` is replaced into every run of j consecutive letters, with the
    Koszul sign of a map of degree ``degree`` passing the letters before it.
    """
    beta = {j: t for j, t in beta.items() if t and j >= 1}

    def apply(elem):
        out = {}
        for w, c in elem.items():
            n = len(w)
            prefix = 0
            for k in range(n):
                sign = koszul_sign([degree], [prefix])
                for j, table in beta.items():
                    if k + j > n:
                        continue
                    img = table.get(w[k:k + j])
                    if not img:
                        continue
                    head, tail = w[:k], w[k + j:]
                    for t, v in img.items():
                        key = head + (t,) + tail
                        val = out.get(key, 0) + sign * c * v
                        if val:
                            out[key] = val
                        else:
                            out.pop(key, None)
                prefix += deg[w[k]]
        return out

    return apply


def extend_coalgebra_map(alpha, deg, degree=0, max_length=None):
    """The coalgebra map whose projection to word length 1 is ``alpha``.

    A word is cut into consecutive blocks in every possible way and ``alpha``
    is applied blockwise.  ``max_length`` drops output words longer than it.
    """
    alpha = {j: t for j, t in alpha.items() if t and j >= 1}

    def apply(elem):
        out = {}
        for w, c in elem.items():
            n = len(w)
            partial = [dict() for _ in range(n + 1)]
            partial[0][()] = c
            prefix = 0
            for i in range(n):
                sign = koszul_sign([degree], [prefix])
                prefix += deg[w[i]]
                if not partial[i]:
                    continue
                for j, table in alpha.items():
                    if i + j > n:
                        continue
                    img = table.get(w[i:i + j])
                    if not img:
                        continue
                    dest = partial[i + j]
                    for ow, oc in partial[i].items():
                        if max_length is not None and len(ow) >= max_length:
                            continue
                        for t, v in img.items():
                            key = ow + (t,)
                            val = dest.get(key, 0) + sign * oc * v
                            if val:
                                dest[key] = val
                            else:
                                dest.pop(key, None)
            vadd(out, partial[n])
        return out

    return apply


def apply_tensor(pairs, f, g, g_degree, deg):
    """``(f (x) g)`` on an element of T (x) T given as ``{(u, v): coef}``.

    ``f`` and ``g`` are linear maps on bar elements; ``g`` passing ``u``
    contributes the Koszul sign.  The empty word stands for the counit part.
    """
    out = {}
    for (u, v), c in pairs.items():
        s = koszul_sign([g_degree], [word_degree(u, deg)])
        fu = f({u: 1})
        gv = g({v: 1})
        for a, x in fu.items():
            for b, y in gv.items():
                key = (a, b)
                val = out.get(key, 0) + s * c * x * y
                if val:
                    out[key] = val
                else:
                    out.pop(key, None)
    return out


def iter_words(letters, deg, max_length, max_degree=None, length=None, degree=None):
    """Words over ``letters`` by increasing length, filtered by length and degree.

    Pruning assumes nothing about signs of degrees beyond the smallest one.
    """
    letters = list(letters)
    if not letters:
        return
    lo = min(deg[a] for a in letters)
    lengths = [length] if length is not None else range(1, max_length + 1)
    cap = degree if degree is not None else max_degree

    def rec(prefix, d, remaining):
        if remaining == 0:
            if (degree is None or d == degree) and (max_degree is None or d <= max_degree):
                yield prefix
            return
        for a in letters:
            nd = d + deg[a]
            if cap is not None and nd + (remaining - 1) * lo > cap:
                continue
            yield from rec(prefix + (a,), nd, remaining - 1)

    for n in lengths:
        if n > max_length:
            continue
        yield from rec((), 0, n)


def decomposable_span(words, deg):
    """Echelon basis (in coordinates of ``words``) of the shuffle-decomposables among them.

    ``words`` must be closed under the letter permutations produced by
    shuffles (e.g. all words of one length and total degree).
    """
    index = {w: i for i, w in enumerate(words)}
    rows = []
    seen = set()
    for w in words:
        n = len(w)
        for k in range(1, n):
            u, v = w[:k], w[k:]
            # all splits of all words give every pair (u, v) of the right shape
            if (u, v) in seen:
                continue
            seen.add((u, v))
            sh = shuffle(u, v, deg)
            if sh:
                rows.append({index[x]: c for x, c in sh.items()})
    red, pivots = row_space(rows, len(words))
    return red, pivots


def shuffle_decomposables(letters, deg, n, degree=None):
    """Basis of the span of all shuffles ``u * v`` with |u|+|v| = n, both nonempty.

    Returns ``(words, basis)``: the length-``n`` words (optionally of one total
    degree) and a list of bar elements spanning the decomposables.
    """
    if n < 2:
        raise ValueError("decomposables need word length >= 2")
    words = list(iter_words(letters, deg, n, length=n, degree=degree))
    red, _ = decomposable_span(words, deg)
    return words, [{words[j]: c for j, c in r.items()} for r in red]


def indecomposables_dim(letters, deg, n, degree=None):
    words, basis = shuffle_decomposables(letters, deg, n, degree)
    return len(words) - len(basis)
