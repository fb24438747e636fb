"""Graded vector spaces with named bases, graded maps and Koszul signs.

Vectors are plain dicts ``name -> Fraction`` with no zero entries.  Every
sign in the package is produced by :func:`koszul_sign`.
"""
from __future__ import annotations

from fractions import Fraction

from .exactlin import SparseMatrix


def koszul_sign(degrees_left, degrees_right):
    """Sign of moving homogeneous elements of ``degrees_right`` past ``degrees_left``.

    Every pair (p from the left list, q from the right list) contributes p*q.
    """
    return -1 if (sum(degrees_left) * sum(degrees_right)) % 2 else 1


def shift_sign(degrees):
    """Sign relating an operation on ``M`` to the same operation on the desuspension.

    Passing the n desuspension maps across the inputs a_1..a_n moves n-j of
    them past a_j.
    """
    n = len(degrees)
    s = 1
    for j, d in enumerate(degrees, start=1):
        s *= koszul_sign([1] * (n - j), [d])
    return s


class GradedBasis:
    """Finite ordered basis of named generators with integer degrees.

    ``unit`` optionally names the generator spanning the unit of an algebra;
    :attr:`reduced` lists the remaining generators (the augmentation ideal).
    """

    def __init__(self, generators, unit=None):
        gens = [(str(n), int(d)) for n, d in generators]
        names = [n for n, _ in gens]
        if len(set(names)) != len(names):
            raise ValueError("generator names must be unique")
        self.names = tuple(names)
        self._deg = dict(gens)
        self._index = {n: i for i, n in enumerate(names)}
        if unit is not None and unit not in self._deg:
            raise ValueError(f"unit {unit!r} is not a generator")
        self.unit = unit
        self.reduced = tuple(n for n in names if n != unit)

    def degree(self, name):
        return self._deg[name]

    @property
    def degrees(self):
        return dict(self._deg)

    def index(self, name):
        return self._index[name]

    def by_degree(self, k):
        return [n for n in self.names if self._deg[n] == k]

    def degree_range(self):
        if not self.names:
            return range(0)
        return range(min(self._deg.values()), max(self._deg.values()) + 1)

    def top_degree(self):
        return max(self._deg.values(), default=0)

    def desuspend(self):
        return GradedBasis([(n, d - 1) for n, d in self.items()], self.unit)

    def suspend(self):
        return GradedBasis([(n, d + 1) for n, d in self.items()], self.unit)

    def items(self):
        return [(n, self._deg[n]) for n in self.names]

    def vector_degree(self, vec):
        """Degree of a homogeneous nonzero vector (``None`` for 0, error if mixed)."""
        degs = {self._deg[n] for n in vec}
        if len(degs) > 1:
            raise ValueError(f"vector {vec} is not homogeneous")
        return degs.pop() if degs else None

    def __contains__(self, name):
        return name in self._deg

    def __iter__(self):
        return iter(self.names)

    def __len__(self):
        return len(self.names)

    def __eq__(self, other):
        if not isinstance(other, GradedBasis):
            return NotImplemented
        return self.items() == other.items() and self.unit == other.unit

    def __hash__(self):
        return hash((tuple(self.items()), self.unit))

    def __repr__(self):
        return "GradedBasis(%s)" % ", ".join(f"{n}:{d}" for n, d in self.items())


# vector helpers

def vclean(vec):
    return {k: v for k, v in vec.items() if v}


def vadd(acc, vec, coef=1):
    """In place ``acc += coef * vec``; returns ``acc``."""
    if not coef:
        return acc
    for k, v in vec.items():
        w = acc.get(k, 0) + coef * v
        if w:
            acc[k] = w
        else:
            acc.pop(k, None)
    return acc


def vscale(vec, coef):
    if not coef:
        return {}
    return {k: coef * v for k, v in vec.items()}


def as_vector(data):
    return vclean({k: Fraction(v) for k, v in data.items()})


class GradedMap:
    """Linear map between graded bases shifting degree by ``degree``."""

    def __init__(self, source, target, degree, images):
        self.source = source
        self.target = target
        self.degree = int(degree)
        self.images = {}
        for name, img in images.items():
            if name not in source:
                raise ValueError(f"{name!r} is not in the source basis")
            img = as_vector(img)
            for t in img:
                if t not in target:
                    raise ValueError(f"{t!r} is not in the target basis")
                if target.degree(t) != source.degree(name) + self.degree:
                    raise ValueError(
                        f"image of {name} has a term {t} of degree {target.degree(t)}, "
                        f"expected {source.degree(name) + self.degree}")
            if img:
                self.images[name] = img

    @classmethod
    def identity(cls, basis):
        return cls(basis, basis, 0, {n: {n: 1} for n in basis})

    def __call__(self, vec):
        out = {}
        for k, c in vec.items():
            img = self.images.get(k)
            if img:
                vadd(out, img, c)
        return out

    def compose(self, other):
        """``self o other``."""
        return GradedMap(other.source, self.target, self.degree + other.degree,
                         {n: self(other.images.get(n, {})) for n in other.source})

    def matrix(self, k):
        """Matrix of the restriction to source degree ``k`` (rows = target basis)."""
        src = self.source.by_degree(k)
        tgt = self.target.by_degree(k + self.degree)
        row = {n: i for i, n in enumerate(tgt)}
        entries = {}
        for j, n in enumerate(src):
            for t, v in self.images.get(n, {}).items():
                entries[row[t], j] = v
        return SparseMatrix(len(tgt), len(src), entries)

    def is_zero(self):
        return not self.images

    def __eq__(self, other):
        if not isinstance(other, GradedMap):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and self.degree == other.degree and self.images == other.images)

    def __repr__(self):
        return f"GradedMap(degree={self.degree}, {self.images})"


def desuspend(basis):
    return basis.desuspend()


def suspend(basis):
    return basis.suspend()
