import itertools
from fractions import Fraction

import pytest

from cinfinity.ainf import AInfStructure
from cinfinity.corpus import example_structure, free_truncated


@pytest.fixture
def X():
    return example_structure(0, 0)


@pytest.fixture
def Y():
    return example_structure(1, 0)


def strict_xyu():
    """Strict cdga on x, y (degree 2) and u (degree 3), truncated above 7."""
    a = free_truncated([("x", 2), ("y", 2), ("u", 3)], 7, {}, True)
    s = a.to_ainf()
    return AInfStructure(s.basis, {2: s.ops[2]}, cinf=True)


def random_table(rng, basis, arity, degree, density=0.5, letters=None):
    letters = letters or basis.reduced
    tab = {}
    for w in itertools.product(letters, repeat=arity):
        target = sum(basis.degree(a) for a in w) + degree
        outs = [t for t in basis.reduced if basis.degree(t) == target]
        if outs and rng.random() < density:
            c = rng.choice([-2, -1, 1, 2])
            tab[w] = {rng.choice(outs): Fraction(c)}
    return tab
