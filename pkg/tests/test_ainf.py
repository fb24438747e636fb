import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cinfinity.ainf import (AInfMorphism, AInfStructure, InvalidStructure, NotIso,
                            SourceTargetMismatch, bar_differential, bar_map, check_cinf,
                            check_morphism, check_morphism_cinf, check_shuffle_derivation,
                            check_stasheff, compose,
                            identity_morphism, invert_iso, is_weak_equivalence, morphisms_agree)
from cinfinity.barcoalg import iter_words, shuffle, shuffle_elements, word_degree
from cinfinity.corpus import example_basis, example_structure, massey_dga, sphere_structure
from cinfinity.hoch import cochain_coords, HochBase, perturb
from cinfinity.invariants import classify_s2s2s5, example_iso
from cinfinity.transfer import transfer_ainf

from conftest import random_table, strict_xyu


def test_degree_validation():
    b = example_basis()
    with pytest.raises(InvalidStructure):
        AInfStructure(b, {3: {("x", "x", "x"): {"x": 1}}})
    with pytest.raises(InvalidStructure):
        AInfStructure(b, {2: {("e", "x"): {"x": 1}}})
    assert AInfStructure(b).minimal


def test_bar_differential_examples(Y):
    d = bar_differential(Y)
    assert d({("x", "x", "y"): 1}) == {("z",): 1}
    zero = AInfStructure(example_basis())
    assert bar_differential(zero)({("x", "y"): 1}) == {}


def test_bar_differential_of_strict_algebra_is_classical():
    s = strict_xyu()
    d = bar_differential(s)
    # [x, y, u] -> +-[xy, u] +-[x, yu], signs from the desuspension
    out = d({("x", "y", "u"): 1})
    assert set(out) == {("x*y", "u"), ("x", "y*u")}
    assert out[("x*y", "u")] == 1 and out[("x", "y*u")] == -1


def test_dga_passes_stasheff():
    assert check_stasheff(massey_dga().to_ainf(), 12)
    assert check_stasheff(strict_xyu(), 12)


@pytest.mark.parametrize("p,q", [(0, 0), (1, 0), (3, -2), (Fraction(1, 2), 5)])
def test_example_structures_are_valid(p, q):
    s = example_structure(p, q)
    assert check_stasheff(s, 15)
    assert check_stasheff(s, 15, max_arity=6, full=True)
    assert check_cinf(s)


def test_planted_stasheff_violation():
    s = strict_xyu()
    rng = random.Random(2)
    m3 = random_table(rng, s.basis, 3, -1, letters=["x", "y", "u"])
    bad = AInfStructure(s.basis, {2: s.ops[2], 3: m3})
    v = check_stasheff(bad, 12)
    assert not v
    assert v.witness.value
    assert not check_stasheff(bad, 12, full=True)


def test_shuffle_vanishing_is_enforced():
    b = example_basis()
    v = check_cinf(AInfStructure(b, {3: {("x", "x", "x"): {"z": 1}}}))
    assert not v and "shuffle" in v.message
    # the unsigned reading of the symmetry is not shuffle-vanishing
    v = check_cinf(AInfStructure(b, {3: {("x", "x", "y"): {"z": 1}, ("y", "x", "x"): {"z": 1}}}))
    assert not v
    s = strict_xyu()
    nc = dict(s.ops[2].table)
    nc["x", "y"] = {"x*y": 2}
    assert not check_cinf(AInfStructure(s.basis, {2: nc}))


def test_morphism_checks(Y):
    assert check_morphism(identity_morphism(Y), 12)
    s5 = sphere_structure(5)
    G = AInfMorphism(Y, s5, {1: {("z",): {"s": 1}}})
    v = check_morphism(G, 12)
    assert not v and v.witness.word == ("x", "x", "y")


def test_orbit_law_small_sample():
    rng = random.Random(0)
    for _ in range(10):
        a, b, c, d = (Fraction(rng.randint(-3, 3)) for _ in range(4))
        if a * d - b * c == 0:
            continue
        r = Fraction(rng.choice([-2, -1, 1, 3]))
        p2, q2 = Fraction(rng.randint(-3, 3)), Fraction(rng.randint(-3, 3))
        det = a * d - b * c
        p = det * (a * p2 + b * q2) / r
        q = det * (c * p2 + d * q2) / r
        f = example_iso(a, b, c, d, r, example_structure(p, q), example_structure(p2, q2))
        assert check_morphism(f, 12)
        if p2 or q2:
            f = example_iso(a, b, c, d, r, example_structure(p + 1, q), example_structure(p2, q2))
            assert not check_morphism(f, 12)


def test_compose_with_identity(Y):
    f = classify_s2s2s5(1, 0, 0, 1).witness
    g = compose(f, identity_morphism(f.source))
    assert g.components == f.components
    h = compose(identity_morphism(f.target), f)
    assert h.components == f.components


def test_compose_arity_one():
    b = example_basis()
    s = AInfStructure(b)
    f = AInfMorphism(s, s, {1: {("x",): {"y": 2}, ("y",): {"x": 1}, ("z",): {"z": 3}}})
    g = AInfMorphism(s, s, {1: {("x",): {"x": 1, "y": 1}, ("y",): {"y": 1}, ("z",): {"z": -1}}})
    h = compose(g, f)
    assert set(h.components) == {1}
    assert h.component(1).table[("x",)] == {"y": 2}
    assert h.component(1).table[("y",)] == {"x": 1, "y": 1}


def test_compose_mismatch():
    f = identity_morphism(example_structure(1, 0))
    g = identity_morphism(example_structure(0, 1))
    with pytest.raises(SourceTargetMismatch):
        compose(g, f)


def perturbation(s, seed, arity=2):
    rng = random.Random(seed)
    coords = cochain_coords(HochBase(s), arity, 1 - arity)
    p = {}
    for w, t in coords:
        c = rng.randint(-2, 2)
        if c:
            p.setdefault(w, {})[t] = Fraction(c)
    return perturb(s, p, arity)


@pytest.mark.parametrize("seed", [1, 2])
def test_composite_of_random_morphisms(seed):
    s = strict_xyu()
    s1, f = perturbation(s, seed)
    s2, g = perturbation(s1, seed + 10)
    assert check_morphism(f, 8) and check_morphism(g, 8)
    h = compose(g, f)
    assert check_morphism(h, 8)
    # bar level: B(g o f) = B(g) B(f)
    Bf, Bg, Bh = bar_map(f), bar_map(g), bar_map(h)
    for w in iter_words(s.letters, s.deg, 3, max_degree=6):
        assert Bh({w: 1}) == Bg(Bf({w: 1}))


def test_weak_equivalence():
    Y = example_structure(1, 0)
    assert is_weak_equivalence(identity_morphism(Y), 8)
    assert not is_weak_equivalence(AInfMorphism(Y, Y, {}), 8)
    H, f = transfer_ainf(massey_dga(), None, 4, 6)
    assert is_weak_equivalence(f, 8)


def test_invert_identity_and_arity_one():
    s = strict_xyu()
    g = invert_iso(identity_morphism(s), 3)
    assert g.component(1).table == identity_morphism(s).component(1).table
    assert not any(g.component(n).table for n in (2, 3))
    b = example_basis()
    t = AInfStructure(b)
    f = AInfMorphism(t, t, {1: {("x",): {"x": 1, "y": 1}, ("y",): {"y": 1}, ("z",): {"z": 2}}})
    g = invert_iso(f, 3)
    assert g.component(1).table == {("x",): {"x": 1, "y": -1}, ("y",): {"y": 1},
                                    ("z",): {"z": Fraction(1, 2)}}


def test_invert_singular():
    t = AInfStructure(example_basis())
    f = AInfMorphism(t, t, {1: {("x",): {"x": 1}, ("y",): {"x": 1}, ("z",): {"z": 1}}})
    with pytest.raises(NotIso):
        invert_iso(f, 3)


@pytest.mark.parametrize("args", [(1, 0, 0, 1), (2, 3, -1, 5), (1, 1, 4, -7)])
def test_invert_example_iso(args):
    f = classify_s2s2s5(*args).witness
    g = invert_iso(f, 5)
    assert check_morphism(g, 12)
    ident = identity_morphism(f.source)
    assert morphisms_agree(compose(g, f, max_arity=5), ident, 12, 5)


def test_invert_perturbation():
    s = strict_xyu()
    s1, f = perturbation(s, 4)
    g = invert_iso(f, 5)
    assert check_morphism(g, 8, 5)
    assert morphisms_agree(compose(g, f, max_arity=5), identity_morphism(s), 8, 5)


# shuffle compatibility of the bar construction

def is_shuffle_derivation(s, max_len=3):
    d = bar_differential(s)
    deg = s.deg
    for u in iter_words(s.letters, deg, max_len - 1):
        for v in iter_words(s.letters, deg, max_len - len(u)):
            lhs = d(shuffle(u, v, deg))
            rhs = shuffle_elements(d({u: 1}), {v: 1}, deg)
            sign = -1 if word_degree(u, deg) % 2 else 1
            for k, c in shuffle_elements({u: 1}, d({v: 1}), deg).items():
                rhs[k] = rhs.get(k, 0) + sign * c
            rhs = {k: c for k, c in rhs.items() if c}
            if lhs != rhs:
                return False
    return True


@given(st.integers(-3, 3), st.integers(-3, 3))
@settings(max_examples=15, deadline=None)
def test_shuffle_derivation_for_cinf(p, q):
    assert is_shuffle_derivation(example_structure(p, q))


def test_derivation_fails_without_shuffle_vanishing():
    b = example_basis()
    s = AInfStructure(b, {3: {("x", "x", "x"): {"z": 1}}})
    assert not check_cinf(s)
    assert not is_shuffle_derivation(s)
    v = check_shuffle_derivation(s, 3)
    assert not v and v.witness.word in ((("x",), ("x", "x")), (("x", "x"), ("x",)))


@given(st.integers(-3, 3), st.integers(-3, 3), st.integers(0, 10 ** 6))
@settings(max_examples=15, deadline=None)
def test_derivation_checker_matches_oracle(p, q, seed):
    s = example_structure(p, q)
    assert check_shuffle_derivation(s, 4)
    rng = random.Random(seed)
    bad = AInfStructure(s.basis, {3: random_table(rng, s.basis, 3, -1)})
    assert bool(check_shuffle_derivation(bad, 3)) == is_shuffle_derivation(bad) == bool(check_cinf(bad))


def is_multiplicative(f, max_len=3):
    F = bar_map(f)
    deg = f.source.deg
    for u in iter_words(f.source.letters, deg, max_len - 1):
        for v in iter_words(f.source.letters, deg, max_len - len(u)):
            if F(shuffle(u, v, deg)) != shuffle_elements(F({u: 1}), F({v: 1}), f.target.deg):
                return False
    return True


def test_bar_map_multiplicative_iff_shuffle_vanishing():
    s = strict_xyu()
    ident = {("x",): {"x": 1}, ("y",): {"y": 1}, ("u",): {"u": 1}}
    good = AInfMorphism(s, s, {1: ident, 2: {("x", "y"): {"u": 1}, ("y", "x"): {"u": 1}}})
    bad = AInfMorphism(s, s, {1: ident, 2: {("x", "y"): {"u": 1}}})
    assert check_morphism_cinf(good) and is_multiplicative(good)
    assert not check_morphism_cinf(bad) and not is_multiplicative(bad)
