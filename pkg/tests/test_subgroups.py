"""Subgroup calculus vs exhaustive enumeration oracles."""

from __future__ import annotations

import random

import pytest

from normgraph.alphabets import ProductSpace, cyclic_group, vector_space
from normgraph.errors import NotASubgroup, RowOutOfAmbient
from normgraph.subgroups import (
    CodeSubgroup,
    canonicalize,
    cylinder,
    from_elements,
    ftsp_decompose,
    full_subgroup,
    product_subgroup,
    zero_subgroup,
)

GF2 = vector_space(2, 1)
GF3 = vector_space(3, 1)
Z4 = cyclic_group(4)


def space(*alphas):
    return ProductSpace([(i, a) for i, a in enumerate(alphas)])


def close(ambient, rows):
    """Brute-force subgroup closure (independent of the Howell engine)."""
    seen = {ambient.zero}
    frontier = [ambient.zero]
    while frontier:
        x = frontier.pop()
        for r in rows:
            y = ambient.add(x, r)
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    return seen


def random_subgroup(rng, ambient, max_gens=3):
    rows = [
        tuple(rng.randrange(m) for m in ambient.moduli)
        for _ in range(rng.randrange(0, max_gens + 1))
    ]
    return CodeSubgroup(ambient, rows), close(ambient, rows)


def random_ambient(rng, max_width=3):
    pool = [GF2, GF3, Z4, cyclic_group(2), cyclic_group(6), vector_space(2, 2)]
    return space(*(rng.choice(pool) for _ in range(rng.randrange(1, max_width + 1))))


def test_canonicalize_worked_examples():
    amb = space(vector_space(2, 3))
    c = canonicalize([(1, 1, 0), (0, 1, 1)], amb)
    assert c.order == 4
    assert set(c.elements()) == close(amb, [(1, 1, 0), (0, 1, 1)])
    dup = canonicalize([(1, 1, 1), (1, 1, 1)], amb)
    assert dup.rows == ((1, 1, 1),)
    z4 = canonicalize([(2,)], space(Z4))
    assert set(z4.elements()) == {(0,), (2,)}
    assert z4.order == 2


def test_row_out_of_ambient():
    with pytest.raises(RowOutOfAmbient):
        canonicalize([(2, 0, 0)], space(vector_space(2, 3)))


def test_orthogonal_worked_examples():
    amb = space(vector_space(2, 3))
    rep = canonicalize([(1, 1, 1)], amb)
    assert set(rep.orthogonal().elements()) == {
        (0, 0, 0), (1, 1, 0), (1, 0, 1), (0, 1, 1)}
    assert full_subgroup(amb).orthogonal().is_trivial
    two = canonicalize([(2,)], space(Z4))
    assert set(two.orthogonal().elements()) == {(0,), (2,)}


def test_orthogonal_against_pairing_oracle():
    rng = random.Random(23)
    for _ in range(40):
        amb = random_ambient(rng)
        sub, elems = random_subgroup(rng, amb)
        perp = sub.orthogonal()
        brute = {
            y for y in amb.elements()
            if all(amb.pair_nums(x, y) == 0 for x in elems)
        }
        assert set(perp.elements()) == brute
        assert perp.order * sub.order == amb.order
        assert perp.orthogonal() == sub


def test_project_cross_section_oracle():
    rng = random.Random(29)
    for _ in range(40):
        amb = random_ambient(rng, max_width=3)
        if len(amb.factors) < 2:
            continue
        sub, elems = random_subgroup(rng, amb)
        k = rng.randrange(1, len(amb.factors))
        part = list(amb.labels[:k])
        cols = amb.columns(part)
        proj = sub.project(part)
        cross = sub.cross_section(part)
        proj_brute = {tuple(x[c] for c in cols) for x in elems}
        other = [c for c in range(amb.width) if c not in cols]
        cross_brute = {
            tuple(x[c] for c in cols)
            for x in elems if all(x[c] == 0 for c in other)
        }
        assert set(proj.elements()) == proj_brute
        assert set(cross.elements()) == cross_brute
        assert cross.contains_subgroup(cross) and proj.contains_subgroup(cross)


def test_projection_cross_section_duality():
    rng = random.Random(31)
    for _ in range(40):
        amb = random_ambient(rng)
        if len(amb.factors) < 2:
            continue
        sub, _ = random_subgroup(rng, amb)
        part = list(amb.labels[:1])
        lhs = sub.cross_section(part).orthogonal()
        rhs = sub.orthogonal().project(part)
        assert lhs == rhs


def test_sum_intersect_oracle_and_duality():
    rng = random.Random(37)
    for _ in range(40):
        amb = random_ambient(rng)
        c1, e1 = random_subgroup(rng, amb)
        c2, e2 = random_subgroup(rng, amb)
        s = c1.sum(c2)
        i = c1.intersect(c2)
        assert set(s.elements()) == close(amb, list(e1) + list(e2))
        assert set(i.elements()) == (e1 & e2)
        assert s.orthogonal() == c1.orthogonal().intersect(c2.orthogonal())
        assert c1.intersect(c1) == c1


def test_sum_intersect_worked_examples():
    amb = space(vector_space(2, 3))
    a = canonicalize([(1, 1, 1)], amb)
    b = canonicalize([(1, 1, 0)], amb)
    assert set(a.sum(b).elements()) == {
        (0, 0, 0), (1, 1, 1), (1, 1, 0), (0, 0, 1)}
    even = canonicalize([(1, 1, 0), (0, 1, 1)], amb)
    assert a.intersect(even).is_trivial


def test_quotient_transversal():
    amb = space(vector_space(2, 2))
    full = full_subgroup(amb)
    diag = canonicalize([(1, 1)], amb)
    reps = full.quotient_transversal(diag)
    assert reps[0] == (0, 0)
    assert len(reps) == 2
    assert reps[1] in {(0, 1), (1, 0)}
    # lexicographically smallest representative
    assert reps[1] == (0, 1)

    z4 = space(Z4)
    fz = full_subgroup(z4)
    reps = fz.quotient_transversal(canonicalize([(2,)], z4))
    assert reps == [(0,), (1,)]

    c = canonicalize([(1, 0)], amb)
    assert c.quotient_transversal(c) == [(0, 0)]
    with pytest.raises(NotASubgroup):
        c.quotient_by(diag)


def test_quotient_map_structure():
    rng = random.Random(41)
    for _ in range(30):
        amb = random_ambient(rng)
        c, ce = random_subgroup(rng, amb)
        # random subgroup of c: generated by a few random elements of c
        delems = rng.sample(sorted(ce), k=min(len(ce), rng.randrange(1, 3)))
        d = CodeSubgroup(amb, delems)
        q = c.quotient_by(d)
        assert q.order == c.order // d.order
        # natural map is a homomorphism with kernel d
        for _ in range(15):
            x = rng.choice(sorted(ce))
            y = rng.choice(sorted(ce))
            assert q.project(amb.add(x, y)) == q.alphabet.add(
                q.project(x), q.project(y))
            assert (q.project(x) == q.alphabet.zero) == d.contains(x)
        # section really is a section
        for qq in q.alphabet.elements():
            rep = q.lift(qq)
            assert c.contains(rep)
            assert q.project(rep) == qq


def test_lift_prefix():
    rng = random.Random(43)
    for _ in range(30):
        amb = random_ambient(rng, max_width=3)
        if len(amb.factors) < 2:
            continue
        sub, elems = random_subgroup(rng, amb)
        part = [amb.labels[0]]
        cols = amb.columns(part)
        for x in list(elems)[:10]:
            t = tuple(x[c] for c in cols)
            got = sub.lift_prefix(part, t)
            assert got is not None
            assert sub.contains(got)
            assert tuple(got[c] for c in cols) == t
        # a value outside the projection has no lift
        proj = {tuple(x[c] for c in cols) for x in elems}
        sub_space = amb.subspace(part)
        for v in sub_space.elements():
            if v not in proj:
                assert sub.lift_prefix(part, v) is None
                break


def test_ftsp_decompose_identity_graph():
    amb = space(GF2, GF2)
    c = canonicalize([(1, 1)], amb)
    dec = ftsp_decompose(c, [0], [1])
    assert dec.quot_a.order == 2 and dec.quot_b.order == 2
    pairs = set(dec.iso_pairs.elements())
    assert pairs == {(0, 0), (1, 1)}


def test_ftsp_order_identities():
    rng = random.Random(47)
    for _ in range(40):
        amb = random_ambient(rng, max_width=3)
        if len(amb.factors) < 2:
            continue
        sub, _ = random_subgroup(rng, amb)
        k = rng.randrange(1, len(amb.factors))
        pa = list(amb.labels[:k])
        pb = list(amb.labels[k:])
        qa = sub.project(pa).order // sub.cross_section(pa).order
        qb = sub.project(pb).order // sub.cross_section(pb).order
        qc = sub.order // (sub.cross_section(pa).order * sub.cross_section(pb).order)
        q4 = (sub.project(pa).order * sub.project(pb).order) // sub.order
        assert qa == qb == qc == q4
        dec = ftsp_decompose(sub, pa, pb)
        assert dec.iso_pairs.order == qa
        # the pair set is the graph of a bijection
        seen_a, seen_b = {}, {}
        wa = dec.quot_a.alphabet.width
        for pair in dec.iso_pairs.elements():
            a, b = pair[:wa], pair[wa:]
            assert seen_a.setdefault(a, b) == b
            assert seen_b.setdefault(b, a) == a
        assert len(seen_a) == qa


def test_product_and_cylinder():
    a = canonicalize([(1,)], space(GF2))
    b = canonicalize([(2,)], ProductSpace([("z", Z4)]))
    p = product_subgroup(a.renamed({0: "x"}), b)
    assert p.order == 4
    amb = space(GF2, GF2, GF2)
    cyl = cylinder(amb, {1: zero_subgroup(space(GF2).subspace([0]))})
    assert cyl.order == 4
    assert all(x[1] == 0 for x in cyl.elements())


def test_enumerate_worked_examples():
    assert list(zero_subgroup(space(GF2)).elements()) == [(0,)]
    assert sorted(full_subgroup(space(GF3)).elements()) == [(0,), (1,), (2,)]
    z8 = ProductSpace([("s", cyclic_group(8))])
    sub = canonicalize([(2,)], z8)
    assert sorted(sub.elements()) == [(0,), (2,), (4,), (6,)]


def test_from_elements_matches_canonicalize():
    rng = random.Random(53)
    for _ in range(20):
        amb = random_ambient(rng)
        sub, elems = random_subgroup(rng, amb)
        assert from_elements(amb, sorted(elems)) == sub


def test_project_cross_section_worked_examples():
    amb = space(GF2, GF2)
    diag = canonicalize([(1, 1)], amb)
    assert set(diag.project([0]).elements()) == {(0,), (1,)}
    assert diag.cross_section([0]).is_trivial
    assert set(full_subgroup(amb).cross_section([0]).elements()) == {(0,), (1,)}

    amb3 = space(GF2, GF2, GF2)
    even3 = canonicalize([(1, 1, 0), (0, 1, 1)], amb3)
    assert even3.project([1, 2]).is_full

    amb4 = space(GF2, GF2, GF2, GF2)
    even4 = canonicalize([(1, 1, 0, 0), (0, 1, 1, 0), (0, 0, 1, 1)], amb4)
    assert set(even4.cross_section([0, 1]).elements()) == {(0, 0), (1, 1)}
    zero = canonicalize([], amb)
    assert zero.project([1]).is_trivial


def test_ftsp_full_product_trivial_quotients():
    amb = space(GF2, Z4)
    dec = ftsp_decompose(full_subgroup(amb), [0], [1])
    assert dec.quot_a.order == 1 and dec.quot_b.order == 1
    # even-weight length-4 code split 2+2: quotients of order 2
    amb4 = space(GF2, GF2, GF2, GF2)
    even4 = canonicalize([(1, 1, 0, 0), (0, 1, 1, 0), (0, 0, 1, 1)], amb4)
    dec4 = ftsp_decompose(even4, [0, 1], [2, 3])
    assert dec4.quot_a.order == 2 and dec4.quot_b.order == 2
    assert dec4.iso_pairs.order == 2
