import random

import pytest

from dendrokan.complexes import (
    ChainComplex,
    chain_extend,
    chain_restrict,
    classical_gamma,
    classical_normalized,
    classical_unit_matrices,
    connected_face,
    degenerate,
    monotone_surjections,
    moore,
    normalized,
    random_chain_complex,
    simplicial_representable,
    split_element,
    top_face_sign,
    validate_complex,
    zero_complex,
)
from dendrokan.maps import face_order, face_sign, inner_face, outer_face
from dendrokan.presheaf import (
    Truncation,
    representable,
    simplicial_extend,
    simplicial_restrict,
    zero_dendab,
)
from dendrokan.trees import linear_tree, parse_tree
from dendrokan.zlat import IntMatrix, Lattice, is_direct_sum

TR = Truncation(3, 5)

TREE_R = "(e (((e))) e)"  # chain of three unary vertices, unary top


def test_zero_complex_valid():
    assert validate_complex(zero_complex(TR)) == []


def test_moore_validates_on_representables():
    for term in ["e", "(e)", "((e))", "(e e)", "(())", "((e) e)"]:
        t = parse_tree(term)
        cx = moore(representable(t, TR))
        assert validate_complex(cx) == []


def test_moore_fault_injection():
    # flipping the sign of one unconnected-face structure map breaks
    # anticommutation (connected faces on linear trees would be invisible:
    # every product through them is already zero)
    t = parse_tree("((e) e)")
    cx = moore(representable(t, TR))
    victim = outer_face(t, ())
    cx._structs[victim.key()] = cx.structure(victim).scale(-1)
    assert validate_complex(cx)


def test_moore_case_breakdown_tree_r():
    # structure map of the top connected face: alternating signed actions
    tr_big = Truncation(4, 7)
    r = parse_tree(TREE_R)
    a = representable(r, tr_big)
    cx = moore(a)
    da = inner_face(r, (1,))
    db = inner_face(r, (1, 0))
    dc = inner_face(r, (1, 0, 0))
    dq = outer_face(r, (1, 0, 0))
    assert [face_sign(g) for g in (da, db, dc, dq)] == [-1, 1, -1, 1]
    expected = (
        a.action(da).scale(-1)
        + a.action(db)
        + a.action(dc).scale(-1)
        + a.action(dq)
    )
    assert cx.structure(dq) == expected
    # normal faces vanish
    assert cx.structure(da).is_zero()
    assert cx.structure(db).is_zero()
    assert cx.structure(dc).is_zero()


def test_moore_case_ii_on_branchy_tree():
    t = parse_tree("(e e)")
    a = representable(t, TR)
    cx = moore(a)
    for g in face_order(t):
        assert cx.structure(g) == a.action(g).scale(face_sign(g))


def test_moore_linear_alternating_sum():
    a = representable(linear_tree(2), TR)
    cx = moore(a)
    for n in (2, 3):
        t = linear_tree(n)
        faces = face_order(t)
        total = None
        for i, g in enumerate(faces):
            term = a.action(g).scale((-1) ** i)
            total = term if total is None else total + term
        assert cx.structure(connected_face(n)) == total


def test_top_face_sign():
    assert top_face_sign(1) == 1
    assert [top_face_sign(n) for n in (2, 3, 4)] == [1, -1, 1]


def test_normalized_full_when_no_normal_faces():
    t = parse_tree("(e e)")
    a = representable(t, TR)
    n = normalized(a)
    for s in TR:
        from dendrokan.linparts import normal_faces

        if not normal_faces(s):
            assert n.lattice(s) == Lattice.full(a.rank(s))


def test_normalized_of_zero():
    n = normalized(zero_dendab(TR))
    for s in TR:
        assert n.rank(s) == 0


def test_normalized_linear_ranks_binomial():
    # the normalized part of the free object on L_n has rank C(n+1, k+1)
    from math import comb

    from .oracles import injective_monotone_maps

    a = representable(linear_tree(3), TR)
    n = normalized(a)
    for k in range(0, 4):
        got = n.rank(linear_tree(k))
        assert got == comb(4, k + 1)
        assert got == len(injective_monotone_maps(k, 3))


def test_normalized_and_degenerate_complement_ranks():
    for term in ["(e)", "((e))", "(())", "((e) e)", "(e e)"]:
        t = parse_tree(term)
        a = representable(t, TR)
        n, d = normalized(a), degenerate(a)
        for s in TR:
            assert n.rank(s) + d.rank(s) == a.rank(s)
            assert is_direct_sum(n.lattice(s), d.lattice(s))


def test_degenerate_zero_without_unary():
    t = parse_tree("(e e)")
    a = representable(t, TR)
    d = degenerate(a)
    for s in TR:
        from dendrokan.maps import degeneracy_order

        if not degeneracy_order(s):
            assert d.rank(s) == 0


def test_subcomplexes_validate():
    for term in ["(e)", "((e))", "(e e)"]:
        a = representable(parse_tree(term), TR)
        assert validate_complex(normalized(a).as_complex()) == []
        assert validate_complex(degenerate(a).as_complex()) == []


def test_split_element_normal_vector():
    a = representable(linear_tree(2), TR)
    n = normalized(a)
    t = linear_tree(1)
    for j in range(n.rank(t)):
        x = n.lattice(t).basis.column(j)
        part, summands = split_element(a, t, x)
        assert part == x
        assert summands == []


def test_split_element_degenerate_vector():
    from dendrokan.maps import degeneracy_order

    a = representable(linear_tree(1), TR)
    t = linear_tree(1)
    sigma = degeneracy_order(t)[0]
    n = normalized(a)
    d = degenerate(a)
    rank_eta = a.rank(parse_tree("e"))
    for j in range(rank_eta):
        y = [1 if i == j else 0 for i in range(rank_eta)]
        x = a.action(sigma).apply(y)
        part, summands = split_element(a, t, x)
        total = list(part)
        for s in summands:
            total = [u + v for u, v in zip(total, s)]
        assert total == x
        assert part in n.lattice(t)
        for s in summands:
            assert s in d.lattice(t)


def test_split_element_matches_projection():
    rng = random.Random(41)
    for term in ["(e)", "((e))", "(())"]:
        t = parse_tree(term)
        a = representable(t, TR)
        n, d = normalized(a), degenerate(a)
        for s in TR:
            r = a.rank(s)
            if r == 0:
                continue
            nl, dl = n.lattice(s), d.lattice(s)
            assert is_direct_sum(nl, dl)
            combined = Lattice.from_columns(
                r, nl.basis.columns() + dl.basis.columns()
            )
            for _ in range(10):
                x = [rng.randint(-9, 9) for _ in range(r)]
                part, summands = split_element(a, s, x)
                total = list(part)
                for y in summands:
                    total = [u + v for u, v in zip(total, y)]
                assert total == x
                assert part in nl
                for y in summands:
                    assert y in dl
                # agreement with the lattice projection
                from dendrokan.zlat import hstack

                sol = None
                stack = hstack([nl.basis, dl.basis]) if r else None
                coeffs = Lattice(r, stack).solve(x) if nl.rank + dl.rank == r else None
                if coeffs is not None:
                    proj_n = nl.basis.apply(coeffs[: nl.rank])
                    assert proj_n == part


def test_chain_restrict_of_moore():
    a = representable(linear_tree(2), TR)
    k = chain_restrict(moore(a))
    assert k.validate() == []
    assert k.ranks[0] == a.rank(parse_tree("e"))


def test_chain_extend_roundtrip():
    rng = random.Random(43)
    top = TR.max_linear_degree()
    for _ in range(4):
        k = random_chain_complex(rng, top)
        cx = chain_extend(k, TR)
        assert validate_complex(cx) == []
        assert chain_restrict(cx) == k


def test_chain_extend_small_example():
    # identity differential between two copies of Z, zero elsewhere
    top = TR.max_linear_degree()
    ranks = [1, 1] + [0] * (top - 1)
    diffs = {1: IntMatrix.identity(1)}
    for n in range(2, top + 1):
        diffs[n] = IntMatrix.zeros(ranks[n - 1], ranks[n])
    k = ChainComplex(ranks, diffs)
    cx = chain_extend(k, TR)
    for t in TR:
        expected = 1 if t.term in ("e", "(e)") else 0
        assert cx.rank(t) == expected


def test_classical_normalized_constant():
    b = simplicial_representable(0, 3)  # constant simplicial Z
    k = classical_normalized(b)
    assert k.ranks == [1, 0, 0, 0]


def test_classical_normalized_binomial_ranks():
    from math import comb

    for n in range(0, 5):
        b = simplicial_representable(n, 4)
        k = classical_normalized(b)
        for deg in range(0, 5):
            assert k.ranks[deg] == comb(n + 1, deg + 1)


def test_classical_roundtrip_ngamma():
    rng = random.Random(47)
    for _ in range(6):
        k = random_chain_complex(rng, 3)
        b = classical_gamma(k)
        from dendrokan.presheaf import validate_simplicial

        assert validate_simplicial(b) == []
        assert classical_normalized(b) == k


def test_classical_unit_is_isomorphism():
    from dendrokan.zlat import is_isomorphism

    for n in range(0, 3):
        b = simplicial_representable(n, 3)
        for m in classical_unit_matrices(b):
            assert is_isomorphism(m)


def test_monotone_surjections_counts():
    # surjections [n] ->> [m] counted by binomials; identity first
    assert monotone_surjections(0) == [(0,)]
    s2 = monotone_surjections(2)
    assert s2[0] == (0, 1, 2)
    assert len(s2) == 4  # onto [2], [1] twice, [0]
    assert len(monotone_surjections(3)) == 8


def test_moore_restrict_matches_classical_on_linear():
    # the normalized tree-side complex restricted to linear trees equals
    # the classical normalized complex of the simplicial restriction
    a = representable(linear_tree(3), TR)
    ns = classical_normalized(simplicial_restrict(a))
    ndend = chain_restrict(normalized(a).as_complex())
    assert ns == ndend
