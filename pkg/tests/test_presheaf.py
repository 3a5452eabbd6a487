import random

import pytest

from dendrokan.maps import compose, face_order, hom, identity, inner_face
from dendrokan.presheaf import (
    Truncation,
    conjugate,
    direct_sum,
    evaluate,
    representable,
    simplicial_extend,
    simplicial_restrict,
    validate,
    validate_simplicial,
    zero_dendab,
)
from dendrokan.complexes import random_chain_complex, simplicial_representable
from dendrokan.trees import enumerate_trees, eta, linear_tree, parse_tree


TR = Truncation(3, 5)


def test_truncation_membership():
    assert eta() in TR
    assert linear_tree(3) in TR
    assert parse_tree("(e e e e e)") not in TR
    with pytest.raises(Exception):
        TR.require(parse_tree("((((e))))"))


def test_truncation_max_linear_degree():
    assert TR.max_linear_degree() == 3
    assert Truncation(2, 7).max_linear_degree() == 2
    assert Truncation(5, 4).max_linear_degree() == 3


def test_representable_ranks_are_hom_counts():
    t = parse_tree("(e e)")
    a = representable(t, TR)
    for s in TR:
        assert a.rank(s) == len(hom(s, t))
    assert a.rank(eta()) == 3


def test_representable_eta():
    a = representable(eta(), TR)
    assert a.rank(eta()) == 1
    assert a.rank(linear_tree(1)) == 1  # the collapse
    assert a.rank(parse_tree("(e e)")) == 0


def test_representable_l1_at_eta():
    a = representable(linear_tree(1), TR)
    assert a.rank(eta()) == 2  # the two edges


def test_representable_actions_are_permutation_like():
    t = parse_tree("((e) e)")
    a = representable(t, TR)
    for s in TR:
        for g in TR.generators(s):
            m = a.action(g)
            for j in range(m.cols):
                col = m.column(j)
                assert sum(col) == 1 and all(v in (0, 1) for v in col)


def test_representable_validates():
    for term in ["e", "(e)", "(e e)", "(())", "((e))"]:
        a = representable(parse_tree(term), TR)
        assert validate(a) == []


def test_validate_catches_fault_injection():
    t = parse_tree("((e))")
    a = representable(t, TR)
    # negate one action matrix
    victim = face_order(linear_tree(2))[1]
    a._actions[victim.key()] = a.action(victim).scale(-1)
    report = validate(a)
    assert report


def test_zero_dendab_validates():
    assert validate(zero_dendab(TR)) == []


def test_evaluate_identity():
    t = parse_tree("(e e)")
    a = representable(t, TR)
    m = evaluate(a, identity(t))
    assert m.is_identity()


def test_evaluate_matches_precomposition():
    target = parse_tree("((e) e)")
    a = representable(target, TR)
    for s in enumerate_trees(2, 4):
        for t2 in enumerate_trees(2, 4):
            for f in hom(s, t2):
                m = evaluate(a, f)
                maps_t2 = list(hom(t2, target))
                maps_s = list(hom(s, target))
                idx = {h.key(): i for i, h in enumerate(maps_s)}
                for j, h in enumerate(maps_t2):
                    col = m.column(j)
                    assert sum(col) == 1
                    assert col[idx[compose(h, f).key()]] == 1


def test_evaluate_respects_composition():
    target = parse_tree("((e))")
    a = representable(target, TR)
    l1, l2, l3 = linear_tree(1), linear_tree(2), linear_tree(3)
    rng = random.Random(23)
    homs12 = list(hom(l1, l2))
    homs23 = list(hom(l2, l3))
    for _ in range(12):
        f = rng.choice(homs12)
        g = rng.choice(homs23)
        assert evaluate(a, compose(g, f)) == evaluate(a, f) @ evaluate(a, g)


def test_direct_sum_and_conjugate_validate():
    from dendrokan.complexes import random_unimodular

    a = representable(linear_tree(1), TR)
    b = representable(parse_tree("(e e)"), TR)
    s = direct_sum(a, b)
    assert validate(s) == []
    rng = random.Random(5)
    unis = {t: random_unimodular(s.rank(t), rng) for t in TR}
    c = conjugate(s, unis)
    assert validate(c) == []
    for t in TR:
        assert c.rank(t) == s.rank(t)


def test_simplicial_restrict_of_representable():
    a = representable(linear_tree(3), TR)
    simp = simplicial_restrict(a)
    assert simp.ranks == [len(hom(linear_tree(k), linear_tree(3))) for k in range(4)]
    assert validate_simplicial(simp) == []


def test_simplicial_restrict_satisfies_identities():
    for term in ["((e))", "((e) e)", "(())"]:
        a = representable(parse_tree(term), TR)
        assert validate_simplicial(simplicial_restrict(a)) == []


def test_simplicial_representable_validates():
    for n in range(0, 3):
        b = simplicial_representable(n, 3)
        assert validate_simplicial(b) == []


def test_extend_restrict_roundtrip():
    b = simplicial_representable(2, TR.max_linear_degree())
    a = simplicial_extend(b, TR)
    assert validate(a) == []
    back = simplicial_restrict(a)
    assert back == b


def test_extend_supported_on_linear_trees():
    b = simplicial_representable(1, TR.max_linear_degree())
    a = simplicial_extend(b, TR)
    for t in TR:
        linear = t.term in {"e", "(e)", "((e))", "(((e)))"}
        assert (a.rank(t) > 0) == (linear and a.rank(t) > 0)
        if not linear:
            assert a.rank(t) == 0


def test_extend_restrict_roundtrip_random():
    from dendrokan.complexes import classical_gamma

    rng = random.Random(31)
    top = TR.max_linear_degree()
    for _ in range(3):
        k = random_chain_complex(rng, top)
        b = classical_gamma(k, top=top)
        a = simplicial_extend(b, TR)
        assert simplicial_restrict(a) == b
