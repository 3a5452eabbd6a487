from dendrokan.linparts import (
    CONNECTED_NOT_NORMAL,
    NORMAL,
    UNCONNECTED,
    classify_face,
    faces_on_part,
    maximal_linear_parts,
    normal_faces,
)
from dendrokan.maps import (
    COROLLA_FACE,
    INNER_FACE,
    OUTER_FACE,
    corolla_faces,
    face_order,
    inner_face,
    outer_face,
)
from dendrokan.trees import corolla, enumerate_trees, linear_tree, parse_tree

# the two example trees for the normal-face classification:
# a chain of two unary vertices under a binary top vertex / a unary top vertex
TREE_T = "(e (((e e))) e)"
TREE_R = "(e (((e))) e)"
SIXV = "((e (e e) e) (e) (e e ()))"


def test_parts_tree_t():
    t = parse_tree(TREE_T)
    parts = maximal_linear_parts(t)
    assert len(parts) == 1
    assert parts[0].length == 2
    assert parts[0].edges == ((1,), (1, 0), (1, 0, 0))


def test_parts_tree_r():
    r = parse_tree(TREE_R)
    parts = maximal_linear_parts(r)
    assert len(parts) == 1
    assert parts[0].length == 3
    assert parts[0].edges == ((1,), (1, 0), (1, 0, 0), (1, 0, 0, 0))


def test_parts_corolla():
    assert maximal_linear_parts(corolla(3)) == []
    assert maximal_linear_parts(corolla(0)) == []


def test_faces_on_part_tree_t():
    t = parse_tree(TREE_T)
    part = maximal_linear_parts(t)[0]
    fs = faces_on_part(t, part)
    assert [(g.kind, g.address) for g in fs] == [
        (INNER_FACE, (1,)),
        (INNER_FACE, (1, 0)),
        (INNER_FACE, (1, 0, 0)),
    ]
    assert len({g.realized.domain for g in fs}) == 1


def test_faces_on_part_tree_r():
    r = parse_tree(TREE_R)
    part = maximal_linear_parts(r)[0]
    fs = faces_on_part(r, part)
    assert [(g.kind, g.address) for g in fs] == [
        (INNER_FACE, (1,)),
        (INNER_FACE, (1, 0)),
        (INNER_FACE, (1, 0, 0)),
        (OUTER_FACE, (1, 0, 0)),
    ]
    assert len({g.realized.domain for g in fs}) == 1


def test_faces_on_part_linear():
    for n in (1, 2, 3):
        t = linear_tree(n)
        part = maximal_linear_parts(t)[0]
        fs = faces_on_part(t, part)
        assert len(fs) == n + 1
        assert len({g.realized.domain for g in fs}) == 1


def test_classification_tree_t():
    t = parse_tree(TREE_T)
    de = inner_face(t, (1,))
    df = inner_face(t, (1, 0))
    dg = inner_face(t, (1, 0, 0))
    du = outer_face(t, ())
    dv = outer_face(t, (1, 0, 0))
    assert classify_face(t, de).status == NORMAL
    assert classify_face(t, df).status == NORMAL
    assert classify_face(t, dg).status == CONNECTED_NOT_NORMAL
    assert classify_face(t, du).status == UNCONNECTED
    assert classify_face(t, dv).status == UNCONNECTED
    assert classify_face(t, de).local_index == 0
    assert classify_face(t, df).local_index == 1


def test_classification_tree_r():
    r = parse_tree(TREE_R)
    da = inner_face(r, (1,))
    db = inner_face(r, (1, 0))
    dc = inner_face(r, (1, 0, 0))
    dp = outer_face(r, ())
    dq = outer_face(r, (1, 0, 0))
    assert [classify_face(r, g).status for g in (da, db, dc)] == [NORMAL] * 3
    assert [classify_face(r, g).local_index for g in (da, db, dc)] == [0, 1, 2]
    assert classify_face(r, dp).status == UNCONNECTED
    assert classify_face(r, dq).status == CONNECTED_NOT_NORMAL


def test_classification_l1():
    # the face with image at the top edge is the normal one
    fs = corolla_faces(1)
    l1 = linear_tree(1)
    root_incl, leaf_incl = fs
    assert classify_face(l1, leaf_incl).status == NORMAL
    assert classify_face(l1, leaf_incl).local_index == 0
    assert classify_face(l1, root_incl).status == CONNECTED_NOT_NORMAL


def test_no_unary_no_normal():
    for term in ["(e e)", "((e e) e)", "(e e ())"]:
        t = parse_tree(term)
        assert normal_faces(t) == []
        for g in face_order(t):
            assert classify_face(t, g).status == UNCONNECTED


def test_part_face_counts_sweep():
    # each part carries n+1 faces: n normal, one connected-not-normal, and
    # every face sits on at most one part
    for t in enumerate_trees(4, 6):
        if t.num_vertices == 0:
            continue
        parts = maximal_linear_parts(t)
        by_status = {NORMAL: 0, CONNECTED_NOT_NORMAL: 0, UNCONNECTED: 0}
        for g in face_order(t):
            c = classify_face(t, g)
            by_status[c.status] += 1
        assert by_status[NORMAL] == sum(p.length for p in parts)
        assert by_status[CONNECTED_NOT_NORMAL] == len(parts)


def test_consecutive_in_global_order():
    for t in enumerate_trees(4, 6):
        if t.num_vertices == 0:
            continue
        forder = face_order(t)
        pos = {g.key(): k for k, g in enumerate(forder)}
        for part in maximal_linear_parts(t):
            indices = sorted(pos[g.key()] for g in faces_on_part(t, part))
            assert indices == list(
                range(indices[0], indices[0] + part.length + 1)
            )


def test_same_domain_on_part_sweep():
    for t in enumerate_trees(4, 6):
        for part in maximal_linear_parts(t):
            doms = {g.realized.domain for g in faces_on_part(t, part)}
            assert len(doms) == 1


def test_sixv_part():
    t = parse_tree(SIXV)
    parts = maximal_linear_parts(t)
    assert len(parts) == 1
    assert parts[0].edges == ((1,), (1, 0))
    fs = faces_on_part(t, parts[0])
    assert [(g.kind, g.address) for g in fs] == [
        (INNER_FACE, (1,)),
        (OUTER_FACE, (1,)),
    ]


def test_ambiguity_flag():
    from dendrokan.linparts import chain_reading_ambiguous

    assert not chain_reading_ambiguous(parse_tree(TREE_T))
    assert not chain_reading_ambiguous(parse_tree(SIXV))
    # unary chain beside a branch that terminates in a stump
    assert chain_reading_ambiguous(parse_tree("((e) ())"))
