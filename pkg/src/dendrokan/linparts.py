"""Maximal linear parts and the normal/connected classification of faces.

A maximal linear part is a maximal chain of unary vertices, recorded by its
chain edges bottom to top.  The n+1 faces sitting on a part of length n are
the faces deleting one chain edge; in the induced order the face deleting
chain edge i has local index i, and it is normal iff i < n.
"""

from __future__ import annotations

from .maps import (
    COROLLA_FACE,
    INNER_FACE,
    OUTER_FACE,
    corolla_face,
    inner_face,
    outer_face,
)
from .trees import INNER, classify_edge

NORMAL = "normal"
CONNECTED_NOT_NORMAL = "connected-not-normal"
UNCONNECTED = "unconnected"


class LinearPart:
    """A maximal chain of unary vertices.

    ``edges`` lists the chain edges bottom to top (length n+1); ``chain``
    the unary vertices joining them (length n >= 1).
    """

    __slots__ = ("tree", "edges", "chain")

    def __init__(self, tree, edges, chain):
        self.tree = tree
        self.edges = tuple(edges)
        self.chain = tuple(chain)

    @property
    def length(self):
        return len(self.chain)

    def __eq__(self, other):
        return (
            isinstance(other, LinearPart)
            and self.tree is other.tree
            and self.edges == other.edges
        )

    def __hash__(self):
        return hash((self.tree.term, self.edges))

    def __repr__(self):
        return f"LinearPart({self.tree.term}, edges={[list(e) for e in self.edges]})"

    def to_json(self):
        return [list(e) for e in self.edges]


class FaceClassification:
    __slots__ = ("face", "status", "part", "local_index")

    def __init__(self, face, status, part=None, local_index=None):
        self.face = face
        self.status = status
        self.part = part
        self.local_index = local_index

    def __repr__(self):
        return f"FaceClassification({self.face!r}, {self.status})"


def _is_unary(tree, v):
    node = tree.subtree(v)
    return node.children is not None and len(node.children) == 1


def maximal_linear_parts(tree):
    """All maximal chains of unary vertices, ordered by lowest chain edge."""
    parts = []
    for v in tree.vertices():
        if not _is_unary(tree, v):
            continue
        below = v[:-1] if v else None
        if below is not None and _is_unary(tree, below):
            continue  # not the bottom of its chain
        if v and not tree.has_vertex(below):
            pass
        chain = [v]
        top = v
        while True:
            up = top + (0,)
            if tree.has_vertex(up) and _is_unary(tree, up):
                chain.append(up)
                top = up
            else:
                break
        edges = [chain[0]] + [c + (0,) for c in chain]
        parts.append(LinearPart(tree, edges, chain))
    parts.sort(key=lambda p: tree.edges().index(p.edges[0]))
    return parts


def _face_deleting_chain_edge(tree, part, i):
    """The face of the host tree whose image misses chain edge i."""
    e = part.edges[i]
    if i == 0 and e == ():
        # the chain starts at the root edge; deleting it is the root face,
        # or the corolla inclusion of the upper edge when the tree is L_1
        if tree.num_vertices == 1:
            return corolla_face(tree, part.edges[1])
        return outer_face(tree, ())
    if classify_edge(tree, e) == INNER:
        return inner_face(tree, e)
    # a leaf at the top of the chain: remove the top unary vertex
    if tree.num_vertices == 1:
        return corolla_face(tree, part.edges[0])
    return outer_face(tree, part.chain[-1])


def faces_on_part(tree, part):
    """The n+1 faces sitting on the part, local index = deleted chain edge."""
    if part.tree is not tree:
        raise ValueError("part does not belong to this tree")
    return [
        _face_deleting_chain_edge(tree, part, i) for i in range(len(part.edges))
    ]


def _deleted_chain_edge(tree, gen):
    """The chain edge a face deletes, or None.

    Inner faces delete their edge; the root face deletes the root edge when
    the root vertex is unary; a top face at a unary vertex deletes its leaf
    input; corolla faces delete the other edge of L_1.
    """
    if gen.kind == INNER_FACE:
        e = gen.address
    elif gen.kind == OUTER_FACE:
        v = gen.address
        if v == ():
            e = ()
            if not _is_unary(tree, ()):
                return None
        else:
            if not _is_unary(tree, v):
                return None
            e = v + (0,)
    elif gen.kind == COROLLA_FACE:
        if tree.num_vertices != 1 or not _is_unary(tree, ()):
            return None
        e = (0,) if gen.address == () else ()
    else:
        return None
    below = e[:-1] if e else None
    if below is not None and tree.has_vertex(below) and _is_unary(tree, below):
        return e
    if tree.has_vertex(e) and _is_unary(tree, e):
        return e
    return None


def classify_face(tree, gen):
    """Normal / connected-not-normal / unconnected, with part and index."""
    if not gen.is_face or gen.host is not tree:
        raise ValueError(f"{gen!r} is not a face of {tree.term}")
    e = _deleted_chain_edge(tree, gen)
    if e is None:
        return FaceClassification(gen, UNCONNECTED)
    for part in maximal_linear_parts(tree):
        if e in part.edges:
            i = part.edges.index(e)
            status = NORMAL if i < part.length else CONNECTED_NOT_NORMAL
            return FaceClassification(gen, status, part, i)
    return FaceClassification(gen, UNCONNECTED)


def is_normal(tree, gen):
    return classify_face(tree, gen).status == NORMAL


def normal_faces(tree):
    """All normal faces into the tree."""
    out = []
    for part in maximal_linear_parts(tree):
        out.extend(faces_on_part(tree, part)[:-1])
    return out


def chain_reading_ambiguous(tree):
    """Could a unary *operation* extend some maximal chain past its end?

    True when a chain end abuts a vertex all of whose other input branches
    are leafless (capped by stumps); the structural chain reading and the
    embedding-factorization reading of maximality could differ there.
    """

    def leafless(sub):
        if sub.children is None:
            return False
        return all(leafless(c) for c in sub.children)

    for part in maximal_linear_parts(tree):
        top = part.edges[-1]
        node = tree.subtree(top)
        if node.children is not None and len(node.children) >= 1:
            for skip in range(len(node.children)):
                if all(
                    leafless(c)
                    for j, c in enumerate(node.children)
                    if j != skip
                ) and len(node.children) > 1:
                    return True
        bottom = part.edges[0]
        if bottom:
            parent = tree.subtree(bottom[:-1])
            i = bottom[-1]
            if len(parent.children) > 1 and all(
                leafless(c) for j, c in enumerate(parent.children) if j != i
            ):
                return True
    return False
