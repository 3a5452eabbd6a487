"""Morphisms of the planar tree category.

A morphism is represented by its edge function alone: operation sets of the
free operad on a tree are empty or singletons, so the images of the vertices
are forced.  Faces and degeneracies are the generating morphisms; every map
factors uniquely as faces after degeneracies.
"""

from __future__ import annotations

from functools import lru_cache

from .trees import (
    INNER,
    LEAF,
    ROOT,
    InvalidAddress,
    PlanarTree,
    classify_edge,
    corolla,
    eta,
    operation_exists,
    operations_with_output,
    vertex_number,
)

INNER_FACE = "inner"
OUTER_FACE = "outer"
COROLLA_FACE = "corolla"
DEGENERACY = "degeneracy"


class InvalidMapError(ValueError):
    """Edge function violates the operad-map condition; names the vertex."""

    def __init__(self, message, vertex=None):
        super().__init__(message)
        self.vertex = vertex


class OmegaMap:
    """A morphism, stored as a total edge function domain -> codomain."""

    __slots__ = ("domain", "codomain", "edge_map", "_key")

    def __init__(self, domain, codomain, edge_map, validate=True):
        self.domain = domain
        self.codomain = codomain
        self.edge_map = dict(edge_map)
        self._key = None
        if validate:
            self._validate()

    def _validate(self):
        dom_edges = self.domain.edges()
        if set(self.edge_map) != set(dom_edges):
            raise InvalidMapError("edge map is not total on the domain")
        for e, img in self.edge_map.items():
            if not self.codomain.has_edge(img):
                raise InvalidAddress(
                    f"image {list(img)} not an edge of {self.codomain.term}"
                )
        for v in self.domain.vertices():
            node = self.domain.subtree(v)
            ins = [self.edge_map[v + (i,)] for i in range(len(node.children))]
            if not operation_exists(self.codomain, self.edge_map[v], ins):
                raise InvalidMapError(
                    f"vertex {list(v)} of {self.domain.term} has no image operation",
                    vertex=v,
                )

    def key(self):
        if self._key is None:
            self._key = (
                self.domain.term,
                self.codomain.term,
                tuple(sorted(self.edge_map.items())),
            )
        return self._key

    def __eq__(self, other):
        return isinstance(other, OmegaMap) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __call__(self, e):
        return self.edge_map[tuple(e)]

    def __repr__(self):
        return f"OmegaMap({self.domain.term} -> {self.codomain.term})"

    def is_identity(self):
        return self.domain is self.codomain and all(
            k == v for k, v in self.edge_map.items()
        )

    def to_json(self):
        return {
            "domain": self.domain.term,
            "codomain": self.codomain.term,
            "edge_map": [
                [list(k), list(v)] for k, v in sorted(self.edge_map.items())
            ],
        }

    @classmethod
    def from_json(cls, data):
        from .trees import parse_tree

        dom = parse_tree(data["domain"])
        cod = parse_tree(data["codomain"])
        emap = {tuple(k): tuple(v) for k, v in data["edge_map"]}
        return cls(dom, cod, emap)


def identity(tree):
    return OmegaMap(tree, tree, {e: e for e in tree.edges()}, validate=False)


def compose(g, f):
    """g after f."""
    if f.codomain is not g.domain:
        raise InvalidMapError(
            f"cannot compose: {f.codomain.term} != {g.domain.term}"
        )
    emap = {e: g.edge_map[img] for e, img in f.edge_map.items()}
    return OmegaMap(f.domain, g.codomain, emap, validate=False)


def is_mono(f):
    imgs = list(f.edge_map.values())
    return len(set(imgs)) == len(imgs)


def is_epi(f):
    return set(f.edge_map.values()) == set(f.codomain.edges())


def is_operad_epi(f):
    """Surjective on colours and on operations.

    Stronger than is_epi: a map onto a tree with a nullary vertex can cover
    every edge yet miss the nullary operation.  A generating operation of
    the codomain is prime, so it is hit iff some domain operation maps onto
    its name.  Maps satisfying this are exactly the degeneracy composites.
    """
    if not is_epi(f):
        return False
    hit = set()
    for e in f.domain.edges():
        for ins in operations_with_output(f.domain, e):
            if ins == (e,):
                continue
            hit.add((f.edge_map[e], tuple(f.edge_map[c] for c in ins)))
    for v in f.codomain.vertices():
        node = f.codomain.subtree(v)
        ins = tuple(v + (i,) for i in range(len(node.children)))
        if (v, ins) not in hit:
            return False
    return True


class Generator:
    """A face or degeneracy, with its realizing morphism.

    Faces are named by data on the codomain (the bigger tree); degeneracies
    by the collapsed vertex of the domain.
    """

    __slots__ = ("kind", "host", "address", "realized")

    def __init__(self, kind, host, address, realized):
        self.kind = kind
        self.host = host
        self.address = tuple(address)
        self.realized = realized

    def key(self):
        return (self.kind, self.host.term, self.address)

    def __eq__(self, other):
        return isinstance(other, Generator) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"Generator({self.kind} @ {list(self.address)} on {self.host.term})"

    @property
    def is_face(self):
        return self.kind != DEGENERACY

    def to_json(self):
        return {"kind": self.kind, "host": self.host.term, "address": list(self.address)}


class IdentityWitness:
    """A degeneracy together with the section realizing sigma . d = id."""

    __slots__ = ("degeneracy", "section")

    def __init__(self, degeneracy, section):
        self.degeneracy = degeneracy
        self.section = section

    def __repr__(self):
        return f"IdentityWitness({self.degeneracy!r}, {self.section!r})"


# ---------------------------------------------------------------------------
# construction of the generators


def _replace_subtree(tree, path, repl):
    if not path:
        return repl
    i = path[0]
    kids = list(tree.children)
    kids[i] = _replace_subtree(kids[i], path[1:], repl)
    return PlanarTree(kids)


def inner_face(tree, e):
    """Contract an inner edge: the two endpoint vertices merge, the upper
    child list splices into the lower one at the contracted position."""
    e = tuple(e)
    if classify_edge(tree, e) != INNER:
        raise InvalidAddress(f"edge {list(e)} of {tree.term} is not inner")
    p, i = e[:-1], e[-1]
    parent = tree.subtree(p)
    upper = tree.subtree(e)
    k = len(upper.children)
    kids = parent.children[:i] + upper.children + parent.children[i + 1 :]
    domain = _replace_subtree(tree, p, PlanarTree(kids))

    def old_addr(q):
        if q[: len(p)] != p or len(q) == len(p):
            return q
        j = q[len(p)]
        rest = q[len(p) + 1 :]
        if j < i:
            return q
        if j < i + k:
            return p + (i, j - i) + rest
        return p + (j - k + 1,) + rest

    emap = {q: old_addr(q) for q in domain.edges()}
    realized = OmegaMap(domain, tree, emap, validate=False)
    return Generator(INNER_FACE, tree, e, realized)


def has_outer_face(tree, v):
    """An outer face exists when exactly one edge attached to v is inner."""
    v = tuple(v)
    if not tree.has_vertex(v):
        return False
    node = tree.subtree(v)
    inner_count = sum(
        1 for i, c in enumerate(node.children) if c.children is not None
    )
    if v:  # non-root vertex: the outgoing edge is always inner
        return inner_count == 0
    return inner_count == 1 and tree.num_vertices > 1


def outer_face(tree, v):
    """Delete a vertex and the outer edges attached to it.

    For the root vertex (with a single inner input) this removes the root
    edge and the leaf inputs; for a top vertex it removes the input leaves.
    """
    v = tuple(v)
    if not has_outer_face(tree, v):
        raise InvalidAddress(
            f"vertex {list(v)} of {tree.term} has no outer face"
        )
    node = tree.subtree(v)
    if v == ():
        (inner_idx,) = [
            i for i, c in enumerate(node.children) if c.children is not None
        ]
        domain = node.children[inner_idx]
        emap = {q: (inner_idx,) + q for q in domain.edges()}
    else:
        domain = _replace_subtree(tree, v, eta())
        emap = {q: q for q in domain.edges()}
    realized = OmegaMap(domain, tree, emap, validate=False)
    return Generator(OUTER_FACE, tree, v, realized)


def corolla_face(tree, e):
    """Include the stump into a corolla at the chosen edge."""
    if tree.num_vertices != 1:
        raise InvalidAddress(f"{tree.term} is not a corolla")
    e = tuple(e)
    tree.subtree(e)
    realized = OmegaMap(eta(), tree, {(): e}, validate=False)
    return Generator(COROLLA_FACE, tree, e, realized)


def corolla_faces(n):
    """The n+1 faces of the n-corolla, root inclusion first, then leaves."""
    c = corolla(n)
    return [corolla_face(c, ())] + [corolla_face(c, (i,)) for i in range(n)]


def degeneracy(tree, v):
    """Collapse a unary vertex, identifying its two edges."""
    v = tuple(v)
    node = tree.subtree(v)
    if node.children is None or len(node.children) != 1:
        raise InvalidAddress(f"vertex {list(v)} of {tree.term} is not unary")
    codomain = _replace_subtree(tree, v, node.children[0])
    upper = v + (0,)

    def new_addr(q):
        if q == v or q == upper:
            return v
        if q[: len(upper)] == upper:
            return v + q[len(upper) :]
        return q

    emap = {q: new_addr(q) for q in tree.edges()}
    realized = OmegaMap(tree, codomain, emap, validate=False)
    return Generator(DEGENERACY, tree, v, realized)


def degeneracy_into(tree, e):
    """The degeneracy X -> tree obtained by splitting edge e with a new
    unary vertex; inverse construction to collapsing."""
    e = tuple(e)
    expanded = _replace_subtree(tree, e, PlanarTree([tree.subtree(e)]))
    return degeneracy(expanded, e)


# ---------------------------------------------------------------------------
# orders, signs


def face_order(tree):
    """All faces of the tree in the canonical linear order.

    For a corolla: the stump inclusions, root edge first then leaves left to
    right.  Otherwise: the root outer face if it exists, then a left-first
    walk emitting inner faces as their edges are climbed and outer faces as
    their vertices are reached.
    """
    nv = tree.num_vertices
    if nv == 0:
        raise InvalidAddress("the bare edge has no faces")
    if nv == 1:
        return corolla_faces(len(tree.children))
    out = []
    if has_outer_face(tree, ()):
        out.append(outer_face(tree, ()))

    def walk(v):
        node = tree.subtree(v)
        for i, child in enumerate(node.children):
            e = v + (i,)
            if child.children is not None:
                out.append(inner_face(tree, e))
                if has_outer_face(tree, e):
                    out.append(outer_face(tree, e))
                walk(e)

    walk(())
    return out


def degeneracy_order(tree):
    """Degeneracies at the unary vertices, in left-first traversal order."""
    return [
        degeneracy(tree, v)
        for v in tree.vertices()
        if len(tree.subtree(v).children) == 1
    ]


def face_sign(gen):
    """The sign of a face, computed on its codomain.

    Inner face: parity of the upper vertex number.  Root outer face: +1.
    Other outer faces: opposite parity of the removed vertex.  Corolla
    faces: +1 at the root edge, -1 at a leaf.
    """
    if not gen.is_face:
        raise ValueError("degeneracies carry no sign")
    tree = gen.host
    if gen.kind == COROLLA_FACE:
        return 1 if gen.address == () else -1
    if gen.kind == INNER_FACE:
        return -1 if vertex_number(tree, gen.address) % 2 else 1
    if gen.address == ():
        return 1
    return 1 if vertex_number(tree, gen.address) % 2 else -1


# ---------------------------------------------------------------------------
# factorization


class Factorization:
    """f = faces after degeneracies.

    ``degeneracies`` are listed in application order: epi = sk . ... . s1.
    ``faces`` are listed from the codomain inwards: mono = f1 . f2 . ... . fm.
    ``mid`` is the canonical tree whose edges are the image of f.
    """

    __slots__ = ("degeneracies", "faces", "mid", "epi", "mono")

    def __init__(self, degeneracies, faces, mid, epi, mono):
        self.degeneracies = degeneracies
        self.faces = faces
        self.mid = mid
        self.epi = epi
        self.mono = mono


def factorize(f):
    """Unique epi-mono factorization, with canonical generator sequences.

    At each epi step the first degeneracy (in degeneracy order) collapsed by
    the map is peeled; at each mono step the first admissible face (in face
    order) of the current codomain is peeled.
    """
    sigmas = []
    current = f
    while True:
        for gen in degeneracy_order(current.domain):
            v = gen.address
            if current.edge_map[v] == current.edge_map[v + (0,)]:
                sigmas.append(gen)
                emap = {
                    q: current.edge_map[_collapse_preimage(v, q)]
                    for q in gen.realized.codomain.edges()
                }
                current = OmegaMap(
                    gen.realized.codomain, current.codomain, emap, validate=False
                )
                break
        else:
            break

    faces = []
    while True:
        if current.is_identity():
            break
        image = set(current.edge_map.values())
        cod = current.codomain
        gen = None
        for cand in face_order(cod):
            deleted = set(cod.edges()) - set(cand.realized.edge_map.values())
            if not (deleted & image):
                gen = cand
                break
        if gen is None:
            raise InvalidMapError(f"cannot peel a face from {cod.term}")
        faces.append(gen)
        inverse = {img: q for q, img in gen.realized.edge_map.items()}
        emap = {e: inverse[img] for e, img in current.edge_map.items()}
        current = OmegaMap(current.domain, gen.realized.domain, emap, validate=False)

    if not current.is_identity():
        raise InvalidMapError("factorization did not terminate at an identity")
    mid = current.domain

    epi = identity(f.domain)
    for s in sigmas:
        epi = compose(s.realized, epi)
    mono = identity(f.codomain)
    for d in faces:
        mono = compose(mono, d.realized)
    return Factorization(sigmas, faces, mid, epi, mono)


def _collapse_preimage(v, q):
    """An edge of the collapsed tree, lifted through the collapse at v."""
    if q[: len(v)] == v:
        return v + (0,) + q[len(v) :]
    return q


# ---------------------------------------------------------------------------
# hom sets


@lru_cache(maxsize=None)
def hom(source, target):
    """All morphisms source -> target, deterministically ordered.

    Recursively: choose the image of the root edge among the target's edges,
    then an operation of matching arity for the root vertex, then recurse.
    """
    results = []
    for root_img in target.edges():
        for emap in _maps_into(source, target, (), root_img):
            results.append(OmegaMap(source, target, emap, validate=False))
    return tuple(results)


def _maps_into(source, target, src_path, tgt_edge):
    node = source.subtree(src_path)
    if node.children is None:
        yield {src_path: tgt_edge}
        return
    arity = len(node.children)
    for op in operations_with_output(target, tgt_edge):
        if len(op) != arity:
            continue
        if arity == 0:
            yield {src_path: tgt_edge}
            continue
        parts = [
            list(_maps_into(source, target, src_path + (i,), op[i]))
            for i in range(arity)
        ]
        if any(not p for p in parts):
            continue
        for combo in _combos(parts):
            emap = {src_path: tgt_edge}
            for part in combo:
                emap.update(part)
            yield emap


def _combos(parts):
    if not parts:
        yield ()
        return
    for head in parts[0]:
        for rest in _combos(parts[1:]):
            yield (head,) + rest


def generators_with_codomain(tree):
    """All generators into the tree: its faces, plus the degeneracies
    obtained by splitting each edge."""
    gens = []
    if tree.num_vertices >= 1:
        gens.extend(face_order(tree))
    for e in tree.edges():
        gens.append(degeneracy_into(tree, e))
    return gens


def other_factorization(g1, g2):
    """The unique second way to write realized(g1) . realized(g2) as a
    composite of two generators, or an IdentityWitness when the composite is
    an identity."""
    f = compose(g1.realized, g2.realized)
    if f.is_identity():
        return IdentityWitness(g1, g2)
    target = f.codomain
    source = f.domain
    original = {g1.key(), g2.key()}
    found = []
    for cand1 in generators_with_codomain(target):
        mid = cand1.realized.domain
        cands2 = []
        if mid.num_vertices >= 1:
            cands2.extend(g for g in face_order(mid) if g.realized.domain is source)
        cands2.extend(
            g for g in degeneracy_order(source) if g.realized.codomain is mid
        )
        for cand2 in cands2:
            if {cand1.key(), cand2.key()} == original:
                continue
            if compose(cand1.realized, cand2.realized) == f:
                if all(
                    {cand1.key(), cand2.key()} != {a.key(), b.key()}
                    for a, b in found
                ):
                    found.append((cand1, cand2))
    if len(found) != 1:
        raise InvalidMapError(
            f"expected exactly one alternative factorization, found {len(found)}"
        )
    return found[0]
