"""Planar rooted trees: the objects of the planar tree category.

A tree is either a bare edge (the stump, written ``e``) or a vertex with an
ordered, possibly empty, list of child trees.  Every node of the recursive
structure is an *edge* of the tree; a node with a child list carries a
*vertex* at its upper end.  Trees are canonical: structural equality is
object equality, and instances are interned by their term rendering.

Edges are addressed by child-index paths (the empty path is the root edge),
vertices by the path of their outgoing edge.
"""

from __future__ import annotations

from functools import lru_cache

EdgeAddr = tuple  # tuple of ints
VertexAddr = tuple

ROOT = "root"
LEAF = "leaf"
INNER = "inner"


class TreeSyntaxError(ValueError):
    """Malformed term string; carries the offending position."""

    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class InvalidAddress(ValueError):
    pass


_POOL = {}


class PlanarTree:
    """Canonical planar rooted tree.

    ``children`` is None for a bare edge, otherwise a tuple of subtrees.
    Instances are interned: equal terms are the same object.
    """

    __slots__ = ("children", "term", "_edges", "_vertices", "_hash")

    def __new__(cls, children):
        if children is None:
            term = "e"
        else:
            children = tuple(children)
            term = "(" + " ".join(c.term for c in children) + ")"
        cached = _POOL.get(term)
        if cached is not None:
            return cached
        self = object.__new__(cls)
        self.children = children
        self.term = term
        self._edges = None
        self._vertices = None
        self._hash = hash(term)
        _POOL[term] = self
        return self

    def __repr__(self):
        return f"PlanarTree({self.term!r})"

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return self is other

    @property
    def is_edge_only(self):
        return self.children is None

    @property
    def num_vertices(self):
        return len(self.vertices())

    @property
    def num_edges(self):
        return len(self.edges())

    def subtree(self, path):
        node = self
        for i in path:
            if node.children is None or i >= len(node.children) or i < 0:
                raise InvalidAddress(f"no edge at {list(path)} in {self.term}")
            node = node.children[i]
        return node

    def has_edge(self, path):
        try:
            self.subtree(path)
        except InvalidAddress:
            return False
        return True

    def has_vertex(self, path):
        return self.has_edge(path) and self.subtree(path).children is not None

    def edges(self):
        """All edge addresses, depth first, root first, children left to right."""
        if self._edges is None:
            acc = []

            def walk(node, path):
                acc.append(path)
                if node.children is not None:
                    for i, child in enumerate(node.children):
                        walk(child, path + (i,))

            walk(self, ())
            self._edges = tuple(acc)
        return self._edges

    def vertices(self):
        """Vertex addresses in left-first preorder; position = vertex number."""
        if self._vertices is None:
            self._vertices = tuple(
                p for p in self.edges() if self.subtree(p).children is not None
            )
        return self._vertices


def eta():
    """The tree with no vertices: a single bare edge."""
    return PlanarTree(None)


def corolla(n):
    """Single vertex with n leaf inputs."""
    return PlanarTree([eta() for _ in range(n)])


def linear_tree(n):
    """The linear tree with n vertices and n+1 edges."""
    t = eta()
    for _ in range(n):
        t = PlanarTree([t])
    return t


def parse_tree(text):
    """Parse a term string.  Grammar: Tree ::= "e" | "(" Tree* ")"."""
    tokens = _tokenize(text)
    pos = 0

    def parse():
        nonlocal pos
        if pos >= len(tokens):
            raise TreeSyntaxError("unexpected end of input", len(text))
        tok, at = tokens[pos]
        pos += 1
        if tok == "e":
            return PlanarTree(None)
        if tok == "(":
            children = []
            while True:
                if pos >= len(tokens):
                    raise TreeSyntaxError("unclosed '('", at)
                if tokens[pos][0] == ")":
                    pos += 1
                    return PlanarTree(children)
                children.append(parse())
        raise TreeSyntaxError(f"unexpected {tok!r}", at)

    tree = parse()
    if pos != len(tokens):
        raise TreeSyntaxError(f"trailing input {tokens[pos][0]!r}", tokens[pos][1])
    return tree


def _tokenize(text):
    tokens = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
        elif c in "()":
            tokens.append((c, i))
            i += 1
        elif c == "e":
            if i + 1 < len(text) and not (text[i + 1].isspace() or text[i + 1] in "()"):
                raise TreeSyntaxError(f"bad token {text[i:i+2]!r}", i)
            tokens.append(("e", i))
            i += 1
        else:
            raise TreeSyntaxError(f"bad character {c!r}", i)
    return tokens


def render_tree(tree):
    """Inverse of parse_tree on canonical trees."""
    return tree.term


def edges(tree):
    return list(tree.edges())


def vertices(tree):
    return list(tree.vertices())


def vertex_number(tree, v):
    """Left-first preorder number of a vertex, root vertex is 0."""
    try:
        return tree.vertices().index(tuple(v))
    except ValueError:
        raise InvalidAddress(f"no vertex at {list(v)} in {tree.term}") from None


def classify_edge(tree, e):
    """Root, leaf, or inner.  The bare edge of the stump counts as root."""
    node = tree.subtree(tuple(e))
    if len(e) == 0:
        return ROOT
    return INNER if node.children is not None else LEAF


def valence(tree, v):
    node = tree.subtree(tuple(v))
    if node.children is None:
        raise InvalidAddress(f"no vertex at {list(v)} in {tree.term}")
    return len(node.children)


def parent_vertex(tree, e):
    """Address of the vertex below edge e, or None for the root edge."""
    e = tuple(e)
    if not e:
        return None
    return e[:-1]


def attached_inner_edges(tree, v):
    """Inner edges among the edges attached to vertex v (its outgoing edge
    and its inputs)."""
    v = tuple(v)
    out = []
    if classify_edge(tree, v) == INNER:
        out.append(v)
    node = tree.subtree(v)
    for i, child in enumerate(node.children):
        if child.children is not None:
            out.append(v + (i,))
    return out


def operation_exists(tree, output, inputs):
    """Does (inputs; output) name an operation of the free operad on the tree?

    True for the identity (inputs == [output]) and for each region of the
    tree rooted at ``output`` whose frontier, read left to right, is exactly
    ``inputs``.  Stump vertices are absorbed silently.
    """
    output = tuple(output)
    inputs = [tuple(p) for p in inputs]
    tree.subtree(output)
    for p in inputs:
        tree.subtree(p)
    if inputs == [output]:
        return True
    wanted = set(inputs)
    frontier = []

    def walk(path, node):
        if path in wanted and path != output:
            frontier.append(path)
            return True
        if node.children is None:
            return False  # uncovered leaf above the output
        for i, child in enumerate(node.children):
            if not walk(path + (i,), child):
                return False
        return True

    if not walk(output, tree.subtree(output)):
        return False
    return frontier == inputs


@lru_cache(maxsize=None)
def _operations_by_output(tree):
    """For each edge, the ordered input tuples of all operations with that
    output, identity first."""
    table = {}

    def ops(path):
        if path in table:
            return table[path]
        node = tree.subtree(path)
        result = [(path,)]
        if node.children is not None:
            parts = [ops(path + (i,)) for i in range(len(node.children))]
            for combo in _product(parts):
                flat = tuple(x for part in combo for x in part)
                result.append(flat)
        table[path] = result
        return result

    for e in tree.edges():
        ops(e)
    return table


def _product(parts):
    if not parts:
        yield ()
        return
    for head in parts[0]:
        for rest in _product(parts[1:]):
            yield (head,) + rest


def operations_with_output(tree, output):
    """All input tuples (c1..cn) with a nonempty operation set (c1..cn; output)."""
    return list(_operations_by_output(tree)[tuple(output)])


def enumerate_trees(max_vertices, max_edges):
    """All canonical trees with at most the given vertex and edge counts,
    each once, ordered by (vertices, edges, term)."""
    if max_vertices < 0 or max_edges < 0:
        raise ValueError("bounds must be nonnegative")
    found = _enumerate(max_vertices, max_edges)
    return sorted(found, key=lambda t: (t.num_vertices, t.num_edges, t.term))


@lru_cache(maxsize=None)
def _enumerate(max_vertices, max_edges):
    # trees with |V| <= max_vertices, |E| <= max_edges
    out = []
    if max_edges >= 1:
        out.append(eta())
    if max_vertices >= 1 and max_edges >= 1:
        for seq in _child_sequences(max_vertices - 1, max_edges - 1):
            out.append(PlanarTree(seq))
    return tuple(out)


@lru_cache(maxsize=None)
def _child_sequences(vertex_budget, edge_budget):
    """All tuples of trees with total vertices and edges within the budgets."""
    seqs = [()]
    if edge_budget >= 1:
        for first in _enumerate(vertex_budget, edge_budget):
            v, e = first.num_vertices, first.num_edges
            for rest in _child_sequences(vertex_budget - v, edge_budget - e):
                seqs.append((first,) + rest)
    return tuple(seqs)
