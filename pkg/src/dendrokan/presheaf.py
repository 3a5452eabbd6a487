"""Dendroidal abelian groups over a downward-closed truncation.

A presheaf is stored by its generator actions only: one integer matrix per
face or degeneracy inside the truncation, contravariant, so action(g) for
g: R -> T has shape rank(R) x rank(T).  Arbitrary morphisms act through the
unique factorization into generators.
"""

from __future__ import annotations

from functools import lru_cache

from .maps import (
    DEGENERACY,
    compose,
    degeneracy_order,
    face_order,
    factorize,
    hom,
    identity,
    other_factorization,
    IdentityWitness,
)
from .trees import enumerate_trees, linear_tree
from .zlat import IntMatrix


class TruncationError(ValueError):
    pass


class Truncation:
    """The downward-closed family of trees with bounded vertices and edges."""

    def __init__(self, max_vertices, max_edges):
        self.max_vertices = max_vertices
        self.max_edges = max_edges
        self.trees = enumerate_trees(max_vertices, max_edges)
        self._index = {t: i for i, t in enumerate(self.trees)}

    def __contains__(self, tree):
        return tree in self._index

    def __iter__(self):
        return iter(self.trees)

    def __len__(self):
        return len(self.trees)

    def require(self, tree):
        if tree not in self._index:
            raise TruncationError(f"{tree.term} outside truncation "
                                  f"({self.max_vertices}, {self.max_edges})")

    def generators(self, tree):
        """Faces of the tree and degeneracies out of it (all stay inside)."""
        gens = []
        if tree.num_vertices >= 1:
            gens.extend(face_order(tree))
        gens.extend(degeneracy_order(tree))
        return gens

    def all_generators(self):
        out = []
        for t in self.trees:
            out.extend(self.generators(t))
        return out

    def max_linear_degree(self):
        n = 0
        while linear_tree(n + 1) in self:
            n += 1
        return n


class DendAb:
    """A dendroidal abelian group on a truncation.

    ``rank_fn(tree) -> int`` and ``action_fn(gen) -> IntMatrix`` may be
    lazy; results are cached.  For a face g the host tree is its codomain,
    for a degeneracy its domain; in both cases the matrix realizes the
    contravariant action A_codomain -> A_domain.
    """

    def __init__(self, truncation, rank_fn, action_fn, label="dendab"):
        self.truncation = truncation
        self._rank_fn = rank_fn
        self._action_fn = action_fn
        self._ranks = {}
        self._actions = {}
        self.label = label

    def rank(self, tree):
        self.truncation.require(tree)
        r = self._ranks.get(tree)
        if r is None:
            r = self._rank_fn(tree)
            self._ranks[tree] = r
        return r

    def action(self, gen):
        key = gen.key()
        m = self._actions.get(key)
        if m is None:
            m = self._action_fn(gen)
            expect = (self.rank(gen.realized.domain), self.rank(gen.realized.codomain))
            if (m.rows, m.cols) != expect:
                raise ValueError(
                    f"action for {gen!r} has shape {(m.rows, m.cols)}, expected {expect}"
                )
            self._actions[key] = m
        return m

    def __repr__(self):
        return f"DendAb({self.label})"

    def to_json(self):
        tr = self.truncation
        return {
            "max_vertices": tr.max_vertices,
            "max_edges": tr.max_edges,
            "trees": [t.term for t in tr],
            "ranks": {t.term: self.rank(t) for t in tr},
            "actions": {
                _gen_key_str(g): self.action(g).to_json()
                for t in tr
                for g in tr.generators(t)
            },
        }


def _gen_key_str(gen):
    return f"{gen.kind}@{gen.host.term}@{','.join(map(str, gen.address))}"


def evaluate(dab, f):
    """The matrix of an arbitrary morphism's action, via factorization."""
    dab.truncation.require(f.domain)
    dab.truncation.require(f.codomain)
    fac = factorize(f)
    # contravariance: (d . s)^* = s^* d^*, built outwards from the codomain
    mat = IntMatrix.identity(dab.rank(f.codomain))
    for g in fac.faces:
        mat = dab.action(g) @ mat
    for g in reversed(fac.degeneracies):
        mat = dab.action(g) @ mat
    return mat


# ---------------------------------------------------------------------------
# relation squares and validation


_TRUNCATIONS = {}


def _trunc_key(trunc):
    key = (trunc.max_vertices, trunc.max_edges)
    _TRUNCATIONS[key] = trunc
    return key


@lru_cache(maxsize=None)
def _gens_into(truncation_key, tree):
    """Generators with this codomain whose domain stays in the truncation:
    the faces of the tree, then the degeneracies obtained by splitting each
    edge, skipping splits that leave the truncation."""
    from .maps import degeneracy_into

    trunc = _TRUNCATIONS[truncation_key]
    gens = []
    if tree.num_vertices >= 1:
        gens.extend(face_order(tree))
    for e in tree.edges():
        g = degeneracy_into(tree, e)
        if g.realized.domain in trunc:
            gens.append(g)
    return tuple(gens)


@lru_cache(maxsize=None)
def relation_squares(truncation_key, tree):
    """All composable generator pairs landing in the tree whose squares stay
    inside the truncation, as (g1, g2, other) with g1: S -> tree, together
    with the alternative factorization or identity witness."""
    out = []
    for g1 in _gens_into(truncation_key, tree):
        S = g1.realized.domain
        for g2 in _gens_into(truncation_key, S):
            other = other_factorization(g1, g2)
            if isinstance(other, IdentityWitness):
                out.append((g1, g2, other))
            else:
                h1, h2 = other
                trunc = _TRUNCATIONS[truncation_key]
                if h1.realized.domain in trunc and h2.realized.domain in trunc:
                    out.append((g1, g2, (h1, h2)))
    return tuple(out)


def iter_relation_squares(trunc):
    """Generator-pair squares inside the truncation, each reported once."""
    key = _trunc_key(trunc)
    for t in trunc:
        seen = set()
        for g1, g2, other in relation_squares(key, t):
            if isinstance(other, IdentityWitness):
                yield g1, g2, other
                continue
            h1, h2 = other
            sq = frozenset([(g1.key(), g2.key()), (h1.key(), h2.key())])
            if sq in seen:
                continue
            seen.add(sq)
            yield g1, g2, other


def validate(dab):
    """Functoriality report: one entry per violated relation square."""
    problems = []
    trunc = dab.truncation
    for g1, g2, other in iter_relation_squares(trunc):
        m1 = dab.action(g2) @ dab.action(g1)
        if isinstance(other, IdentityWitness):
            if not m1.is_identity():
                problems.append(
                    {
                        "kind": "section",
                        "degeneracy": _gen_key_str(other.degeneracy),
                        "section": _gen_key_str(other.section),
                    }
                )
            continue
        h1, h2 = other
        m2 = dab.action(h2) @ dab.action(h1)
        if m1 != m2:
            problems.append(
                {
                    "kind": "square",
                    "pair": [_gen_key_str(g1), _gen_key_str(g2)],
                    "other": [_gen_key_str(h1), _gen_key_str(h2)],
                }
            )
    return problems


# ---------------------------------------------------------------------------
# representables


class _HomBasis:
    """Cached hom sets into a fixed tree, indexed deterministically."""

    def __init__(self, target):
        self.target = target
        self._maps = {}
        self._index = {}

    def maps(self, source):
        got = self._maps.get(source)
        if got is None:
            got = hom(source, self.target)
            self._maps[source] = got
            self._index[source] = {f.key(): i for i, f in enumerate(got)}
        return got

    def index(self, f):
        self.maps(f.domain)
        return self._index[f.domain][f.key()]


def representable(tree, trunc):
    """The free dendroidal abelian group on a tree: ranks are hom counts,
    generator actions are precomposition."""
    trunc.require(tree)
    basis = _HomBasis(tree)

    def rank_fn(s):
        return len(basis.maps(s))

    def action_fn(gen):
        g = gen.realized
        cols = []
        for h in basis.maps(g.codomain):
            cols.append(basis.index(compose(h, g)))
        rows = len(basis.maps(g.domain))
        data = [[0] * len(cols) for _ in range(rows)]
        for j, i in enumerate(cols):
            data[i][j] = 1
        return IntMatrix(rows, len(cols), data)

    d = DendAb(trunc, rank_fn, action_fn, label=f"Z[{tree.term}]")
    d.hom_basis = basis
    return d


def zero_dendab(trunc):
    return DendAb(
        trunc,
        lambda t: 0,
        lambda g: IntMatrix.zeros(0, 0),
        label="0",
    )


def direct_sum(a, b):
    """Blockwise direct sum of two presheaves on the same truncation."""
    if a.truncation is not b.truncation:
        raise TruncationError("direct sum needs a shared truncation")

    def rank_fn(t):
        return a.rank(t) + b.rank(t)

    def action_fn(gen):
        ma, mb = a.action(gen), b.action(gen)
        rows, cols = ma.rows + mb.rows, ma.cols + mb.cols
        data = [[0] * cols for _ in range(rows)]
        for i in range(ma.rows):
            for j in range(ma.cols):
                data[i][j] = ma.data[i][j]
        for i in range(mb.rows):
            for j in range(mb.cols):
                data[ma.rows + i][ma.cols + j] = mb.data[i][j]
        return IntMatrix(rows, cols, data)

    return DendAb(a.truncation, rank_fn, action_fn, label=f"{a.label}(+){b.label}")


def conjugate(dab, unimods):
    """Change of basis by a unimodular matrix per tree: the same presheaf
    expressed in scrambled coordinates.  ``unimods`` maps tree -> (U, Uinv)."""

    def rank_fn(t):
        return dab.rank(t)

    def action_fn(gen):
        dom, cod = gen.realized.domain, gen.realized.codomain
        u_dom, _ = unimods[dom]
        _, inv_cod = unimods[cod]
        return u_dom @ dab.action(gen) @ inv_cod

    return DendAb(dab.truncation, rank_fn, action_fn, label=f"conj({dab.label})")


# ---------------------------------------------------------------------------
# simplicial abelian groups and the linear-tree restriction


class SimpAb:
    """A truncated simplicial abelian group.

    ``ranks[n]``; ``face[n][i]`` realizes the i-th face [n-1] -> [n]
    contravariantly (shape ranks[n-1] x ranks[n]); ``degen[n][i]`` the i-th
    degeneracy [n+1] -> [n] (shape ranks[n+1] x ranks[n], defined for
    n < top degree).
    """

    def __init__(self, ranks, face, degen, label="simpab"):
        self.ranks = list(ranks)
        self.face = face
        self.degen = degen
        self.label = label

    @property
    def top(self):
        return len(self.ranks) - 1

    def __eq__(self, other):
        return (
            isinstance(other, SimpAb)
            and self.ranks == other.ranks
            and self.face == other.face
            and self.degen == other.degen
        )

    def __repr__(self):
        return f"SimpAb({self.label}, ranks={self.ranks})"


def simplicial_face(n, i):
    """The i-th face of the n-th linear tree: deletes edge i."""
    from .linparts import faces_on_part, maximal_linear_parts

    t = linear_tree(n)
    part = maximal_linear_parts(t)[0]
    return faces_on_part(t, part)[i]


def simplicial_degeneracy(n, i):
    """The i-th degeneracy L_{n+1} -> L_n (collapses the vertex between
    edges i and i+1)."""
    return degeneracy_order(linear_tree(n + 1))[i]


def simplicial_restrict(dab):
    """Read a simplicial abelian group off the linear trees."""
    trunc = dab.truncation
    top = trunc.max_linear_degree()
    ranks = [dab.rank(linear_tree(n)) for n in range(top + 1)]
    face = {
        n: [dab.action(simplicial_face(n, i)) for i in range(n + 1)]
        for n in range(1, top + 1)
    }
    degen = {
        n: [dab.action(simplicial_degeneracy(n, i)) for i in range(n + 1)]
        for n in range(0, top)
    }
    return SimpAb(ranks, face, degen, label=f"i*({dab.label})")


def simplicial_extend(simp, trunc):
    """Extension by zero off the linear trees."""
    top = trunc.max_linear_degree()
    if simp.top < top:
        raise TruncationError(
            f"simplicial data up to degree {simp.top} cannot fill degree {top}"
        )
    linear = {linear_tree(n): n for n in range(top + 1)}

    def rank_fn(t):
        n = linear.get(t)
        return simp.ranks[n] if n is not None else 0

    def action_fn(gen):
        dom, cod = gen.realized.domain, gen.realized.codomain
        nd, nc = linear.get(dom), linear.get(cod)
        if nd is None or nc is None:
            return IntMatrix.zeros(rank_fn(dom), rank_fn(cod))
        if gen.kind == DEGENERACY:
            i = [g.key() for g in degeneracy_order(dom)].index(gen.key())
            return simp.degen[nc][i]
        i = [
            g.key() for g in (simplicial_face(nc, k) for k in range(nc + 1))
        ].index(gen.key())
        return simp.face[nc][i]

    return DendAb(trunc, rank_fn, action_fn, label=f"i_!({simp.label})")


def validate_simplicial(simp):
    """Check the simplicial identities as contravariant matrix equations."""
    problems = []
    top = simp.top
    F, D = simp.face, simp.degen
    for n in range(2, top + 1):
        for j in range(n + 1):
            for i in range(j):
                if F[n - 1][i] @ F[n][j] != F[n - 1][j - 1] @ F[n][i]:
                    problems.append(("face-face", n, i, j))
    for n in range(0, top - 1):
        for j in range(n + 1):
            for i in range(j + 1):
                if D[n + 1][i] @ D[n][j] != D[n + 1][j + 1] @ D[n][i]:
                    problems.append(("degen-degen", n, i, j))
    for n in range(0, top):
        # sigma_j . delta_i : [n] -> [n+1] -> [n]
        for j in range(n + 1):
            for i in range(n + 2):
                got = F[n + 1][i] @ D[n][j]
                if i == j or i == j + 1:
                    ok = got.is_identity()
                elif i < j:
                    ok = n >= 1 and got == D[n - 1][j - 1] @ F[n][i]
                else:
                    ok = n >= 1 and got == D[n - 1][j] @ F[n][i - 1]
                if not ok:
                    problems.append(("mixed", n, i, j))
    return problems
