"""Dendroidal complexes and the classical chain-complex side.

A dendroidal complex carries one structure matrix per face inside the
truncation, vanishing on normal faces and anticommuting on elementary
squares.  The Moore construction equips any presheaf with such structure;
the normalized and degenerate sublattices split it.

The classical simplicial/chain functors at the bottom are an independent
implementation on monotone maps, used as the oracle for the linear-tree
slice.  Sign conventions are the ones induced by the tree side: the last
face at level m carries sign +1 for m = 1 and (-1)^m otherwise, so the
restriction relations hold as exact matrix identities.
"""

from __future__ import annotations

from .linparts import (
    CONNECTED_NOT_NORMAL,
    NORMAL,
    classify_face,
    faces_on_part,
    maximal_linear_parts,
    normal_faces,
)
from .maps import IdentityWitness, degeneracy, degeneracy_order, face_order, face_sign
from .presheaf import SimpAb, _gen_key_str, iter_relation_squares
from .trees import linear_tree
from .zlat import IntMatrix, Lattice, hstack, intersect_kernels, sum_images


class ClosureError(RuntimeError):
    """A structure map failed to carry a sublattice into its target; this
    signals a bug, not a valid input state."""


def top_face_sign(m):
    """Sign of the last face in the induced order at linear level m."""
    return 1 if m == 1 else (-1) ** m


class DendComplex:
    """Structure matrices per face over a truncation, lazily built."""

    def __init__(self, truncation, rank_fn, structure_fn, label="dendcomplex"):
        self.truncation = truncation
        self._rank_fn = rank_fn
        self._structure_fn = structure_fn
        self._ranks = {}
        self._structs = {}
        self.label = label

    def rank(self, tree):
        self.truncation.require(tree)
        r = self._ranks.get(tree)
        if r is None:
            r = self._rank_fn(tree)
            self._ranks[tree] = r
        return r

    def structure(self, face_gen):
        key = face_gen.key()
        m = self._structs.get(key)
        if m is None:
            m = self._structure_fn(face_gen)
            expect = (
                self.rank(face_gen.realized.domain),
                self.rank(face_gen.realized.codomain),
            )
            if (m.rows, m.cols) != expect:
                raise ValueError(
                    f"structure for {face_gen!r} has shape {(m.rows, m.cols)},"
                    f" expected {expect}"
                )
            self._structs[key] = m
        return m

    def __repr__(self):
        return f"DendComplex({self.label})"

    def equals(self, other):
        trunc = self.truncation
        if trunc is not other.truncation:
            return False
        for t in trunc:
            if self.rank(t) != other.rank(t):
                return False
        for t in trunc:
            if t.num_vertices == 0:
                continue
            for g in face_order(t):
                if self.structure(g) != other.structure(g):
                    return False
        return True

    def to_json(self):
        tr = self.truncation
        return {
            "trees": [t.term for t in tr],
            "ranks": {t.term: self.rank(t) for t in tr},
            "structure": {
                _gen_key_str(g): self.structure(g).to_json()
                for t in tr
                if t.num_vertices
                for g in face_order(t)
            },
        }


def zero_complex(trunc):
    return DendComplex(trunc, lambda t: 0, lambda g: IntMatrix.zeros(0, 0), label="0")


def validate_complex(cx):
    """Normal faces must vanish; elementary face squares must anticommute."""
    problems = []
    trunc = cx.truncation
    for t in trunc:
        if t.num_vertices == 0:
            continue
        for g in face_order(t):
            if classify_face(t, g).status == NORMAL and not cx.structure(g).is_zero():
                problems.append({"kind": "normal-nonzero", "face": _gen_key_str(g)})
    for g1, g2, other in iter_relation_squares(trunc):
        if isinstance(other, IdentityWitness):
            continue
        if not (g1.is_face and g2.is_face):
            continue
        h1, h2 = other
        lhs = cx.structure(g2) @ cx.structure(g1)
        rhs = cx.structure(h2) @ cx.structure(h1)
        if lhs != rhs.scale(-1):
            problems.append(
                {
                    "kind": "anticommute",
                    "pair": [_gen_key_str(g1), _gen_key_str(g2)],
                    "other": [_gen_key_str(h1), _gen_key_str(h2)],
                }
            )
    return problems


def moore(dab):
    """The Moore complex of a presheaf: zero on normal faces, the signed
    action on unconnected faces, and the alternating sum over a part's
    faces on the last connected face."""
    def structure_fn(gen):
        t = gen.host
        cls = classify_face(t, gen)
        if cls.status == NORMAL:
            return IntMatrix.zeros(dab.rank(gen.realized.domain), dab.rank(t))
        if cls.status == CONNECTED_NOT_NORMAL:
            total = None
            for g in faces_on_part(t, cls.part):
                term = dab.action(g).scale(face_sign(g))
                total = term if total is None else total + term
            return total
        return dab.action(gen).scale(face_sign(gen))

    return DendComplex(dab.truncation, dab.rank, structure_fn, label=f"M({dab.label})")


class SublatticeComplex:
    """A dendroidal subcomplex presented by one lattice per tree, with the
    induced structure matrices expressed on the canonical lattice bases."""

    def __init__(self, base_dab, ambient, lattices, label):
        self.base = base_dab
        self.ambient = ambient  # the ambient Moore complex
        self.lattices = lattices  # tree -> Lattice
        self.label = label
        self._induced = {}

    @property
    def truncation(self):
        return self.base.truncation

    def lattice(self, tree):
        return self.lattices[tree]

    def rank(self, tree):
        return self.lattices[tree].rank

    def structure(self, face_gen):
        key = face_gen.key()
        m = self._induced.get(key)
        if m is None:
            dom = face_gen.realized.domain
            cod = face_gen.realized.codomain
            mapped = self.ambient.structure(face_gen) @ self.lattices[cod].basis
            m = self.lattices[dom].solve_matrix(mapped)
            if m is None:
                raise ClosureError(
                    f"{self.label}: structure map at {_gen_key_str(face_gen)} "
                    "leaves the sublattice"
                )
            self._induced[key] = m
        return m

    def as_complex(self):
        return DendComplex(
            self.truncation, self.rank, self.structure, label=self.label
        )

    def __repr__(self):
        return f"SublatticeComplex({self.label})"


def normalized(dab, ambient_moore=None):
    """Kernels of all normal-face actions, with restricted Moore maps."""
    trunc = dab.truncation
    amb = ambient_moore if ambient_moore is not None else moore(dab)
    lattices = {}
    for t in trunc:
        mats = [dab.action(g) for g in normal_faces(t)]
        lattices[t] = intersect_kernels(mats, dab.rank(t))
    return SublatticeComplex(dab, amb, lattices, label=f"N({dab.label})")


def degenerate(dab, ambient_moore=None):
    """Sums of degeneracy-action images, with restricted Moore maps."""
    trunc = dab.truncation
    amb = ambient_moore if ambient_moore is not None else moore(dab)
    lattices = {}
    for t in trunc:
        mats = [dab.action(g) for g in degeneracy_order(t)]
        lattices[t] = sum_images(mats, dab.rank(t))
    return SublatticeComplex(dab, amb, lattices, label=f"D({dab.label})")


def split_element(dab, tree, x):
    """Write x as a normal part plus degenerate summands.

    Per maximal linear part: while some normal face on the part does not
    kill x, take the smallest such face in the part order, subtract the
    image under the matching section-degeneracy pullback, and record the
    subtracted degenerate vector.  The iteration cap turns a logic error
    into a failure instead of a hang.
    """
    dab.truncation.require(tree)
    if len(x) != dab.rank(tree):
        raise ValueError("vector length does not match the rank")
    x = list(x)
    summands = []
    parts = maximal_linear_parts(tree)
    cap = sum(p.length for p in parts) * max(1, dab.rank(tree)) + 1
    steps = 0
    for part in parts:
        part_faces = faces_on_part(tree, part)
        while True:
            hit = None
            for i in range(part.length):  # normal faces only: local index < n
                g = part_faces[i]
                if any(v != 0 for v in dab.action(g).apply(x)):
                    hit = (i, g)
                    break
            if hit is None:
                break
            steps += 1
            if steps > cap:
                raise RuntimeError("splitting procedure exceeded its step cap")
            i, g = hit
            # the biggest section-compatible degeneracy: at chain vertex i+1
            sigma = degeneracy(tree, part.chain[i])
            y = dab.action(g).apply(x)
            d = dab.action(sigma).apply(y)
            x = [a - b for a, b in zip(x, d)]
            summands.append(d)
    return x, summands


# ---------------------------------------------------------------------------
# chain complexes and the restriction along the linear trees


class ChainComplex:
    """Nonnegatively graded, truncated; differentials d[n]: C_n -> C_{n-1}."""

    def __init__(self, ranks, diffs, label="chain"):
        self.ranks = list(ranks)
        self.diffs = dict(diffs)
        self.label = label
        for n, d in self.diffs.items():
            if (d.rows, d.cols) != (self.ranks[n - 1], self.ranks[n]):
                raise ValueError(f"differential {n} has the wrong shape")

    @property
    def top(self):
        return len(self.ranks) - 1

    def validate(self):
        problems = []
        for n in range(2, self.top + 1):
            if not (self.diffs[n - 1] @ self.diffs[n]).is_zero():
                problems.append(("dsquare", n))
        return problems

    def __eq__(self, other):
        return (
            isinstance(other, ChainComplex)
            and self.ranks == other.ranks
            and self.diffs == other.diffs
        )

    def __repr__(self):
        return f"ChainComplex({self.label}, ranks={self.ranks})"


def connected_face(n):
    """The unique not-normal connected face of the n-th linear tree."""
    t = linear_tree(n)
    part = maximal_linear_parts(t)[0]
    return faces_on_part(t, part)[n]


def chain_restrict(cx):
    """Read a chain complex off the linear trees; the differential is the
    structure map of the last connected face."""
    top = cx.truncation.max_linear_degree()
    ranks = [cx.rank(linear_tree(n)) for n in range(top + 1)]
    diffs = {n: cx.structure(connected_face(n)) for n in range(1, top + 1)}
    return ChainComplex(ranks, diffs, label=f"j*({cx.label})")


def chain_extend(chain, trunc):
    """Extension by zero off the linear trees: the differential sits on the
    connected faces, everything else vanishes."""
    top = trunc.max_linear_degree()
    if chain.top < top:
        raise ValueError("chain complex too short for the truncation")
    linear = {linear_tree(n): n for n in range(top + 1)}

    def rank_fn(t):
        n = linear.get(t)
        return chain.ranks[n] if n is not None else 0

    def structure_fn(gen):
        t = gen.host
        n = linear.get(t)
        if n is None or gen.realized.domain not in linear:
            return IntMatrix.zeros(rank_fn(gen.realized.domain), rank_fn(t))
        if classify_face(t, gen).status == CONNECTED_NOT_NORMAL:
            return chain.diffs[n]
        return IntMatrix.zeros(rank_fn(gen.realized.domain), rank_fn(t))

    return DendComplex(trunc, rank_fn, structure_fn, label=f"j_!({chain.label})")


# ---------------------------------------------------------------------------
# the classical pair on monotone maps (independent of the tree machinery)


def monotone_surjections(n):
    """Surjections [n] ->> [m], mirroring the epi enumeration: breadth-first
    closure of the identity under postcomposition with the collapses
    sigma_i (identify i, i+1), deduplicated, identity first."""
    ident = tuple(range(n + 1))
    out = [ident]
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for s in frontier:
            m = max(s)
            for i in range(m):
                cand = tuple(v if v <= i else v - 1 for v in s)
                if cand not in seen:
                    seen.add(cand)
                    out.append(cand)
                    nxt.append(cand)
        frontier = nxt
    return out


def classical_normalized(simp):
    """Kernels of the first n faces, with the induced differential on the
    canonical kernel bases."""
    top = simp.top
    lattices = [Lattice.full(simp.ranks[0])]
    for n in range(1, top + 1):
        mats = [simp.face[n][i] for i in range(n)]
        lattices.append(intersect_kernels(mats, simp.ranks[n]))
    ranks = [lat.rank for lat in lattices]
    diffs = {}
    for n in range(1, top + 1):
        mapped = simp.face[n][n] @ lattices[n].basis
        sol = lattices[n - 1].solve_matrix(mapped)
        if sol is None:
            raise ClosureError("classical normalized part is not closed")
        diffs[n] = sol.scale(top_face_sign(n))
    return ChainComplex(ranks, diffs, label=f"Ns({simp.label})")


def _classical_fk(chain, missing, m):
    """Structure matrix of the injection into [m] omitting ``missing``:
    peel the largest omitted value first; a face below the current top is
    normal and kills the product, the top face contributes its sign times
    the differential.  Mirrors the tree-side functor on monomorphisms."""
    mat = IntMatrix.identity(chain.ranks[m])
    level = m
    for v in sorted(missing, reverse=True):
        if v < level:
            return IntMatrix.zeros(chain.ranks[m - len(missing)], chain.ranks[m])
        mat = chain.diffs[level].scale(top_face_sign(level)) @ mat
        level -= 1
    return mat


def classical_gamma(chain, top=None):
    """The classical right adjoint, built on monotone surjections with the
    same routing as the tree-side functor."""
    top = chain.top if top is None else top
    surjs = {n: monotone_surjections(n) for n in range(top + 1)}
    index = {n: {s: i for i, s in enumerate(surjs[n])} for n in range(top + 1)}

    def block_ranks(n):
        return [chain.ranks[max(s)] for s in surjs[n]]

    ranks = [sum(block_ranks(n)) for n in range(top + 1)]

    def act(theta, n_from, n_to):
        """Action matrix for theta: [n_from] -> [n_to] (contravariant)."""
        rows = ranks[n_from]
        out = [[0] * ranks[n_to] for _ in range(rows)]
        col0 = 0
        for s in surjs[n_to]:
            m = max(s)
            width = chain.ranks[m]
            composite = tuple(s[theta[k]] for k in range(n_from + 1))
            # epi-mono factorization in the monotone world
            image = sorted(set(composite))
            dense = {v: i for i, v in enumerate(image)}
            epi = tuple(dense[v] for v in composite)
            missing = [v for v in range(m + 1) if v not in dense]
            block = _classical_fk(chain, missing, m)
            target = index[n_from][epi]
            row0 = sum(block_ranks(n_from)[:target])
            for i in range(block.rows):
                for j in range(width):
                    out[row0 + i][col0 + j] = block.data[i][j]
            col0 += width
        return IntMatrix(rows, ranks[n_to], out)

    face = {
        n: [
            act(tuple(v for v in range(n + 1) if v != i), n - 1, n)
            for i in range(n + 1)
        ]
        for n in range(1, top + 1)
    }
    degen = {
        n: [
            act(
                tuple(v if v <= i else v - 1 for v in range(n + 2)),
                n + 1,
                n,
            )
            for i in range(n + 1)
        ]
        for n in range(0, top)
    }
    return SimpAb(ranks, face, degen, label=f"Gs({chain.label})")


def classical_unit_matrices(simp):
    """Per degree, the block map assembled from the normalized inclusions
    pushed forward along each surjection."""
    top = simp.top
    ns = classical_normalized(simp)
    kernels = [Lattice.full(simp.ranks[0])]
    for n in range(1, top + 1):
        kernels.append(
            intersect_kernels([simp.face[n][i] for i in range(n)], simp.ranks[n])
        )
    out = []
    for n in range(top + 1):
        blocks = []
        for s in monotone_surjections(n):
            m = max(s)
            action = _simp_action_of_monotone(simp, s, n, m)
            blocks.append(action @ kernels[m].basis)
        if blocks:
            out.append(hstack(blocks))
        else:
            out.append(IntMatrix.zeros(simp.ranks[n], 0))
    return out


def _simp_action_of_monotone(simp, theta, n_from, n_to):
    """Contravariant action of an arbitrary monotone map through the
    epi-mono decomposition into generators.

    The mono part peels omitted values top-down (each is a face of the
    current level); the epi part peels the first duplicated position (for a
    monotone surjection that position equals its value).
    """
    image = sorted(set(theta))
    dense = {v: i for i, v in enumerate(image)}
    epi = tuple(dense[v] for v in theta)
    missing = [v for v in range(n_to + 1) if v not in dense]

    mat = IntMatrix.identity(simp.ranks[n_to])
    level = n_to
    for v in sorted(missing, reverse=True):
        mat = simp.face[level][v] @ mat
        level -= 1

    def strip_once(seq):
        for k in range(len(seq) - 1):
            if seq[k] == seq[k + 1]:
                return seq[:k] + seq[k + 1 :], k
        return None, None

    seq = epi
    stack = []
    while True:
        stripped, pos = strip_once(seq)
        if stripped is None:
            break
        stack.append((len(stripped) - 1, pos))
        seq = stripped
    for lev, pos in reversed(stack):
        mat = simp.degen[lev][pos] @ mat
    return mat


def monotone_maps(k, n):
    """All monotone [k] -> [n], ordered lexicographically."""
    import itertools

    return [
        tuple(m)
        for m in itertools.combinations_with_replacement(range(n + 1), k + 1)
    ]


def simplicial_representable(n, top):
    """The free simplicial abelian group on [n], truncated at ``top``."""
    bases = {k: monotone_maps(k, n) for k in range(top + 1)}
    index = {k: {m: i for i, m in enumerate(bases[k])} for k in range(top + 1)}
    ranks = [len(bases[k]) for k in range(top + 1)]

    def precompose(theta, k_from, k_to):
        # theta: [k_from] -> [k_to]; action sends a basis map h to h . theta
        cols = []
        for h in bases[k_to]:
            composed = tuple(h[theta[i]] for i in range(k_from + 1))
            cols.append(index[k_from][composed])
        data = [[0] * len(cols) for _ in range(ranks[k_from])]
        for j, i in enumerate(cols):
            data[i][j] = 1
        return IntMatrix(ranks[k_from], len(cols), data)

    face = {
        k: [
            precompose(tuple(v for v in range(k + 1) if v != i), k - 1, k)
            for i in range(k + 1)
        ]
        for k in range(1, top + 1)
    }
    degen = {
        k: [
            precompose(tuple(v if v <= i else v - 1 for v in range(k + 2)), k + 1, k)
            for i in range(k + 1)
        ]
        for k in range(0, top)
    }
    return SimpAb(ranks, face, degen, label=f"Z[Delta^{n}]")


def random_unimodular(n, rng, size=6):
    """A random determinant-one matrix from elementary operations, with its
    inverse tracked exactly."""
    u = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    inv = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for _ in range(3 * n):
        i, j = rng.randrange(n), rng.randrange(n)
        if i == j:
            continue
        c = rng.randint(-size // 2, size // 2)
        if c == 0:
            continue
        for k in range(n):
            u[i][k] += c * u[j][k]
        # inverse gets the opposite column operation
        for k in range(n):
            inv[k][j] -= c * inv[k][i]
    return IntMatrix.from_rows(u), IntMatrix.from_rows(inv)


def random_chain_complex(rng, top, max_rank=2, label="K"):
    """A random exact-friendly chain complex: a sum of shifted two-term
    pieces conjugated by unimodular changes of basis, so d . d = 0 holds on
    the nose with honest-looking matrices."""
    ranks = [rng.randint(0, max_rank) + rng.randint(0, max_rank) for _ in range(top + 1)]
    splits = [rng.randint(0, r) for r in ranks]
    diffs = {}
    for n in range(1, top + 1):
        rows, cols = ranks[n - 1], ranks[n]
        data = [[0] * cols for _ in range(rows)]
        # map the "upper" block of degree n into the "lower" block below
        for i in range(splits[n - 1], rows):
            for j in range(0, splits[n]):
                data[i][j] = rng.randint(-2, 2)
        diffs[n] = IntMatrix(rows, cols, data)
    us = [random_unimodular(r, rng) for r in ranks]
    conj = {
        n: us[n - 1][0] @ diffs[n] @ us[n][1] for n in range(1, top + 1)
    }
    cx = ChainComplex(ranks, conj, label=label)
    assert not cx.validate()
    return cx
