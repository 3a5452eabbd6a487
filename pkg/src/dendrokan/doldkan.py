"""The Gamma functor, the unit isomorphism, and the relation table checks."""

from __future__ import annotations

from functools import lru_cache

from .maps import compose, degeneracy_order, identity


@lru_cache(maxsize=None)
def enumerate_epis(tree):
    """All epimorphisms out of a tree, as (map, codomain) pairs.

    Breadth-first closure of the identity under postcomposition with
    degeneracies, deduplicated by edge map; the identity comes first.
    """
    ident = identity(tree)
    out = [(ident, tree)]
    seen = {ident.key()}
    frontier = [ident]
    while frontier:
        next_frontier = []
        for r in frontier:
            for sigma in degeneracy_order(r.codomain):
                cand = compose(sigma.realized, r)
                if cand.key() not in seen:
                    seen.add(cand.key())
                    out.append((cand, cand.codomain))
                    next_frontier.append(cand)
        frontier = next_frontier
    return tuple(out)
