"""Order spectra, isomorphism search, and subgroup-embedding tests.

are_isomorphic backtracks over images of a greedy generating set, extending
the partial map through subgroup closure so violations surface long before a
full assignment.  embeds reuses the subgroup lattice of the target: K embeds
in H iff some subgroup of H of order |K| is isomorphic to K.
"""

from __future__ import annotations

from collections import Counter
from functools import lru_cache

from .groups import FiniteGroup
from .lattice import all_subgroups, as_group, closure, cyclic_subgroups

EmbeddingWitness = tuple[int, ...]


def order_spectrum(g: FiniteGroup) -> dict[int, int]:
    """Map element order -> count of elements of that order."""
    return dict(sorted(Counter(g.elem_order).items()))


def spectrum_dominates(g: FiniteGroup, h: FiniteGroup) -> bool:
    """True iff every element order occurring in G also occurs in H."""
    return set(g.elem_order) <= set(h.elem_order)


def missing_order(g: FiniteGroup, h: FiniteGroup) -> int | None:
    """Least element order of G absent from H, if any."""
    gaps = set(g.elem_order) - set(h.elem_order)
    return min(gaps) if gaps else None


def greedy_generators(g: FiniteGroup) -> list[int]:
    """Small generating set: repeatedly adjoin a highest-order element
    outside the current closure (ties broken by index)."""
    gens: list[int] = []
    covered = closure(g, [0])
    while covered.order < g.order:
        best = min(
            (a for a in range(g.order) if not covered.mask >> a & 1),
            key=lambda a: (-g.elem_order[a], a),
        )
        gens.append(best)
        covered = closure(g, covered.members | {best})
    return gens


def _extend(g, h, phi, elems, used, new_elem, image):
    """Extend a partial injective homomorphism by new_elem -> image.

    Closes the domain subgroup under products while propagating images;
    returns the extended (phi, elems, used) or None on any inconsistency.
    """
    gt, ht = g.table, h.table
    phi = phi.copy()
    elems = elems.copy()
    used = used.copy()
    if image in used:
        return None
    phi[new_elem] = image
    used.add(image)
    elems.append(new_elem)
    queue = [new_elem]
    while queue:
        a = queue.pop()
        pa = phi[a]
        ga, ha = gt[a], ht[pa]
        i = 0
        while i < len(elems):
            b = elems[i]
            i += 1
            pb = phi[b]
            for x, px in ((ga[b], ha[pb]), (gt[b][a], ht[pb][pa])):
                cur = phi[x]
                if cur < 0:
                    if px in used:
                        return None
                    phi[x] = px
                    used.add(px)
                    elems.append(x)
                    queue.append(x)
                elif cur != px:
                    return None
    return phi, elems, used


def _cyclic_order_multiset(g: FiniteGroup) -> tuple[int, ...]:
    return tuple(sorted(s.order for s in cyclic_subgroups(g)))


def are_isomorphic(g: FiniteGroup, h: FiniteGroup) -> EmbeddingWitness | None:
    """A witness bijective homomorphism G -> H, or None.

    Cheap invariants (order, order spectrum, multiset of cyclic subgroup
    orders) reject most non-isomorphic pairs before the backtracking search.
    """
    if g.order != h.order:
        return None
    if order_spectrum(g) != order_spectrum(h):
        return None
    if _cyclic_order_multiset(g) != _cyclic_order_multiset(h):
        return None
    gens = greedy_generators(g)
    if not gens:
        return (0,)
    candidates: dict[int, list[int]] = {}
    for o in {g.elem_order[x] for x in gens}:
        candidates[o] = [b for b in range(h.order) if h.elem_order[b] == o]
    start = ([-1] * g.order, [0], {0})
    start[0][0] = 0

    def dfs(level, phi, elems, used):
        if level == len(gens):
            return tuple(phi)
        a = gens[level]
        for b in candidates[g.elem_order[a]]:
            ext = _extend(g, h, phi, elems, used, a, b)
            if ext is not None:
                found = dfs(level + 1, *ext)
                if found is not None:
                    return found
        return None

    witness = dfs(0, *start)
    assert witness is None or is_embedding(g, h, witness)
    return witness


def is_embedding(k: FiniteGroup, h: FiniteGroup, phi: EmbeddingWitness) -> bool:
    """Independent witness check: injectivity, operation, element orders."""
    if len(phi) != k.order or len(set(phi)) != k.order:
        return False
    if any(not 0 <= x < h.order for x in phi):
        return False
    for a in range(k.order):
        if h.elem_order[phi[a]] != k.elem_order[a]:
            return False
        for b in range(k.order):
            if phi[k.table[a][b]] != h.table[phi[a]][phi[b]]:
                return False
    return True


@lru_cache(maxsize=None)
def embeds(k: FiniteGroup, h: FiniteGroup) -> EmbeddingWitness | None:
    """Witness injective homomorphism K -> H, or None.

    Enumerates H's subgroups of order |K| (the lattice is shared with the
    cover computations) and composes a found isomorphism with the inclusion.
    Cached per group pair: the invariant fast paths and the sweep checkers
    ask the same question repeatedly.
    """
    if k.order > h.order or h.order % k.order:
        return None
    if not spectrum_dominates(k, h):
        return None
    if k.order == 1:
        return (0,)
    if k.order == h.order:
        return are_isomorphic(k, h)
    lat = all_subgroups(h)
    for s in lat.all:
        if s.order != k.order:
            continue
        sub, elems = as_group(h, s)
        w = are_isomorphic(k, sub)
        if w is not None:
            witness = tuple(elems[w[i]] for i in range(k.order))
            assert is_embedding(k, h, witness)
            return witness
    return None
