"""Subgroup enumeration: cyclic atoms, join-closure lattice, maximal strata.

Subgroups are stored as bitmasks over the parent group's element indices;
the canonical order everywhere is (order, mask ascending), which keeps
certificates and JSON output stable across runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import BudgetExceeded
from .groups import INFINITE, ExtNat, FiniteGroup, _finalize, finite

DEFAULT_MAX_SUBGROUPS = 200_000


@dataclass(frozen=True)
class Subgroup:
    members: frozenset[int]
    order: int
    parent_order: int
    mask: int
    is_cyclic: bool

    def contains(self, other: "Subgroup") -> bool:
        return other.mask & self.mask == other.mask

    @property
    def is_proper(self) -> bool:
        return self.order < self.parent_order

    @property
    def sorted_members(self) -> tuple[int, ...]:
        return tuple(sorted(self.members))

    def sort_key(self) -> tuple[int, int]:
        return (self.order, self.mask)


def make_subgroup(g: FiniteGroup, members) -> Subgroup:
    members = frozenset(members)
    mask = 0
    for a in members:
        mask |= 1 << a
    order = len(members)
    cyclic = any(g.elem_order[a] == order for a in members)
    return Subgroup(members, order, g.order, mask, cyclic)


@dataclass(frozen=True)
class SubgroupLattice:
    all: tuple[Subgroup, ...]
    maximal: tuple[int, ...]          # indices of maximal proper subgroups
    maximal_cyclic: tuple[int, ...]   # indices of maximal-among-cyclic subgroups

    @property
    def maximal_subgroups(self) -> tuple[Subgroup, ...]:
        return tuple(self.all[i] for i in self.maximal)

    @property
    def maximal_cyclic_subgroups(self) -> tuple[Subgroup, ...]:
        return tuple(self.all[i] for i in self.maximal_cyclic)


def _closure_members(table, seed) -> set[int]:
    # Every popped element is multiplied (both ways) with everything present
    # at pop time; later arrivals pick up the missing pairs when they pop.
    elems = set(seed)
    elems.add(0)
    queue = list(elems)
    while queue:
        a = queue.pop()
        row = table[a]
        for b in list(elems):
            for c in (row[b], table[b][a]):
                if c not in elems:
                    elems.add(c)
                    queue.append(c)
    return elems


def closure(g: FiniteGroup, seed) -> Subgroup:
    """Least subgroup containing the seed elements."""
    return make_subgroup(g, _closure_members(g.table, seed))


def cyclic_subgroups(g: FiniteGroup) -> list[Subgroup]:
    """All <x> for x in G, duplicate-free, in canonical order."""
    by_mask: dict[int, Subgroup] = {}
    for a in range(g.order):
        members = []
        x = a
        while x != 0:
            members.append(x)
            x = g.table[x][a]
        members.append(0)
        s = make_subgroup(g, members)
        by_mask.setdefault(s.mask, s)
    return sorted(by_mask.values(), key=Subgroup.sort_key)


def maximal_filter(subgroups, restrict_to_cyclic: bool = False) -> list[Subgroup]:
    """Members maximal under inclusion (among the cyclic ones when flagged)."""
    pool = [s for s in subgroups if s.is_cyclic] if restrict_to_cyclic else list(subgroups)
    pool.sort(key=Subgroup.sort_key, reverse=True)
    kept: list[Subgroup] = []
    for s in pool:
        if not any(k.order > s.order and k.contains(s) for k in kept):
            kept.append(s)
    kept.sort(key=Subgroup.sort_key)
    return kept


def _join_members(table, s_members, c_members):
    # s_members is already a subgroup, so only products touching a new
    # element need closing; the worklist is seeded with those alone.
    elems = set(s_members)
    queue = [b for b in c_members if b not in elems]
    elems.update(queue)
    while queue:
        a = queue.pop()
        row = table[a]
        for b in list(elems):
            for c in (row[b], table[b][a]):
                if c not in elems:
                    elems.add(c)
                    queue.append(c)
    return elems


@lru_cache(maxsize=None)
def all_subgroups(
    g: FiniteGroup, max_subgroups: int = DEFAULT_MAX_SUBGROUPS
) -> SubgroupLattice:
    """Complete subgroup lattice by layered join-closure from cyclic atoms.

    Every subgroup is a join of cyclic subgroups, so saturating joins of
    known subgroups with cyclic atoms reaches all of them without the 2^|G|
    subset scan.  In the abelian case the join is just the product set,
    which matters for the elementary abelian lattices (C2^7 already has
    about 29k subgroups).
    """
    table = g.table
    abelian = g.is_abelian
    cyclics = cyclic_subgroups(g)
    atom_data = [(c.mask, c.sorted_members) for c in cyclics if c.order > 1]
    known: dict[int, Subgroup] = {c.mask: c for c in cyclics}
    frontier = list(cyclics)
    full_mask = (1 << g.order) - 1
    while frontier:
        fresh: list[Subgroup] = []
        for s in frontier:
            smask = s.mask
            if smask == full_mask:
                continue
            smembers = s.sorted_members
            for cmask, cmembers in atom_data:
                if cmask & ~smask == 0:
                    continue
                if abelian:
                    members = set(smembers)
                    mask = smask
                    for a in smembers:
                        row = table[a]
                        for b in cmembers:
                            e = row[b]
                            if e not in members:
                                members.add(e)
                                mask |= 1 << e
                else:
                    members = _join_members(table, smembers, cmembers)
                    mask = 0
                    for e in members:
                        mask |= 1 << e
                if mask in known:
                    continue
                sub = make_subgroup(g, members)
                known[mask] = sub
                fresh.append(sub)
                if len(known) > max_subgroups:
                    raise BudgetExceeded(
                        f"{g.label}: subgroup count exceeds {max_subgroups}"
                    )
        frontier = fresh
    ordered = sorted(known.values(), key=Subgroup.sort_key)
    position = {s.mask: i for i, s in enumerate(ordered)}
    proper = [s for s in ordered if s.is_proper]
    maximal = tuple(position[s.mask] for s in maximal_filter(proper))
    maximal_cyclic = tuple(
        position[s.mask] for s in maximal_filter(ordered, restrict_to_cyclic=True)
    )
    return SubgroupLattice(tuple(ordered), maximal, maximal_cyclic)


def all_proper_subgroups_cyclic(g: FiniteGroup) -> bool:
    lat = all_subgroups(g)
    return all(s.is_cyclic for s in lat.all if s.is_proper)


def totient_cover_bound(g: FiniteGroup) -> ExtNat:
    """Sum over non-identity x of 1/phi(ord(x)).

    Counts the nontrivial proper cyclic subgroups of a noncyclic group (each
    cyclic subgroup of order d has phi(d) generators), hence an upper bound
    for the cyclic covering number.  Infinite for cyclic groups, matching
    sigma_c.
    """
    if g.is_cyclic:
        return INFINITE
    total = Fraction(0)
    for a in range(1, g.order):
        total += Fraction(1, _totient(g.elem_order[a]))
    if total.denominator != 1:
        raise ValueError(f"{g.label}: totient sum {total} is not an integer")
    return finite(int(total))


def _totient(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)


def as_group(g: FiniteGroup, s: Subgroup) -> tuple[FiniteGroup, tuple[int, ...]]:
    """Materialize a subgroup with its own table.

    Returns (subgroup as group, element map new index -> parent index);
    elements are reindexed by ascending parent index, keeping identity at 0.
    """
    elems = s.sorted_members
    back = {a: i for i, a in enumerate(elems)}
    table = [[back[g.table[a][b]] for b in elems] for a in elems]
    return _finalize(f"{g.label}|{s.order}@{s.mask:x}", table), elems
