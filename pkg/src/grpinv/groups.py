"""Finite groups as validated Cayley tables, plus the named family constructors.

Elements are integers 0..n-1 with the identity fixed at 0.  Construction is
deterministic: a given spec always realizes the same table, so certificates
and JSON output are reproducible across runs.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import total_ordering

import numpy as np

from .errors import InvalidSpec, OrderLimitExceeded

DEFAULT_MAX_ORDER = 128
HARD_MAX_ORDER = 512

# Associativity is checked exhaustively up to this order and on sampled
# triples beyond it (the permutation-closure and semidirect paths are the
# likeliest bug sites, so the table is never trusted unverified).
_EXHAUSTIVE_ASSOC_ORDER = 128
_ASSOC_SAMPLES = 512


# ---------------------------------------------------------------------------
# Extended naturals: the value domain of sigma, sigma_c and IC
# ---------------------------------------------------------------------------

@total_ordering
@dataclass(frozen=True)
class ExtNat:
    """A positive integer or infinity (encoded as value=None).

    Total order puts every finite value below infinity; multiplication and
    addition are absorbing at infinity.
    """

    value: int | None

    def __post_init__(self):
        if self.value is not None and self.value < 1:
            raise ValueError(f"ExtNat must be positive or infinite, got {self.value}")

    @property
    def is_finite(self) -> bool:
        return self.value is not None

    def __lt__(self, other: "ExtNat") -> bool:
        if self.value is None:
            return False
        if other.value is None:
            return True
        return self.value < other.value

    def __mul__(self, other: "ExtNat") -> "ExtNat":
        if self.value is None or other.value is None:
            return INFINITE
        return ExtNat(self.value * other.value)

    def __add__(self, other: "ExtNat") -> "ExtNat":
        if self.value is None or other.value is None:
            return INFINITE
        return ExtNat(self.value + other.value)

    def __str__(self) -> str:
        return "infinite" if self.value is None else str(self.value)


INFINITE = ExtNat(None)


def finite(k: int) -> ExtNat:
    return ExtNat(k)


# ---------------------------------------------------------------------------
# Group specs (abstract syntax)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Cyclic:
    n: int


@dataclass(frozen=True)
class Dihedral:
    n: int  # order 2n, n >= 3


@dataclass(frozen=True)
class GeneralizedQuaternion:
    order: int  # 2^k, k >= 3


@dataclass(frozen=True)
class SemidirectPQ:
    q: int
    p: int  # p < q primes, p | q-1


@dataclass(frozen=True)
class Product:
    left: "GroupSpec"
    right: "GroupSpec"


@dataclass(frozen=True)
class Power:
    base: "GroupSpec"
    exponent: int


@dataclass(frozen=True)
class PermGroup:
    # cycles per generator, 1-based points, e.g. (((1,2,3),), ((1,2),))
    generators: tuple[tuple[tuple[int, ...], ...], ...]
    degree: int


GroupSpec = (
    Cyclic | Dihedral | GeneralizedQuaternion | SemidirectPQ | Product | Power | PermGroup
)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def validate_spec(spec: GroupSpec) -> None:
    """Raise InvalidSpec if a parameter constraint is violated."""
    if isinstance(spec, Cyclic):
        if spec.n < 1:
            raise InvalidSpec(f"C{spec.n}: order must be >= 1")
    elif isinstance(spec, Dihedral):
        if spec.n < 3:
            raise InvalidSpec(f"D{spec.n}: dihedral parameter must be >= 3")
    elif isinstance(spec, GeneralizedQuaternion):
        m = spec.order
        if m < 8 or m & (m - 1):
            raise InvalidSpec(f"Q{m}: order must be a power of two >= 8")
    elif isinstance(spec, SemidirectPQ):
        q, p = spec.q, spec.p
        if not (_is_prime(p) and _is_prime(q)):
            raise InvalidSpec(f"SD({q},{p}): both parameters must be prime")
        if p >= q:
            raise InvalidSpec(f"SD({q},{p}): need p < q")
        if (q - 1) % p:
            raise InvalidSpec(f"SD({q},{p}): p must divide q-1")
    elif isinstance(spec, Product):
        validate_spec(spec.left)
        validate_spec(spec.right)
    elif isinstance(spec, Power):
        if spec.exponent < 1:
            raise InvalidSpec(f"power exponent must be >= 1, got {spec.exponent}")
        validate_spec(spec.base)
    elif isinstance(spec, PermGroup):
        if spec.degree < 1:
            raise InvalidSpec("permutation degree must be >= 1")
        for cycles in spec.generators:
            seen: set[int] = set()
            for cyc in cycles:
                for pt in cyc:
                    if not 1 <= pt <= spec.degree:
                        raise InvalidSpec(f"cycle point {pt} outside 1..{spec.degree}")
                    if pt in seen:
                        raise InvalidSpec(f"point {pt} repeated within a generator")
                    seen.add(pt)
    else:
        raise InvalidSpec(f"unknown spec node {spec!r}")


def _flatten_factors(spec: GroupSpec) -> list[GroupSpec]:
    if isinstance(spec, Product):
        return _flatten_factors(spec.left) + _flatten_factors(spec.right)
    if isinstance(spec, Power):
        return _flatten_factors(spec.base) * spec.exponent
    return [spec]


def normalize_spec(spec: GroupSpec) -> GroupSpec:
    """Expand Power nodes and left-associate Products.

    The realized table is independent of product tree shape (indexing is
    positional), so normalization only pins a canonical AST for printing,
    equality and caching.
    """
    if isinstance(spec, (Power, Product)):
        factors = _flatten_factors(spec)
        out: GroupSpec = factors[0]
        for f in factors[1:]:
            out = Product(out, f)
        return out
    return spec


def spec_order(spec: GroupSpec) -> int | None:
    """Predicted group order; None for PermGroup (unknown until closure)."""
    if isinstance(spec, Cyclic):
        return spec.n
    if isinstance(spec, Dihedral):
        return 2 * spec.n
    if isinstance(spec, GeneralizedQuaternion):
        return spec.order
    if isinstance(spec, SemidirectPQ):
        return spec.p * spec.q
    if isinstance(spec, Product):
        lo, ro = spec_order(spec.left), spec_order(spec.right)
        return None if lo is None or ro is None else lo * ro
    if isinstance(spec, Power):
        base = spec_order(spec.base)
        return None if base is None else base**spec.exponent
    return None


def _product_factors(spec: GroupSpec) -> list[GroupSpec]:
    if isinstance(spec, Product):
        return _product_factors(spec.left) + _product_factors(spec.right)
    return [spec]


def spec_text(spec: GroupSpec) -> str:
    """Canonical printed form, parseable by the CLI grammar.

    Runs of equal product factors collapse to the ^ sugar, so
    Product(C3, C3) prints as "C3^2".
    """
    spec = normalize_spec(spec)
    if isinstance(spec, Product):
        factors = _product_factors(spec)
        parts: list[str] = []
        i = 0
        while i < len(factors):
            j = i
            while j < len(factors) and factors[j] == factors[i]:
                j += 1
            text = spec_text(factors[i])
            parts.append(text if j - i == 1 else f"{text}^{j - i}")
            i = j
        return " x ".join(parts)
    if isinstance(spec, Cyclic):
        return f"C{spec.n}"
    if isinstance(spec, Dihedral):
        return f"D{spec.n}"
    if isinstance(spec, GeneralizedQuaternion):
        return f"Q{spec.order}"
    if isinstance(spec, SemidirectPQ):
        return f"SD({spec.q},{spec.p})"
    if isinstance(spec, PermGroup):
        gens = ";".join(
            "".join("(" + " ".join(str(p) for p in cyc) + ")" for cyc in cycles) or "()"
            for cycles in spec.generators
        )
        return f"Perm[{gens}]"
    raise InvalidSpec(f"unprintable spec {spec!r}")


# ---------------------------------------------------------------------------
# FiniteGroup
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """Immutable Cayley-table group; safe to share across threads."""

    label: str
    order: int
    table: tuple[tuple[int, ...], ...]
    inverse: tuple[int, ...]
    elem_order: tuple[int, ...]
    identity: int = 0

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverse[a]

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inverse[a], -k
        acc = 0
        for _ in range(k):
            acc = self.table[acc][a]
        return acc

    @property
    def is_cyclic(self) -> bool:
        return self.order in self.elem_order

    @property
    def is_abelian(self) -> bool:
        t = self.table
        n = self.order
        return all(t[a][b] == t[b][a] for a in range(n) for b in range(a))


def _validate_table(label: str, table: list[list[int]]) -> None:
    n = len(table)
    arr = np.asarray(table, dtype=np.int64)
    if arr.shape != (n, n) or arr.min() < 0 or arr.max() >= n:
        raise ValueError(f"{label}: malformed Cayley table")
    idx = np.arange(n)
    if not (np.array_equal(arr[0], idx) and np.array_equal(arr[:, 0], idx)):
        raise ValueError(f"{label}: element 0 is not an identity")
    if n <= _EXHAUSTIVE_ASSOC_ORDER:
        if not np.array_equal(arr[arr, :], arr[:, arr]):
            raise ValueError(f"{label}: operation is not associative")
    else:
        rng = random.Random(0xA55)
        for _ in range(_ASSOC_SAMPLES):
            a, b, c = rng.randrange(n), rng.randrange(n), rng.randrange(n)
            if table[table[a][b]][c] != table[a][table[b][c]]:
                raise ValueError(f"{label}: operation is not associative at ({a},{b},{c})")


def _finalize(label: str, table: list[list[int]]) -> FiniteGroup:
    n = len(table)
    _validate_table(label, table)
    inverse = [-1] * n
    for a in range(n):
        row = table[a]
        for b in range(n):
            if row[b] == 0:
                inverse[a] = b
                break
        if inverse[a] < 0:
            raise ValueError(f"{label}: element {a} has no inverse")
    orders = [0] * n
    for a in range(n):
        x = a
        m = 1
        while x != 0:
            x = table[x][a]
            m += 1
        orders[a] = m
    return FiniteGroup(
        label=label,
        order=n,
        table=tuple(tuple(row) for row in table),
        inverse=tuple(inverse),
        elem_order=tuple(orders),
    )


def _cyclic_table(n: int) -> list[list[int]]:
    return [[(a + b) % n for b in range(n)] for a in range(n)]


def _dihedral_table(n: int) -> list[list[int]]:
    # elements r^i a^s indexed s*n + i; a r a = r^-1
    size = 2 * n
    table = [[0] * size for _ in range(size)]
    for s in range(2):
        for i in range(n):
            for t in range(2):
                for j in range(n):
                    i2 = (i + (j if s == 0 else -j)) % n
                    table[s * n + i][t * n + j] = ((s + t) % 2) * n + i2
    return table


def _quaternion_table(m: int) -> list[list[int]]:
    # elements x^i y^s indexed s*h + i, h = m/2; y^2 = x^(h/2), y x y^-1 = x^-1
    h = m // 2
    table = [[0] * m for _ in range(m)]
    for s in range(2):
        for i in range(h):
            for t in range(2):
                for j in range(h):
                    i2 = i + (j if s == 0 else -j)
                    s2 = s + t
                    if s2 == 2:
                        i2 += h // 2
                        s2 = 0
                    table[s * h + i][t * h + j] = s2 * h + (i2 % h)
    return table


def build_semidirect_pq(q: int, p: int) -> FiniteGroup:
    """Non-abelian C_q x| C_p: pairs (i mod q, j mod p) indexed i*p + j.

    (i,j)*(i',j') = (i + r^j i' mod q, j+j' mod p) with r the smallest
    integer > 1 whose p-th power is 1 mod q; the smallest r makes the table
    canonical (all valid choices give isomorphic groups).
    """
    validate_spec(SemidirectPQ(q, p))
    r = next(r for r in range(2, q) if pow(r, p, q) == 1)
    size = p * q
    table = [[0] * size for _ in range(size)]
    for i in range(q):
        for j in range(p):
            rj = pow(r, j, q)
            for i2 in range(q):
                for j2 in range(p):
                    table[i * p + j][i2 * p + j2] = ((i + rj * i2) % q) * p + (j + j2) % p
    return _finalize(f"SD({q},{p})", table)


def direct_product(g: FiniteGroup, h: FiniteGroup, label: str | None = None) -> FiniteGroup:
    """Component-wise product; (a,b) is indexed a*|h| + b."""
    n, m = g.order, h.order
    table = [[0] * (n * m) for _ in range(n * m)]
    gt, ht = g.table, h.table
    for a in range(n):
        for b in range(m):
            row = table[a * m + b]
            ga = gt[a]
            hb = ht[b]
            for c in range(n):
                base = ga[c] * m
                for d in range(m):
                    row[c * m + d] = base + hb[d]
    return _finalize(label or f"{g.label} x {h.label}", table)


def _identity_perm(d: int) -> tuple[int, ...]:
    return tuple(range(d))


def _compose(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    # (p o q)(x) = p(q(x))
    return tuple(p[q[x]] for x in range(len(p)))


def cycles_to_perm(cycles: tuple[tuple[int, ...], ...], degree: int) -> tuple[int, ...]:
    """1-based disjoint cycles -> 0-based image tuple."""
    images = list(range(degree))
    for cyc in cycles:
        for k, pt in enumerate(cyc):
            images[pt - 1] = cyc[(k + 1) % len(cyc)] - 1
    return tuple(images)


def perm_cycles(perm: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    """0-based image tuple -> 1-based nontrivial cycles (smallest point first)."""
    seen: set[int] = set()
    cycles = []
    for start in range(len(perm)):
        if start in seen or perm[start] == start:
            continue
        cyc = [start]
        seen.add(start)
        x = perm[start]
        while x != start:
            cyc.append(x)
            seen.add(x)
            x = perm[x]
        cycles.append(tuple(p + 1 for p in cyc))
    return tuple(cycles)


def from_permutation_generators(
    gens: list[tuple[int, ...]],
    degree: int | None = None,
    max_order: int = DEFAULT_MAX_ORDER,
    label: str | None = None,
) -> FiniteGroup:
    """Breadth-first closure of generator products.

    Each generator is an image tuple on 0..d-1.  Element 0 is the identity;
    indexing follows BFS discovery order under the given generator ordering,
    which makes the construction deterministic.
    """
    if degree is None:
        degree = len(gens[0]) if gens else 1
    for g in gens:
        if sorted(g) != list(range(degree)):
            raise InvalidSpec(f"{g!r} is not a permutation of 0..{degree - 1}")
    ident = _identity_perm(degree)
    elems: list[tuple[int, ...]] = [ident]
    index = {ident: 0}
    head = 0
    while head < len(elems):
        cur = elems[head]
        head += 1
        for g in gens:
            nxt = _compose(cur, g)
            if nxt not in index:
                if len(elems) >= max_order:
                    raise OrderLimitExceeded(
                        f"permutation closure exceeds max order {max_order}"
                    )
                index[nxt] = len(elems)
                elems.append(nxt)
    n = len(elems)
    table = [[index[_compose(a, b)] for b in elems] for a in elems]
    if label is None:
        shown = ";".join(
            "".join(f"({' '.join(map(str, c))})" for c in perm_cycles(g)) or "()"
            for g in gens
        )
        label = f"Perm[{shown}]"
    return _finalize(label, table)


def build(spec: GroupSpec, max_order: int = DEFAULT_MAX_ORDER) -> FiniteGroup:
    """Realize a validated spec as a FiniteGroup."""
    validate_spec(spec)
    spec = normalize_spec(spec)
    predicted = spec_order(spec)
    if predicted is not None and predicted > max_order:
        raise OrderLimitExceeded(
            f"{spec_text(spec)} has order {predicted} > max order {max_order}"
        )
    label = spec_text(spec)
    if isinstance(spec, Cyclic):
        g = _finalize(label, _cyclic_table(spec.n))
    elif isinstance(spec, Dihedral):
        g = _finalize(label, _dihedral_table(spec.n))
    elif isinstance(spec, GeneralizedQuaternion):
        g = _finalize(label, _quaternion_table(spec.order))
    elif isinstance(spec, SemidirectPQ):
        g = build_semidirect_pq(spec.q, spec.p)
    elif isinstance(spec, Product):
        g = direct_product(
            build(spec.left, max_order), build(spec.right, max_order), label=label
        )
    elif isinstance(spec, PermGroup):
        gens = [cycles_to_perm(c, spec.degree) for c in spec.generators]
        g = from_permutation_generators(gens, spec.degree, max_order, label=label)
    else:
        raise InvalidSpec(f"cannot build {spec!r}")
    if g.order != (predicted if predicted is not None else g.order):
        raise ValueError(f"{label}: realized order {g.order} != predicted {predicted}")
    return g


def element_order(g: FiniteGroup, a: int) -> int:
    """Least m >= 1 with a^m = identity (precomputed at construction)."""
    return g.elem_order[a]
