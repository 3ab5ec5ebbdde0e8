"""The three invariants by reduction to exact set cover, with certificates,
plus the inequality checkers the verify sweep replays.

The cover universe is always the set of maximal cyclic subgroups: a subgroup
contains an element iff it contains the cyclic subgroup it generates, so one
point per maximal cyclic subgroup is enough and the optimum is unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cover import DEFAULT_NODE_BUDGET, make_instance, min_cover, validate_cover
from .errors import InvalidPartition
from .groups import (
    INFINITE,
    Cyclic,
    ExtNat,
    FiniteGroup,
    GeneralizedQuaternion,
    _is_prime,
    build,
    direct_product,
    finite,
)
from .iso import are_isomorphic, embeds, is_embedding, missing_order, spectrum_dominates
from .lattice import (
    Subgroup,
    all_proper_subgroups_cyclic,
    all_subgroups,
    as_group,
    closure,
    make_subgroup,
)


@dataclass(frozen=True)
class CertEntry:
    """One cover member; embedding[i] is the image in the target group of
    subgroup.sorted_members[i] (present only for IC certificates)."""

    subgroup: Subgroup
    embedding: tuple[int, ...] | None = None


@dataclass(frozen=True)
class InvariantReport:
    kind: str  # "sigma" | "sigma_c" | "ic"
    group: FiniteGroup
    target: FiniteGroup | None
    value: ExtNat
    certificate: tuple[CertEntry, ...] | None
    infiniteness_reason: str | None = None  # "G_cyclic" | "spectrum_gap" | "no_cover"
    missing_order: int | None = None

    @property
    def operands(self) -> tuple[str, ...]:
        if self.target is None:
            return (self.group.label,)
        return (self.group.label, self.target.label)


def _covers_point(candidate: Subgroup, point: Subgroup) -> bool:
    return candidate.contains(point)


def _solve(kind, g, target, universe, candidates, entries, node_budget):
    inst = make_instance(
        len(universe),
        [
            frozenset(j for j, pt in enumerate(universe) if _covers_point(c, pt))
            for c in candidates
        ],
    )
    sol = min_cover(inst, node_budget)
    if not sol.value.is_finite:
        return InvariantReport(kind, g, target, INFINITE, None, "no_cover")
    assert validate_cover(inst, sol)
    cert = tuple(entries[inst.kept[i]] for i in sol.certificate)
    return InvariantReport(kind, g, target, sol.value, cert)


def sigma(g: FiniteGroup, node_budget: int = DEFAULT_NODE_BUDGET) -> InvariantReport:
    """Covering number: least number of proper subgroups whose union is G.

    Infinite for cyclic groups (a generator lies in no proper subgroup);
    otherwise the maximal proper subgroups are the only candidates needed.
    """
    if g.is_cyclic:
        return InvariantReport("sigma", g, None, INFINITE, None, "G_cyclic")
    lat = all_subgroups(g)
    candidates = list(lat.maximal_subgroups)
    entries = [CertEntry(c) for c in candidates]
    return _solve(
        "sigma", g, None, lat.maximal_cyclic_subgroups, candidates, entries, node_budget
    )


def sigma_c(g: FiniteGroup, node_budget: int = DEFAULT_NODE_BUDGET) -> InvariantReport:
    """Cyclic covering number: least cover of G by proper cyclic subgroups."""
    if g.is_cyclic:
        return InvariantReport("sigma_c", g, None, INFINITE, None, "G_cyclic")
    lat = all_subgroups(g)
    candidates = list(lat.maximal_cyclic_subgroups)
    entries = [CertEntry(c) for c in candidates]
    return _solve(
        "sigma_c", g, None, lat.maximal_cyclic_subgroups, candidates, entries, node_budget
    )


def ic(g: FiniteGroup, h: FiniteGroup, node_budget: int = DEFAULT_NODE_BUDGET) -> InvariantReport:
    """Injective hom-complexity: least cover of G by subgroups that each
    embed into H.

    Fast paths: G embeds in H -> 1; an element order of G missing from H ->
    infinite (and for finite G the converse holds, so the solver only runs
    on feasible instances).  Candidates are the inclusion-maximal embeddable
    subgroups, found by one descending lattice pass: anything inside an
    embeddable subgroup embeds too, so it is skipped without a search.
    """
    w = embeds(g, h)
    if w is not None:
        whole = make_subgroup(g, range(g.order))
        return InvariantReport("ic", g, h, finite(1), (CertEntry(whole, w),))
    if not spectrum_dominates(g, h):
        return InvariantReport(
            "ic", g, h, INFINITE, None, "spectrum_gap", missing_order(g, h)
        )
    assert not g.is_cyclic  # cyclic + dominated spectrum would have embedded
    lat = all_subgroups(g)
    admissible: list[tuple[Subgroup, tuple[int, ...]]] = []
    for s in reversed(lat.all):
        if s.order == g.order:
            continue
        if any(m.contains(s) for m, _ in admissible):
            continue
        if h.order % s.order:
            continue
        sub, _ = as_group(g, s)
        ws = embeds(sub, h)
        if ws is not None:
            admissible.append((s, ws))
    admissible.sort(key=lambda t: t[0].sort_key())
    candidates = [s for s, _ in admissible]
    entries = [CertEntry(s, ws) for s, ws in admissible]
    return _solve(
        "ic", g, h, lat.maximal_cyclic_subgroups, candidates, entries, node_budget
    )


def validate_optimal_ic_certificate(report: InvariantReport) -> bool:
    """Structural optimality conditions for a nonunitary IC certificate:

    (i) no member is contained in the union of the others (in particular no
        member is contained in another);
    (ii) each pair either generates the whole group or generates a subgroup
         that does not embed into the target.
    """
    if report.kind != "ic" or not report.value.is_finite or report.value.value <= 1:
        raise ValueError("expects a finite ic certificate of size > 1")
    g, h = report.group, report.target
    assert report.certificate is not None and h is not None
    subs = [e.subgroup for e in report.certificate]
    full = (1 << g.order) - 1
    for i in range(len(subs)):
        union = 0
        for j, s in enumerate(subs):
            if j != i:
                union |= s.mask
        if union == full:
            return False
    for i in range(len(subs)):
        for j in range(len(subs)):
            if i != j and subs[j].contains(subs[i]):
                return False
    for i in range(len(subs)):
        for j in range(i + 1, len(subs)):
            joined = closure(g, subs[i].members | subs[j].members)
            if joined.order == g.order:
                continue
            sub, _ = as_group(g, joined)
            if embeds(sub, h) is not None:
                return False
    return True


def certificate_sound(report: InvariantReport) -> bool:
    """Group-level re-validation of a finite certificate, independent of the
    solver's own instance bookkeeping: the members union to the whole group,
    none is redundant, the count matches the value, and the kind constraints
    hold (proper for sigma, proper cyclic for sigma_c, verified embeddings
    for ic)."""
    if not report.value.is_finite or report.certificate is None:
        return False
    g = report.group
    entries = report.certificate
    if len(entries) != report.value.value:
        return False
    full = (1 << g.order) - 1
    masks = [e.subgroup.mask for e in entries]
    union = 0
    for m in masks:
        union |= m
    if union != full:
        return False
    if len(entries) > 1:
        for i in range(len(entries)):
            rest = 0
            for j, m in enumerate(masks):
                if j != i:
                    rest |= m
            if rest == full:
                return False
    for e in entries:
        s = e.subgroup
        if report.kind in ("sigma", "sigma_c") and not s.is_proper:
            return False
        if report.kind == "sigma_c" and not s.is_cyclic:
            return False
        if report.kind == "ic":
            if e.embedding is None or report.target is None:
                return False
            sub, _ = as_group(g, s)
            if not is_embedding(sub, report.target, e.embedding):
                return False
    return True


# ---------------------------------------------------------------------------
# Theorem checkers
# ---------------------------------------------------------------------------

def check_triangle(g, h, k, *, ic_fn=None) -> bool:
    """IC(G;K) <= IC(G;H) * IC(H;K) in extended-natural arithmetic."""
    f = ic_fn or (lambda a, b: ic(a, b).value)
    return f(g, k) <= f(g, h) * f(h, k)


def check_bounds_sandwich(g, h, *, ic_fn=None) -> bool:
    """sigma(G) <= IC(G;H) when G does not embed in H;
    IC(G;H) <= sigma_c(G) when H realizes every element order of G."""
    f = ic_fn or (lambda a, b: ic(a, b).value)
    value = f(g, h)
    ok = True
    if embeds(g, h) is None:
        ok = ok and sigma(g).value <= value
    if spectrum_dominates(g, h):
        ok = ok and value <= sigma_c(g).value
    return ok


def check_to_zp_formula(g: FiniteGroup, p: int, *, ic_fn=None) -> bool:
    """|G| = IC(G;C_p)(p-1)+1 and p | IC(G;C_p)-1, for finite IC."""
    f = ic_fn or (lambda a, b: ic(a, b).value)
    value = f(g, build(Cyclic(p)))
    if not value.is_finite:
        raise ValueError("IC(G;C_p) must be finite")
    k = value.value
    return g.order == k * (p - 1) + 1 and (k - 1) % p == 0


def check_subadditivity(g, h, a: Subgroup, b: Subgroup, c: Subgroup, *, ic_fn=None) -> bool:
    """max of the part values <= IC(G;H) <= their sum, for a triple cover
    of G by proper subgroups."""
    full = (1 << g.order) - 1
    for part in (a, b, c):
        if part.parent_order != g.order or not part.is_proper:
            raise InvalidPartition("parts must be proper subgroups of G")
    if a.mask | b.mask | c.mask != full:
        raise InvalidPartition("parts do not cover G")
    f = ic_fn or (lambda x, y: ic(x, y).value)
    parts = [f(as_group(g, part)[0], h) for part in (a, b, c)]
    whole = f(g, h)
    return max(parts) <= whole <= parts[0] + parts[1] + parts[2]


def check_product_inequality(g1, g2, h1, h2, *, ic_fn=None) -> bool:
    """IC(G1xG2; H1xH2) <= IC(G1;H1) * IC(G2;H2)."""
    f = ic_fn or (lambda a, b: ic(a, b).value)
    return f(direct_product(g1, g2), direct_product(h1, h2)) <= f(g1, h1) * f(g2, h2)


def check_coordinate_injections(g, g2, h, h2, *, ic_fn=None) -> bool:
    """IC(G;HxH2) <= min of the factors, max over coordinates <= IC of the
    product, and the chain IC(G;HxH) <= IC(G;H) <= IC(GxG;H)."""
    f = ic_fn or (lambda a, b: ic(a, b).value)
    first = f(g, direct_product(h, h2)) <= min(f(g, h), f(g, h2))
    second = max(f(g, h), f(g2, h)) <= f(direct_product(g, g2), h)
    chain = f(g, direct_product(h, h)) <= f(g, h) <= f(direct_product(g, g), h)
    return first and second and chain


def _is_generalized_quaternion(g: FiniteGroup) -> bool:
    n = g.order
    if n < 8 or n & (n - 1):
        return False
    return are_isomorphic(g, build(GeneralizedQuaternion(n))) is not None


def _is_nonabelian_pq(g: FiniteGroup) -> bool:
    if g.is_abelian:
        return False
    n = g.order
    for p in range(2, n):
        if n % p == 0:
            q = n // p
            return p < q and _is_prime(p) and _is_prime(q)
    return False


def _is_noncyclic_p_by_p(g: FiniteGroup) -> bool:
    # every group of order p^2 is C_{p^2} or C_p x C_p
    if g.is_cyclic:
        return False
    root = round(g.order**0.5)
    return root * root == g.order and _is_prime(root)


def miller_moreno_classification(g: FiniteGroup) -> bool:
    """Membership (up to isomorphism) in {cyclic, generalized quaternion,
    non-abelian group of order pq}."""
    return g.is_cyclic or _is_generalized_quaternion(g) or _is_nonabelian_pq(g)


def check_miller_moreno(g: FiniteGroup) -> bool:
    """Compare the all-proper-subgroups-cyclic predicate with the classified
    families, tolerating the two known boundary cases: C_p x C_p satisfies
    the predicate but is outside the list, and Q_{2^n} with n >= 4 is in the
    list but contains a non-cyclic Q8."""
    lhs = all_proper_subgroups_cyclic(g)
    rhs = miller_moreno_classification(g)
    if lhs == rhs:
        return True
    return _is_noncyclic_p_by_p(g) or (g.order >= 16 and _is_generalized_quaternion(g))


def miller_moreno_flag(g: FiniteGroup) -> str | None:
    """Human-readable note for the boundary cases of check_miller_moreno."""
    lhs = all_proper_subgroups_cyclic(g)
    rhs = miller_moreno_classification(g)
    if lhs == rhs:
        return None
    if _is_noncyclic_p_by_p(g):
        return "C_p x C_p has only cyclic proper subgroups but is outside the classified list"
    if g.order >= 16 and _is_generalized_quaternion(g):
        return "generalized quaternion of order >= 16 contains a non-cyclic Q8"
    return "classification mismatch"
