"""Deterministic corpus of family-constructible groups and the theorem sweep.

The corpus enumerates every Cyclic/Dihedral/GeneralizedQuaternion/
SemidirectPQ atom and every product of such atoms up to a given order, then
deduplicates up to isomorphism keeping the shortest label.  The suites replay
the inequality theorems and the worked-example table over it; every finite
invariant computed along the way has its certificate re-validated.
"""

from __future__ import annotations

import itertools
import os
import time
from dataclasses import dataclass, field
from functools import lru_cache

from . import invariants as inv
from .errors import BudgetExceeded
from .cover import DEFAULT_NODE_BUDGET
from .groups import (
    Cyclic,
    Dihedral,
    ExtNat,
    FiniteGroup,
    GeneralizedQuaternion,
    GroupSpec,
    Power,
    Product,
    SemidirectPQ,
    _is_prime,
    build,
    direct_product,
    spec_order,
    spec_text,
)
from .iso import are_isomorphic, order_spectrum
from .lattice import all_subgroups, as_group, totient_cover_bound

SUITE_NAMES = (
    "triangle",
    "bounds",
    "tozp",
    "subadd",
    "product",
    "coordinate",
    "miller_moreno",
    "examples",
)

DEFAULT_SUITE_BOUNDS = {
    "triangle": 16,
    "bounds": 24,
    "tozp": 32,
    "subadd": 12,
    "product": 32,
    "coordinate": 32,
    "miller_moreno": 32,
    "examples": 128,
}


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    status: str  # "pass" | "fail" | "flag" | "skip"
    detail: str = ""
    elapsed: float = 0.0


@dataclass(frozen=True)
class CorpusEntry:
    spec: GroupSpec
    group: FiniteGroup


def _atom_specs(bound: int) -> list[GroupSpec]:
    atoms: list[GroupSpec] = [Cyclic(n) for n in range(1, bound + 1)]
    atoms += [Dihedral(n) for n in range(3, bound // 2 + 1)]
    m = 8
    while m <= bound:
        atoms.append(GeneralizedQuaternion(m))
        m *= 2
    for q in range(3, bound + 1):
        if not _is_prime(q):
            continue
        for p in range(2, q):
            if _is_prime(p) and (q - 1) % p == 0 and p * q <= bound:
                atoms.append(SemidirectPQ(q, p))
    return atoms


def corpus_specs(bound: int) -> list[GroupSpec]:
    """All candidate specs (atoms and products of atoms) up to the bound."""
    atoms = _atom_specs(bound)
    atoms.sort(key=lambda a: (spec_order(a), spec_text(a)))
    nontrivial = [a for a in atoms if spec_order(a) >= 2]
    products: list[GroupSpec] = []

    def grow(start: int, order: int, factors: list[GroupSpec]):
        if len(factors) >= 2:
            spec: GroupSpec = factors[0]
            for f in factors[1:]:
                spec = Product(spec, f)
            products.append(spec)
        for i in range(start, len(nontrivial)):
            o = spec_order(nontrivial[i])
            if order * o > bound:
                break
            grow(i, order * o, factors + [nontrivial[i]])

    grow(0, 1, [])
    return atoms + products


@lru_cache(maxsize=None)
def corpus(bound: int) -> tuple[CorpusEntry, ...]:
    """Family-constructible groups up to the bound, one per isomorphism
    class, sorted by (order, label).  Shorter labels win the dedup, so C6
    represents C2 x C3 and D3 represents SD(3,2)."""
    candidates = [
        CorpusEntry(spec, build(spec, max_order=bound)) for spec in corpus_specs(bound)
    ]
    candidates.sort(key=lambda e: (e.group.order, len(e.group.label), e.group.label))
    kept: list[CorpusEntry] = []
    buckets: dict[tuple, list[CorpusEntry]] = {}
    for entry in candidates:
        g = entry.group
        key = (g.order, tuple(sorted(order_spectrum(g).items())))
        bucket = buckets.setdefault(key, [])
        if any(are_isomorphic(g, seen.group) is not None for seen in bucket):
            continue
        bucket.append(entry)
        kept.append(entry)
    kept.sort(key=lambda e: (e.group.order, e.group.label))
    return tuple(kept)


def worker_count() -> int:
    """GRPINV_THREADS bounds the sweep's worker pool; 0 or unset means auto.

    Auto resolves to 1: at the supported orders the shared memo tables
    dominate runtime and live per-process, so sequential wins.
    """
    raw = os.environ.get("GRPINV_THREADS", "0")
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n <= 0:
        return 1
    return n


# ---------------------------------------------------------------------------
# Sweep context: memoized invariants + certificate bookkeeping
# ---------------------------------------------------------------------------

class SweepContext:
    """Label-keyed memo tables for the invariant calls a sweep repeats, plus
    the certificate-soundness ledger backing the verify report."""

    def __init__(self, node_budget: int = DEFAULT_NODE_BUDGET):
        self.node_budget = node_budget
        self._ic: dict[tuple[str, str], ExtNat] = {}
        self._sigma: dict[str, ExtNat] = {}
        self._sigma_c: dict[str, ExtNat] = {}
        self.certificates_checked = 0
        self.certificate_failures: list[str] = []

    def _note_ic_report(self, report) -> None:
        if not report.value.is_finite:
            return
        self.certificates_checked += 1
        if not inv.certificate_sound(report):
            self.certificate_failures.append(
                f"ic({report.group.label};{report.target.label}) certificate unsound"
            )
        if report.value.value > 1 and not inv.validate_optimal_ic_certificate(report):
            self.certificate_failures.append(
                f"ic({report.group.label};{report.target.label}) optimality conditions fail"
            )

    def _note_plain_report(self, report) -> None:
        if not report.value.is_finite:
            return
        self.certificates_checked += 1
        if not inv.certificate_sound(report):
            self.certificate_failures.append(
                f"{report.kind}({report.group.label}) certificate unsound"
            )

    def seed_ic(self, gl: str, hl: str, value: ExtNat) -> None:
        self._ic[(gl, hl)] = value

    def ic_value(self, g: FiniteGroup, h: FiniteGroup) -> ExtNat:
        key = (g.label, h.label)
        if key not in self._ic:
            report = inv.ic(g, h, self.node_budget)
            self._note_ic_report(report)
            self._ic[key] = report.value
        return self._ic[key]

    def sigma_value(self, g: FiniteGroup) -> ExtNat:
        if g.label not in self._sigma:
            report = inv.sigma(g, self.node_budget)
            self._note_plain_report(report)
            self._sigma[g.label] = report.value
        return self._sigma[g.label]

    def sigma_c_value(self, g: FiniteGroup) -> ExtNat:
        if g.label not in self._sigma_c:
            report = inv.sigma_c(g, self.node_budget)
            self._note_plain_report(report)
            self._sigma_c[g.label] = report.value
        return self._sigma_c[g.label]


def _pair_check_worker(args):
    """Process-pool worker: one ic value (with certificate validation) per
    ordered corpus pair, rebuilt from specs inside the worker."""
    gspec, hspec, budget = args
    g = build(gspec, max_order=HARD_WORKER_MAX_ORDER)
    h = build(hspec, max_order=HARD_WORKER_MAX_ORDER)
    report = inv.ic(g, h, budget)
    failures: list[str] = []
    checked = 0
    if report.value.is_finite:
        checked = 1
        if not inv.certificate_sound(report):
            failures.append(f"ic({g.label};{h.label}) certificate unsound")
        if report.value.value > 1 and not inv.validate_optimal_ic_certificate(report):
            failures.append(f"ic({g.label};{h.label}) optimality conditions fail")
    return (g.label, h.label, report.value.value, checked, failures)


HARD_WORKER_MAX_ORDER = 512


def _precompute_pair_table(ctx: SweepContext, entries, workers: int) -> None:
    pairs = [(a, b) for a in entries for b in entries]
    if workers <= 1:
        for a, b in pairs:
            ctx.ic_value(a.group, b.group)
        return
    import multiprocessing

    args = [(a.spec, b.spec, ctx.node_budget) for a, b in pairs]
    with multiprocessing.Pool(workers) as pool:
        for gl, hl, value, checked, failures in pool.imap(
            _pair_check_worker, args, chunksize=8
        ):
            ctx.seed_ic(gl, hl, ExtNat(value))
            ctx.certificates_checked += checked
            ctx.certificate_failures.extend(failures)


# ---------------------------------------------------------------------------
# Suites
# ---------------------------------------------------------------------------

def _run(suite: str, name: str, fn) -> CheckResult:
    start = time.perf_counter()
    try:
        ok, detail = fn()
    except BudgetExceeded as exc:
        return CheckResult(suite, name, "skip", str(exc), time.perf_counter() - start)
    status = "pass" if ok else "fail"
    return CheckResult(suite, name, status, detail, time.perf_counter() - start)


def suite_triangle(ctx: SweepContext, bound: int, workers: int = 1) -> list[CheckResult]:
    """IC(G;K) <= IC(G;H) * IC(H;K) over all ordered corpus triples."""
    entries = corpus(bound)
    _precompute_pair_table(ctx, entries, workers)
    fn = lambda a, b: ctx.ic_value(a, b)
    results = []
    for a, b, c in itertools.product(entries, repeat=3):
        name = f"triangle({a.group.label};{b.group.label};{c.group.label})"
        results.append(
            _run(
                "triangle",
                name,
                lambda a=a, b=b, c=c: (
                    inv.check_triangle(a.group, b.group, c.group, ic_fn=fn),
                    "",
                ),
            )
        )
    return results


def suite_bounds(ctx: SweepContext, bound: int, workers: int = 1) -> list[CheckResult]:
    """sigma <= IC <= sigma_c sandwich over all ordered corpus pairs."""
    entries = corpus(bound)
    _precompute_pair_table(ctx, entries, workers)
    fn = lambda a, b: ctx.ic_value(a, b)
    results = []
    for a, b in itertools.product(entries, repeat=2):
        name = f"bounds({a.group.label};{b.group.label})"
        results.append(
            _run(
                "bounds",
                name,
                lambda a=a, b=b: (
                    inv.check_bounds_sandwich(a.group, b.group, ic_fn=fn),
                    "",
                ),
            )
        )
    return results


def suite_tozp(ctx: SweepContext, bound: int, workers: int = 1) -> list[CheckResult]:
    """The |G| = IC(G;C_p)(p-1)+1 identities for every finite IC(G;C_p).

    Only primes dividing |G| can give a finite value (every non-identity
    element order must equal p), so other primes are skipped silently.
    """
    entries = corpus(bound)
    cyclic_by_order = {
        e.group.order: e for e in entries if isinstance(e.spec, Cyclic)
    }
    fn = lambda a, b: ctx.ic_value(a, b)
    results = []
    for e in entries:
        g = e.group
        if g.order == 1:
            continue
        for p in range(2, g.order + 1):
            if g.order % p or not _is_prime(p):
                continue
            target = cyclic_by_order[p]
            if not ctx.ic_value(g, target.group).is_finite:
                continue
            name = f"tozp({g.label};p={p})"
            results.append(
                _run(
                    "tozp",
                    name,
                    lambda g=g, p=p: (inv.check_to_zp_formula(g, p, ic_fn=fn), ""),
                )
            )
    return results


def suite_subadd(ctx: SweepContext, bound: int, workers: int = 1) -> list[CheckResult]:
    """Sub-additivity over every proper-triple cover of every corpus group,
    against every corpus target.  The trivial subgroup never participates in
    a triple cover (two proper subgroups cannot cover a group)."""
    entries = corpus(bound)
    fn = lambda a, b: ctx.ic_value(a, b)
    results = []
    for e in entries:
        g = e.group
        if g.is_cyclic:
            continue
        lat = all_subgroups(g)
        proper = [s for s in lat.all if s.is_proper and s.order > 1]
        full = (1 << g.order) - 1
        triples = [
            t
            for t in itertools.combinations(proper, 3)
            if t[0].mask | t[1].mask | t[2].mask == full
        ]
        for a, b, c in triples:
            for he in entries:
                name = (
                    f"subadd({g.label};{he.group.label};"
                    f"{a.order}@{a.mask:x},{b.order}@{b.mask:x},{c.order}@{c.mask:x})"
                )
                results.append(
                    _run(
                        "subadd",
                        name,
                        lambda g=g, he=he, a=a, b=b, c=c: (
                            inv.check_subadditivity(g, he.group, a, b, c, ic_fn=fn),
                            "",
                        ),
                    )
                )
    return results


def _shrink(g: FiniteGroup) -> FiniteGroup:
    """Canonical proper shrink: the first maximal subgroup, materialized;
    the trivial group shrinks to itself."""
    if g.order == 1:
        return g
    lat = all_subgroups(g)
    return as_group(g, lat.maximal_subgroups[0])[0]


def suite_product(ctx: SweepContext, bound: int, workers: int = 1) -> list[CheckResult]:
    """IC(G1xG2;H1xH2) <= IC(G1;H1)*IC(G2;H2) over ordered corpus pairs with
    product order within the bound; each pair is checked against the
    identity-shaped targets (X,Y) and the shrunk targets (maximal subgroup
    on one side), which reproduces the tower-style applications."""
    entries = corpus(bound)
    fn = lambda a, b: ctx.ic_value(a, b)
    results = []
    for a, b in itertools.product(entries, repeat=2):
        if a.group.order * b.group.order > bound:
            continue
        x, y = a.group, b.group
        quads = [
            ("same", x, y, x, y),
            ("shrinkL", x, y, _shrink(x), y),
            ("shrinkR", x, y, x, _shrink(y)),
        ]
        for tag, g1, g2, h1, h2 in quads:
            name = f"product[{tag}]({g1.label},{g2.label};{h1.label},{h2.label})"
            results.append(
                _run(
                    "product",
                    name,
                    lambda g1=g1, g2=g2, h1=h1, h2=h2: (
                        inv.check_product_inequality(g1, g2, h1, h2, ic_fn=fn),
                        "",
                    ),
                )
            )
    return results


def suite_coordinate(ctx: SweepContext, bound: int, workers: int = 1) -> list[CheckResult]:
    """Coordinate-injection inequalities and the product chain, over ordered
    pairs whose squares and mixed product all stay within the bound (the
    chain builds GxG and HxH)."""
    entries = corpus(bound)
    fn = lambda a, b: ctx.ic_value(a, b)
    results = []
    for a, b in itertools.product(entries, repeat=2):
        na, nb = a.group.order, b.group.order
        if na * nb > bound or na * na > bound or nb * nb > bound:
            continue
        name = f"coordinate({a.group.label};{b.group.label})"
        results.append(
            _run(
                "coordinate",
                name,
                lambda a=a, b=b: (
                    inv.check_coordinate_injections(
                        a.group, b.group, b.group, a.group, ic_fn=fn
                    ),
                    "",
                ),
            )
        )
    return results


def suite_miller_moreno(ctx: SweepContext, bound: int, workers: int = 1) -> list[CheckResult]:
    """Cyclic-proper-subgroups predicate vs the classified families, with
    the known boundary cases reported as flags."""
    results = []
    for e in corpus(bound):
        g = e.group
        name = f"miller_moreno({g.label})"
        start = time.perf_counter()
        ok = inv.check_miller_moreno(g)
        flag = inv.miller_moreno_flag(g)
        elapsed = time.perf_counter() - start
        if not ok:
            results.append(CheckResult("miller_moreno", name, "fail", flag or "", elapsed))
        elif flag is not None:
            results.append(CheckResult("miller_moreno", name, "flag", flag, elapsed))
        else:
            results.append(CheckResult("miller_moreno", name, "pass", "", elapsed))
    return results


# ---------------------------------------------------------------------------
# Worked-example oracle table (plus strictness and invariance witnesses)
# ---------------------------------------------------------------------------

def _example_rows():
    C = Cyclic
    P = Power
    rows: list[tuple[str, str, object]] = []
    ic_rows = [
        (P(C(2), 2), C(2), 3),
        (P(C(2), 3), C(2), 7),
        (P(C(3), 2), C(3), 4),
        (P(C(3), 3), C(3), 13),
        (P(C(3), 2), C(9), 4),
        (P(C(2), 2), C(4), 3),
        (Dihedral(5), C(10), 6),
        (Dihedral(3), C(6), 4),
        (P(C(2), 3), P(C(2), 2), 3),
        (P(C(2), 4), P(C(2), 3), 3),
    ]
    for gspec, hspec, want in ic_rows:
        rows.append(("ic", f"{spec_text(gspec)};{spec_text(hspec)}", (gspec, hspec, want)))
    for p in (2, 3, 5):
        rows.append(("sigma", f"C{p}^2", (P(C(p), 2), None, p + 1)))
    rows.append(("sigma", "C3^3", (P(C(3), 3), None, 4)))
    for p, n in ((2, 2), (2, 3), (3, 2), (3, 3), (5, 2)):
        rows.append(
            ("sigmac", f"C{p}^{n}", (P(C(p), n), None, (p**n - 1) // (p - 1)))
        )
    rows.append(("ic", "C4;C2", (C(4), C(2), "infinite")))
    for n in range(2, 17):
        rows.append(("sigma", f"C{n}", (C(n), None, "infinite")))
    return rows


def suite_examples(ctx: SweepContext, bound: int, workers: int = 1) -> list[CheckResult]:
    """The worked-example oracle table: exact integer (or infinite) values,
    plus the strictness witnesses and the isomorphism-invariance check."""
    results = []
    for kind, label, (gspec, hspec, want) in _example_rows():
        order = spec_order(gspec)
        if order is None or order > bound:
            continue

        def row(kind=kind, gspec=gspec, hspec=hspec, want=want):
            g = build(gspec, max_order=max(bound, 32))
            if kind == "ic":
                value = ctx.ic_value(g, build(hspec, max_order=max(bound, 32)))
            elif kind == "sigma":
                value = ctx.sigma_value(g)
            else:
                value = ctx.sigma_c_value(g)
            shown = str(value)
            target = "infinite" if want == "infinite" else str(want)
            return shown == target, f"got {shown}, want {target}"

        results.append(_run("examples", f"{kind}({label})", row))

    def strict_totient():
        q8 = build(GeneralizedQuaternion(8))
        bound_val = totient_cover_bound(q8)
        sc = ctx.sigma_c_value(q8)
        ok = bound_val == ExtNat(4) and sc == ExtNat(3) and sc < bound_val
        return ok, f"totient bound {bound_val}, sigma_c {sc}"

    if bound >= 8:
        results.append(
            _run("examples", "strict(totient_bound(Q8)>sigma_c(Q8))", strict_totient)
        )

    def strict_gap():
        g = build(Power(Cyclic(3), 3))
        icv = ctx.ic_value(g, build(Cyclic(3)))
        sv = ctx.sigma_value(g)
        ok = icv.is_finite and sv.is_finite and icv.value - sv.value == 9
        return ok, f"ic {icv}, sigma {sv}"

    if bound >= 27:
        results.append(_run("examples", "strict(ic(C3^3;C3)-sigma(C3^3)=9)", strict_gap))

    def iso_invariance():
        from .groups import PermGroup

        a = ctx.ic_value(build(Dihedral(3)), build(Cyclic(6)))
        b = ctx.ic_value(
            build(PermGroup((((1, 2, 3),), ((1, 2),)), 3)),
            build(Product(Cyclic(2), Cyclic(3))),
        )
        return a == b, f"got {a} vs {b}"

    if bound >= 6:
        results.append(
            _run("examples", "invariance(ic(D3;C6)=ic(Perm;C2xC3))", iso_invariance)
        )
    return results


SUITES = {
    "triangle": suite_triangle,
    "bounds": suite_bounds,
    "tozp": suite_tozp,
    "subadd": suite_subadd,
    "product": suite_product,
    "coordinate": suite_coordinate,
    "miller_moreno": suite_miller_moreno,
    "examples": suite_examples,
}


@dataclass
class VerifyReport:
    results: list[CheckResult] = field(default_factory=list)
    certificates_checked: int = 0
    certificate_failures: list[str] = field(default_factory=list)

    @property
    def failed(self) -> list[CheckResult]:
        return [r for r in self.results if r.status == "fail"]

    @property
    def skipped(self) -> list[CheckResult]:
        return [r for r in self.results if r.status == "skip"]

    @property
    def flagged(self) -> list[CheckResult]:
        return [r for r in self.results if r.status == "flag"]


def run_suites(
    names=None,
    max_order: int | None = None,
    node_budget: int = DEFAULT_NODE_BUDGET,
    workers: int | None = None,
) -> VerifyReport:
    names = list(names) if names else list(SUITE_NAMES)
    for n in names:
        if n not in SUITES:
            raise ValueError(f"unknown suite {n!r} (choose from {', '.join(SUITE_NAMES)})")
    if workers is None:
        workers = worker_count()
    ctx = SweepContext(node_budget)
    report = VerifyReport()
    for n in names:
        bound = max_order if max_order is not None else DEFAULT_SUITE_BOUNDS[n]
        report.results.extend(SUITES[n](ctx, bound, workers))
    report.certificates_checked = ctx.certificates_checked
    report.certificate_failures = list(ctx.certificate_failures)
    return report
