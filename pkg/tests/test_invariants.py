"""The three invariants against brute-force cover search, plus the checkers."""

import itertools

import pytest

from grpinv.corpus import corpus
from grpinv.errors import InvalidPartition
from grpinv.groups import (
    INFINITE,
    Cyclic,
    Dihedral,
    GeneralizedQuaternion,
    PermGroup,
    Power,
    Product,
    SemidirectPQ,
    build,
    finite,
)
from grpinv.invariants import (
    CertEntry,
    InvariantReport,
    certificate_sound,
    check_bounds_sandwich,
    check_coordinate_injections,
    check_miller_moreno,
    check_product_inequality,
    check_subadditivity,
    check_to_zp_formula,
    check_triangle,
    ic,
    miller_moreno_flag,
    sigma,
    sigma_c,
    validate_optimal_ic_certificate,
)
from grpinv.iso import embeds, spectrum_dominates
from grpinv.lattice import all_subgroups, as_group, make_subgroup


def brute_force_cover_size(g, pool):
    """Smallest number of pool members whose union is G; None if impossible."""
    full = (1 << g.order) - 1
    for k in range(1, len(pool) + 1):
        for combo in itertools.combinations(pool, k):
            union = 0
            for s in combo:
                union |= s.mask
            if union == full:
                return k
    return None


def brute_force_sigma(g):
    return brute_force_cover_size(g, [s for s in all_subgroups(g).all if s.is_proper])


def brute_force_sigma_c(g):
    pool = [s for s in all_subgroups(g).all if s.is_proper and s.is_cyclic]
    return brute_force_cover_size(g, pool)


# ---------------------------------------------------------------------------
# sigma / sigma_c
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("n", [2, 5, 9, 12, 16])
def test_sigma_cyclic_is_infinite(n):
    report = sigma(build(Cyclic(n)))
    assert report.value == INFINITE
    assert report.infiniteness_reason == "G_cyclic"


def test_sigma_examples():
    assert sigma(build(Power(Cyclic(2), 2))).value == finite(3)
    assert sigma(build(Power(Cyclic(3), 3))).value == finite(4)
    assert sigma(build(Dihedral(3))).value == finite(4)


@pytest.mark.parametrize(
    "spec",
    [
        Power(Cyclic(2), 2),
        Dihedral(3),
        Dihedral(4),
        Dihedral(5),
        GeneralizedQuaternion(8),
        Power(Cyclic(3), 2),
        Product(Cyclic(2), Cyclic(4)),
        SemidirectPQ(7, 3),
    ],
)
def test_sigma_and_sigma_c_match_brute_force(spec):
    g = build(spec)
    assert sigma(g).value == finite(brute_force_sigma(g))
    assert sigma_c(g).value == finite(brute_force_sigma_c(g))


def test_sigma_c_examples():
    assert sigma_c(build(Power(Cyclic(3), 2))).value == finite(4)
    assert sigma_c(build(Power(Cyclic(2), 3))).value == finite(7)
    assert sigma_c(build(GeneralizedQuaternion(8))).value == finite(3)


def test_sigma_c_equals_maximal_cyclic_count():
    for e in corpus(16):
        g = e.group
        if g.is_cyclic:
            continue
        assert sigma_c(g).value == finite(len(all_subgroups(g).maximal_cyclic)), g.label


def test_sigma_at_least_three_and_below_sigma_c():
    for e in corpus(16):
        g = e.group
        if g.is_cyclic:
            continue
        sv, scv = sigma(g).value, sigma_c(g).value
        assert finite(3) <= sv <= scv, g.label


def test_certificates_are_sound():
    for spec in (Power(Cyclic(2), 2), Dihedral(4), GeneralizedQuaternion(8)):
        g = build(spec)
        for report in (sigma(g), sigma_c(g)):
            assert certificate_sound(report)
            assert len(report.certificate) == report.value.value


# ---------------------------------------------------------------------------
# ic
# ---------------------------------------------------------------------------

def test_ic_paper_table():
    cases = [
        (Power(Cyclic(2), 2), Cyclic(2), 3),
        (Power(Cyclic(2), 3), Cyclic(2), 7),
        (Power(Cyclic(3), 2), Cyclic(3), 4),
        (Power(Cyclic(3), 3), Cyclic(3), 13),
        (Power(Cyclic(3), 2), Cyclic(9), 4),
        (Power(Cyclic(2), 2), Cyclic(4), 3),
        (Dihedral(5), Cyclic(10), 6),
        (Dihedral(3), Cyclic(6), 4),
        (Power(Cyclic(2), 2), Cyclic(2), 3),
        (Power(Cyclic(2), 3), Power(Cyclic(2), 2), 3),
        (Power(Cyclic(2), 4), Power(Cyclic(2), 3), 3),
    ]
    for gspec, hspec, want in cases:
        report = ic(build(gspec), build(hspec))
        assert report.value == finite(want), (gspec, hspec)
        assert certificate_sound(report)


def test_ic_trivial_and_infinite_cases():
    q8 = build(GeneralizedQuaternion(8))
    assert ic(build(Cyclic(1)), q8).value == finite(1)
    report = ic(build(Cyclic(4)), build(Cyclic(2)))
    assert report.value == INFINITE
    assert report.infiniteness_reason == "spectrum_gap"
    assert report.missing_order == 4
    # IC(G;0) for nontrivial G
    report = ic(q8, build(Cyclic(1)))
    assert report.value == INFINITE and report.infiniteness_reason == "spectrum_gap"


def test_ic_one_iff_embeds():
    groups = [e.group for e in corpus(12)]
    for g, h in itertools.product(groups, repeat=2):
        value = ic(g, h).value
        assert (value == finite(1)) == (embeds(g, h) is not None), (g.label, h.label)
        assert value.is_finite == spectrum_dominates(g, h), (g.label, h.label)


def test_ic_isomorphism_invariance():
    a = ic(build(Dihedral(3)), build(Cyclic(6))).value
    b = ic(
        build(PermGroup((((1, 2, 3),), ((1, 2),)), 3)),
        build(Product(Cyclic(2), Cyclic(3))),
    ).value
    assert a == b == finite(4)


@pytest.mark.parametrize("p,n", [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3)])
def test_ic_to_cp_gap_formula(p, n):
    g = build(Power(Cyclic(p), n))
    icv = ic(g, build(Cyclic(p))).value
    sv = sigma(g).value
    assert icv.value - sv.value == (p**n - 1) // (p - 1) - p - 1


def brute_force_ic(g, h):
    """Minimum cover of G by embeddable subgroups, over the raw lattice.

    Independent of the production reductions: no universe shrinking, no
    restriction to maximal candidates.
    """
    pool = []
    for s in all_subgroups(g).all:
        sub, _ = as_group(g, s)
        if embeds(sub, h) is not None:
            pool.append(s)
    full = (1 << g.order) - 1
    for k in range(1, len(pool) + 1):
        for combo in itertools.combinations(pool, k):
            union = 0
            for s in combo:
                union |= s.mask
            if union == full:
                return k
    return None


def test_ic_matches_raw_lattice_brute_force():
    entries = corpus(12)
    for ge, he in itertools.product(entries, repeat=2):
        want = brute_force_ic(ge.group, he.group)
        got = ic(ge.group, he.group).value
        if want is None:
            assert got == INFINITE, (ge.group.label, he.group.label)
        else:
            assert got == finite(want), (ge.group.label, he.group.label)


def test_ic_certificate_passes_optimality_validator():
    for gspec, hspec in [
        (Power(Cyclic(2), 2), Cyclic(2)),
        (Power(Cyclic(3), 2), Cyclic(9)),
        (Dihedral(5), Cyclic(10)),
    ]:
        report = ic(build(gspec), build(hspec))
        assert validate_optimal_ic_certificate(report)


def test_optimality_validator_rejects_containment():
    g = build(Power(Cyclic(2), 2))
    h = build(Cyclic(2))
    report = ic(g, h)
    trivial = make_subgroup(g, {0})
    doctored = InvariantReport(
        "ic", g, h, report.value,
        (CertEntry(trivial, (0,)),) + report.certificate[1:],
    )
    assert not validate_optimal_ic_certificate(doctored)


def test_optimality_validator_rejects_mergeable_pairs():
    # seven order-2 subgroups of C2^3 cover it, but pairs generate C2^2
    # subgroups that embed into the target, so the cover cannot be optimal
    g = build(Power(Cyclic(2), 3))
    h = build(Power(Cyclic(2), 2))
    atoms = [s for s in all_subgroups(g).all if s.order == 2]
    entries = []
    for s in atoms:
        sub, _ = as_group(g, s)
        entries.append(CertEntry(s, embeds(sub, h)))
    fake = InvariantReport("ic", g, h, finite(7), tuple(entries))
    assert not validate_optimal_ic_certificate(fake)
    assert ic(g, h).value == finite(3)


def test_optimality_validator_pre():
    report = ic(build(Power(Cyclic(2), 2)), build(Power(Cyclic(2), 2)))
    assert report.value == finite(1)
    with pytest.raises(ValueError):
        validate_optimal_ic_certificate(report)


# ---------------------------------------------------------------------------
# checkers
# ---------------------------------------------------------------------------

def test_triangle_equality_when_target_matches():
    g = build(Power(Cyclic(2), 2))
    h = build(Cyclic(2))
    assert check_triangle(g, h, h)
    assert ic(g, h).value == ic(g, h).value * ic(h, h).value


def test_triangle_with_trivial_target():
    triv = build(Cyclic(1))
    for e in corpus(8):
        assert check_triangle(e.group, build(Power(Cyclic(2), 2)), triv)


def test_bounds_sandwich_examples():
    g = build(Power(Cyclic(3), 3))
    h = build(Cyclic(3))
    assert sigma(g).value == finite(4)
    assert ic(g, h).value == finite(13)
    assert sigma_c(g).value == finite(13)
    assert check_bounds_sandwich(g, h)
    assert check_bounds_sandwich(build(Power(Cyclic(2), 2)), build(Cyclic(2)))
    # cyclic G, H without a copy: infinite <= infinite
    assert check_bounds_sandwich(build(Cyclic(9)), build(Cyclic(3)))


def test_to_zp_formula_examples():
    assert check_to_zp_formula(build(Power(Cyclic(2), 2)), 2)
    assert check_to_zp_formula(build(Power(Cyclic(3), 2)), 3)
    assert check_to_zp_formula(build(Power(Cyclic(2), 4)), 2)
    with pytest.raises(ValueError):
        check_to_zp_formula(build(Cyclic(4)), 2)  # infinite


def test_subadditivity_example_and_partition_errors():
    g = build(Power(Cyclic(2), 2))
    h = build(Cyclic(2))
    twos = [s for s in all_subgroups(g).all if s.order == 2]
    assert check_subadditivity(g, h, *twos)
    s3 = build(PermGroup((((1, 2, 3),), ((1, 2),)), 3))
    lat = all_subgroups(s3)
    c3 = next(s for s in lat.all if s.order == 3)
    c2s = [s for s in lat.all if s.order == 2]
    with pytest.raises(InvalidPartition):
        check_subadditivity(s3, h, c3, c2s[0], c2s[1])  # union has 5 elements
    whole = next(s for s in lat.all if s.order == 6)
    with pytest.raises(InvalidPartition):
        check_subadditivity(s3, h, whole, c2s[0], c2s[1])


def test_subadditivity_sweep_small():
    for e in corpus(8):
        g = e.group
        if g.is_cyclic:
            continue
        proper = [s for s in all_subgroups(g).all if s.is_proper and s.order > 1]
        full = (1 << g.order) - 1
        for a, b, c in itertools.combinations(proper, 3):
            if a.mask | b.mask | c.mask != full:
                continue
            assert check_subadditivity(g, build(Cyclic(2)), a, b, c), g.label


def test_product_inequality_examples():
    c2 = build(Cyclic(2))
    assert check_product_inequality(c2, c2, c2, c2)
    assert ic(build(Power(Cyclic(2), 3)), build(Power(Cyclic(2), 2))).value == finite(3)
    g1, h1 = build(Power(Cyclic(2), 2)), build(Cyclic(2))
    g2, h2 = build(Power(Cyclic(3), 2)), build(Cyclic(3))
    assert check_product_inequality(g1, g2, h1, h2)


def test_coordinate_injections_examples():
    c2 = build(Cyclic(2))
    c2c2 = build(Power(Cyclic(2), 2))
    assert ic(c2c2, build(Product(Cyclic(2), Cyclic(2)))).value == finite(1)
    assert check_coordinate_injections(c2c2, c2, c2, c2)
    assert check_coordinate_injections(c2, c2c2, c2c2, c2)


def test_miller_moreno_checker():
    assert check_miller_moreno(build(GeneralizedQuaternion(8)))
    assert miller_moreno_flag(build(GeneralizedQuaternion(8))) is None
    assert check_miller_moreno(build(SemidirectPQ(7, 3)))
    assert check_miller_moreno(build(Power(Cyclic(2), 3)))  # both sides false
    assert check_miller_moreno(build(Cyclic(9)))
    # boundary cases are flagged, not failed
    q16 = build(GeneralizedQuaternion(16))
    assert check_miller_moreno(q16)
    assert miller_moreno_flag(q16) is not None
    c2c2 = build(Power(Cyclic(2), 2))
    assert check_miller_moreno(c2c2)
    assert miller_moreno_flag(c2c2) is not None
