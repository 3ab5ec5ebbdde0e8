"""CLI: grammar, output contracts, exit codes, JSON round-trips."""

import json

import pytest

import grpinv.invariants
from grpinv.cli import main, parse_spec
from grpinv.corpus import corpus_specs
from grpinv.errors import ParseError
from grpinv.groups import (
    Cyclic,
    Dihedral,
    GeneralizedQuaternion,
    PermGroup,
    Product,
    SemidirectPQ,
    build,
    normalize_spec,
    spec_text,
)
from grpinv.invariants import CertEntry, InvariantReport, certificate_sound
from grpinv.lattice import make_subgroup


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ---------------------------------------------------------------------------
# grammar
# ---------------------------------------------------------------------------

def test_parse_examples():
    assert parse_spec("C3^2") == Product(Cyclic(3), Cyclic(3))
    assert parse_spec("D5") == Dihedral(5)
    assert parse_spec("SD(7,3) x C2") == Product(SemidirectPQ(7, 3), Cyclic(2))
    assert parse_spec("Q8") == GeneralizedQuaternion(8)
    assert parse_spec("C2 * C3") == parse_spec("C2xC3") == Product(Cyclic(2), Cyclic(3))
    assert parse_spec(" C2  x C2 x C3 ") == Product(
        Product(Cyclic(2), Cyclic(2)), Cyclic(3)
    )
    assert parse_spec("Perm[(1 2 3);(1 2)]") == PermGroup((((1, 2, 3),), ((1, 2),)), 3)
    assert parse_spec("Perm[(1 2)(3 4)]") == PermGroup((((1, 2), (3, 4)),), 4)


def test_parse_perm_edge_forms():
    triv = parse_spec("Perm[()]")
    assert build(triv).order == 1
    two = parse_spec("Perm[(1,2)]")  # commas tolerated inside cycles
    assert build(two).order == 2


def test_trivial_group_end_to_end(capsys):
    code, out, _ = run(capsys, "ic", "C1", "C1")
    assert code == 0 and out.strip() == "1"
    code, out, _ = run(capsys, "sigma", "C1")
    assert code == 0 and out.strip() == "infinite (cyclic group)"
    code, out, _ = run(capsys, "lattice", "C1")
    assert code == 0 and out.strip() == "1: 0"


def test_parse_errors_carry_offsets():
    for text, offset in [("C", 1), ("Zx", 0), ("C2 x", 4), ("C2 ^", 4), ("SD(3 2)", 4)]:
        with pytest.raises(ParseError) as err:
            parse_spec(text)
        assert err.value.offset == offset, text
    with pytest.raises(ParseError):
        parse_spec("C2 C3")  # trailing input


def test_parse_print_round_trip():
    for spec in corpus_specs(24):
        normal = normalize_spec(spec)
        assert parse_spec(spec_text(normal)) == normal
    perm = PermGroup((((1, 2, 3), (4, 5)), ((1, 2),)), 5)
    assert parse_spec(spec_text(perm)) == perm


# ---------------------------------------------------------------------------
# invariant commands
# ---------------------------------------------------------------------------

def test_cmd_ic_table_values(capsys):
    code, out, _ = run(capsys, "ic", "C3^3", "C3")
    assert code == 0 and out.strip() == "13"
    code, out, _ = run(capsys, "sigma", "C2^2")
    assert code == 0 and out.strip() == "3"
    code, out, _ = run(capsys, "sigmac", "C2^3")
    assert code == 0 and out.strip() == "7"
    code, out, _ = run(capsys, "ic", "C4", "C2")
    assert code == 0 and out.strip() == "infinite (spectrum gap: order 4)"
    code, out, _ = run(capsys, "sigma", "C7")
    assert code == 0 and out.strip() == "infinite (cyclic group)"


def test_cmd_certificate_text(capsys):
    code, out, _ = run(capsys, "sigmac", "Q8", "--certificate")
    lines = out.strip().splitlines()
    assert lines[0] == "3" and lines[1] == "certificate:"
    assert len(lines) == 5 and all(l.startswith("  order 4:") for l in lines[2:])


def test_exit_codes(capsys):
    code, _, err = run(capsys, "ic", "C5")  # wrong arity
    assert code == 1 and err
    code, _, err = run(capsys, "sigma", "D2")
    assert code == 1 and "dihedral" in err
    code, _, err = run(capsys, "sigma", "C2^)")
    assert code == 1
    code, _, err = run(capsys, "sigma", "C200")
    assert code == 2 and "max order" in err
    code, _, err = run(capsys, "sigma", "C2^2", "--budget", "1")
    assert code == 2 and "budget" in err
    code, _, err = run(capsys, "verify", "--suite", "nope")
    assert code == 1


def test_max_order_flag(capsys):
    code, out, _ = run(capsys, "sigma", "C200", "--max-order", "256")
    assert code == 0 and out.strip() == "infinite (cyclic group)"


def test_json_documents_are_stable(capsys):
    docs = []
    for _ in range(2):
        code, out, _ = run(capsys, "ic", "C2^2", "C2", "--json", "--certificate")
        assert code == 0
        docs.append(json.loads(out))
    for doc in docs:
        doc.pop("elapsed_ms")
    assert json.dumps(docs[0]) == json.dumps(docs[1])
    doc = docs[0]
    assert doc["kind"] == "ic"
    assert doc["operands"] == ["C2^2", "C2"]
    assert doc["value"] == {"finite": 3}
    assert doc["max_order"] == 128
    assert len(doc["certificate"]) == 3


def test_json_infinite_value(capsys):
    _, out, _ = run(capsys, "ic", "C4", "C2", "--json")
    doc = json.loads(out)
    assert doc["value"] == {"infinite": True, "reason": "spectrum_gap", "missing_order": 4}
    _, out, _ = run(capsys, "sigma", "C6", "--json")
    assert json.loads(out)["value"] == {"infinite": True, "reason": "G_cyclic"}


def test_printed_certificate_revalidates(capsys):
    _, out, _ = run(capsys, "ic", "C3^2", "C9", "--json", "--certificate")
    doc = json.loads(out)
    g = build(parse_spec(doc["operands"][0]))
    h = build(parse_spec(doc["operands"][1]))
    entries = tuple(
        CertEntry(make_subgroup(g, entry["elements"]), tuple(entry["image"]))
        for entry in doc["certificate"]
    )
    from grpinv.groups import finite
    from grpinv.invariants import validate_optimal_ic_certificate

    report = InvariantReport("ic", g, h, finite(doc["value"]["finite"]), entries)
    assert certificate_sound(report)
    assert validate_optimal_ic_certificate(report)


# ---------------------------------------------------------------------------
# lattice and embeds commands
# ---------------------------------------------------------------------------

def test_cmd_lattice(capsys):
    code, out, _ = run(capsys, "lattice", "C2^2")
    assert code == 0 and len(out.strip().splitlines()) == 5
    code, out, _ = run(capsys, "lattice", "Q8", "--cyclic", "--maximal")
    lines = out.strip().splitlines()
    assert len(lines) == 3 and all(l.startswith("4:") for l in lines)
    code, out, _ = run(capsys, "lattice", "C12", "--maximal")
    assert sorted(int(l.split(":")[0]) for l in out.strip().splitlines()) == [4, 6]
    code, out, _ = run(capsys, "lattice", "C2^2", "--json")
    doc = json.loads(out)
    assert [s["order"] for s in doc["subgroups"]] == [1, 2, 2, 2, 4]


def test_cmd_embeds(capsys):
    code, out, _ = run(capsys, "embeds", "C2^2", "Q8")
    assert code == 0 and out.strip() == "no"
    code, out, _ = run(capsys, "embeds", "C2", "Q8", "--certificate")
    lines = out.strip().splitlines()
    assert lines[0] == "yes" and lines[1].startswith("witness:")
    code, out, _ = run(capsys, "embeds", "D3", "Perm[(1 2 3);(1 2)]", "--json")
    doc = json.loads(out)
    assert doc["embeds"] is True


# ---------------------------------------------------------------------------
# verify command
# ---------------------------------------------------------------------------

def test_verify_examples_suite(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "examples")
    assert code == 0
    assert "PASS ic(C3^3;C3)" in out
    assert "suite examples: 38 checks (38 pass)" in out
    assert "0 unsound" in out


def test_verify_json(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "tozp", "--max-order", "16", "--json")
    assert code == 0
    doc = json.loads(out)
    suite = doc["suites"]["tozp"]
    assert suite["checks"] > 0 and suite["fail"] == []
    assert doc["certificates"]["failures"] == []


def test_verify_budget_exhaustion_exits_2(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "examples", "--budget", "1")
    assert code == 2
    assert "SKIP" in out


def test_verify_fault_injection_exits_3(capsys, monkeypatch):
    real_ic = grpinv.invariants.ic

    def perturbed(g, h, node_budget=10**8):
        report = real_ic(g, h, node_budget)
        if report.value.is_finite and report.value.value > 1:
            from grpinv.groups import finite

            return InvariantReport(
                report.kind, report.group, report.target,
                finite(report.value.value + 1), report.certificate,
            )
        return report

    monkeypatch.setattr(grpinv.invariants, "ic", perturbed)
    code, out, _ = run(capsys, "verify", "--suite", "examples")
    assert code == 3
    assert "FAIL ic(C2^2;C2)" in out


def test_verify_threads_env_small(capsys, monkeypatch):
    monkeypatch.setenv("GRPINV_THREADS", "2")
    code, out, _ = run(capsys, "verify", "--suite", "triangle", "--max-order", "6")
    assert code == 0
    assert "suite triangle:" in out
