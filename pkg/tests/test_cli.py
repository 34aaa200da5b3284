"""CLI behavior: commands, exit statuses, report formats, figures."""

import json

from qcongruence.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_expand_partition(capsys):
    code, out, _ = run(capsys, "expand", "partition", "7")
    assert code == 0
    values = [int(line.split("\t")[1]) for line in out.strip().splitlines()]
    assert values == [1, 1, 2, 3, 5, 7, 11]


def test_expand_jinvariant_window(capsys):
    code, out, _ = run(capsys, "expand", "jinvariant", "2")
    assert code == 0
    rows = [line.split("\t") for line in out.strip().splitlines()]
    assert rows == [["-1", "1"], ["0", "744"]]


def test_expand_distinct(capsys):
    code, out, _ = run(capsys, "expand", "distinct", "6")
    values = [int(line.split("\t")[1]) for line in out.strip().splitlines()]
    assert code == 0 and values == [1, 1, 1, 2, 2, 3]


def test_expand_unknown_name_lists_catalog(capsys):
    code, _, err = run(capsys, "expand", "nope", "4")
    assert code == 2
    assert "partition" in err


def test_verify_family_pass_and_json_roundtrip(capsys, tmp_path):
    out_file = tmp_path / "report.json"
    code, _, _ = run(
        capsys, "verify-family", "ram5", "--alpha-max", "2",
        "--output", "json", "--out", str(out_file),
    )
    assert code == 0
    payload = json.loads(out_file.read_text())
    assert payload["schema_version"] == 1
    assert payload["kind"] == "family-verification"
    assert all(rec["passed"] for rec in payload["records"])
    assert json.loads(json.dumps(payload)) == payload


def test_verify_family_unknown_name(capsys):
    code, _, err = run(capsys, "verify-family", "nope")
    assert code == 2
    assert "ram5" in err


def test_verify_family_corrupted_cache_fails_with_witness(capsys):
    code, out, _ = run(
        capsys, "verify-family", "ram5", "--alpha-max", "1",
        "--corrupt-index", "4", "--output", "json",
    )
    assert code == 1
    payload = json.loads(out)
    witness = payload["records"][0]["witness"]
    assert witness["n"] == 4


def test_verify_family_budget_violation_is_config_error(capsys):
    code, out, _ = run(
        capsys, "verify-family", "ram5", "--alpha-max", "2", "--budget", "100",
    )
    assert code == 2
    assert "budget" in out


def test_verify_family_jobs_deterministic(capsys):
    code1, out1, _ = run(
        capsys, "verify-family", "all", "--alpha-max", "1",
        "--samples", "5", "--output", "json",
    )
    code2, out2, _ = run(
        capsys, "verify-family", "all", "--alpha-max", "1",
        "--samples", "5", "--output", "json", "--jobs", "4",
    )
    assert code1 == code2 == 0
    assert json.loads(out1) == json.loads(out2)


def test_negative_flag_rejected(capsys):
    code, _, err = run(capsys, "verify-family", "ram5", "--samples", "-2")
    assert code == 2
    assert "positive" in err


def test_suite_identities(capsys):
    code, out, _ = run(capsys, "suite", "identities", "--trunc", "60")
    assert code == 0
    assert "rkor\tpass" in out
    assert "pn116\tpass" in out


def test_suite_hrr_single_n(capsys):
    code, out, _ = run(capsys, "suite", "hrr", "--n", "200", "--output", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["evaluations"][0]["rounded"] == 3972999029388
    statuses = {c["name"]: c["status"] for c in payload["checks"]}
    assert statuses["rounded-matches-oracle"] == "pass"


def test_suite_modular_equation_reports_recovered_a0(capsys):
    code, out, _ = run(capsys, "suite", "modular-equation", "--output", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["recovered"]["a"][0] == {"1": -1}
    names = {c["name"]: c["status"] for c in payload["checks"]}
    assert names["a0-matches-reference"] == "pass"
    assert names["a1-recovered-truth"] == "note"


def test_suite_figures_rendered(capsys, tmp_path):
    figures = tmp_path / "figs"
    code, _, _ = run(
        capsys, "suite", "ladder", "--trunc", "40", "--alpha-max", "2",
        "--figures", str(figures),
    )
    assert code == 0
    assert (figures / "suite-ladder.png").exists()
    code, _, _ = run(
        capsys, "verify-family", "tang", "--alpha-max", "1",
        "--figures", str(figures),
    )
    assert code == 0
    assert (figures / "family-tang.png").exists()
