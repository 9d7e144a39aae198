"""End-to-end tests of the command-line interface.

Most tests call ``main(argv)`` directly and read stdout through capsys; one
subprocess test checks the ``python -m`` entry point for real. The contract
under test: a single sorted-key JSON document on stdout, byte-identical
across runs and thread counts, and the exit-code mapping (0 ok, 1 verify
mismatch, 2 unreadable input, 3 invalid input, 4 unsupported shape).
"""

from __future__ import annotations

import io
import json
import subprocess
import sys

import pytest

from delsarte import cli
from delsarte.errors import UnsupportedShapeError

CUBIC_WITH_SECTION = '{"monomials": [[0,2,0,1],[3,0,0,0],[2,0,0,1],[0,0,1,2]]}'
DEGENERATE = '{"monomials": [[2,0,0,0],[0,2,0,0],[1,1,0,0],[0,0,2,0]]}'
ISOTRIVIAL = '{"monomials": [[5,0,0,0],[0,5,0,0],[0,4,0,1],[0,4,1,0]]}'


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run_cli(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


# ---------------------------------------------------------------------------
# analyze
# ---------------------------------------------------------------------------


def test_analyze_full_report_on_worked_cubic(capsys):
    report = run_json(capsys, "analyze", CUBIC_WITH_SECTION)
    assert report["kernel"] == [0, 2, -3, 1]
    assert report["singular_locus"]["value"] == "-4/27"
    assert report["singular_locus"]["exponent"] == 1
    assert report["structure"]["negation_invariant"] is False
    assert report["trichotomy"]["branch"] == "superelliptic"
    assert report["trichotomy"]["generic_genus"] == 1

    section = report["genus_one"]
    assert section["gamma"] == "2/3"
    assert section["discriminant"] == "-432*t**2 - 64*t"
    by_place = {f["place"]: f["type"] for f in section["fibers"]}
    assert by_place["0"] == "I1"
    assert by_place["infinity"] == "II*"
    assert by_place["t + 4/27"] == "I1"
    assert section["verdict"]["kind"] == "base_change_gamma_lt_one"
    assert section["verdict"]["base_change_exponent"] == 1


def test_analyze_reads_file_stdin_and_inline_identically(capsys, tmp_path, monkeypatch):
    path = tmp_path / "surface.json"
    path.write_text(CUBIC_WITH_SECTION)
    _, from_file, _ = run_cli(capsys, "analyze", str(path))

    monkeypatch.setattr(sys, "stdin", io.StringIO(CUBIC_WITH_SECTION))
    _, from_stdin, _ = run_cli(capsys, "analyze", "-")

    _, from_inline, _ = run_cli(capsys, "analyze", CUBIC_WITH_SECTION)
    assert from_file == from_stdin == from_inline


def test_analyze_is_byte_deterministic(capsys):
    _, first, _ = run_cli(capsys, "analyze", CUBIC_WITH_SECTION, "--json-indent", "2")
    _, second, _ = run_cli(capsys, "analyze", CUBIC_WITH_SECTION, "--json-indent", "2")
    assert first == second
    # sorted keys at every level
    report = json.loads(first)
    assert list(report) == sorted(report)
    assert list(report["genus_one"]) == sorted(report["genus_one"])


def test_analyze_degenerate_surface_stops_early(capsys):
    report = run_json(capsys, "analyze", DEGENERATE)
    assert report["validation"]["determinant"] == 0
    assert report["degeneracy"]["kind"] == "splits_after_base_change"
    assert report["degeneracy"]["base_change_degree"] == 1
    assert "kernel" not in report
    assert "trichotomy" not in report


def test_analyze_isotrivial_surface_has_no_genus_one_section(capsys):
    report = run_json(capsys, "analyze", ISOTRIVIAL)
    assert report["trichotomy"]["branch"] == "isotrivial"
    assert report["trichotomy"]["degeneration_value"] == -1
    assert "genus_one" not in report


def test_analyze_verify_reports_the_oracle_polynomial(capsys):
    report = run_json(capsys, "analyze", CUBIC_WITH_SECTION, "--verify")
    assert report["verify"]["oracle"] == "match"
    assert report["verify"]["polynomial"] == "27*t**2 + 4*t"


def test_analyze_shioda_section_with_h2(capsys):
    report = run_json(
        capsys, "analyze", CUBIC_WITH_SECTION, "--shioda", "--h2", "10"
    )
    # rational elliptic surface: everything algebraic, nothing transcendental
    assert report["shioda"] == {"h2": 10, "lambda": 0, "rho": 10}

    without_h2 = run_json(capsys, "analyze", CUBIC_WITH_SECTION, "--shioda")
    assert without_h2["shioda"] == {"lambda": 0}


# ---------------------------------------------------------------------------
# picard
# ---------------------------------------------------------------------------


def test_picard_headline_record(capsys):
    record = run_json(capsys, "picard", "--p", "11", "--a", "1")
    assert record == {
        "p": 11,
        "a": 1,
        "L0_count": 200,
        "lambda": 140,
        "rho_tilde": 62,
        "rho": 61,
    }


def test_picard_hodge_flag(capsys):
    record = run_json(capsys, "picard", "--p", "3", "--a", "2", "--hodge")
    assert (record["h20"], record["h11prim"], record["h02"]) == (1, 18, 1)
    assert record["h20"] + record["h11prim"] + record["h02"] == record["L0_count"]


def test_picard_excluded_flag_lists_sorted_fractions(capsys):
    record = run_json(capsys, "picard", "--p", "11", "--a", "2", "--excluded")
    assert record["excluded_fractions"] == [
        "5/11",
        "1/2",
        "13/22",
        "9/11",
        "10/11",
        "21/22",
    ]


def test_picard_verify_recounts_from_the_matrix(capsys):
    record = run_json(capsys, "picard", "--p", "3", "--a", "1", "--verify")
    assert record["verify"] == {"status": "match", "vectors_checked": 8}
    assert record["rho_tilde"] == 10


def test_picard_threads_do_not_change_the_bytes(capsys):
    _, one, _ = run_cli(capsys, "picard", "--p", "7", "--a", "2")
    _, four, _ = run_cli(capsys, "picard", "--p", "7", "--a", "2", "--threads", "4")
    assert one == four


# ---------------------------------------------------------------------------
# exit codes
# ---------------------------------------------------------------------------


def test_malformed_json_exits_2(capsys):
    code, out, err = run_cli(capsys, "analyze", '{"monomials": [[0,2')
    assert code == 2
    assert out == ""
    assert "cannot read input" in err


def test_missing_file_exits_2(capsys, tmp_path):
    code, out, err = run_cli(capsys, "analyze", str(tmp_path / "nope.json"))
    assert code == 2
    assert out == ""


def test_invalid_surface_exits_3(capsys):
    bad = '{"monomials": [[0,2,0,1],[3,0,0,0],[2,0,0,1],[0,0,1,2]], "bogus": 1}'
    code, out, err = run_cli(capsys, "analyze", bad)
    assert code == 3
    assert out == ""
    assert "invalid input" in err


def test_genus_zero_surface_exits_3(capsys):
    # y + y^3 + x*y^2 + t: superelliptic with a = 1, rational generic fiber
    rational = '{"monomials": [[0,1,0,2],[0,3,0,0],[1,2,0,0],[0,0,1,2]]}'
    code, out, err = run_cli(capsys, "analyze", rational)
    assert code == 3
    assert "genus" in err


def test_composite_p_exits_3(capsys):
    code, out, err = run_cli(capsys, "picard", "--p", "4", "--a", "1")
    assert code == 3
    assert "odd prime" in err


def test_unsupported_shape_maps_to_exit_4(capsys, monkeypatch):
    def raise_shape(args):
        raise UnsupportedShapeError("no usable model")

    monkeypatch.setattr(cli, "run_analyze", raise_shape)
    code, out, err = run_cli(capsys, "analyze", CUBIC_WITH_SECTION)
    assert code == 4
    assert out == ""
    assert "unsupported shape" in err


def test_verify_mismatch_exits_1_with_no_partial_json(capsys, monkeypatch):
    monkeypatch.setattr(cli, "oracle_matches_locus", lambda oracle, locus: False)
    code, out, err = run_cli(capsys, "analyze", CUBIC_WITH_SECTION, "--verify")
    assert code == 1
    assert out == ""
    assert "verification failed" in err


def test_missing_subcommand_exits_2(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main([])
    assert info.value.code == 2


# ---------------------------------------------------------------------------
# real process
# ---------------------------------------------------------------------------


def test_module_entry_point_round_trips():
    proc = subprocess.run(
        [sys.executable, "-m", "delsarte.cli", "picard", "--p", "5", "--a", "1"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    record = json.loads(proc.stdout)
    assert record["rho_tilde"] == 26
    assert proc.stdout.endswith("\n")
