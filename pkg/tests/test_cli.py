"""Command line behaviour: payload shapes, exit codes, round trips."""

import json

import pytest

from triortho.catalog import code_15_1_3, code_35_3_3, five_class_polynomials
from triortho.cli import EXIT_OK, EXIT_PARTIAL, EXIT_USAGE, EXIT_VERIFICATION, main
from triortho.f2 import format_matrix
from triortho.spaces import read_code_text, write_code_text


@pytest.fixture
def gen35(tmp_path):
    path = tmp_path / "gen35.txt"
    path.write_text(format_matrix(code_35_3_3().stacked()) + "\n")
    return str(path)


@pytest.fixture
def code15(tmp_path):
    path = tmp_path / "code15.txt"
    path.write_text(write_code_text(code_15_1_3()))
    return str(path)


def run_json(tmp_path, argv):
    out = tmp_path / "payload.json"
    status = main(argv + ["--out", str(out)])
    return status, json.loads(out.read_text())


# ---------------------------------------------------------------------------
# check

def test_check_reports_the_35_column_matrix(tmp_path, gen35, capsys):
    status, payload = run_json(tmp_path, ["check", "--matrix", gen35])
    assert status == EXIT_OK
    assert payload == {"triorthogonal": True, "n": 35, "k": 3}
    assert "triorthogonal" in capsys.readouterr().out


def test_check_fails_on_a_non_triorthogonal_matrix(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("11\n10\n")
    status, payload = run_json(tmp_path, ["check", "--matrix", str(bad)])
    assert status == EXIT_VERIFICATION
    assert payload["triorthogonal"] is False


def test_parse_error_reports_the_line(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("10\n1x\n")
    assert main(["check", "--matrix", str(bad)]) == EXIT_USAGE
    assert "line 2" in capsys.readouterr().err


def test_missing_file_is_a_usage_error(tmp_path):
    assert main(["check", "--matrix", str(tmp_path / "nope.txt")]) == EXIT_USAGE


def test_unknown_command_exits_2():
    with pytest.raises(SystemExit) as err:
        main(["frobnicate"])
    assert err.value.code == 2


# ---------------------------------------------------------------------------
# descend and distance round trip

def test_even_descent_emits_a_loadable_code(tmp_path):
    out = tmp_path / "t15.txt"
    status = main(["descend", "--poly", "1", "--m", "4", "--parity", "even",
                   "--columns", "0", "--out", str(out)])
    assert status == EXIT_OK
    code = read_code_text(out.read_text())
    assert (code.n, code.k) == (15, 1)
    assert main(["check", "--code", str(out)]) == EXIT_OK
    status, payload = run_json(tmp_path, ["distance", "--code", str(out), "--cap", "5"])
    assert status == EXIT_OK
    assert payload == {"d": 3, "cap": 5, "exact": True}


def test_json_descent_round_trips(tmp_path):
    out = tmp_path / "code.json"
    status = main(["descend", "--poly", "1", "--m", "4", "--parity", "odd",
                   "--columns", "0,1", "--j", "0", "--format", "json",
                   "--out", str(out)])
    assert status == EXIT_OK
    assert main(["check", "--code", str(out)]) == EXIT_OK
    status, payload = run_json(tmp_path, ["distance", "--code", str(out)])
    assert status == EXIT_OK
    assert payload["exact"] is True


def test_distance_cap_reached_is_partial(tmp_path, code15):
    status, payload = run_json(tmp_path, ["distance", "--code", code15, "--cap", "1"])
    assert status == EXIT_PARTIAL
    assert payload == {"d": None, "cap": 1, "exact": False}


def test_dmax_on_the_16_column_space(tmp_path):
    status, payload = run_json(tmp_path, ["dmax", "--poly", "1", "--m", "4",
                                          "--k", "1", "--parity", "even"])
    assert status == EXIT_OK
    assert payload["d"] == 3 and payload["exact"] is True


# ---------------------------------------------------------------------------
# divisibility

def test_divisible_space_emits_a_witness(tmp_path):
    status, payload = run_json(tmp_path, ["divisible", "--poly", "1", "--m", "4"])
    assert status == EXIT_OK
    assert payload["divisible"] is True
    assert len(payload["witness"]) == 16
    assert all(w % 2 == 1 for w in payload["witness"])


def test_indivisible_space_reported(tmp_path):
    third = five_class_polynomials()[2]
    status, payload = run_json(tmp_path, ["divisible", "--poly", str(third),
                                          "--m", str(third.m)])
    assert status == EXIT_OK
    assert payload["divisible"] is False
    assert "witness" not in payload


# ---------------------------------------------------------------------------
# classification

def test_classify_16_column_table(tmp_path):
    status, payload = run_json(tmp_path, ["classify", "--max-c", "16"])
    assert status == EXIT_OK
    assert payload == [{
        "polynomial": "1",
        "m": 4,
        "weight": 16,
        "r": 5,
        "unital": True,
        "divisible_level3": True,
        "dmax_even": {"1": 3, "2": 2, "3": 1},
        "dmax_odd": {"1": 2, "2": 1, "3": 1},
    }]


def test_classify_csv_layout(tmp_path):
    out = tmp_path / "table.csv"
    status = main(["classify", "--max-c", "24", "--kmax", "1",
                   "--format", "csv", "--out", str(out)])
    assert status == EXIT_OK
    lines = out.read_text().splitlines()
    assert lines[0] == "id,polynomial,m,weight,divisible,dmax_even_k1,dmax_odd_k1"
    assert len(lines) == 3
    assert lines[1].startswith("1,1,4,16,True,")
    assert lines[2].split(",")[3] == "24"


def test_classify_workers_do_not_change_the_payload(tmp_path):
    first = tmp_path / "a.json"
    second = tmp_path / "b.json"
    assert main(["classify", "--max-c", "16", "--out", str(first)]) == EXIT_OK
    assert main(["classify", "--max-c", "16", "--workers", "2",
                 "--out", str(second)]) == EXIT_OK
    assert first.read_bytes() == second.read_bytes()


def test_classify_rm36_minimal_weight(tmp_path):
    status, payload = run_json(tmp_path, ["classify-rm36", "--max-weight", "8"])
    assert status == EXIT_OK
    assert payload == [{"polynomial": "x4*x5*x6", "weight": 8, "members": 590}]


# ---------------------------------------------------------------------------
# simulation

def test_noiseless_simulation_passes_every_shot(tmp_path, code15):
    status, payload = run_json(tmp_path, ["simulate", "--code", code15,
                                          "--variant", "delayed",
                                          "--shots", "50", "--seed", "0"])
    assert status == EXIT_OK
    assert payload["pass_rate"] == 1.0
    assert payload["mean_fidelity_on_pass"] == pytest.approx(1.0)
    assert payload["max_s_injections"] <= 6


def test_simulation_is_seed_deterministic(tmp_path, code15):
    argv = ["simulate", "--code", code15, "--variant", "standard",
            "--shots", "60", "--noise", "0.05"]
    first = tmp_path / "a.json"
    second = tmp_path / "b.json"
    third = tmp_path / "c.json"
    assert main(argv + ["--seed", "7", "--out", str(first)]) == EXIT_OK
    assert main(argv + ["--seed", "7", "--out", str(second)]) == EXIT_OK
    assert main(argv + ["--seed", "8", "--out", str(third)]) == EXIT_OK
    assert first.read_bytes() == second.read_bytes()
    assert first.read_bytes() != third.read_bytes()
