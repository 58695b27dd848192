import csv
import io
import json
import subprocess
import sys

import mpmath
import pytest

from zeta4 import __version__
from zeta4.cli import main, render_decimal
from zeta4.numctx import make_context


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_main_identity(capsys):
    code, out, _ = run(capsys, "verify", "--id", "MAIN_Z4_REAL_LINE", "--digits", "50", "--format", "json")
    assert code == 0
    env = json.loads(out)
    (row,) = env["payload"]
    assert row["passed"] is True
    assert mpmath.mpf(row["abs_residual"]) < mpmath.mpf("1e-42")


def test_verify_all_json_envelope(capsys):
    code, out, _ = run(capsys, "verify", "--id", "all", "--digits", "30", "--format", "json")
    assert code == 0
    env = json.loads(out)
    assert set(env) == {"tool_version", "command", "config", "elapsed_s", "timings", "payload"}
    assert env["tool_version"] == __version__ and env["command"] == "verify"
    assert env["config"] == {"digits": 30, "max_level": 12, "output_format": "json", "output_path": None}
    assert len(env["payload"]) == 19
    assert set(env["payload"][0]) == {"id", "lhs_value", "rhs_value", "abs_residual", "tolerance", "passed", "evaluations", "note"}
    assert json.loads(json.dumps(env)) == env


def test_verify_unknown_id_is_usage_error(capsys):
    code, _, err = run(capsys, "verify", "--id", "NO_SUCH")
    assert code == 2 and "NO_SUCH" in err


def test_verify_underresolved_exits_one(capsys):
    code, out, _ = run(capsys, "verify", "--id", "MAIN_Z4_REAL_LINE", "--max-level", "4")
    assert code == 1 and "convergence" in out


def test_verify_group_alias(capsys):
    code, out, _ = run(capsys, "verify", "--id", "EULER_REP", "--id", "Z2_REP", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert [r["id"] for r in rows] == ["EULER_REP_S2", "EULER_REP_S3", "EULER_REP_S4", "Z2_REP"]


def test_table_text(capsys):
    code, out, _ = run(capsys, "table", "--pmax", "4")
    assert code == 0
    lines = out.splitlines()[2:]
    assert [line.split()[1] for line in lines] == ["1", "7", "279/2", "5715", "804825/2"]


def test_table_csv(capsys):
    code, out, _ = run(capsys, "table", "--pmax", "5", "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "p,value,coeff_zeta,coeff_eta,residual_zeta,residual_eta,note"
    assert len(lines) == 7
    row5 = next(csv.DictReader(io.StringIO(out)))
    assert row5["coeff_eta"] == "2"


@pytest.mark.parametrize("argv", [["table", "--pmax", "99"], ["table", "--pmax", "-1"],
                                  ["discover", "--pfit", "2", "--pcheck", "3"],
                                  ["discover", "--pfit", "4", "--pcheck", "4"],
                                  ["zeta", "--s", "3", "--method", "bernoulli"],
                                  ["zeta", "--s", "4", "--digits", "5"],
                                  ["zeta", "--s", "4", "--max-level", "30"]])
def test_usage_errors_exit_two(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and "error" in err


def test_argparse_errors_exit_two(capsys):
    with pytest.raises(SystemExit) as info:
        main(["zeta", "--s", "4", "--method", "contour"])
    assert info.value.code == 2


def test_discover_json(capsys):
    code, out, _ = run(capsys, "discover", "--pfit", "4", "--pcheck", "8", "--format", "json")
    assert code == 0
    (rec,) = json.loads(out)["payload"]
    assert rec["found"] is True
    assert rec["fit_range"] == [0, 1, 2, 3, 4]
    assert rec["validated_range"] == [5, 6, 7, 8]
    assert rec["ratio_polynomial"] == "(2p - 1)(2p + 2)"
    assert rec["closed_form"] == "I(p) = 2*(p + 1)*(2p)! * eta(2p+2)"
    assert all(c["passed"] for c in rec["checks"])


def test_discover_text(capsys):
    code, out, _ = run(capsys, "discover", "--pfit", "4", "--pcheck", "6", "--digits", "40")
    assert code == 0
    assert "q(p) = (2p - 1)(2p + 2) = 4p^2 + 2p - 2" in out
    assert "validated range: [5, 6]" in out


def test_zeta_bernoulli_and_mellin_agree(capsys):
    code, out, _ = run(capsys, "zeta", "--s", "4", "--method", "bernoulli")
    assert code == 0
    assert "1/90 * pi^4" in out
    exact = mpmath.mpf(out.splitlines()[1].split("= ")[1])
    code, out, _ = run(capsys, "zeta", "--s", "4", "--method", "mellin")
    assert code == 0
    assert abs(mpmath.mpf(out.split("= ")[1]) - exact) < mpmath.mpf("1e-42")


def test_json_payload_is_byte_stable(capsys):
    payloads = []
    for _ in range(2):
        _, out, _ = run(capsys, "table", "--pmax", "3", "--digits", "30", "--format", "json")
        payloads.append(json.dumps(json.loads(out)["payload"]))
    assert payloads[0] == payloads[1]


def test_formats_carry_same_numbers(capsys):
    _, text, _ = run(capsys, "verify", "--id", "BLOCK_B", "--digits", "20")
    _, js, _ = run(capsys, "verify", "--id", "BLOCK_B", "--digits", "20", "--format", "json")
    _, cs, _ = run(capsys, "verify", "--id", "BLOCK_B", "--digits", "20", "--format", "csv")
    jrow = json.loads(js)["payload"][0]
    crow = next(csv.DictReader(io.StringIO(cs)))
    for key in ("lhs_value", "rhs_value", "abs_residual", "tolerance"):
        assert jrow[key] == crow[key]
        assert jrow[key] in text


def test_env_digits_and_flag_precedence(capsys, monkeypatch):
    monkeypatch.setenv("ZETA4_DIGITS", "20")
    _, out, _ = run(capsys, "zeta", "--s", "2", "--format", "json")
    assert json.loads(out)["config"]["digits"] == 20
    _, out, _ = run(capsys, "zeta", "--s", "2", "--digits", "15", "--format", "json")
    assert json.loads(out)["config"]["digits"] == 15
    monkeypatch.setenv("ZETA4_DIGITS", "lots")
    code, _, _ = run(capsys, "zeta", "--s", "2")
    assert code == 2


def test_out_path(capsys, tmp_path):
    target = tmp_path / "z.json"
    code, out, _ = run(capsys, "zeta", "--s", "6", "--format", "json", "--out", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["payload"][0]["pi_coefficient"] == "1/945"


def test_render_decimal():
    ctx = make_context(20)
    assert render_decimal(ctx.mpf(1) / 3, 20) == "0.33333333333333333333"
    assert render_decimal(ctx.mpf(2), 5) == "2.0000"
    assert render_decimal(ctx.mpf("0.125"), 2) == "0.12"
    assert render_decimal(ctx.mpf("0.375"), 2) == "0.38"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "zeta4", "zeta", "--s", "2", "--digits", "15"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert "1/6 * pi^2" in proc.stdout
