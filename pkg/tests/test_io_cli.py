import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import pytest

from jaynerogers.cli import EXHAUSTED, MALFORMED, OK, main
from jaynerogers.examples import step_oracle
from jaynerogers.io import (FormatError, format_tree, format_word, literal_value, parse_d2, parse_enumeration,
                            parse_point, parse_pw, parse_tree, parse_word)
from jaynerogers.markov import jump_approx
from jaynerogers.streams import BINARY, StreamName

DATA = Path(__file__).resolve().parent.parent / "data"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    return code, capsys.readouterr().out


def test_words():
    assert parse_word("e") == () and parse_word("-") == ()
    assert parse_word("0110") == (0, 1, 1, 0)
    assert format_word(()) == "e" and format_word((1, 0)) == "10"
    with pytest.raises(ValueError):
        parse_word("012")


def test_tree_round_trip():
    sched = parse_tree((DATA / "pruned.tree").read_text())
    assert sched == {2: [(1,)], 5: [(0, 0)], 9: [(0, 1, 0)], 14: [(0, 1, 1, 1)]}
    assert parse_tree(format_tree(sched)) == sched


@pytest.mark.parametrize("text", ["stage x: reject 0", "stage 1: keep 0", "stage 1 reject 0", "stage 1: reject 2"])
def test_bad_tree(text):
    with pytest.raises(FormatError) as exc:
        parse_tree(text)
    assert exc.value.lineno == 1


def test_enumeration_file():
    enum = parse_enumeration((DATA / "cylinders.enum").read_text())
    q = StreamName.eventually_periodic((0, 1, 0), (0,), BINARY)
    assert [jump_approx(q, enum, n, 2) for n in range(5)] == [1, 1, 0, 0, 0]
    # 010 is only listed from stage 3
    assert jump_approx(q, enum, 4, 3) == 1


def test_d2_file_matches_oracle():
    f = parse_d2((DATA / "step.d2").read_text())
    assert f.oracle(Fraction(1, 2)) == 1 and f.oracle(Fraction(1, 4)) == 0


@pytest.mark.parametrize("text", [
    "interval [0,1] -> 0",
    "manifest: pw X=unit Y=unit\ninterval [0,1] -> 0",
    "manifest: d2 X=moon Y=unit\nidentity",
    "manifest: d2 X=unit Y=unit\ninterval [0,1 -> 0",
])
def test_bad_d2(text):
    with pytest.raises(FormatError):
        parse_d2(text)


def test_pw_file_pieces():
    g = parse_pw((DATA / "staircase.pw").read_text())
    assert g.piece(0) is not None
    # two families interleave after the listed piece
    labels = [g.piece(n).label for n in range(5)]
    assert len(set(labels)) == 5


def _prefix(lit, n):
    p = parse_point(lit)
    return p.space.cylinder_word(p.finest(n))


def test_point_literals():
    assert literal_value("3/10sd") == Fraction(3, 10)
    assert literal_value("01(10)b") == ((0, 1), (1, 0))
    assert literal_value("0,(1,2)n") == ((0,), (1, 2))
    assert _prefix("0110...b", 6) == (0, 1, 1, 0, 0, 0)
    assert _prefix("01(10)b", 6) == (0, 1, 1, 0, 1, 0)
    assert _prefix("0,(1,2)n", 5) == (0, 1, 2, 1, 2)
    b = parse_point("0.75sd").balls(8)[-1]
    assert abs(b.center - Fraction(3, 4)) <= b.radius


@pytest.mark.parametrize("text", ["2sd", "0.5", "012b", "x,yn", "1/0sd"])
def test_bad_point_literals(text):
    with pytest.raises(FormatError):
        parse_point(text)


def test_cli_wkl_full_tree(capsys):
    code, out = run(capsys, "wkl", "--tree", DATA / "full.tree", "--fuel", 1000)
    assert code == OK
    assert "0000000000" in out


def test_cli_wkl_pruned_tree(capsys):
    code, out = run(capsys, "wkl", "--tree", DATA / "pruned.tree", "--fuel", 1000)
    assert code == OK and "0110000000" in out


def test_cli_eval_d2_converges(capsys):
    code, out = run(capsys, "eval-d2", "--fn", DATA / "step.d2", "--point", "0.75sd", "--fuel", 100000)
    assert code == OK
    vals = [Fraction(line.split(": ")[1]) for line in out.splitlines() if line.startswith("approx")]
    assert len(vals) >= 10
    assert abs(vals[-1] - 1) <= Fraction(1, 2 ** (len(vals) - 1))


def test_cli_eval_pw(capsys):
    code, out = run(capsys, "eval-pw", "--fn", DATA / "step.pw", "--point", "0.3sd", "--fuel", 64)
    assert code == OK
    last = [line for line in out.splitlines() if line.startswith("approx")][-1]
    assert Fraction(last.split(": ")[1]) == step_oracle(Fraction(3, 10))


def test_cli_pw_to_d2_verdict(capsys):
    code, out = run(capsys, "pw-to-d2", "--fn", DATA / "step.pw", "--point", "0.75sd", "--open", "(1/2,3/2)",
                    "--fuel", 20)
    assert code == OK and "verdict: 1" in out
    code, out = run(capsys, "pw-to-d2", "--fn", DATA / "step.pw", "--point", "0.25sd", "--open", "(1/2,3/2)",
                    "--fuel", 20)
    assert code == OK and "verdict: 0" in out


def test_cli_ndtm_first_one(capsys):
    code, out = run(capsys, "ndtm", "--builtin", "first-one", "--input", "0001000", "--fuel", 30)
    assert code == OK
    assert "advice: 3" in out and "resets: 3" in out


def test_cli_run_copy(capsys):
    code, out = run(capsys, "run", "--machine", DATA / "copy.t2m", "--input", "0110", "--fuel", 10)
    assert code == OK and "output: 0110" in out


def test_cli_jump(capsys):
    code, out = run(capsys, "jump", "--point", "0110b", "--depth", 8, "--fuel", 10)
    # breadth-first cylinders: e, 0, 1, 00, 01, 10, 11, 000
    assert code == OK and out.strip() == "11001000"


def test_cli_check_l(capsys, tmp_path):
    ps = tmp_path / "ps.txt"
    ps.write_text("\n".join(["11001000"] * 6) + "\n")
    code, out = run(capsys, "check-l", "--point", "0110b", "--ps", ps, "--depth", 8)
    assert code == OK
    ps.write_text("\n".join(["00000000"] * 6) + "\n")
    code, out = run(capsys, "check-l", "--point", "0110b", "--ps", ps, "--depth", 8)
    assert code != OK


def test_cli_exhausted(capsys):
    code, _ = run(capsys, "eval-d2", "--fn", DATA / "step.d2", "--point", "0.75sd", "--fuel", 3, "--depth", 10)
    assert code == EXHAUSTED


@pytest.mark.parametrize("argv", [
    ["wkl", "--tree", "missing.tree"],
    ["eval-d2", "--fn", str(DATA / "step.pw"), "--point", "0.5sd"],
    ["eval-d2", "--fn", str(DATA / "step.d2"), "--point", "7sd"],
    ["no-such-command"],
    ["wkl"],
])
def test_cli_malformed(capsys, argv):
    assert main(argv) == MALFORMED


def test_cli_malformed_tree_file(capsys, tmp_path):
    bad = tmp_path / "bad.tree"
    bad.write_text("stage 1: reject 0\nstage two: reject 1\n")
    assert main(["wkl", "--tree", str(bad)]) == MALFORMED
    assert ":2" in capsys.readouterr().err


def test_cli_selftest(capsys):
    code, out = run(capsys, "selftest", "--probes", 100)
    assert code == OK
    assert "FAIL" not in out


def test_cli_output_is_deterministic():
    argv = [sys.executable, "-m", "jaynerogers.cli", "eval-pw", "--fn", str(DATA / "staircase.pw"),
            "--point", "0.5sd", "--fuel", 32, "--trace"]
    argv = [str(a) for a in argv]
    a = subprocess.run(argv, capture_output=True, text=True)
    b = subprocess.run(argv, capture_output=True, text=True)
    assert a.returncode == 0
    assert a.stdout == b.stdout and a.stdout
