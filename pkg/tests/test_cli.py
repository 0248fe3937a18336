import subprocess
import sys

import pytest

from conftest import NETS
from vaszero.cli import main, parse_buchi, parse_net
from vaszero.errors import ParseError, ValidationError
from vaszero.model import Vas, Vassz, Vasz


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, text, name="n.net"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_parse_one_counter_pair():
    net = parse_net((NETS / "even_at_test.net").read_text())
    assert net.kind == "vass0"
    assert isinstance(net.system, Vassz)
    assert net.system.dim == 1 and len(net.system.states) == 3
    assert isinstance(net.system.counters, Vasz)


def test_parse_omega_rules():
    net = parse_net("system vas\ndim 2\ninit 0,w\naction a 1,0\n")
    assert isinstance(net.system, Vas)
    with pytest.raises(ValidationError, match="line 4"):
        parse_net("system vas\ndim 2\ninit 0,0\naction a 1,w\n")


def test_parse_errors():
    with pytest.raises(ValidationError, match="duplicate zerotest"):
        parse_net("system vas0\ndim 1\ninit 0\nzerotest z 0\nzerotest y 0\n")
    with pytest.raises(ParseError, match="line 1"):
        parse_net("systen vas\n")
    with pytest.raises(ValidationError, match="undeclared state"):
        parse_net("system vass\ndim 1\nstates p\ninit p 0\naction a 1\ntrans p a q\n")
    with pytest.raises(ValidationError, match="dimension"):
        parse_net("system vas\ndim 2\ninit 0\n")
    with pytest.raises(ParseError):
        parse_buchi("alphabet a\n")


def test_cover(capsys):
    code, out, _ = run(capsys, "cover", NETS / "even_at_test.net")
    assert code == 0
    assert "0,0,0,1" in out.splitlines()
    assert out.startswith("basis 3\n")


def test_bounded(capsys):
    assert run(capsys, "bounded", NETS / "even_at_test.net", "--place", 1)[:2] == (0, "UNBOUNDED\n")
    code, out, _ = run(capsys, "bounded", NETS / "parity.net")
    assert (code, out) == (0, "place 1: UNBOUNDED\n")


def test_reach(capsys):
    assert run(capsys, "reach", NETS / "parity.net", "--target", 3, "--budget", 10)[:2] == (0, "NO\n")
    code, out, _ = run(capsys, "reach", NETS / "parity.net", "--target", 4)
    assert (code, out) == (0, "YES\nwitness: a a\n")
    code, out, _ = run(capsys, "reach", NETS / "even_at_test.net", "--target", 0, "--state", "r")
    assert (code, out) == (0, "YES\nwitness: move z\n")
    code, out, _ = run(capsys, "reach", NETS / "parity.net", "--target", 0)
    assert (code, out) == (0, "YES\nwitness: (empty)\n")


def test_limit_and_filters(capsys):
    code, out, _ = run(capsys, "lim-member", NETS / "parity.net", "--vector", "w")
    assert code == 0 and out == "YES\nwitness: [a]\n"
    assert run(capsys, "member-refined", NETS / "parity.net", "--positions", "1", "--vector", 3)[1] == "NO\n"
    out = run(capsys, "member-refined", NETS / "parity.net", "--positions", "-", "--vector", 3)[1]
    # the witness is a run of the refined system, which may use its decrement actions
    assert out == "YES\nwitness: a a b#vasP.1\n"
    assert run(capsys, "filtered-cover", NETS / "parity.net", "--filter", "w")[1] == "basis 1\nw\n"


def test_repeated_and_mc(capsys):
    code, out, _ = run(capsys, "repeated", NETS / "loop_buchi.net", "--state", "r")
    assert code == 0 and out.startswith("YES\nwitness: ")
    code, out, _ = run(capsys, "mc", NETS / "loop_buchi.net", "--buchi", NETS / "inf_test.buchi")
    assert (code, out) == (0, "HOLDS\n")
    code, out, _ = run(capsys, "mc", NETS / "loop_buchi.net", "--buchi", NETS / "eventually_always_tick.buchi")
    assert code == 0 and out.startswith("VIOLATED\n")


def test_unknown_exits_two(capsys):
    code, out, _ = run(capsys, "cover", NETS / "even_at_test.net", "--budget", 2)
    assert (code, out) == (2, "UNKNOWN\n")


def test_dump_tree(capsys, tmp_path):
    dump = tmp_path / "tree.txt"
    code, _, _ = run(capsys, "km", NETS / "parity.net", "--dump-tree", dump)
    assert code == 0 and dump.read_text().strip()


@pytest.mark.parametrize("argv", [
    ["km", NETS / "even_at_test.net"],
    ["reach", NETS / "even_at_test.net", "--target", "0"],
    ["reach", NETS / "parity.net", "--target", "1,2"],
    ["bounded", NETS / "parity.net", "--place", "3"],
    ["cover", NETS / "missing.net"],
    ["cover", NETS / "parity.net", "--budget", "0"],
    ["frobnicate", NETS / "parity.net"],
    ["repeated", NETS / "loop_buchi.net", "--state", "nowhere"],
])
def test_errors_exit_one_with_prefix(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 1 and out == ""
    lines = err.strip().splitlines()
    assert len(lines) == 1 and lines[0].startswith("error:")


def test_parse_error_reports_position(capsys, tmp_path):
    p = write(tmp_path, "system vas0\ndim 1\ninit 0\nzerotest z 0\nzerotest y 0\n")
    code, _, err = run(capsys, "cover", p)
    assert code == 1 and "line 5" in err


def test_budget_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("VASZERO_BUDGET", "2")
    assert run(capsys, "cover", NETS / "even_at_test.net")[0] == 2
    # the flag wins over the environment
    assert run(capsys, "cover", NETS / "even_at_test.net", "--budget", 100_000)[0] == 0
    monkeypatch.setenv("VASZERO_BUDGET", "lots")
    assert run(capsys, "cover", NETS / "even_at_test.net")[0] == 1


def test_output_is_deterministic():
    cmd = [sys.executable, "-m", "vaszero.cli", "lim-member", str(NETS / "parity.net"), "--vector", "w"]
    outs = {subprocess.run(cmd, capture_output=True, check=True).stdout for _ in range(3)}
    assert len(outs) == 1
    cmd = [sys.executable, "-m", "vaszero.cli", "cover", str(NETS / "drain_first.net")]
    outs = {subprocess.run(cmd, capture_output=True, check=True).stdout for _ in range(2)}
    assert len(outs) == 1
