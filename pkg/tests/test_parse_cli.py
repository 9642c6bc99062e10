import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from vsa.cli import CommandConfig, main, run
from vsa.errors import ParseError
from vsa.fockspace import partitions
from vsa.parse import parse_expression, render
from vsa.rewrite import Expression, Monomial

modes = st.tuples(
    st.integers(1, 4).flatmap(lambda w: st.sampled_from(partitions(w))),
    st.integers(-9, 9),
)
keys = st.lists(modes, max_size=4).map(tuple)
coeffs = st.fractions(max_denominator=12).filter(lambda c: c != 0)
expressions = st.dictionaries(keys, coeffs, max_size=5).map(Expression)


def test_parse_examples():
    e = parse_expression("a_(-1) a_(-1) vac")
    assert e == Expression.of(Monomial.of([((1,), -1), ((1,), -1)]))
    e = parse_expression("3/2 [2,1]_(-4) vac - vac")
    assert e.terms == {(((2, 1), -4),): Fraction(3, 2), (): -1}
    assert parse_expression("- vac + [1,2]_(3)vac") == parse_expression("[2,1]_(3) vac - vac")


@pytest.mark.parametrize("text,position", [
    ("a_(-1", 5),
    ("a_(−1) vac", 3),
    ("[1,0]_(1) vac", 3),
    ("2/0 vac", 2),
    ("vac vac", 4),
    ("a vac", 2),
    ("", 0),
])
def test_parse_errors(text, position):
    with pytest.raises(ParseError) as info:
        parse_expression(text)
    assert info.value.position == position


@given(expressions)
def test_round_trip(e):
    assert parse_expression(render(e)) == e


def capture(**kwargs):
    out = io.StringIO()
    status = run(CommandConfig(output_format="json", **kwargs), out)
    return status, json.loads(out.getvalue())


def test_cli_matrix():
    status, obj = capture(subcommand="matrix", N=3, m=2)
    assert status == 0
    assert obj["S"] == [["1", "1", "1"], ["2", "1", "0"], ["1", "0", "0"]]
    assert obj["det"] == "-1" and obj["LSequalsP"]


def test_cli_coeffs():
    status, obj = capture(subcommand="coeffs", N=2, n="-5")
    assert (status, obj["coeffs"]) == (0, ["-4", "1"])
    status, obj = capture(subcommand="coeffs", N=3, n="-6:-3")
    assert [row["coeffs"] for row in obj["table"]][0] == ["10", "-4", "1"]


def test_cli_span_check():
    status, obj = capture(subcommand="span-check", N=2, weight=6)
    assert status == 0
    assert (obj["rank"], obj["dim"], obj["ok"]) == (11, 11, True)


def test_cli_straighten_and_trace():
    status, obj = capture(subcommand="straighten", N=2, expression="a_(-1) a_(-1) vac", trace=True)
    assert status == 0
    assert obj["output"] == "[1,1]_(-1) vac"
    assert obj["trace"]["steps"][0]["kind"] == "straightenPair"


def test_cli_failure_record():
    status, obj = capture(subcommand="straighten", N=2, expression="a_(-1")
    assert status != 0
    assert obj == {"ok": False, "command": "straighten", "error": "ParseError",
                   "message": "expected ')', found end of input at position 5", "position": 5}
    status, obj = capture(subcommand="gens", N=1, max_weight=15)
    assert status != 0 and obj["error"] == "DomainError"
    status, obj = capture(subcommand="coeffs", N=2, n="0")
    assert status != 0 and obj["error"] == "DomainError"


def test_cli_gens_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("VSA_CACHE_DIR", str(tmp_path))
    status, obj = capture(subcommand="gens", N=2, max_weight=5)
    assert status == 0 and obj["N"] == 2
    cached = tmp_path / "gens-N2-w5.json"
    assert json.loads(cached.read_text()) == obj
    explicit = tmp_path / "explicit.json"
    capture(subcommand="gens", N=3, max_weight=4, cache_path=str(explicit))
    assert json.loads(explicit.read_text())["N"] == 3


def test_cli_verify_suite_deterministic():
    outs = []
    for _ in range(2):
        buf = io.StringIO()
        assert run(CommandConfig(subcommand="verify", suite="rewrite", seed=3, output_format="json"), buf) == 0
        outs.append(buf.getvalue())
    assert outs[0] == outs[1]


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "vsa.cli", "coeffs", "--N", "2", "--n", "-5", "--format", "json"],
                          capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["coeffs"] == ["-4", "1"]
    assert main(["matrix", "--N", "1", "--m", "0"]) == 0
