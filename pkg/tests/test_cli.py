import json

import pytest
from click.testing import CliRunner

from casimirkit.cli import main
from casimirkit.fixtures import coords, fixture

NEGATIVE = {"variables": coords(3),
            "matrix": [["0", "z3", "z2"], ["-z3", "0", "z2"], ["-z2", "-z2", "0"]]}


@pytest.fixture()
def runner():
    return CliRunner()


def _write(tmp_path, data, name="problem.json"):
    p = tmp_path / name
    p.write_text(json.dumps(data) if not isinstance(data, str) else data)
    return str(p)


def _machine(runner, *args):
    res = runner.invoke(main, [*args, "--format", "machine"])
    return res, json.loads(res.output) if res.output.strip().startswith("{") else None


def test_verify_su3(runner):
    res, rep = _machine(runner, "verify", "--fixture", "su3")
    assert res.exit_code == 0
    assert rep["poisson"] and rep["schema_version"] == 1


def test_verify_negative_control(runner, tmp_path):
    res, rep = _machine(runner, "verify", _write(tmp_path, NEGATIVE))
    assert res.exit_code == 1
    assert rep["jacobi"]["witnesses"] == [{"triple": [1, 2, 3], "residual": "z3"}]


def test_malformed_expression(runner, tmp_path):
    bad = {"variables": coords(2), "matrix": [["0", "2*"], ["-z1", "0"]]}
    res = runner.invoke(main, ["verify", _write(tmp_path, bad)])
    assert res.exit_code == 2
    assert "position" in res.output


def test_malformed_json(runner, tmp_path):
    res = runner.invoke(main, ["verify", _write(tmp_path, "{not json")])
    assert res.exit_code == 2


def test_file_and_fixture_exclusive(runner, tmp_path):
    res = runner.invoke(main, ["verify", _write(tmp_path, NEGATIVE), "--fixture", "so3"])
    assert res.exit_code == 2


def test_two_structure_blocks_rejected(runner, tmp_path):
    data = dict(fixture("so3"), plank=[[0, 1, -1], [-1, 0, 1], [1, -1, 0]])
    res = runner.invoke(main, ["verify", _write(tmp_path, data)])
    assert res.exit_code == 2


def test_casimirs_so3(runner):
    res, rep = _machine(runner, "casimirs", "--fixture", "so3")
    assert res.exit_code == 0
    assert [c["expression"] for c in rep["casimirs"]] == ["z1^2 + z2^2 + z3^2"]
    assert rep["casimirs"][0]["verified"]


def test_casimirs_plank(runner):
    res, rep = _machine(runner, "casimirs", "--fixture", "plank3")
    assert res.exit_code == 0
    assert [c["expression"] for c in rep["casimirs"]] == ["log(z1) + log(z2) + log(z3)"]


def test_casimirs_su3(runner):
    res, rep = _machine(runner, "casimirs", "--fixture", "su3")
    assert res.exit_code == 0
    assert rep["rank"] == 6 and rep["casimir_count"] == 2
    assert all(c["verified"] for c in rep["casimirs"])
    assert rep["independence"]["jacobian_rank"] == [2, 2, 2]


def test_casimirs_inconclusive(runner):
    res, rep = _machine(runner, "casimirs", "--fixture", "su3", "--degree-bound", "1")
    assert res.exit_code == 3
    assert rep["inconclusive"] and rep["casimir_count"] == 1


def test_trace_casimirs(runner):
    res, rep = _machine(runner, "trace-casimirs", "--fixture", "su3")
    assert res.exit_code == 0
    text = json.dumps(rep)
    assert '"R1": "-2"' in text and '"R2": "-1/3"' in text


def test_kinetic_canonical(runner):
    res, rep = _machine(runner, "kinetic-check", "--fixture", "canonical_gas")
    assert res.exit_code == 0
    assert rep["convergence"]["passed"]


def test_kinetic_divergence_violation(runner, tmp_path):
    data = {"variables": coords(2),
            "kinetic": {"inner": {"lie_poisson": {"triples": [[2, 1, 2, 1]]}},
                        "domain": {"extent": [[-1, 1], [-1, 1]], "resolution": 16},
                        "boundary": "compact_support", "K": "f^2", "phi": "z1"}}
    res = runner.invoke(main, ["kinetic-check", _write(tmp_path, data)])
    assert res.exit_code == 1
    assert "c_i^{ik} = 0" in res.output


def test_human_format(runner):
    res = runner.invoke(main, ["casimirs", "--fixture", "so3"])
    assert res.exit_code == 0
    assert "z1^2 + z2^2 + z3^2" in res.output


def test_deterministic_machine_output(runner):
    for args in (["casimirs", "--fixture", "plank3", "--seed", "4"],
                 ["kinetic-check", "--fixture", "canonical_gas"]):
        a = runner.invoke(main, [*args, "--format", "machine"]).output
        b = runner.invoke(main, [*args, "--format", "machine"]).output
        assert a == b
