import io
import json
from pathlib import Path

import pytest

from postsel import cli
from postsel.errors import BadParams, PostSelectionImpossible, UnknownScenario
from postsel.scenarios import registry
from postsel.scenarios.registry import Row, report_to_json, run_scenario, scenario_names

GOLDEN = Path(__file__).parent / "golden"


@pytest.mark.parametrize("name", scenario_names())
def test_every_scenario_passes_with_defaults(name):
    rep = run_scenario(name)
    failing = [r.label for r in rep.rows if not r.passed]
    assert rep.overall_pass, failing
    assert all(r.provenance in registry.PROVENANCE for r in rep.rows)


@pytest.mark.parametrize("name", scenario_names())
def test_reports_are_deterministic(name):
    assert report_to_json(run_scenario(name)) == report_to_json(run_scenario(name))


def test_hardy_matches_golden(tmp_path):
    out = tmp_path / "hardy.json"
    registry.export_report(run_scenario("hardy"), out)
    assert out.read_bytes() == (GOLDEN / "hardy.json").read_bytes()
    doc = json.loads(out.read_text())
    assert doc["overall_pass"] is True and len(doc["rows"]) == 6
    assert doc["rows"][-1]["computed"] == pytest.approx(1 / 12, abs=1e-10)


def test_json_schema_shape():
    doc = json.loads(report_to_json(run_scenario("generalized-tsv")))
    assert set(doc) == {"scenario", "params", "rows", "overall_pass"}
    for row in doc["rows"]:
        assert set(row) == {"label", "expected", "computed", "abs_error", "provenance", "pass"}
        for key in ("expected", "computed"):
            v = row[key]
            assert isinstance(v, (int, float)) or (isinstance(v, list) and len(v) == 2)


def test_complex_values_serialize_as_pairs():
    rep = registry.ScenarioReport("x", {}, (Row("z", 1j, 1j, "DERIVED"),))
    doc = json.loads(report_to_json(rep))
    assert doc["rows"][0]["computed"] == [0, 1]


def test_row_rejects_unknown_provenance():
    with pytest.raises(ValueError):
        Row("x", 0, 0, "GUESS")


@pytest.mark.parametrize("n", [3, 4, 6, 8])
def test_ghz_boxes_scales(n):
    assert run_scenario("ghz-boxes", {"n": n}).overall_pass


@pytest.mark.parametrize("n", range(2, 9))
def test_n_boxes_scales(n):
    assert run_scenario("n-boxes", {"n": n}).overall_pass


@pytest.mark.parametrize("n", range(3, 7))
@pytest.mark.parametrize("variant", ["same-box", "literal"])
def test_boson_energy_variants(n, variant):
    rep = run_scenario("boson-energy", {"n": n, "v": 2.5, "variant": variant})
    assert rep.overall_pass
    literal = next(r for r in rep.rows if "cross-box" in r.label)
    assert literal.computed == pytest.approx(2.5 * n * (n - 1) / 2, abs=1e-10)


def test_parameter_errors():
    with pytest.raises(UnknownScenario):
        run_scenario("nope")
    with pytest.raises(BadParams):
        run_scenario("hardy", {"n": 3})
    with pytest.raises(BadParams):
        run_scenario("ghz-boxes", {"n": 2.5})
    with pytest.raises(BadParams):
        run_scenario("ghz-boxes", {"n": 1})


# --- CLI -----------------------------------------------------------------------


def _run(*argv):
    buf = io.StringIO()
    code = cli.main(list(argv), buf)
    return code, buf.getvalue()


def test_cli_list():
    code, out = _run("list")
    assert code == 0
    for name in scenario_names():
        assert name in out


def test_cli_run_json_is_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert _run("run", "hardy", "--json", str(a))[0] == 0
    assert _run("run", "hardy", "--json", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes() == (GOLDEN / "hardy.json").read_bytes()


def test_cli_run_with_params():
    code, out = _run("run", "ghz-boxes", "--n", "5")
    assert code == 0 and "'n': 5" in out
    code, out = _run("run", "boson-energy", "--variant", "literal", "--v", "2")
    assert code == 0


def test_cli_usage_errors():
    assert _run("run", "nope")[0] == 2
    assert _run("run", "hardy", "--n", "3")[0] == 2
    assert _run("bogus")[0] == 2
    assert _run("wv", "hardy", "--obs", "sx[0")[0] == 2
    assert _run("wv", "hardy", "--obs", "sx[5]")[0] == 2
    assert _run("lhv", "--n", "2")[0] == 2
    assert _run("lhv", "--n", "13")[0] == 2
    assert _run("lhv", "--drop", "7")[0] == 2


def test_cli_exit_codes_for_failures(monkeypatch):
    # catalog inputs never trip these paths, so force them
    def boom(name, params=None):
        raise PostSelectionImpossible("forced")

    monkeypatch.setattr(registry, "run_scenario", boom)
    assert _run("run", "hardy")[0] == 3
    failing = registry.ScenarioReport("hardy", {}, (Row("x", 0.0, 1.0, "DERIVED"),))
    monkeypatch.setattr(registry, "run_scenario", lambda name, params=None: failing)
    code, out = _run("run", "hardy")
    assert code == 1 and "FAIL" in out


def test_cli_wv():
    code, out = _run("wv", "hardy", "--obs", "PB[0]*PB[1]")
    assert code == 0
    assert "weak value: -1" in out
    assert "certain outcome: none" in out
    code, out = _run("wv", "epr", "--obs", "sz[0]*sx[1]")
    assert "certain outcome: -1" in out
    code, out = _run("wv", "generalized-tsv", "--obs", "PA[0]*sx[1]")
    assert code == 0 and "weak value: 1" in out


def test_cli_lhv():
    code, out = _run("lhv", "--n", "3")
    assert code == 0
    assert "UNSAT" in out and "assignments checked: 64" in out
    assert "rhs product -1" in out
    code, out = _run("lhv", "--n", "4", "--drop", "0")
    assert "SAT" in out.split("\n")[3] and "witness:" in out
    assert "certificate: none" in out


def test_cli_sweep_csv(tmp_path):
    path = tmp_path / "sweep.csv"
    code, out = _run("sweep", "single-particle", "--obs", "PA[0]*sx[1]", "--g", "1e-3,1e-2,1e-1",
                     "--csv", str(path))
    assert code == 0
    raw = path.read_bytes()
    assert b"\r" not in raw
    lines = raw.decode().splitlines()
    assert lines[0] == "g_over_delta,mean_x_over_g,mean_p"
    assert len(lines) == 4
    vals = [float(line.split(",")[1]) for line in lines[1:]]
    assert abs(vals[1] + 1) <= 5e-3


def test_cli_pointer_csv(tmp_path):
    path = tmp_path / "phi.csv"
    code, out = _run("pointer", "single-particle", "--obs", "PA[0]*sx[1]", "--csv", str(path))
    assert code == 0 and "mean_x=" in out
    assert path.read_text().startswith("x,re_phi,im_phi,abs2_phi\n")
