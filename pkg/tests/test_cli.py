import json
import subprocess
import sys

import pytest

from conftest import DATA
from planeram import __version__, cli, ramify
from planeram.errors import TheoremViolation

POWER2 = str(DATA / "power2.json")
CONFIG = str(DATA / "power2_config.json")


def ok(argv):
    code, report = cli.run(argv)
    assert code == 0, report
    return json.loads(cli.dumps(report))


def test_fiber_example():
    rep = ok(["fiber", "--map", POWER2, "--point", "1:0:0"])
    res = rep["results"]
    assert res["completely_ramified"] is True
    assert res["status"] == "true"
    assert res["rational_points"] == [{"point": "1:0:0", "local_degree": "4"}]


def test_bounds_example():
    rep = ok(["bounds", "--theorem2", "--N", "4"])
    t2 = rep["results"]["theorem2"]
    assert (t2["max"], t2["witness"], t2["sharper"]) == ("63", "6", "23")


def test_certify_example():
    res = ok(["certify", "--config", CONFIG])["results"]
    assert res["satisfied"] is True
    assert (res["N"], res["E_s"], res["bound"]) == ("3", "3", "35")


def test_report_shape():
    rep = ok(["example2", "--m", "3"])
    assert set(rep) == {"command", "inputs", "argv", "results", "timings", "seed", "version"}
    assert rep["version"] == __version__ and rep["seed"] == "0" and rep["timings"] == {}
    assert rep["results"] == {"m": "3", "verified": True}
    assert "total_seconds" in ok(["example2", "--m", "3", "--timings"])["timings"]


def _numbers_are_strings(obj):
    if isinstance(obj, dict):
        return all(_numbers_are_strings(v) for v in obj.values())
    if isinstance(obj, list):
        return all(_numbers_are_strings(v) for v in obj)
    return obj is None or isinstance(obj, (str, bool))


SMOKE = [
    ["validate", "--forms", "x^2", "y^2", "z^2"],
    ["ramification", "--map", POWER2, "--pushforward"],
    ["fiber", "--forms", "x^2", "y^2", "z^2 + x*y", "--point", "1:1:2"],
    ["crpoints", "--map", POWER2],
    ["pushmult", "--map", POWER2, "--point", "1:1:0"],
    ["prop1", "--map", POWER2, "--point", "0:0:1"],
    ["prop2-audit", "--map", POWER2, "--curve", "x", "--points", "0:1:0", "0:0:1"],
    ["hilbert", "--degree", "4", "--points", "1:0:0", "0:1:0", "--mult", "1:2:3@2"],
    ["config-check", "--points", "1:0:0", "0:1:0", "0:0:1"],
    ["ep-search", "--tau", "4", "--s", "3", "--points"] + [f"1:{k}:0" for k in range(10)],
    ["certify", "--config", CONFIG, "--realizable"],
    ["bounds", "--prop4", "--hurwitz", "2", "3", "--genus", "6", "3", "--prop2", "2", "2", "1",
     "--theorem1", "3", "--c-bound", "16", "4", "1", "--N", "3"],
    ["bounds", "--remark2"],
    ["example2", "--m", "5"],
    ["search", "--family", "power", "--degrees", "2", "3"],
]


@pytest.mark.parametrize("argv", SMOKE, ids=lambda a: a[0])
def test_every_subcommand_runs_and_replays(argv):
    rep = ok(argv)
    assert rep["command"] == argv[0]
    assert _numbers_are_strings(rep)
    # the echoed inputs reproduce the report exactly
    assert cli.replay(rep) == rep


def test_specific_results():
    assert ok(SMOKE[0])["results"]["valid"] is True
    res = ok(["validate", "--forms", "x^2", "y^2", "x*y"])["results"]
    assert res["valid"] is False and res["point"] == "0:0:1"
    crs = ok(SMOKE[3])["results"]["verified_points"]
    assert {p["point"] for p in crs} == {"1:0:0", "0:1:0", "0:0:1"}
    assert ok(SMOKE[4])["results"]["value"] == "2"
    # quartics through two points with a double point: 14 - 2 - 3
    assert ok(SMOKE[7])["results"]["dimension"] == "9"
    b = ok(SMOKE[11])["results"]
    assert b["prop4"]["max"] == "53" and b["genus"]["max"] == "5"
    assert b["c_bound"]["c_min"] == "16/61" and b["prop2"]["holds"] is True


def test_hilbert_dimension():
    res = ok(["hilbert", "--degree", "4", "--mult", "3:-1:7@2"])["results"]
    assert res["dimension"] == "11"
    res = ok(["hilbert", "--degree", "1", "--points", "1:0:0", "0:1:0", "0:0:1"])["results"]
    assert res["dimension"] == "-1"


def test_byte_stable(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    argv = ["ramification", "--map", POWER2, "--seed", "3"]
    assert cli.main(argv + ["--out", str(a)]) == 0
    assert cli.main(argv + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert json.loads(a.read_text())["seed"] == "3"


def test_search_job_file(tmp_path):
    job = tmp_path / "job.json"
    job.write_text(json.dumps({"family": "power", "degrees": ["2"], "seed": "5"}))
    rep = ok(["search", "--job", str(job)])
    assert rep["seed"] == "5" and rep["results"]["complete"] is True
    assert ok(["search", "--job", str(job), "--seed", "9"])["seed"] == "9"
    res = ok(["search", "--job", str(job), "--budget", "1000"])["results"]
    assert res["budget_exceeded"] is True and res["complete"] is False


@pytest.mark.parametrize("argv", [
    [],
    ["nonsense"],
    ["fiber", "--map", POWER2],
    ["fiber", "--map", POWER2, "--point", "0:0:0"],
    ["fiber", "--point", "1:0:0"],
    ["bounds"],
    ["example2", "--m", "4"],
    ["crpoints", "--map", POWER2, "--jobs", "0"],
    ["certify", "--config", "{not json"],
])
def test_usage_errors_exit_1(argv):
    code, report = cli.run(argv)
    assert code == 1
    assert report.get("class", "usage") == "usage"


def test_theorem_violation_exits_2(monkeypatch, capsys):
    def boom(*a, **k):
        raise TheoremViolation("planted")
    monkeypatch.setattr(ramify, "check_prop1", boom)
    assert cli.main(["prop1", "--map", POWER2, "--point", "1:0:0"]) == 2
    err = json.loads(capsys.readouterr().err)
    assert err["class"] == "theorem_violation"


def test_version_and_help():
    assert cli.main(["--version"]) == 0
    assert cli.main(["--help"]) == 0


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "planeram", "bounds", "--theorem2", "--N", "3"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["results"]["theorem2"]["max"] == "35"
