import json
import subprocess
import sys
from pathlib import Path

import pytest

from giant_anatomy import stats
from giant_anatomy.cli import run
from giant_anatomy.graph import write_edgelist

from conftest import theta_graph

GOLDEN = Path(__file__).parent / "golden"


def test_sample_matches_golden(tmp_path):
    out = tmp_path / "g.txt"
    assert run(["sample", "--model", "contiguous", "--n", "1000", "--lambda", "2",
                "--seed", "7", "--output", str(out)]) == 0
    assert out.read_bytes() == (GOLDEN / "contiguous_n1000_l2_s7.txt").read_bytes()
    assert (tmp_path / "g.txt.anatomy.json").read_bytes() == \
        (GOLDEN / "contiguous_n1000_l2_s7.txt.anatomy.json").read_bytes()


def test_sample_twice_identical(tmp_path):
    outs = []
    for k in range(2):
        p = tmp_path / f"s{k}.txt"
        run(["sample", "--n", "3000", "--lambda", "2", "--seed", "11", "--simple", "--output", str(p)])
        outs.append((p.read_bytes(), Path(str(p) + ".anatomy.json").read_bytes()))
    assert outs[0] == outs[1]


@pytest.mark.parametrize("model", ["contiguous", "direct"])
def test_anatomy_round_trip(tmp_path, capsys, model):
    p = tmp_path / "g.txt"
    run(["sample", "--model", model, "--n", "4000", "--lambda", "2", "--seed", "3", "--output", str(p)])
    capsys.readouterr()
    assert run(["anatomy", str(p)]) == 0
    got = json.loads(capsys.readouterr().out)
    assert got == json.loads(Path(str(p) + ".anatomy.json").read_text())


def test_anatomy_theta(tmp_path, capsys):
    p = tmp_path / "theta.txt"
    with open(p, "w") as fh:
        write_edgelist(theta_graph(), fh)
    assert run(["anatomy", str(p)]) == 0
    got = json.loads(capsys.readouterr().out)
    assert got["kernel_size"] == 2 and got["kernel_edges"] == 3
    assert run(["anatomy", str(p), "--format", "csv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == ",".join(stats.CSV_HEADER)


def test_cola_csv(capsys):
    assert run(["cola", "--n", "500", "--lambda", "2", "--reps", "5", "--seed", "1"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "run,tau" and len(lines) == 6
    assert all(0 <= float(l.split(",")[1]) <= 2 for l in lines[1:])


def test_theory_command(tmp_path, capsys):
    ds = tmp_path / "d.csv"
    code = run(["theory", "--n", "20000", "--lambda", "2", "--reps", "30", "--seed", "4",
                "--dataset", str(ds)])
    report = json.loads(capsys.readouterr().out)
    assert code == (0 if report["verdict"] == "pass" else 1)
    assert report["schema_version"] == stats.SCHEMA_VERSION
    assert len(stats.read_csv(open(ds))) == 30


def test_compare_exit_codes(capsys):
    assert run(["compare", "--n", "20000", "--lambda", "2", "--reps", "60", "--seed", "1",
                "--against", "direct", "--lambda-b", "2.5"]) == 1
    report = json.loads(capsys.readouterr().out)
    assert report["verdict"] == "fail"
    assert {r["metric"] for r in report["metrics"]} == set(stats.THEOREM_METRICS)


@pytest.mark.parametrize("argv", [
    ["sample", "--model", "cloning", "--simple"],
    ["sample", "--lambda", "1.0"],
    ["sample", "--n", "5"],
    ["theory", "--reps", "0"],
    ["compare", "--reps", "10"],
    ["bogus"],
])
def test_usage_errors(argv):
    with pytest.raises(SystemExit) as exc:
        run(argv)
    assert exc.value.code == 2


def test_module_entry_point(tmp_path):
    out = subprocess.run([sys.executable, "-m", "giant_anatomy", "sample", "--n", "200",
                          "--seed", "1"], capture_output=True, text=True, check=True)
    first = out.stdout.splitlines()[0].split()
    assert len(first) == 2 and int(first[0]) <= int(first[1])
