import json

import pytest

from tfloc.cli import run


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_spectrum_csv(capsys):
    code, out, _ = call(capsys, "spectrum", "--c", "2,4")
    assert code == 0
    lines = [l for l in out.splitlines() if not l.startswith("#")]
    assert lines[0] == "param,index,value,trusted"
    headers = [json.loads(l[2:]) for l in out.splitlines() if l.startswith("#")]
    assert [h["descriptor"]["c"] for h in headers] == [2.0, 4.0]
    total = sum(float(l.split(",")[2]) for l in lines[1:] if l.startswith("2.0,"))
    assert total == pytest.approx(2.0, rel=1e-9)


@pytest.mark.parametrize("kind", ["ir", "jr"])
def test_spectrum_singular_values(capsys, kind):
    code, out, _ = call(capsys, "spectrum", "--kind", kind, "--r", "2")
    assert code == 0
    rows = [l for l in out.splitlines() if not l.startswith("#")][1:]
    vals = [float(l.split(",")[2]) for l in rows]
    assert vals and all(0 <= v <= 1 + 1e-12 for v in vals)


def test_counting_and_exit_on_floor(capsys):
    code, out, _ = call(capsys, "counting", "--c", "5", "--eps", "0.1,0.01", "--d", "2")
    assert code == 0 and len(out.splitlines()) == 3
    code, _, err = call(capsys, "counting", "--c", "5", "--eps", "1e-15")
    assert code == 1 and "numeric failure" in err


def test_bounds_check_passes(capsys):
    code, out, _ = call(capsys, "bounds-check", "--c", "5,10", "--eps", "0.1,0.001", "--r", "1,2")
    assert code == 0
    assert all(l.endswith(",1") for l in out.splitlines()[1:])


def test_trace_json(capsys):
    code, out, _ = call(capsys, "trace", "--c", "10", "--f", "entropy", "--format", "json")
    assert code == 0
    data = json.loads(out)
    rows = data if isinstance(data, list) else [data]
    assert rows[0]["trace"] > 0


def test_trs2_all_methods_agree(capsys):
    code, out, _ = call(capsys, "trs2", "--c", "3", "--method", "all", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["max_gap"] < 1e-6


def test_trs2_failure_exit(capsys):
    code, _, err = call(capsys, "trs2", "--c", "3", "--method", "all", "--tol", "0")
    assert code == 1


def test_trs2_union_files(capsys, tmp_path):
    a = tmp_path / "a.txt"
    a.write_text("0,1\n2,3\n")
    b = tmp_path / "b.txt"
    b.write_text("0,1\n")
    code, out, _ = call(capsys, "trs2", "--A", str(a), "--B", str(b), "--method", "w-integral", "--format", "json")
    assert code == 0
    assert 0 < json.loads(out)["value"] <= 2


def test_whitney_and_minkowski(capsys):
    code, out, _ = call(capsys, "whitney", "--region", "L", "--D", "4")
    assert code == 0 and out.startswith("level,")
    code, out, _ = call(capsys, "minkowski", "--region", "disk", "--radii", "0.0625")
    assert code == 0
    r, content = out.splitlines()[1].split(",")
    assert float(content) == pytest.approx(6.283, rel=0.05)


def test_usage_errors(capsys):
    assert call(capsys, "bogus")[0] == 2
    assert call(capsys, "spectrum", "--c", "-1")[0] == 2
    assert call(capsys, "spectrum", "--c", "x")[0] == 2
    assert call(capsys, "counting", "--c", "5")[0] == 2  # missing --eps
    assert call(capsys, "spectrum", "--c", "1", "--jobs", "0")[0] == 2


def test_config_file(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# defaults\nc = 5\neps = 0.1\n")
    code, out, _ = call(capsys, "--config", str(cfg), "counting")
    assert code == 0 and out.splitlines()[1].startswith("5.0,1,0.1,")
    code, out2, _ = call(capsys, "--config", str(cfg), "counting", "--eps", "0.2")
    assert ",0.2," in out2.splitlines()[1]


def test_config_errors(capsys, tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("nonsense = 1\n")
    assert call(capsys, "--config", str(cfg), "counting")[0] == 2
    cfg.write_text("no equals sign\n")
    assert call(capsys, "--config", str(cfg), "counting")[0] == 2
    assert call(capsys, "--config", str(tmp_path / "missing.cfg"), "counting")[0] == 2


def test_reruns_are_byte_identical(capsys):
    argv = ("trace", "--c", "5,10,20", "--f", "entropy")
    assert call(capsys, *argv)[1] == call(capsys, *argv)[1]


def test_jobs_preserve_order(capsys):
    argv = ["spectrum", "--c", "8,2,5,3"]
    serial = call(capsys, *argv)[1]
    parallel = call(capsys, *argv, "--jobs", "4")[1]
    assert serial == parallel


def test_output_file(capsys, tmp_path):
    path = tmp_path / "out.csv"
    code, out, _ = call(capsys, "spectrum", "--c", "2", "--output", str(path))
    assert code == 0 and out == ""
    assert path.read_text().splitlines()[-1].startswith("2.0,")


def test_verify_all_subset(capsys):
    code, out, err = call(capsys, "verify-all", "--only", "1,2")
    assert code == 0
    rows = out.splitlines()[1:]
    assert [r.split(",")[0] for r in rows] == ["1", "2"]
    assert "s" in err  # timings go to stderr only
    assert call(capsys, "verify-all", "--only", "99")[0] == 2


def test_trs2_union_csv(capsys, tmp_path):
    a = tmp_path / "a.txt"
    a.write_text("0,2\n")
    code, out, _ = call(capsys, "trs2", "--A", str(a), "--B", str(a))
    assert code == 0
    assert out.splitlines()[0] == "method,value,error_bound"
    from tfloc.trace_squared import trs2_interval_explicit

    # dilation invariance: [0,2] x [0,2] has the spectrum of [0,4] x [0,1]
    assert float(out.splitlines()[1].split(",")[1]) == pytest.approx(trs2_interval_explicit(4.0), abs=1e-10)
