import json
import re

import pytest

from nbspectra.cli import EXIT_CAP, EXIT_CHECK, EXIT_OK, EXIT_USAGE, main, spectrum_svg


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_build_k4_from_file(tmp_path, capsys):
    f = tmp_path / "k4.g6"
    f.write_text("C~\n")
    code, out, _ = run(capsys, "build", "--in", str(f))
    doc = json.loads(out)
    assert code == EXIT_OK and doc["size"] == 12 and doc["arcs"] == 24
    assert doc["matrix_market"].startswith("%%MatrixMarket")


def test_build_petal_writes_json_and_mtx(tmp_path, capsys):
    out = tmp_path / "nb.json"
    code, _, _ = run(capsys, "build", "--gen", "petal:2,3", "--out", str(out))
    assert code == EXIT_OK
    assert json.loads(out.read_text())["size"] == 12
    assert (tmp_path / "nb.mtx").read_text().startswith("%%MatrixMarket")


def test_edge_list_input(tmp_path, capsys):
    f = tmp_path / "c4.txt"
    f.write_text("# square\n0 1\n1 2\n2 3\n3 0\n")
    code, out, _ = run(capsys, "build", "--in", str(f))
    assert code == EXIT_OK and json.loads(out)["arcs"] == 8


def test_missing_file(capsys):
    code, _, err = run(capsys, "build", "--in", "/nonexistent/g.g6")
    assert code == EXIT_USAGE and "cannot read" in err


def test_usage_errors(tmp_path, capsys):
    assert run(capsys, "build")[0] == EXIT_USAGE
    assert run(capsys, "build", "--gen", "complete:4", "--in", "x.g6")[0] == EXIT_USAGE
    assert run(capsys, "gap", "--gen", "complete:4", "--tol", "0.5")[0] == EXIT_USAGE
    assert run(capsys, "nosuch")[0] == EXIT_USAGE
    bad = tmp_path / "bad.g6"
    bad.write_text("C~~~\n")
    assert run(capsys, "build", "--in", str(bad))[0] == EXIT_USAGE


@pytest.mark.parametrize("gen", ["petal:2,3", "complete:4", "cycle:5", "wheel:6", "complete_bipartite:3,3"])
def test_verify_passes(capsys, gen):
    code, out, _ = run(capsys, "verify", "--gen", gen)
    doc = json.loads(out)
    assert code == EXIT_OK and doc["ok"]


def test_verify_reports_epsilon(capsys):
    doc = json.loads(run(capsys, "verify", "--gen", "petal:2,3")[1])
    assert doc["summary"]["epsilon"] == pytest.approx(3 ** (-1 / 3), abs=1e-10)
    doc = json.loads(run(capsys, "verify", "--gen", "complete:4")[1])
    assert doc["summary"]["epsilon"] == pytest.approx(0.5, abs=1e-10)
    doc = json.loads(run(capsys, "verify", "--gen", "cycle:5")[1])
    assert "cycle graph" in doc["summary"]["note"]


def test_spectrum_k4(capsys):
    code, out, _ = run(capsys, "spectrum", "--gen", "complete:4")
    doc = json.loads(out)
    assert code == EXIT_OK and doc["dim"] == 12 and len(doc["charpoly"]) == 13
    assert all(isinstance(c, str) for c in doc["charpoly"])
    code, out, _ = run(capsys, "spectrum", "--gen", "complete:4", "--operator", "adjacency")
    assert json.loads(out)["dim"] == 4
    assert run(capsys, "spectrum", "--gen", "complete:4", "--operator", "bogus")[0] == EXIT_USAGE


def test_gap_partite_independence(capsys):
    code, out, _ = run(capsys, "gap", "--gen", "wheel:6")
    assert code == EXIT_OK and json.loads(out)["max_k"] == 1
    code, out, _ = run(capsys, "partite", "--gen", "cycle:6")
    assert code == EXIT_OK and json.loads(out)["feasible_k"] == [1, 2, 3, 6]
    code, out, _ = run(capsys, "independence", "--gen", "complete:4", "--a", "0.5")
    doc = json.loads(out)
    assert code == EXIT_OK and doc["alpha_out"] == 4 and all(doc["inequalities"].values())


def test_fraction(capsys):
    doc = json.loads(run(capsys, "fraction", "2")[1])
    assert doc["fraction"] == "1/4" and doc["value"] == 0.25
    assert json.loads(run(capsys, "fraction", "3")[1])["fraction"] == "0"


def test_scan_cap(capsys):
    code, _, err = run(capsys, "scan", "--max-n", "8")
    assert code == EXIT_CAP and "allow" in err


def test_scan_small(capsys):
    code, out, _ = run(capsys, "scan", "--max-n", "6")
    assert code == EXIT_OK and out.splitlines()[1] == "<=6,76,0,2,0,0"


def test_independence_cap(capsys):
    assert run(capsys, "independence", "--gen", "complete:7")[0] == EXIT_CAP


def markers(svg):
    """(distinct markers, eigenvalues counted with multiplicity)"""
    mults = [int(m) for m in re.findall(r"\(x(\d+)\)</title>", svg)]
    return len(mults), sum(mults)


def test_plot(tmp_path, capsys):
    out = tmp_path / "c4.svg"
    assert run(capsys, "plot", "--gen", "cycle:4", "--out", str(out))[0] == EXIT_OK
    svg = out.read_text()
    assert svg.startswith("<svg") and markers(svg) == (4, 8)
    for z in ("0+0i", "1+1i", "1-1i", "2+0i"):
        assert f"<title>{z} (x2)</title>" in svg
    _, svg, _ = run(capsys, "plot", "--gen", "petal:2,3")
    assert markers(svg) == (9, 12)
    _, svg, _ = run(capsys, "plot", "--gen", "complete:4")
    assert markers(svg) == (5, 12)
    assert "<title>0.5+0i (x3)</title>" in svg and "1.25-0.661438i" in svg


def test_svg_multiplicity_labels():
    svg = spectrum_svg([(0j, 1), (1 + 0j, 3)])
    assert ">3</text>" in svg and svg.count("<text") == 1


@pytest.mark.parametrize("argv", [
    ["verify", "--gen", "petal:2,3"], ["spectrum", "--gen", "wheel:5"], ["plot", "--gen", "complete:4"],
    ["build", "--gen", "complete_bipartite:2,3"],
])
def test_deterministic(capsys, argv):
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]
