import json

import numpy as np
import pytest

from pencilrange import cli
from pencilrange.matrixio import (dump_report, load_matrix,
                                  parse_matrix_document, vector_from_json)


def write_matrix(path, M):
    M = np.asarray(M, dtype=complex)
    doc = {"n": M.shape[0],
           "entries": [[[z.real, z.imag] for z in row] for row in M]}
    path.write_text(json.dumps(doc))
    return str(path)


@pytest.fixture
def ex2x2(tmp_path):
    a = write_matrix(tmp_path / "A.json", [[0, 0], [2, 0]])
    b = write_matrix(tmp_path / "B.json", np.diag([1.0, -1.0]))
    return a, b


@pytest.fixture
def indefinite_pair(tmp_path):
    a = write_matrix(tmp_path / "Af.json", np.diag([1.0, -1.0]))
    b = write_matrix(tmp_path / "Bf.json", np.diag([2.0, -1.0]))
    return a, b


def strip_wall_time(text):
    return "\n".join(l for l in text.splitlines() if "wall_time_s" not in l)


class TestMatrixParsing:
    def test_pairs_and_bare_numbers(self):
        M = parse_matrix_document({"n": 2, "entries": [[[1, 2], 3], [0, [0, -1]]]})
        assert np.allclose(M, [[1 + 2j, 3], [0, -1j]])

    def test_diag_shorthand(self):
        M = parse_matrix_document({"diag": [[1, 0], [0, 1], 2]})
        assert np.allclose(M, np.diag([1.0, 1j, 2.0]))

    def test_bad_shape_rejected(self):
        from pencilrange.errors import InvalidInput
        with pytest.raises(InvalidInput):
            parse_matrix_document({"n": 2, "entries": [[1, 2, 3], [4, 5, 6]]})

    def test_load_digest(self, tmp_path):
        p = write_matrix(tmp_path / "m.json", np.eye(2))
        M, prov = load_matrix(p)
        assert prov["n"] == 2 and len(prov["sha256"]) == 64


class TestPencilAnalyze:
    def test_full_plane_report(self, ex2x2, tmp_path, capsys):
        out = tmp_path / "rep.json"
        code = cli.main(["pencil-analyze", *ex2x2, "--out", str(out)])
        assert code == 0
        rep = json.loads(out.read_text())
        assert rep["status"] == "full_plane"
        assert rep["certificate"]["status"] == "in_hull"
        assert rep["excluded_point"] is None

    def test_minus_convention_descriptor(self, indefinite_pair, tmp_path):
        out = tmp_path / "rep.json"
        code = cli.main(["pencil-analyze", *indefinite_pair,
                         "--convention", "minus", "--out", str(out)])
        assert code == 0
        rep = json.loads(out.read_text())
        assert rep["status"] == "not_full_plane"
        assert rep["descriptor_text"] == "R \\ (1, 2)"
        assert rep["descriptor"]["alpha"] == pytest.approx(1.0, abs=1e-9)
        assert rep["descriptor"]["beta"] == pytest.approx(2.0, abs=1e-9)
        lam = complex(*rep["excluded_point"])
        assert abs(lam.imag) > 0 or lam.real != 0  # concrete non-member

    def test_identity_pair_point_descriptor(self, tmp_path):
        a = write_matrix(tmp_path / "I1.json", np.eye(2))
        b = write_matrix(tmp_path / "I2.json", np.eye(2))
        out = tmp_path / "rep.json"
        assert cli.main(["pencil-analyze", a, b, "--out", str(out)]) == 0
        rep = json.loads(out.read_text())
        assert rep["descriptor"]["kind"] == "point"
        assert rep["descriptor"]["alpha"] == pytest.approx(-1.0, abs=1e-9)

    def test_parse_error_exit_code(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        ok = write_matrix(tmp_path / "ok.json", np.eye(2))
        assert cli.main(["pencil-analyze", str(bad), ok]) == 2

    def test_dimension_mismatch_exit_code(self, tmp_path):
        a = write_matrix(tmp_path / "a2.json", np.eye(2))
        b = write_matrix(tmp_path / "b3.json", np.eye(3))
        assert cli.main(["pencil-analyze", a, b]) == 2

    def test_determinism(self, ex2x2, tmp_path):
        r1, r2 = tmp_path / "r1.json", tmp_path / "r2.json"
        assert cli.main(["pencil-analyze", *ex2x2, "--out", str(r1)]) == 0
        assert cli.main(["pencil-analyze", *ex2x2, "--out", str(r2)]) == 0
        assert strip_wall_time(r1.read_text()) == strip_wall_time(r2.read_text())


class TestIsotropic:
    def test_hermitian_exact_none(self, indefinite_pair, tmp_path):
        out = tmp_path / "rep.json"
        assert cli.main(["isotropic", *indefinite_pair, "--out", str(out)]) == 0
        rep = json.loads(out.read_text())
        assert rep["status"] == "none"
        assert rep["certified_nonexistence"] is True
        assert rep["method"] == "hermitian-exact"

    def test_hermitian_exact_found(self, tmp_path):
        a = write_matrix(tmp_path / "a.json", np.diag([1.0, -1.0]))
        b = write_matrix(tmp_path / "b.json", np.diag([1.0, -1.0]))
        out = tmp_path / "rep.json"
        assert cli.main(["isotropic", a, b, "--out", str(out)]) == 0
        rep = json.loads(out.read_text())
        assert rep["status"] == "found"
        v = vector_from_json(rep["witness"])
        assert abs(np.vdot(v, np.diag([1.0, -1.0]) @ v)) < 1e-8

    def test_optimizer_not_found_is_flagged(self, ex2x2, tmp_path):
        out = tmp_path / "rep.json"
        assert cli.main(["isotropic", *ex2x2, "--out", str(out)]) == 0
        rep = json.loads(out.read_text())
        assert rep["status"] == "not_found"
        assert rep["certified_nonexistence"] is False
        assert "does not prove" in rep["note"]

    def test_dissipative_route(self, tmp_path):
        A = np.array([[0, 1, 0], [-1, 0, 0], [0, 0, 0]], dtype=complex)
        B = np.array([[0, 1j, 0], [1j, 0, 0], [0, 0, 0]], dtype=complex)
        a = write_matrix(tmp_path / "a.json", A)
        b = write_matrix(tmp_path / "b.json", B)
        out = tmp_path / "rep.json"
        assert cli.main(["isotropic", a, b, "--out", str(out)]) == 0
        rep = json.loads(out.read_text())
        assert rep["status"] == "found"
        assert rep["method"] == "dissipative"

    def test_dissipative_not_full_plane_certifies_none(self, tmp_path):
        rng = np.random.default_rng(0)
        J = rng.normal(size=(3, 3))
        J = J - J.T  # skew part keeps the pencil non-Hermitian
        a = write_matrix(tmp_path / "a.json", np.eye(3) + J)
        G = rng.normal(size=(3, 3))
        b = write_matrix(tmp_path / "b.json", G @ G.T)
        out = tmp_path / "rep.json"
        assert cli.main(["isotropic", a, b, "--out", str(out)]) == 0
        rep = json.loads(out.read_text())
        assert rep["status"] == "none"
        assert rep["certified_nonexistence"] is True
        assert rep["certificate"]["status"] == "not_in_hull"


class TestVerify:
    def test_round_trip_all_report_kinds(self, ex2x2, indefinite_pair, tmp_path):
        reports = []
        r = tmp_path / "r1.json"
        cli.main(["pencil-analyze", *ex2x2, "--out", str(r)])
        reports.append(r)
        r = tmp_path / "r2.json"
        cli.main(["pencil-analyze", *indefinite_pair, "--convention", "minus",
                  "--out", str(r)])
        reports.append(r)
        r = tmp_path / "r3.json"
        cli.main(["isotropic", *indefinite_pair, "--out", str(r)])
        reports.append(r)
        for rep in reports:
            assert cli.main(["--verify", str(rep)]) == 0

    def test_tampered_witness_fails(self, tmp_path):
        a = write_matrix(tmp_path / "a.json", np.diag([1.0, -1.0]))
        b = write_matrix(tmp_path / "b.json", np.diag([1.0, -1.0]))
        out = tmp_path / "rep.json"
        cli.main(["isotropic", a, b, "--out", str(out)])
        rep = json.loads(out.read_text())
        rep["witness"] = [[1.0, 0.0], [0.0, 0.0]]  # e1 is not isotropic here
        out.write_text(dump_report(rep))
        assert cli.main(["--verify", str(out)]) == 4

    def test_changed_input_fails(self, indefinite_pair, tmp_path):
        a, b = indefinite_pair
        out = tmp_path / "rep.json"
        cli.main(["isotropic", a, b, "--out", str(out)])
        write_matrix(tmp_path / "Af.json", np.diag([3.0, -1.0]))
        assert cli.main(["--verify", str(out)]) == 2


class TestBoundaryCsv:
    def test_segment(self, tmp_path):
        m = write_matrix(tmp_path / "m.json", np.diag([1.0, 2.0]))
        out = tmp_path / "b.csv"
        assert cli.main(["boundary", m, "--angles", "90", "--out", str(out),
                         "--no-plot"]) == 0
        rows = np.loadtxt(out, delimiter=",", skiprows=1)
        assert rows.shape == (90, 3)
        assert np.all(np.abs(rows[:, 2]) < 1e-12)
        assert rows[:, 1].min() >= 1 - 1e-9 and rows[:, 1].max() <= 2 + 1e-9

    def test_triangle_corners_present(self, tmp_path):
        m = write_matrix(tmp_path / "m.json", np.diag([1.0, 1j, -1.0]))
        out = tmp_path / "b.csv"
        assert cli.main(["boundary", m, "--angles", "360", "--out", str(out),
                         "--no-plot"]) == 0
        rows = np.loadtxt(out, delimiter=",", skiprows=1)
        pts = rows[:, 1] + 1j * rows[:, 2]
        for corner in (1.0, 1j, -1.0):
            assert np.min(np.abs(pts - corner)) < 1e-3

    def test_unit_circle(self, tmp_path):
        m = write_matrix(tmp_path / "m.json", [[0, 0], [2, 0]])
        out = tmp_path / "b.csv"
        assert cli.main(["boundary", m, "--angles", "128", "--out", str(out),
                         "--no-plot"]) == 0
        rows = np.loadtxt(out, delimiter=",", skiprows=1)
        radii = np.hypot(rows[:, 1], rows[:, 2])
        assert np.max(np.abs(radii - 1.0)) < 1e-6

    def test_figure_rendered(self, tmp_path):
        m = write_matrix(tmp_path / "m.json", np.diag([1.0, 2.0]))
        out = tmp_path / "b.csv"
        assert cli.main(["boundary", m, "--angles", "16", "--out", str(out)]) == 0
        assert (tmp_path / "b.png").exists()


class TestRasterCsv:
    def test_real_axis_gap(self, tmp_path):
        # degree-1 polynomial of the indefinite pair: lambda*A - B
        a0 = write_matrix(tmp_path / "a0.json", -np.diag([2.0, -1.0]))
        a1 = write_matrix(tmp_path / "a1.json", np.diag([1.0, -1.0]))
        out = tmp_path / "r.csv"
        assert cli.main(["raster", a0, a1, "--window=-1,4,0,1",
                         "--res", "51,2", "--out", str(out), "--no-plot"]) == 0
        rows = np.loadtxt(out, delimiter=",", skiprows=1)
        on_axis = rows[np.abs(rows[:, 1]) < 1e-12]
        for re, _, inside in on_axis:
            expected = not (1 + 1e-9 < re < 2 - 1e-9)
            assert bool(inside) == expected

    def test_window_parse_error(self, tmp_path):
        a0 = write_matrix(tmp_path / "a0.json", np.eye(2))
        assert cli.main(["raster", a0, "--window", "1,2", "--out",
                         str(tmp_path / "x.csv")]) == 2

    def test_figure_rendered(self, tmp_path):
        a0 = write_matrix(tmp_path / "a0.json", np.eye(2))
        a1 = write_matrix(tmp_path / "a1.json", np.zeros((2, 2)))
        a2 = write_matrix(tmp_path / "a2.json", np.eye(2))
        out = tmp_path / "r.csv"
        assert cli.main(["raster", a0, a1, a2, "--window=-2,2,-2,2",
                         "--res", "11,11", "--out", str(out)]) == 0
        assert (tmp_path / "r.png").exists()
