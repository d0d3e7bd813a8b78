import json

import numpy as np
import pytest

from eqwsums import epsilon_closed, epsilon_exact
from eqwsums.cli import main


@pytest.fixture(autouse=True)
def clean_cap(monkeypatch):
    monkeypatch.delenv("EQW_MAX_N", raising=False)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write_doc(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


class TestEps:
    def test_document(self, capsys):
        code, out, err = run(capsys, "eps", "--n", "10")
        assert code == 0 and err == ""
        doc = json.loads(out)
        assert doc["command"] == "eps"
        assert doc["n"] == 10
        assert doc["exact"] == pytest.approx(epsilon_exact(10), rel=1e-15)
        assert doc["closed"] == pytest.approx(epsilon_closed(10), rel=1e-15)

    def test_n_below_two_fails(self, capsys):
        code, out, err = run(capsys, "eps", "--n", "1")
        assert code == 1
        assert "error:" in err

    def test_output_file(self, capsys, tmp_path):
        target = tmp_path / "eps.json"
        code, out, _ = run(capsys, "eps", "--n", "5", "--output", str(target))
        assert code == 0 and out == ""
        assert json.loads(target.read_text())["n"] == 5


class TestChebNodes:
    def test_two_point_document(self, capsys):
        code, out, err = run(capsys, "cheb-nodes", "--n", "2")
        assert code == 0
        doc = json.loads(out)
        assert doc["command"] == "cheb-nodes"
        assert doc["variant"] == "standard"
        assert doc["is_real"] is True
        assert doc["weight"] == pytest.approx(1.0)
        nodes = sorted(re for re, im in doc["nodes"])
        assert nodes == pytest.approx([-0.5773502691896257, 0.5773502691896257])

    def test_csv_export(self, capsys, tmp_path):
        target = tmp_path / "nodes.csv"
        code, out, _ = run(capsys, "cheb-nodes", "--n", "3", "--csv", str(target))
        assert code == 0
        lines = target.read_text().splitlines()
        assert lines[0] == "k,re,im,abs"
        assert len(lines) == 4

    def test_bad_variant_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["cheb-nodes", "--n", "3", "--variant", "mirrored"])
        assert info.value.code == 1

    def test_shifted_variant(self, capsys):
        code, out, _ = run(capsys, "cheb-nodes", "--n", "1", "--variant", "shifted")
        assert code == 0
        doc = json.loads(out)
        assert doc["nodes"] == [[0.5, 0.0]]
        assert doc["weight"] == pytest.approx(1.0)


class TestQuadrature:
    def test_polynomial_kernel_exact(self, capsys):
        code, out, _ = run(
            capsys, "quadrature", "--n", "3", "--kernel", "poly:0,0,1", "--x", "1"
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["interval"] == [-1.0, 1.0]
        assert doc["value"][0] == pytest.approx(2.0 / 3.0, abs=1e-10)
        assert abs(doc["value"][1]) < 1e-12

    def test_exponential_shifted(self, capsys):
        code, out, _ = run(
            capsys, "quadrature", "--n", "6", "--variant", "shifted",
            "--kernel", "exp", "--x", "1",
        )
        doc = json.loads(out)
        assert doc["interval"] == [0.0, 1.0]
        assert doc["value"][0] == pytest.approx(np.e - 1, abs=1e-6)

    def test_geometric_kernel(self, capsys):
        code, out, _ = run(
            capsys, "quadrature", "--n", "4", "--kernel", "geometric", "--x", "0.5"
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["value"][0] == pytest.approx(np.log(0.5 / 1.5), abs=1e-3)

    def test_unknown_kernel(self, capsys):
        code, out, err = run(
            capsys, "quadrature", "--n", "3", "--kernel", "tanh", "--x", "1"
        )
        assert code == 1
        assert "unknown kernel" in err

    def test_malformed_poly_kernel(self, capsys):
        code, _, err = run(
            capsys, "quadrature", "--n", "3", "--kernel", "poly:1,zap", "--x", "1"
        )
        assert code == 1
        assert "poly:" in err


class TestDiffFormula:
    def test_document_fields(self, capsys):
        code, out, _ = run(capsys, "diff-formula", "--t", "10", "--n", "5")
        assert code == 0
        doc = json.loads(out)
        assert doc["mu"] == pytest.approx(10.0)
        assert doc["node_bound"] == pytest.approx(6.9405307892821257, rel=1e-12)
        assert doc["max_node_magnitude"] <= doc["node_bound"]
        assert len(doc["nodes"]) == 5

    def test_t_below_one_fails(self, capsys):
        code, _, err = run(capsys, "diff-formula", "--t", "0.5", "--n", "5")
        assert code == 1
        assert "error:" in err


class TestPade:
    def test_cosine_fit(self, capsys, tmp_path):
        f = write_doc(tmp_path, "cos.json", {"values": [1.0, 0.0, -0.5]})
        code, out, _ = run(capsys, "pade", "--f", f)
        assert code == 0
        doc = json.loads(out)
        assert doc["command"] == "pade"
        assert doc["n"] == 2
        assert doc["kernel"] == "exp"
        assert doc["mu"] == pytest.approx([1.0, 0.0], abs=1e-12)
        imag_parts = sorted(im for re, im in doc["nodes"])
        assert imag_parts == pytest.approx([-1.0, 1.0], abs=1e-10)
        assert doc["moment_residual"] < 1e-10

    def test_declared_n_in_document(self, capsys, tmp_path):
        f = write_doc(tmp_path, "f.json", {"n": 2, "values": [1.0, 0.0, -0.5, 9.9]})
        code, out, _ = run(capsys, "pade", "--f", f)
        assert code == 0
        assert json.loads(out)["n"] == 2

    def test_kernel_document(self, capsys, tmp_path):
        f = write_doc(tmp_path, "f.json", {"values": [2.0, 3.0]})
        h = write_doc(tmp_path, "h.json", {"values": [1.0, 1.0]})
        code, out, _ = run(capsys, "pade", "--f", f, "--h", h)
        assert code == 0
        doc = json.loads(out)
        assert doc["kernel"] == "taylor"
        assert np.abs(np.asarray(doc["nodes"]) - [[1.5, 0.0]]).max() < 1e-12

    def test_precision_flag(self, capsys, tmp_path):
        f = write_doc(tmp_path, "f.json", {"values": [1.0, 0.0, -0.5]})
        code, out, _ = run(capsys, "pade", "--f", f, "--precision", "extended")
        assert code == 0
        imag_parts = sorted(im for re, im in json.loads(out)["nodes"])
        assert imag_parts == pytest.approx([-1.0, 1.0], abs=1e-12)

    def test_bad_precision_is_usage_error(self, tmp_path):
        f = write_doc(tmp_path, "f.json", {"values": [1.0, 0.5]})
        with pytest.raises(SystemExit) as info:
            main(["pade", "--f", f, "--precision", "quad"])
        assert info.value.code == 1

    def test_zero_constant_term(self, capsys, tmp_path):
        f = write_doc(tmp_path, "f.json", {"values": [0.0, 1.0]})
        code, _, err = run(capsys, "pade", "--f", f)
        assert code == 1
        assert "zero constant term" in err

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run(capsys, "pade", "--f", str(tmp_path / "absent.json"))
        assert code == 1
        assert "cannot read" in err

    def test_missing_values_field(self, capsys, tmp_path):
        f = write_doc(tmp_path, "f.json", {"n": 2})
        code, _, err = run(capsys, "pade", "--f", f)
        assert code == 1
        assert "missing required field" in err

    def test_invalid_json(self, capsys, tmp_path):
        path = tmp_path / "f.json"
        path.write_text("{values: }")
        code, _, err = run(capsys, "pade", "--f", str(path))
        assert code == 1
        assert "not valid JSON" in err

    def test_complex_pairs_accepted(self, capsys, tmp_path):
        f = write_doc(tmp_path, "f.json", {"values": [[1.0, 0.0], [0.0, 1.0]]})
        code, out, _ = run(capsys, "pade", "--f", f)
        assert code == 0
        nodes = np.asarray(json.loads(out)["nodes"])
        assert np.abs(nodes - [[0.0, 1.0]]).max() < 1e-12


class TestNodeCap:
    def test_default_cap_enforced(self, capsys):
        code, _, err = run(capsys, "cheb-nodes", "--n", "61")
        assert code == 1
        assert "exceeds the precision cap 60" in err
        assert "EQW_MAX_N" in err

    def test_override_raises_cap(self, capsys, monkeypatch):
        monkeypatch.setenv("EQW_MAX_N", "8")
        code, out, err = run(capsys, "cheb-nodes", "--n", "7")
        assert code == 0
        assert "overridden" in err

    def test_override_can_lower_cap(self, capsys, monkeypatch):
        monkeypatch.setenv("EQW_MAX_N", "4")
        code, _, err = run(capsys, "cheb-nodes", "--n", "5")
        assert code == 1
        assert "exceeds the precision cap 4" in err

    def test_invalid_override_value(self, capsys, monkeypatch):
        monkeypatch.setenv("EQW_MAX_N", "plenty")
        code, _, err = run(capsys, "cheb-nodes", "--n", "3")
        assert code == 1
        assert "must be an integer" in err

    def test_nonpositive_override_value(self, capsys, monkeypatch):
        monkeypatch.setenv("EQW_MAX_N", "0")
        code, _, err = run(capsys, "cheb-nodes", "--n", "3")
        assert code == 1
        assert "at least 1" in err


class TestProny:
    def test_constant_table(self, capsys, tmp_path):
        table = write_doc(tmp_path, "g.json", {"values": [2.5, 2.5, 2.5, 2.5]})
        code, out, _ = run(capsys, "prony", "--table", table)
        assert code == 0
        doc = json.loads(out)
        assert doc["command"] == "prony"
        assert doc["n"] == 3
        assert doc["grid"] is None
        assert doc["mu"] == pytest.approx([2.5, 0.0])
        for re, im in doc["bases"]:
            assert complex(re, im) == pytest.approx(1.0, abs=1e-8)

    def test_grid_recorded(self, capsys, tmp_path):
        table = write_doc(tmp_path, "g.json", {"values": [1.0, 2.0, 3.0]})
        code, out, _ = run(capsys, "prony", "--table", table, "--grid", "0", "4")
        assert code == 0
        assert json.loads(out)["grid"] == [0.0, 4.0]

    def test_zero_bases_render_as_minus_infinity(self, capsys, tmp_path):
        table = write_doc(tmp_path, "g.json", {"values": [3.0, 2.0, 4.0, 8.0]})
        code, out, _ = run(capsys, "prony", "--table", table)
        assert code == 0
        frequencies = json.loads(out)["frequencies"]
        assert frequencies.count("-infinity") == 2

    def test_declared_n_mismatch(self, capsys, tmp_path):
        table = write_doc(tmp_path, "g.json", {"n": 5, "values": [1.0, 2.0, 3.0]})
        code, _, err = run(capsys, "prony", "--table", table)
        assert code == 1
        assert "does not match" in err

    def test_table_too_short(self, capsys, tmp_path):
        table = write_doc(tmp_path, "g.json", {"values": [1.0]})
        code, _, err = run(capsys, "prony", "--table", table)
        assert code == 1


class TestPronyClassical:
    def test_planted_two_term(self, capsys, tmp_path):
        doc_path = write_doc(
            tmp_path, "s.json", {"values": [3.0, 6.5, 18.25, 54.125]}
        )
        code, out, _ = run(capsys, "prony-classical", "--moments", doc_path)
        assert code == 0
        doc = json.loads(out)
        assert doc["n"] == 2
        bases = sorted(re for re, im in doc["bases"])
        assert bases == pytest.approx([0.5, 3.0], abs=1e-9)
        weights = sorted(re for re, im in doc["weights"])
        assert weights == pytest.approx([1.0, 2.0], abs=1e-9)

    def test_degenerate_table_is_numerical_failure(self, capsys, tmp_path):
        doc_path = write_doc(tmp_path, "s.json", {"values": [2.0, 2.0, 2.0, 2.0]})
        code, _, err = run(capsys, "prony-classical", "--moments", doc_path)
        assert code == 2
        assert "error:" in err

    def test_odd_sample_count(self, capsys, tmp_path):
        doc_path = write_doc(tmp_path, "s.json", {"values": [1.0, 2.0, 3.0]})
        code, _, err = run(capsys, "prony-classical", "--moments", doc_path)
        assert code == 1
        assert "even number" in err


class TestVerifyBounds:
    def test_report_and_determinism(self, capsys):
        args = ("verify-bounds", "--n", "5", "--trials", "40", "--seed", "42")
        code_a, out_a, _ = run(capsys, *args)
        code_b, out_b, _ = run(capsys, *args)
        assert code_a == code_b == 0
        assert out_a == out_b
        doc = json.loads(out_a)
        assert doc["violations"] == 0
        assert doc["trials"] == 40
        assert doc["max_ratio"] <= 1.0 + 1e-8

    def test_has_no_csv_flag(self):
        with pytest.raises(SystemExit) as info:
            main(["verify-bounds", "--n", "4", "--csv", "x.csv"])
        assert info.value.code == 1


def test_missing_subcommand_is_usage_error():
    with pytest.raises(SystemExit) as info:
        main([])
    assert info.value.code == 1


def test_output_and_csv_together(capsys, tmp_path):
    report = tmp_path / "rule.json"
    nodes = tmp_path / "rule.csv"
    code = main(
        ["cheb-nodes", "--n", "4", "--output", str(report), "--csv", str(nodes)]
    )
    captured = capsys.readouterr()
    assert code == 0
    assert captured.out == ""
    assert json.loads(report.read_text())["n"] == 4
    assert nodes.read_text().startswith("k,re,im,abs\n")
