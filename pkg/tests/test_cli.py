"""Command line and file format tests, driven through main(argv)."""

import json

import numpy as np
import pytest

from mecoupling import ParseError, compute_coupling, read_coupling, write_coupling
from mecoupling.cli import main

COLL = {"distributions": [[0.5, 0.5], [0.75, 0.25]]}


@pytest.fixture
def coll_path(tmp_path):
    path = tmp_path / "coll.json"
    path.write_text(json.dumps(COLL))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestGlbVerb:
    def test_output(self, capsys, coll_path):
        code, out, _ = run(capsys, "glb", coll_path)
        assert code == 0
        lines = out.splitlines()
        assert lines[0].split("\t") == ["glb", "0.5", "0.5"]
        assert lines[1].startswith("entropy (alpha=1)\t1")
        assert "majorized by distributions[0]\tyes" in out

    def test_report_file(self, capsys, tmp_path, coll_path):
        out_path = tmp_path / "glb.json"
        code, _, _ = run(capsys, "glb", coll_path, "--out", str(out_path))
        assert code == 0
        report = json.loads(out_path.read_text())
        assert report["glb"] == [0.5, 0.5]
        assert report["entropy"] == 1.0
        assert report["majorized_by_all"] is True

    def test_alpha_flag(self, capsys, coll_path):
        code, out, _ = run(capsys, "glb", coll_path, "--alpha", "2")
        assert code == 0
        assert "entropy (alpha=2)\t1" in out


class TestCoupleVerb:
    def test_writes_valid_coupling(self, capsys, tmp_path, coll_path):
        out_path = tmp_path / "cpl.json"
        code, out, _ = run(capsys, "couple", coll_path, "--out", str(out_path))
        assert code == 0
        assert "cells\t3" in out
        assert "gap\t0.5" in out
        loaded = read_coupling(str(out_path))
        np.testing.assert_allclose(loaded.q.masses, [0.5, 0.25, 0.25], atol=1e-12)
        assert loaded.maps.tolist() == [[0, 1, 1], [0, 0, 1]]

    def test_out_flag_required(self, capsys, coll_path):
        with pytest.raises(SystemExit) as err:
            main(["couple", coll_path])
        assert err.value.code == 2

    def test_truncation_recorded(self, capsys, tmp_path, coll_path):
        out_path = tmp_path / "cpl.json"
        code, _, _ = run(capsys, "couple", coll_path, "--trunc", "8", "--out", str(out_path))
        assert code == 0
        assert read_coupling(str(out_path)).truncation == 8


class TestSampleVerb:
    def test_tsv_shape(self, capsys, tmp_path, coll_path):
        cpl = tmp_path / "cpl.json"
        run(capsys, "couple", coll_path, "--out", str(cpl))
        code, out, _ = run(capsys, "sample", str(cpl), "--seed", "7", "--count", "5")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "cell\tx1\tx2"
        assert len(lines) == 6
        assert all(len(line.split("\t")) == 3 for line in lines[1:])

    def test_deterministic(self, capsys, tmp_path, coll_path):
        cpl = tmp_path / "cpl.json"
        run(capsys, "couple", coll_path, "--out", str(cpl))
        _, first, _ = run(capsys, "sample", str(cpl), "--seed", "3", "--count", "50")
        _, second, _ = run(capsys, "sample", str(cpl), "--seed", "3", "--count", "50")
        assert first == second

    def test_out_file(self, capsys, tmp_path, coll_path):
        cpl = tmp_path / "cpl.json"
        tsv = tmp_path / "draws.tsv"
        run(capsys, "couple", coll_path, "--out", str(cpl))
        code, out, _ = run(
            capsys, "sample", str(cpl), "--seed", "1", "--count", "10", "--out", str(tsv)
        )
        assert code == 0
        assert out == ""
        assert len(tsv.read_text().strip().splitlines()) == 11

    def test_round_trip_frequencies(self, capsys, tmp_path):
        # full pipeline at 10k draws: empirical marginals track the inputs
        rows = np.random.default_rng(5).dirichlet(np.ones(4), size=3)
        coll = tmp_path / "coll.json"
        coll.write_text(json.dumps({"distributions": rows.tolist()}))
        cpl = tmp_path / "cpl.json"
        run(capsys, "couple", str(coll), "--out", str(cpl))
        code, out, _ = run(capsys, "sample", str(cpl), "--seed", "123", "--count", "10000")
        assert code == 0
        data = np.array([line.split("\t") for line in out.strip().splitlines()[1:]], dtype=int)
        for i in range(3):
            freq = np.bincount(data[:, 1 + i], minlength=4) / 10000
            assert np.abs(freq - rows[i]).sum() / 2 < 0.02


class TestVerifyVerb:
    def test_good_coupling_passes(self, capsys, tmp_path, coll_path):
        cpl = tmp_path / "cpl.json"
        run(capsys, "couple", coll_path, "--out", str(cpl))
        code, out, _ = run(capsys, "verify", str(cpl), coll_path)
        assert code == 0
        assert "PASS\toverall" in out

    def test_tampered_map_fails(self, capsys, tmp_path, coll_path):
        cpl = tmp_path / "cpl.json"
        run(capsys, "couple", coll_path, "--out", str(cpl))
        raw = json.loads(cpl.read_text())
        raw["maps"][1][0] = 1
        cpl.write_text(json.dumps(raw))
        code, out, _ = run(capsys, "verify", str(cpl), coll_path)
        assert code == 1
        assert "FAIL" in out

    def test_report_file(self, capsys, tmp_path, coll_path):
        cpl = tmp_path / "cpl.json"
        rep = tmp_path / "rep.json"
        run(capsys, "couple", coll_path, "--out", str(cpl))
        code, _, _ = run(capsys, "verify", str(cpl), coll_path, "--out", str(rep))
        assert code == 0
        assert json.loads(rep.read_text())["passed"] is True

    def test_wrong_collection_fails(self, capsys, tmp_path, coll_path):
        cpl = tmp_path / "cpl.json"
        other = tmp_path / "other.json"
        other.write_text(json.dumps({"distributions": [[0.9, 0.1], [0.9, 0.1]]}))
        run(capsys, "couple", coll_path, "--out", str(cpl))
        code, _, _ = run(capsys, "verify", str(cpl), str(other))
        assert code == 1


class TestCausalVerb:
    def test_deterministic_direction(self, capsys, tmp_path):
        # column variable is a function of the row variable, so rows->cols
        # couples for free while the reverse pays the mixture entropy
        joint = {"joint": [[0.5, 0.0], [0.0, 0.3], [0.2, 0.0]]}
        path = tmp_path / "joint.json"
        path.write_text(json.dumps(joint))
        code, out, _ = run(capsys, "causal", str(path))
        assert code == 0
        assert "direction\trows->cols" in out

    def test_tie_on_symmetric_table(self, capsys, tmp_path):
        path = tmp_path / "joint.json"
        path.write_text(json.dumps({"joint": [[0.4, 0.1], [0.1, 0.4]]}))
        code, out, _ = run(capsys, "causal", str(path))
        assert code == 0
        assert "direction\ttie" in out

    def test_report_file(self, capsys, tmp_path):
        path = tmp_path / "joint.json"
        rep = tmp_path / "rep.json"
        path.write_text(json.dumps({"joint": [[0.5, 0.0], [0.0, 0.3], [0.2, 0.0]]}))
        code, _, _ = run(capsys, "causal", str(path), "--out", str(rep))
        assert code == 0
        data = json.loads(rep.read_text())
        assert data["direction"] == "rows->cols"
        assert data["score_rows_to_cols"] < data["score_cols_to_rows"]

    def test_zero_column_is_input_error(self, capsys, tmp_path):
        path = tmp_path / "joint.json"
        path.write_text(json.dumps({"joint": [[0.5, 0.0], [0.5, 0.0]]}))
        code, _, err = run(capsys, "causal", str(path))
        assert code == 2
        assert "column" in err

    def test_zero_row_is_input_error(self, capsys, tmp_path):
        path = tmp_path / "joint.json"
        path.write_text(json.dumps({"joint": [[0.0, 0.0], [0.5, 0.5]]}))
        code, _, err = run(capsys, "causal", str(path))
        assert code == 2
        assert "row" in err


class TestInputErrors:
    def test_missing_file(self, capsys):
        code, _, err = run(capsys, "glb", "no-such-file.json")
        assert code == 2
        assert "error:" in err

    def test_malformed_json(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        code, _, err = run(capsys, "glb", str(path))
        assert code == 2
        assert "not valid JSON" in err

    def test_unnormalized_row(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"distributions": [[0.5, 0.3]]}))
        code, _, err = run(capsys, "glb", str(path))
        assert code == 2
        assert "distributions[0]" in err

    def test_wrong_key(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"pmfs": [[1.0]]}))
        code, _, err = run(capsys, "glb", str(path))
        assert code == 2

    def test_ragged_joint(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"joint": [[0.5, 0.5], [1.0]]}))
        code, _, err = run(capsys, "causal", str(path))
        assert code == 2
        assert "joint[1]" in err

    def test_non_numeric_entry(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"distributions": [[0.5, "x"]]}))
        code, _, err = run(capsys, "glb", str(path))
        assert code == 2
        assert "distributions[0][1]" in err


class TestCouplingFileFormat:
    def test_round_trip_exact(self, tmp_path, rng):
        ps = [rng.dirichlet(np.ones(7)) for _ in range(4)]
        c = compute_coupling(ps)
        path = tmp_path / "cpl.json"
        write_coupling(str(path), c)
        back = read_coupling(str(path))
        # shortest-round-trip floats: binary equality, not approximate
        np.testing.assert_array_equal(back.q.masses, c.q.masses)
        np.testing.assert_array_equal(back.maps, c.maps)
        np.testing.assert_array_equal(back.provenance, c.provenance)
        assert back.n == c.n
        assert back.truncation == c.truncation

    def test_header_fields(self, tmp_path):
        path = tmp_path / "cpl.json"
        write_coupling(str(path), compute_coupling([[0.5, 0.5], [0.75, 0.25]]))
        raw = json.loads(path.read_text())
        assert raw["tool"] == "mecoupling"
        assert raw["m"] == 2 and raw["n"] == 2
        assert raw["truncation"] is None

    @pytest.mark.parametrize(
        "mutate,fragment",
        [
            (lambda r: r.pop("maps"), "missing key"),
            (lambda r: r.update(m=0), "positive integers"),
            (lambda r: r.update(truncation=0), "truncation"),
            (lambda r: r["maps"][0].__setitem__(0, 99), "label in [0, 2)"),
            (lambda r: r.update(maps=r["maps"][:1]), "maps must hold 2 rows"),
            (lambda r: r.update(provenance=[[0, 0]]), "provenance must hold 3"),
            (lambda r: r["provenance"].__setitem__(0, [-1, 0]), "provenance[0]"),
            (lambda r: r.update(q=[0.5, 0.1]), "q:"),
        ],
    )
    def test_rejects_damage(self, tmp_path, mutate, fragment):
        path = tmp_path / "cpl.json"
        write_coupling(str(path), compute_coupling([[0.5, 0.5], [0.75, 0.25]]))
        raw = json.loads(path.read_text())
        mutate(raw)
        path.write_text(json.dumps(raw))
        with pytest.raises(ParseError) as err:
            read_coupling(str(path))
        assert fragment in str(err.value)
