import csv
import json
import math
import subprocess
import sys

import pytest

from modecollapse import KlReport
from modecollapse.cli import main


def write_json(path, data):
    path.write_text(json.dumps(data))
    return str(path)


class TestDistributionCommands:
    def test_region(self, toy_files, tmp_path, capsys):
        out = tmp_path / "r.csv"
        assert main(["region", "-i", str(toy_files["P"]), "-i", str(toy_files["Q1"]), "--out", str(out)]) == 0
        assert out.read_text() == "epsilon,delta\n0.0,0.0\n0.0,0.2\n1.0,1.0\n"
        assert "dtv=0.2" in capsys.readouterr().out

    def test_region_to_stdout(self, toy_files, capsys):
        assert main(["region", "-i", str(toy_files["P"]), "-i", str(toy_files["Q2"])]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "epsilon,delta" and len(lines) == 4

    def test_dtv_packed(self, toy_files, capsys):
        assert main(["dtv", "--m", "2", "-i", str(toy_files["P"]), "-i", str(toy_files["Q1"])]) == 0
        result = json.loads(capsys.readouterr().out)
        assert result["m"] == 2 and result["dtv"] == pytest.approx(0.36, abs=1e-12)

    def test_dtv_discrete(self, tmp_path, capsys):
        p = write_json(tmp_path / "p.json", {"atoms": [{"label": "a", "prob": 0.5}, {"label": "b", "prob": 0.5}]})
        q = write_json(tmp_path / "q.json", {"atoms": [{"label": "b", "prob": 0.9}, {"label": "a", "prob": 0.1}]})
        assert main(["dtv", "-i", p, "-i", q]) == 0
        assert json.loads(capsys.readouterr().out)["dtv"] == pytest.approx(0.4, abs=1e-15)

    def test_pack_sweep(self, toy_files, tmp_path):
        out = tmp_path / "s.csv"
        assert main(["pack-sweep", "--m", "6", "-i", str(toy_files["P"]), "-i", str(toy_files["Q1"]),
                     "--out", str(out)]) == 0
        rows = out.read_text().splitlines()[1:]
        assert [float(r.split(",")[1]) for r in rows] == pytest.approx(
            [1 - 0.8**m for m in range(1, 7)], abs=1e-9)

    def test_bounds(self, capsys):
        assert main(["bounds", "--tau", "0.2", "0.5", "--m", "2"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "tau,m,lower,upper" and len(lines) == 5
        assert float(lines[2].split(",")[3]) == pytest.approx(0.36, abs=1e-15)

    def test_mixed_inputs_rejected(self, toy_files, tmp_path, capsys):
        q = write_json(tmp_path / "q.json", {"atoms": [{"label": 0, "prob": 1.0}]})
        assert main(["dtv", "-i", str(toy_files["P"]), "-i", q]) == 1
        assert "error:" in capsys.readouterr().err

    def test_bad_inputs(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        assert main(["dtv", "-i", str(bad), "-i", str(bad)]) == 1
        assert main(["dtv", "-i", str(tmp_path / "absent.json"), "-i", str(bad)]) == 1
        assert main(["dtv", "-i", str(bad)]) == 1
        p = write_json(tmp_path / "p.json", {"atoms": [{"label": 0, "prob": 0.7}]})
        assert main(["dtv", "-i", p, "-i", p]) == 1

    def test_usage_error_is_invalid_input(self):
        with pytest.raises(SystemExit) as exc:
            main(["bounds"])
        assert exc.value.code == 1


class TestBlackwellCommand:
    def test_more_informative(self, tmp_path):
        b = write_json(tmp_path / "b.json", [[0.9, 0.1], [0.2, 0.8]])
        c = write_json(tmp_path / "c.json", {"rows": [[0.74, 0.26], [0.32, 0.68]]})
        out = tmp_path / "v.json"
        assert main(["blackwell", "-i", b, "-i", c, "--out", str(out)]) == 0
        doc = json.loads(out.read_text())
        assert doc["verdict"] == "MoreInformative"
        assert len(doc["mixing"]) == 2

    def test_not_more_informative(self, tmp_path, capsys):
        b = write_json(tmp_path / "b.json", [[0.5, 0.5], [0.5, 0.5]])
        c = write_json(tmp_path / "c.json", [[1, 0], [0, 1]])
        assert main(["blackwell", "-i", b, "-i", c]) == 2
        doc = json.loads(capsys.readouterr().out)
        assert doc["verdict"] == "NotMoreInformative"
        assert doc["witness"]["prior"] == [0.5, 0.5]

    def test_invalid_matrix(self, tmp_path):
        b = write_json(tmp_path / "b.json", [[0.5, 0.6], [0.5, 0.5]])
        assert main(["blackwell", "-i", b, "-i", b]) == 1


class TestVeeganCommand:
    def test_matched_config(self, tmp_path, capsys):
        cfg = {
            "z_atoms": [{"label": "z0", "embedding": [1, 0]}, {"label": "z1", "embedding": [0, 1]}],
            "p0": {"atoms": [{"label": "z0", "prob": 0.5}, {"label": "z1", "prob": 0.5}]},
            "x_atoms": ["x0", "x1"],
            "p_x": {"atoms": [{"label": "x0", "prob": 0.5}, {"label": "x1", "prob": 0.5}]},
            "gen_cond": [[1, 0], [0, 1]],
            "rec_cond": [[1, 0], [0, 1]],
        }
        path = write_json(tmp_path / "cfg.json", cfg)
        assert main(["veegan-check", "-i", path]) == 0
        out = capsys.readouterr().out.splitlines()
        assert out[0] == "index,lhs,rhs,gap,holds,matched"
        fields = out[1].split(",")
        assert float(fields[2]) == pytest.approx(math.log(2), abs=1e-12)
        assert fields[4:] == ["True", "True"]
        assert any(line.startswith("# entropy_p0=") for line in out)

    def test_random_campaign(self, capsys):
        assert main(["veegan-check", "--random", "50", "--seed", "3"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert len(lines) == 51 and all(line.split(",")[4] == "True" for line in lines[1:])

    def test_requires_input(self):
        assert main(["veegan-check"]) == 1


class TestKlEvalCommand:
    @pytest.fixture
    def histograms(self, tmp_path):
        ref = write_json(tmp_path / "mnist.json", {str(d): 6000 for d in range(10)})
        one = tmp_path / "one.csv"
        one.write_text("3,100\n")
        half = tmp_path / "half.csv"
        half.write_text("label,count\n0,50\n1,50\n")
        return ref, str(one), str(half)

    def test_table_and_csv(self, histograms, tmp_path, capsys):
        ref, one, half = histograms
        out = tmp_path / "report.csv"
        assert main(["kl-eval", "--reference", ref, "-i", f"gan={one}", "-i", f"gan={half}",
                     "-i", half, "--out", str(out)]) == 0
        table = capsys.readouterr().out.splitlines()
        assert table[0].startswith("source")
        assert [line.split()[0] for line in table[1:]] == ["gan", "half"]
        report = KlReport.from_csv(out.read_text())
        assert report.reference == "mnist" and report.trial_count == 2
        assert report.rows[0].kl == pytest.approx((math.log(10) + math.log(5)) / 2, abs=1e-6)

    def test_json_and_log_base(self, histograms, tmp_path):
        ref, one, _ = histograms
        out = tmp_path / "report.json"
        assert main(["kl-eval", "--reference", ref, "-i", one, "--log-base", "10", "--out", str(out)]) == 0
        report = KlReport.from_json(out.read_text())
        assert report.log_base == 10.0
        assert report.rows[0].kl == pytest.approx(1.0, abs=1e-6)

    def test_bad_histogram(self, histograms, tmp_path):
        ref, _, _ = histograms
        bad = tmp_path / "bad.csv"
        bad.write_text("a,-1\n")
        assert main(["kl-eval", "--reference", ref, "-i", str(bad)]) == 1


class TestSampleCommand:
    def test_sample(self, toy_files, tmp_path):
        out = tmp_path / "f.csv"
        assert main(["sample", "-i", str(toy_files["Q1"]), "--n", "1000", "--bins", "0", "0.2", "0.5", "1",
                     "--seed", "5", "--out", str(out)]) == 0
        rows = list(csv.reader(out.read_text().splitlines()))
        assert rows[0] == ["label", "count", "probability"]
        assert rows[1][:2] == ["[0.0,0.2]", "0"]
        assert sum(int(r[1]) for r in rows[1:]) == 1000

    def test_packed_sample(self, toy_files, capsys):
        assert main(["sample", "-i", str(toy_files["P"]), "--n", "200", "--m", "2", "--seed", "1"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert sum(int(line.rsplit(",", 2)[1]) for line in lines[1:]) == 200

    def test_needs_piecewise(self, tmp_path):
        p = write_json(tmp_path / "p.json", {"atoms": [{"label": 0, "prob": 1.0}]})
        assert main(["sample", "-i", p]) == 1


def test_module_entry_point(toy_files):
    result = subprocess.run(
        [sys.executable, "-m", "modecollapse", "dtv", "-i", str(toy_files["P"]), "-i", str(toy_files["Q2"])],
        capture_output=True, text=True, check=False)
    assert result.returncode == 0
    assert json.loads(result.stdout)["dtv"] == pytest.approx(0.2, abs=1e-12)
