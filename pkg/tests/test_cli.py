"""CLI surface: JSON shapes, exit codes, config files, determinism."""

import json
import re

from click.testing import CliRunner

from mfblocks.cli import main


def run(*args, **kw):
    return CliRunner().invoke(main, list(args), **kw)


def parse_dot(text):
    """Vertex labels in order plus the dense multiplicity matrix."""
    names = re.findall(r'^\s*v(\d+) \[label="([^"]+)"\]', text, re.M)
    names = [n for _, n in sorted(names, key=lambda t: int(t[0]))]
    size = len(names)
    matrix = [[0] * size for _ in range(size)]
    for i, j, m in re.findall(r'v(\d+) -> v(\d+) \[label="(\d+)"\]', text):
        matrix[int(i)][int(j)] = int(m)
    return names, matrix


class TestMf:
    def test_recipe_mode(self):
        res = run("mf", "--ell", "2", "--n", "3")
        assert res.exit_code == 0
        assert json.loads(res.output) == {"ell": 2, "n": 3, "r": 9,
                                          "p": 19, "mf": 3}

    def test_direct_mode(self):
        res = run("mf", "--ell", "2", "--r", "7")
        assert res.exit_code == 0
        assert json.loads(res.output) == {"ell": 2, "r": 7, "mf": 3}

    def test_gcd_error(self):
        res = run("mf", "--ell", "2", "--r", "4")
        assert res.exit_code != 0
        assert "coprime" in res.output

    def test_mode_flags_are_exclusive(self):
        assert run("mf", "--ell", "2").exit_code != 0
        assert run("mf", "--ell", "2", "--n", "1", "--r", "3").exit_code != 0


class TestVerify:
    def test_quick_suite_streams_and_passes(self):
        res = run("verify", "--ell", "3", "--p", "5", "--r", "2",
                  "--suite", "quick")
        assert res.exit_code == 0
        rows = [json.loads(line) for line in res.output.splitlines()]
        assert len(rows) == 12
        for row in rows:
            assert row["params"] == {"ell": 3, "p": 5, "r": 2, "theta": 1}
            assert row["status"] == "pass"
            assert isinstance(row["ms"], float)

    def test_invalid_params_error(self):
        res = run("verify", "--ell", "2", "--p", "7", "--r", "2")
        assert res.exit_code != 0
        assert "coprime" in res.output

    def test_non_faithful_theta_error(self):
        res = run("verify", "--ell", "2", "--p", "19", "--r", "9",
                  "--theta", "3")
        assert res.exit_code != 0
        assert "faithful" in res.output

    def test_failing_check_exits_nonzero(self, monkeypatch):
        import mfblocks.verify as V
        monkeypatch.setitem(
            V._CHECKS, "dimensions", lambda *a: {"defect": "forced"})
        res = run("verify", "--ell", "3", "--p", "5", "--r", "2")
        assert res.exit_code == 1
        rows = [json.loads(line) for line in res.output.splitlines()]
        row = next(r for r in rows if r["check"] == "dimensions")
        assert row["status"] == "fail"
        assert row["witness"] == {"defect": "forced"}


class TestQuiver:
    def test_formats_encode_the_same_matrix(self):
        dot = run("quiver", "--ell", "3", "--p", "5", "--r", "2")
        js = run("quiver", "--ell", "3", "--p", "5", "--r", "2",
                 "--out", "json")
        assert dot.exit_code == 0 and js.exit_code == 0
        names, matrix = parse_dot(dot.output)
        data = json.loads(js.output)
        assert data["vertices"] == names
        assert data["matrix"] == matrix
        assert len(names) == 13

    def test_deterministic(self):
        a = run("quiver", "--ell", "3", "--p", "5", "--r", "2")
        b = run("quiver", "--ell", "3", "--p", "5", "--r", "2")
        assert a.output == b.output

    def test_output_file(self, tmp_path):
        dest = tmp_path / "q.json"
        res = run("quiver", "--ell", "3", "--p", "5", "--r", "2",
                  "--out", "json", "--output", str(dest))
        assert res.exit_code == 0 and res.output == ""
        data = json.loads(dest.read_text())
        assert data["params"] == {"ell": 3, "p": 5, "r": 2, "theta": 1}


class TestRecover:
    def test_desk_sets(self):
        one = run("recover", "--ell", "2", "--p", "11", "--r", "5")
        two = run("recover", "--ell", "2", "--p", "11", "--r", "5",
                  "--theta", "2")
        assert one.exit_code == 0 and two.exit_code == 0
        d1, d2 = json.loads(one.output), json.loads(two.output)
        assert d1["recovered"] == [1, 4]
        assert d2["recovered"] == [2, 3]
        assert len(d1["pairing"]) == 25
        assert {e["value"] for e in d1["pairing"]} != \
            {1} and d1["pairing"] != d2["pairing"]

    def test_non_faithful_theta_error(self):
        res = run("recover", "--ell", "2", "--p", "7", "--r", "3",
                  "--theta", "3")
        assert res.exit_code != 0
        assert "faithful" in res.output


class TestConfig:
    def test_config_supplies_flags(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("ell=3\np=5\nr=2\n# a comment\ntheta=1\nout=json\n")
        res = run("quiver", "--config", str(cfg))
        assert res.exit_code == 0
        assert json.loads(res.output)["params"]["p"] == 5

    def test_explicit_flag_wins(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("ell=2\nr=7\n")
        res = run("mf", "--config", str(cfg), "--r", "9")
        assert json.loads(res.output) == {"ell": 2, "r": 9, "mf": 3}

    def test_recipe_flag_beats_config_r(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("ell=2\np=7\nr=3\n")
        res = run("mf", "--config", str(cfg), "--n", "1")
        assert json.loads(res.output) == {"ell": 2, "n": 1, "r": 3,
                                          "p": 7, "mf": 1}

    def test_malformed_line_rejected(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("ell 2\n")
        res = run("mf", "--config", str(cfg), "--r", "3")
        assert res.exit_code != 0
        assert "key=value" in res.output

    def test_missing_required_parameter(self):
        res = run("verify", "--ell", "2", "--p", "7")
        assert res.exit_code != 0
        assert "--r" in res.output
