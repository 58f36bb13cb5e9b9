import csv
import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from competitive_safety.cli import main, render_rows
from competitive_safety.gamefile import GameFormatError, dump_game, load_game
from competitive_safety.games import make_section51_game

F = Fraction


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestGameFile:
    def test_round_trip(self):
        g = make_section51_game()
        assert load_game(dump_game(g)) == g

    def test_rationals_and_labels(self):
        g = load_game('{"strategies": [["up", "down"], ["l", "r"]], "u1": [["1/2", 1], [0, "0.25"]], "u2": [[0, 0], [0, 0]]}')
        assert g.u1 == ((F(1, 2), 1), (0, F(1, 4)))
        assert g.labels == (("up", "down"), ("l", "r"))

    @pytest.mark.parametrize(
        "text,path",
        [
            ('{"u1": [[1, 2], [3, 4]]}', "$.u2"),
            ('{"u1": [[1, 2], [3, 0.5]], "u2": [[0, 0], [0, 0]]}', "$.u1[1][1]"),
            ('{"u1": [[1, 2], [3]], "u2": [[0, 0], [0, 0]]}', "$.u1[1]"),
            ('{"u1": [[1, 2]], "u2": [[0, 0], [0, 0]]}', "$.u2"),
            ('{"u1": [["x"]], "u2": [[0]]}', "$.u1[0][0]"),
            ('{"strategies": [["a"], ["b", "c"]], "u1": [[1]], "u2": [[1]]}', "$.strategies[1]"),
            ("[1, 2]", "$"),
            ("{not json", "$"),
        ],
    )
    def test_errors_carry_json_path(self, text, path):
        with pytest.raises(GameFormatError) as info:
            load_game(text)
        assert info.value.path == path


class TestRender:
    ROWS = [{"n": 2, "value": F(1, 3), "ok": True, "x": 0.5}]

    def test_csv(self):
        out = render_rows(self.ROWS, "csv")
        assert list(csv.reader(io.StringIO(out))) == [["n", "value", "ok", "x"], ["2", "1/3", "true", "0.5"]]

    def test_json(self):
        assert json.loads(render_rows(self.ROWS, "json")) == [{"n": 2, "value": "1/3", "ok": True, "x": 0.5}]

    def test_table_aligned(self):
        lines = render_rows(self.ROWS, "table").splitlines()
        assert len(lines) == 3 and len({len(line) for line in lines}) == 1


class TestAnalyze:
    def test_section51_default(self, capsys):
        code, out, _ = run(capsys, "analyze")
        assert code == 0
        assert "strictly mixed equilibrium: p=1/2 q=1/5" in out

    def test_json_report(self, capsys):
        code, out, _ = run(capsys, "--format", "json", "analyze", "--preset", "section51")
        doc = json.loads(out)
        c1 = doc["comparisons"][0]
        assert code == 0
        assert (c1["safety_value"], c1["nash_value"], c1["equal"]) == ("50", "52", False)
        assert doc["strictly_mixed_equilibrium"]["q"] == "1/5"

    def test_leader_params_flag_after_subcommand(self, capsys):
        code, out, _ = run(capsys, "analyze", "--preset", "leader", "--params", "2,6,4,2", "--format", "csv")
        rows = list(csv.DictReader(io.StringIO(out)))
        assert code == 0
        assert [r["safety_value"] for r in rows] == ["4/3", "3/2"]
        assert all(r["equal"] == "true" for r in rows)

    def test_non_square_game_file(self, capsys, tmp_path):
        path = tmp_path / "g.json"
        path.write_text(json.dumps({"u1": [[4, 0, 1], [0, 4, 1]], "u2": [[0, 0, 0], [0, 0, 0]]}))
        code, out, _ = run(capsys, "--format", "csv", "analyze", "--game", str(path), "--player", "1")
        assert code == 0
        assert list(csv.DictReader(io.StringIO(out)))[0]["safety_value"] == "1"

    def test_bad_game_file(self, capsys, tmp_path):
        path = tmp_path / "g.json"
        path.write_text('{"u1": [[1, 2], [3, 0.5]], "u2": [[0, 0], [0, 0]]}')
        code, _, err = run(capsys, "analyze", "--game", str(path))
        assert code == 2 and "$.u1[1][1]" in err

    def test_missing_file(self, capsys, tmp_path):
        code, _, _ = run(capsys, "analyze", "--game", str(tmp_path / "nope.json"))
        assert code == 2

    def test_bad_params(self, capsys):
        assert run(capsys, "analyze", "--preset", "leader", "--params", "1,2")[0] == 2
        assert run(capsys, "analyze", "--preset", "leader", "--params", "1,0,1,1")[0] == 2


class TestOtherCommands:
    def test_set_theoretic_voting(self, capsys):
        code, out, _ = run(capsys, "--format", "json", "set-theoretic")
        rows = json.loads(out)
        assert code == 0
        assert all(r["equal"] and r["transplanted_value"] == "1" for r in rows)

    def test_set_theoretic_rejects_asymmetric(self, capsys, tmp_path):
        path = tmp_path / "g.json"
        path.write_text(json.dumps({"u1": [[2, 4], [6, 0]], "u2": [[6, 2], [0, 4]]}))
        code, _, err = run(capsys, "set-theoretic", "--game", str(path))
        assert code == 2 and "u1[0][1]" in err

    def test_loadbalance(self, capsys):
        code, out, _ = run(capsys, "loadbalance", "--alphas", "1,0.5", "--n", "10,10000", "--format", "json")
        rows = json.loads(out)
        assert code == 0
        assert [r["n"] for r in rows] == [10, 10000]
        assert abs(rows[-1]["ratio"] - 1.125) < 0.01 * 1.125
        assert rows[0]["limit_ratio"] == 1.125

    @pytest.mark.parametrize("argv", [["--alphas", "0.5,1"], ["--alphas", "1,x"], ["--n", "1"], ["--X", "-1"]])
    def test_loadbalance_bad_input(self, capsys, argv):
        assert run(capsys, "loadbalance", *argv)[0] == 2

    def test_auction(self, capsys):
        code, out, _ = run(capsys, "--format", "csv", "auction", "--n", "2,3", "--v", "0.9", "--samples", "20000")
        rows = list(csv.DictReader(io.StringIO(out)))
        assert code == 0
        assert float(rows[0]["ratio"]) == 2.0
        assert float(rows[1]["safety_bid"]) == 0.9
        assert rows[1]["mc_mean"] != ""

    def test_auction_bad_value(self, capsys):
        assert run(capsys, "auction", "--v", "1.5")[0] == 2

    def test_unknown_subcommand(self, capsys):
        assert run(capsys, "frobnicate")[0] == 2

    def test_output_file(self, capsys, tmp_path):
        target = tmp_path / "out.csv"
        code, out, _ = run(capsys, "--format", "csv", "--output", str(target), "auction", "--n", "2")
        assert code == 0 and out == ""
        assert target.read_text().startswith("n,v,")


class TestCheck:
    def test_all_pass(self, capsys):
        code, out, _ = run(capsys, "check")
        lines = out.splitlines()
        assert code == 0
        assert len(lines) == 11 and all(line.startswith("PASS") for line in lines)

    def test_failure_exit_code(self, capsys, monkeypatch):
        from competitive_safety import cli

        monkeypatch.setattr(cli.auction, "competitive_ratio", lambda n: 0.0)
        code, out, _ = run(capsys, "check")
        assert code == 3 and "FAIL" in out

    def test_module_entry_point_is_deterministic(self):
        cmd = [sys.executable, "-m", "competitive_safety", "check", "--seed", "7"]
        first = subprocess.run(cmd, capture_output=True, check=True).stdout
        second = subprocess.run(cmd, capture_output=True, check=True).stdout
        assert first == second and first
