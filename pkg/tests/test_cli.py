"""Exit codes and file output of the command line front end."""

import pytest

from ocoboost.cli import build_parser, main
from ocoboost.harness import ONLINE_CSV_HEADER, STAT_CSV_HEADER


class TestExitCodes:
    def test_online_sweep_passes(self, tmp_path):
        out = tmp_path / "online.csv"
        rc = main(["online-agnostic", "--t", "60", "--n-weak", "30",
                   "--out", str(out)])
        assert rc == 0
        lines = out.read_text().splitlines()
        assert lines[0] == ONLINE_CSV_HEADER
        assert len(lines) == 1 + 10 * 60
        assert lines[1].startswith("0,1,")

    def test_stat_sweep_writes_csv(self, tmp_path):
        out = tmp_path / "stat.csv"
        rc = main(["stat-realizable", "--m", "80", "--t", "40", "--m0", "15",
                   "--out", str(out)])
        assert rc == 0
        lines = out.read_text().splitlines()
        assert lines[0] == STAT_CSV_HEADER
        assert len(lines) == 1 + 10 * 40

    def test_unmet_floor_exits_one(self):
        # realizable guarantee demanded of noisy data: an honest failure
        rc = main(["stat-realizable", "--m", "100", "--t", "50", "--m0", "20",
                   "--adversary", "noisy-threshold:0.3"])
        assert rc == 1

    def test_bad_adversary_exits_two(self):
        assert main(["online-agnostic", "--adversary", "martian"]) == 2

    def test_bad_gamma_exits_two(self):
        assert main(["online-agnostic", "--gamma", "1.5"]) == 2

    def test_missing_matrix_file_exits_two(self, tmp_path):
        assert main(["game", "--matrix", str(tmp_path / "absent.txt")]) == 2

    def test_unknown_subcommand_exits_two(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 2
        capsys.readouterr()


class TestGame:
    def test_two_row_matrix_certificate(self, tmp_path, capsys):
        path = tmp_path / "classic.txt"
        path.write_text("3 1\n1 2\n")
        rc = main(["game", "--matrix", str(path), "--t", "2000",
                   "--resolution", "99"])
        out = capsys.readouterr().out
        assert rc == 0
        assert "certificate [pass]" in out
        assert "grid value estimate 1.6667" in out

    def test_random_game_with_noisy_oracle(self, capsys):
        rc = main(["game", "--epsilon0", "0.05", "--t", "2000",
                   "--resolution", "60", "--seed", "3"])
        assert rc == 0
        assert "certificate [pass]" in capsys.readouterr().out

    def test_oversized_matrix_exits_two(self, tmp_path):
        path = tmp_path / "big.txt"
        path.write_text("\n".join("1 2 3 4 5" for _ in range(5)) + "\n")
        assert main(["game", "--matrix", str(path)]) == 2


class TestVerify:
    def test_quick_verify_green(self, capsys):
        rc = main(["verify", "--quick"])
        out = capsys.readouterr().out
        assert rc == 0
        assert "criteria 8/8" in out
        assert "FAIL" not in out


class TestParser:
    def test_prescient_only_on_realizable(self):
        parser = build_parser()
        args = parser.parse_args(["online-realizable", "--weak", "prescient"])
        assert args.weak == "prescient"
        with pytest.raises(SystemExit):
            parser.parse_args(["online-agnostic", "--weak", "prescient"])

    def test_seed_window(self):
        args = build_parser().parse_args(
            ["online-agnostic", "--seed", "5", "--seeds", "12"])
        assert args.seed == 5 and args.seeds == 12
