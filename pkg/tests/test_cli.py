"""Command line interface and config-file parsing."""
import math

import pytest

from navex.cli import main
from navex.config import ConfigError, SimConfig, parse_config
from tests.conftest import OFFICE_WORLD, BOX_TEXT


@pytest.fixture()
def box_file(tmp_path):
    p = tmp_path / "box.world"
    p.write_text(BOX_TEXT)
    return str(p)


@pytest.fixture()
def targets_file(tmp_path):
    p = tmp_path / "targets.txt"
    p.write_text("# two easy targets\ntarget 7 2\ntarget 2 7\n")
    return str(p)


@pytest.fixture()
def config_file(tmp_path):
    p = tmp_path / "nav.cfg"
    p.write_text("beam_count = 121\ncycle_cap = 200  # plenty for a box\n")
    return str(p)


class TestConfigParsing:
    def test_defaults(self):
        cfg = SimConfig()
        assert cfg.beam_count == 660
        assert cfg.fov == pytest.approx(math.radians(220))
        assert cfg.moves == (0.0, 0.2, 0.4, 0.8, 1.6)
        assert len(cfg.turns) == 8

    def test_overrides_and_lists(self):
        cfg = parse_config("beam_count = 90\nmoves = 0, 0.5, 1.0\n"
                           "advisors = greedy, bigstep\n")
        assert cfg.beam_count == 90
        assert cfg.moves == (0.0, 0.5, 1.0)
        assert cfg.advisors == ("greedy", "bigstep")

    @pytest.mark.parametrize("text,fragment", [
        ("not a pair\n", "expected 'key = value'"),
        ("zoom = 3\n", "unknown key"),
        ("beam_count = many\n", "bad value"),
    ])
    def test_errors_carry_line_numbers(self, text, fragment):
        with pytest.raises(ConfigError, match=fragment):
            parse_config(text)


class TestRunCommand:
    def test_writes_log_and_prints_report(self, box_file, targets_file,
                                          config_file, tmp_path, capsys):
        log = str(tmp_path / "run.jsonl")
        rc = main(["run", "--world", box_file, "--targets", targets_file,
                   "--seed", "3", "--log", log, "--config", config_file,
                   "--start", "2", "2", "0"])
        out = capsys.readouterr().out
        assert rc == 0
        assert "episode 0" in out and "episode 1" in out
        assert "targets reached" in out
        assert "evaluation report" in out
        assert (tmp_path / "run.jsonl").read_text().strip()

    def test_missing_world_is_an_error(self, targets_file, tmp_path, capsys):
        rc = main(["run", "--world", "/nope.world", "--targets", targets_file,
                   "--seed", "0", "--log", str(tmp_path / "x.jsonl")])
        assert rc == 2
        assert "error:" in capsys.readouterr().err

    def test_bad_targets_file(self, box_file, tmp_path, capsys):
        bad = tmp_path / "bad.txt"
        bad.write_text("goal 1 2\n")
        rc = main(["run", "--world", box_file, "--targets", str(bad),
                   "--seed", "0", "--log", str(tmp_path / "x.jsonl")])
        assert rc == 2


class TestEvalAndExplain:
    @pytest.fixture()
    def log_file(self, box_file, targets_file, config_file, tmp_path, capsys):
        log = str(tmp_path / "run.jsonl")
        main(["run", "--world", box_file, "--targets", targets_file,
              "--seed", "3", "--log", log, "--config", config_file,
              "--start", "2", "2", "0"])
        capsys.readouterr()
        return log

    def test_eval_summarizes_log(self, log_file, capsys):
        assert main(["eval", "--log", log_file]) == 0
        out = capsys.readouterr().out
        assert "decisions:" in out
        assert "agreement" in out

    def test_explain_replays_decisions(self, log_file, capsys):
        assert main(["explain", "--log", log_file]) == 0
        out = capsys.readouterr().out
        assert "why:" in out and "confidence:" in out

    def test_explain_single_cycle_with_alternative(self, log_file, capsys):
        assert main(["explain", "--log", log_file, "--cycle", "0",
                     "--alternative", "0"]) == 0
        out = capsys.readouterr().out
        # cycle indices restart per episode, so each episode contributes one
        assert out.count("[cycle 0]") >= 1
        assert "[cycle 1]" not in out

    def test_explain_unknown_cycle_fails(self, log_file, capsys):
        assert main(["explain", "--log", log_file, "--cycle", "99999"]) == 1

    def test_eval_missing_log(self, capsys):
        assert main(["eval", "--log", "/nope.jsonl"]) == 2


def test_office_world_ships_with_repo():
    rc = main(["eval", "--log", OFFICE_WORLD])  # wrong format: clean error
    assert rc == 2
