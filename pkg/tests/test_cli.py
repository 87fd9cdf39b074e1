"""Command line surface: flags, config files, exit codes, output."""

import json

import pytest

import qloop.cli as cli
from qloop.cli import _load_config_file, main
from qloop.report import ConfigError, ResourceError


def test_run_subcommand_passes(capsys):
    assert main(["run", "--suite", "qcomb", "--N", "2"]) == 0
    out = capsys.readouterr().out
    assert "checks:" in out and "nonzero=0" in out


def test_bare_flags_imply_run(capsys):
    assert main(["--suite", "qcomb", "--N", "3", "--L", "2"]) == 0
    assert "suites=qcomb" in capsys.readouterr().out


def test_config_errors_exit_two(capsys):
    assert main(["--suite", "nope"]) == 2
    assert main(["--N", "1"]) == 2
    assert main(["--backend", "cyclic", "--suite", "lemmas"]) == 2
    assert main(["--ring", "exotic"]) == 2
    err = capsys.readouterr().err
    assert "config error" in err


def test_resource_error_exit_three(monkeypatch, capsys):
    def fake_run(config):
        raise ResourceError("too big")

    monkeypatch.setattr(cli, "run", fake_run)
    assert main(["--suite", "qcomb"]) == 3
    assert "resource error" in capsys.readouterr().err


def test_failing_checks_exit_one(monkeypatch, capsys):
    class FakeDoc:
        ok = False

        def summary_lines(self):
            return ["FAIL x"]

    monkeypatch.setattr(cli, "run", lambda config: FakeDoc())
    assert main(["--suite", "qcomb"]) == 1


def test_report_flag_writes_document(tmp_path, capsys):
    path = tmp_path / "report.json"
    assert main(["--suite", "qcomb", "--N", "2", "--report", str(path)]) == 0
    data = json.loads(path.read_text())
    assert data["config"]["suites"] == ["qcomb"]
    assert data["summary"]["nonzero"] == 0
    assert str(path) in capsys.readouterr().out


def test_config_file_with_flag_overrides(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        "# comment line\n"
        "backend = spin_half\n"
        "N = 2\n"
        "L = 3\n"
        "Q = 0, 1\n"
        "suite = qcomb, id1\n"
        "jobs = 2\n"
    )
    assert main(["--config", str(cfg), "--L", "4", "--suite", "qcomb"]) == 0
    out = capsys.readouterr().out
    assert "L=4" in out and "suites=qcomb" in out and "N=2" in out


def test_config_file_parsing_errors(tmp_path):
    bad_line = tmp_path / "a.cfg"
    bad_line.write_text("just words\n")
    with pytest.raises(ConfigError, match="key=value"):
        _load_config_file(str(bad_line))

    bad_key = tmp_path / "b.cfg"
    bad_key.write_text("mystery = 3\n")
    with pytest.raises(ConfigError, match="unknown config key"):
        _load_config_file(str(bad_key))

    bad_int = tmp_path / "c.cfg"
    bad_int.write_text("L = soon\n")
    with pytest.raises(ConfigError, match="c.cfg:1"):
        _load_config_file(str(bad_int))

    bad_bool = tmp_path / "d.cfg"
    bad_bool.write_text("rescale_audit = maybe\n")
    with pytest.raises(ConfigError, match="boolean"):
        _load_config_file(str(bad_bool))

    with pytest.raises(ConfigError, match="cannot read"):
        _load_config_file(str(tmp_path / "missing.cfg"))


def test_missing_config_file_exits_two(tmp_path, capsys):
    assert main(["--config", str(tmp_path / "none.cfg")]) == 2
    assert "cannot read" in capsys.readouterr().err


def test_env_cache_dir_default(tmp_path, monkeypatch):
    env_dir = tmp_path / "from_env"
    monkeypatch.setenv("QLOOP_CACHE_DIR", str(env_dir))
    assert main(["--suite", "barred", "--N", "2", "--L", "3"]) == 0
    assert env_dir.is_dir() and list(env_dir.iterdir())

    flag_dir = tmp_path / "from_flag"
    assert main(["--suite", "barred", "--N", "2", "--L", "3",
                 "--cache-dir", str(flag_dir)]) == 0
    assert flag_dir.is_dir()


def test_explain_subcommand(capsys):
    assert main(["explain", "id1"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("serre.ladder-wide")
    assert "regime:" in out

    assert main(["explain", "mulo"]) == 0
    assert capsys.readouterr().out.startswith("divpow.merge-binomial")

    assert main(["explain", "bogus"]) == 2
    assert "unknown check id" in capsys.readouterr().err

    assert main(["explain", "--list"]) == 0
    listing = capsys.readouterr().out.splitlines()
    assert "serre.three-term" in listing

    assert main(["explain"]) == 2


def test_no_arguments_prints_help(capsys):
    assert main([]) == 2
    assert "usage" in capsys.readouterr().out.lower()


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert "qloop" in capsys.readouterr().out
