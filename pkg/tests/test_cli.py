import subprocess
import sys

import pytest

from fluidmimo.cli import build_parser, main, read_config, resolve_options, spec_from_options

FAST = ["--samples", "30", "--eval-samples", "100", "--swarm-size", "4",
        "--pso-iterations", "3", "--max-outer", "2", "--trials", "3"]


def options(argv):
    args = build_parser().parse_args(argv)
    return resolve_options(args)


def test_subcommands_registered():
    parser = build_parser()
    for cmd in ["optimize", "spacing-curve", "sweep-snr", "sweep-aperture", "sweep-n", "convergence"]:
        assert parser.parse_args([cmd]).command == cmd
    assert parser.parse_args(["validate"]).paths == 5000


def test_defaults_per_subcommand():
    assert options(["sweep-n"])["n"] == [2, 3, 4, 5, 6, 7, 8]
    assert options(["sweep-n"])["aperture"] == [3.0]
    assert options(["optimize"])["snr_db"] == [30.0]


def test_config_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\nsnr-db = 5, 15\nsamples = 77\nsolver = sca  # inline\n")
    opts = options(["optimize", "--config", str(cfg), "--samples", "12"])
    assert opts["snr_db"] == [5.0, 15.0]
    assert opts["samples"] == 12
    assert opts["solver"] == "sca"
    assert opts["eval_samples"] == 1500


def test_read_config_errors(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("mystery = 1\n")
    assert main(["optimize", "--config", str(bad)]) == 2
    bad.write_text("samples = many\n")
    assert main(["optimize", "--config", str(bad)]) == 2
    bad.write_text("just text\n")
    with pytest.raises(Exception):
        read_config(bad)


def test_spacing_grid():
    spec = spec_from_options("spacing-curve", options(["spacing-curve"]))
    assert spec.spacings[0] == 0.1 and spec.spacings[-1] == 1.0
    assert len(spec.spacings) == 181


def test_default_schemes_follow_solver():
    spec = spec_from_options("optimize", options(["optimize", "--solver", "sca"]))
    assert spec.schemes == ("iid", "fpa", "ao_sca")


def test_optimize_writes_csv(tmp_path):
    out = tmp_path / "o.csv"
    code = main(["optimize", "--n", "2", "--aperture", "1", "--snr-db", "10",
                 "--schemes", "iid,fpa,ao_pso", "--out", str(out), *FAST])
    assert code == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 4 and lines[0].startswith("scenario,scheme,N,M")


def test_table_on_stdout(capsys):
    assert main(["optimize", "--n", "2", "--aperture", "1", "--schemes", "iid,fpa", *FAST]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0].split()[:3] == ["scheme", "N", "M"]
    assert "fpa" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["optimize", "--n", "6", "--aperture", "1.0"],
        ["optimize", "--schemes", "warp"],
        ["optimize", "--swarm-size", "0"],
        ["optimize", "--out", "/nonexistent-dir/x.csv", "--n", "2", "--schemes", "iid"],
    ],
)
def test_error_exit_code(argv, capsys):
    assert main(argv) == 2
    assert "error" in capsys.readouterr().err


def test_validate_exit_code(capsys):
    assert main(["validate", "--paths", "100", "--draws", "300", "--gradient-configs", "5"]) == 0
    assert capsys.readouterr().out.count("PASS") == 6


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "fluidmimo", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "spacing-curve" in proc.stdout
