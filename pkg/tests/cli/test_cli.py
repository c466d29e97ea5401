import json
import math

import pytest

from cli import main
from core.settings import settings
from schema import EvolveReport, SweepResult, TargetKind, VerifyReport


def run(capsys: pytest.CaptureFixture[str], *argv: str) -> tuple[int, str, str]:
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_basis_listing(capsys) -> None:
    code, out, _ = run(capsys, "basis", "-m", "3", "-n", "2")
    assert code == 0
    assert "size=6" in out
    assert "hard-core (3 of 6)" in out
    assert "(1, 0, 1) *" in out
    assert "(2, 0, 0)\n" in out


def test_basis_two_modes(capsys) -> None:
    code, out, _ = run(capsys, "basis", "-m", "2", "-n", "2")
    assert code == 0
    assert out.splitlines()[1:4] == ["(2, 0)", "(1, 1) *", "(0, 2)"]


def test_basis_single_mode(capsys) -> None:
    code, out, _ = run(capsys, "basis", "-m", "1", "-n", "3", "--format", "json")
    assert code == 0
    listing = json.loads(out)
    assert listing["size"] == 1
    assert listing["states"] == [[3]]
    assert listing["hardcore"] == [False]


@pytest.mark.parametrize(
    ("args", "line"),
    [
        (["--theta", "0", "--target", "psi+"], "p_psi_plus 0.333333333333"),
        (["--theta", "0.7853981634", "--target", "psi+"], "p_psi_plus 0.125000000000"),
        (["--theta", "45", "--degrees", "--target", "psi-"], "p_psi_minus 0.125000000000"),
        (
            ["--theta", "0.7853981634", "--target", "noon+", "--noon-n", "2"],
            "p_noon_plus 0.270833333333",
        ),
    ],
)
def test_evolve_mixed_input(capsys, args: list[str], line: str) -> None:
    code, out, _ = run(capsys, "evolve", "-m", "3", "-n", "2", "--keep", "1,2", *args)
    assert code == 0
    assert line in out.splitlines()


def test_evolve_single_input_json(capsys) -> None:
    theta = 0.6
    code, out, _ = run(
        capsys, "evolve", "-m", "3", "--input", "1,1,0", "--theta", str(theta), "--format", "json"
    )
    assert code == 0
    report = EvolveReport.model_validate_json(out)
    assert report.n == 2
    amplitudes = {entry.state: complex(entry.real, entry.imag) for entry in report.amplitudes}
    assert amplitudes[(0, 1, 1)] == pytest.approx(-math.sin(2 * theta) ** 2 / 2)
    assert sum(abs(a) ** 2 for a in amplitudes.values()) == pytest.approx(1.0)


def test_evolve_network_file(capsys, tmp_path) -> None:
    path = tmp_path / "network.json"
    path.write_text(
        json.dumps(
            {
                "modes": 3,
                "splitters": [
                    {"a": 1, "b": 2, "theta": math.pi / 4},
                    {"a": 2, "b": 3, "theta": math.pi / 4},
                ],
            }
        )
    )
    argv = ["evolve", "-m", "3", "-n", "2", "--format", "json"]
    code, out, _ = run(capsys, *argv, "--network", str(path))
    assert code == 0
    report = EvolveReport.model_validate_json(out)
    assert report.theta is None
    assert report.probabilities[TargetKind.PSI_PLUS] == pytest.approx(1 / 8)


@pytest.mark.parametrize(
    "argv",
    [
        ["evolve", "-m", "3", "-n", "2", "--grid", "0:1:5"],
        ["evolve", "-m", "3", "-n", "2"],
        ["evolve", "-m", "3", "-n", "1", "--input", "1,1,0", "--theta", "0.1"],
        ["basis", "-m", "3"],
        ["basis", "-m", "0", "-n", "1"],
        ["evolve", "-m", "3", "-n", "2", "--theta", "0", "--keep", "1,1"],
        ["evolve", "-m", "3", "-n", "2", "--theta", "0", "--targets", "psi"],
        ["sweep", "-m", "3", "-n", "2", "--theta", "0.1"],
        ["sweep", "-m", "3", "-n", "2", "--grid", "1:0:5"],
        ["verify", "-m", "2", "-n", "3"],
        ["bogus"],
    ],
)
def test_invalid_configs_exit_one(capsys, argv: list[str]) -> None:
    code, _, _ = run(capsys, *argv)
    assert code == 1


def test_error_message_is_one_line(capsys) -> None:
    code, _, err = run(capsys, "evolve", "-m", "3", "-n", "2", "--grid", "0:1:5")
    assert code == 1
    assert err.startswith("error: ")
    assert err.count("\n") == 1


def test_help_exits_cleanly(capsys) -> None:
    assert main(["--help"]) == 0


def test_sweep_csv(capsys, tmp_path) -> None:
    out = tmp_path / "sweep.csv"
    targets = "psi+,psi-,phi+,phi-,noon+,noon-"
    code, stdout, _ = run(
        capsys, "sweep", "-m", "3", "-n", "2", "--keep", "1,2", "--targets", targets, "--out", str(out)
    )
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "theta,p_psi_plus,p_psi_minus,p_phi_plus,p_phi_minus,p_noon_plus,p_noon_minus"
    assert len(lines) == 1002
    assert "theta_star" in stdout
    assert "p_psi_plus" in stdout


def test_sweep_is_deterministic(capsys, tmp_path) -> None:
    first, second = tmp_path / "first.csv", tmp_path / "second.csv"
    for path in (first, second):
        argv = ["sweep", "-m", "3", "-n", "2", "--grid", "0:6.283185307179586:201"]
        code, _, _ = run(capsys, *argv, "--out", str(path))
        assert code == 0
    assert first.read_bytes() == second.read_bytes()


def test_sweep_json(capsys, tmp_path) -> None:
    out = tmp_path / "sweep.json"
    code, _, _ = run(
        capsys, "sweep", "-m", "3", "-n", "2", "--grid", "0:3.2:81", "--format", "json", "--out", str(out)
    )
    assert code == 0
    result = SweepResult.model_validate_json(out.read_text())
    assert result.keep == (1, 2)
    assert len(result.grid) == 81
    assert result.extrema[TargetKind.PSI_PLUS]


def test_sweep_all_pairs(capsys, tmp_path) -> None:
    out = tmp_path / "pairs.csv"
    argv = ["sweep", "-m", "3", "-n", "2", "--grid", "0:3.2:21", "--pairs", "all"]
    code, _, _ = run(capsys, *argv, "--out", str(out))
    assert code == 0
    assert sorted(p.name for p in tmp_path.iterdir()) == ["pairs_12.csv", "pairs_13.csv", "pairs_23.csv"]


def test_sweep_pairs_need_out(capsys) -> None:
    code, _, _ = run(capsys, "sweep", "-m", "3", "-n", "2", "--grid", "0:1:5", "--pairs", "all")
    assert code == 1


def test_sweep_to_stdout(capsys) -> None:
    code, out, err = run(capsys, "sweep", "-m", "3", "-n", "2", "--grid", "0:1:5")
    assert code == 0
    assert out.splitlines()[0] == "theta,p_psi_plus"
    assert len(out.splitlines()) == 6
    assert "extrema" in err or "theta_star" in err


def test_sweep_unwritable_output(capsys, tmp_path) -> None:
    out = tmp_path / "missing" / "sweep.csv"
    code, _, err = run(capsys, "sweep", "-m", "3", "-n", "2", "--grid", "0:1:5", "--out", str(out))
    assert code == 1
    assert err.startswith("error: ")


@pytest.mark.parametrize(("m", "n"), [(3, 2), (2, 0), (4, 2), (5, 5)])
def test_verify_passes(capsys, m: int, n: int) -> None:
    code, out, _ = run(capsys, "verify", "-m", str(m), "-n", str(n))
    assert code == 0
    assert out.splitlines()[-1] == "PASS"


def test_verify_json_report(capsys) -> None:
    code, out, _ = run(capsys, "verify", "-m", "3", "-n", "2", "--seed", "7", "--format", "json")
    assert code == 0
    report = VerifyReport.model_validate_json(out)
    assert report.passed
    assert report.seed == 7
    assert len(report.thetas) == settings.VERIFY_SAMPLES
    names = {check.name for check in report.checks}
    assert {"sequential_vs_permanent", "symbolic_vs_permanent", "closed_form_columns"} <= names
    assert "worked_example_011" in names


def test_verify_failure_exits_two(capsys, monkeypatch) -> None:
    monkeypatch.setattr(settings, "ACCEPT_TOLERANCE", -1.0)
    code, out, _ = run(capsys, "verify", "-m", "3", "-n", "2")
    assert code == 2
    assert out.splitlines()[-1] == "FAIL"


@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_sweep_stdout_matches_file(capsys, tmp_path, fmt: str) -> None:
    path = tmp_path / f"sweep.{fmt}"
    argv = ["sweep", "-m", "3", "-n", "2", "--grid", "0:2:9", "--format", fmt]
    code, _, _ = run(capsys, *argv, "--out", str(path))
    assert code == 0
    code, out, _ = run(capsys, *argv)
    assert code == 0
    assert out == path.read_text()
