import math

import pytest
from pydantic import ValidationError

from schema import (
    BeamSplitterSpec,
    GridSpec,
    NetworkSpec,
    RunConfig,
    SweepResult,
    TargetKind,
    VerifyCheck,
    VerifyReport,
)
from schema.models import Backend


def test_splitter_aliases() -> None:
    spec = BeamSplitterSpec.model_validate({"a": 1, "b": 3, "theta": 0.5})
    assert (spec.mode_a, spec.mode_b) == (1, 3)
    assert BeamSplitterSpec(mode_a=1, mode_b=3, theta=0.5) == spec


@pytest.mark.parametrize(
    "payload",
    [
        {"a": 2, "b": 2, "theta": 0.1},
        {"a": 3, "b": 1, "theta": 0.1},
        {"a": 0, "b": 1, "theta": 0.1},
        {"a": 1, "b": 2, "theta": math.nan},
        {"a": 1, "b": 2, "theta": math.inf},
    ],
)
def test_splitter_rejects(payload: dict) -> None:
    with pytest.raises(ValidationError):
        BeamSplitterSpec.model_validate(payload)


def test_chain_network() -> None:
    network = NetworkSpec.chain(4, 0.3)
    assert [(s.mode_a, s.mode_b) for s in network.splitters] == [(1, 2), (2, 3), (3, 4)]
    assert all(s.theta == 0.3 for s in network.splitters)
    assert network.is_chain()
    assert NetworkSpec.chain(1, 0.3).splitters == ()


def test_network_from_json() -> None:
    raw = '{"modes": 3, "splitters": [{"a": 2, "b": 3, "theta": 0.2}, {"a": 1, "b": 2, "theta": 0.4}]}'
    network = NetworkSpec.model_validate_json(raw)
    assert network.m == 3
    assert not network.is_chain()
    retuned = network.with_theta(1.0)
    assert [s.theta for s in retuned.splitters] == [1.0, 1.0]
    assert [(s.mode_a, s.mode_b) for s in retuned.splitters] == [(2, 3), (1, 2)]


def test_network_splitter_out_of_range() -> None:
    with pytest.raises(ValidationError, match="exceeds"):
        NetworkSpec(m=2, splitters=(BeamSplitterSpec(mode_a=2, mode_b=3, theta=0.0),))


def test_grid_parse() -> None:
    grid = GridSpec.parse("0:1:5")
    assert grid.values().tolist() == [0.0, 0.25, 0.5, 0.75, 1.0]
    degrees = GridSpec.parse("0:180:3", degrees=True)
    assert degrees.hi == pytest.approx(math.pi)


@pytest.mark.parametrize("text", ["0:1", "1:0:5", "0:1:1", "a:1:5", "0:0:5"])
def test_grid_rejects(text: str) -> None:
    with pytest.raises(ValueError):
        GridSpec.parse(text)


def sweep_payload(**overrides) -> dict:
    payload = {
        "m": 3,
        "n": 2,
        "keep": (1, 2),
        "network_kind": "chain",
        "backend": Backend.PERMANENT,
        "noon_photons": 2,
        "grid": [0.0, 0.5, 1.0],
        "columns": {TargetKind.PSI_PLUS: [0.3, 0.2, 0.1]},
    }
    payload.update(overrides)
    return payload


def test_sweep_result_targets() -> None:
    result = SweepResult(**sweep_payload())
    assert result.targets == [TargetKind.PSI_PLUS]
    assert result.extrema == {}


@pytest.mark.parametrize(
    "overrides",
    [
        {"grid": [0.0, 0.0, 1.0]},
        {"grid": [0.0]},
        {"columns": {TargetKind.PSI_PLUS: [0.3, 0.2]}},
        {"columns": {TargetKind.PSI_PLUS: [0.3, 1.5, 0.1]}},
        {"columns": {TargetKind.PSI_PLUS: [0.3, -0.1, 0.1]}},
    ],
)
def test_sweep_result_rejects(overrides: dict) -> None:
    with pytest.raises(ValidationError):
        SweepResult(**sweep_payload(**overrides))


def test_run_config_checks() -> None:
    assert RunConfig(modes=1, photons=3).keep == (1, 2)
    with pytest.raises(ValidationError, match="Kept ports"):
        RunConfig(modes=3, photons=2, keep=(2, 2))
    with pytest.raises(ValidationError, match="Kept ports"):
        RunConfig(modes=3, photons=2, keep=(1, 4))
    with pytest.raises(ValidationError, match="entries"):
        RunConfig(modes=3, photons=2, input_state=(1, 1))
    with pytest.raises(ValidationError, match="negative"):
        RunConfig(modes=2, photons=0, input_state=(1, -1))


def test_effective_noon_photons() -> None:
    assert RunConfig(modes=3, photons=2).effective_noon_photons == 2
    assert RunConfig(modes=3, photons=0).effective_noon_photons == 1
    assert RunConfig(modes=3, photons=2, noon_photons=4).effective_noon_photons == 4


def test_verify_report_passed() -> None:
    ok = VerifyCheck(name="a", max_deviation=0.0, tolerance=1e-10, passed=True)
    bad = VerifyCheck(name="b", max_deviation=1.0, tolerance=1e-10, passed=False)
    assert VerifyReport(m=3, n=2, seed=0, thetas=[0.1], checks=[ok]).passed
    report = VerifyReport(m=3, n=2, seed=0, thetas=[0.1], checks=[ok, bad])
    assert not report.passed
    assert '"passed":false' in report.model_dump_json()


def test_target_columns() -> None:
    assert [kind.column for kind in TargetKind] == [
        "p_psi_plus",
        "p_psi_minus",
        "p_phi_plus",
        "p_phi_minus",
        "p_noon_plus",
        "p_noon_minus",
    ]
    assert TargetKind("noon-").is_noon and TargetKind("noon-").sign == -1
    assert not TargetKind.PHI_PLUS.is_noon and TargetKind.PHI_PLUS.sign == 1
