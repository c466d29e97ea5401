import argparse
import logging
import math
import sys
from collections.abc import Sequence
from pathlib import Path

import numpy as np
import pandas as pd

from core.settings import settings
from optics.fock import enumerate_basis, hardcore_vectors, is_hardcore
from optics.lift import basis_state, evolve_network, lift_unitary, propagator, transition_amplitude
from optics.mesh import PRUNE_THRESHOLD, closed_form_column, compose_chain, unitarity_error
from optics.states import mixed_input, partial_trace, probability, sector_leakage, target_state
from optics.sweep import (
    default_grid,
    sweep_port_pairs,
    sweep_theta,
    with_extrema,
    write_csv,
    write_json,
)
from optics.symop import general_output_density, general_output_state, zero_channel_sets
from schema import (
    AmplitudeEntry,
    Backend,
    BasisListing,
    EvolveReport,
    GridSpec,
    NetworkSpec,
    OutputFormat,
    RunConfig,
    SweepResult,
    TargetKind,
    VerifyCheck,
    VerifyReport,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_VERIFY_FAILED = 2


def _parse_ints(text: str, what: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise ValueError(f"{what} must be comma-separated integers, got {text!r}") from None


def _parse_targets(text: str) -> list[TargetKind]:
    kinds = []
    for part in text.split(","):
        name = part.strip().lower()
        try:
            kinds.append(TargetKind(name))
        except ValueError:
            valid = ", ".join(kind.value for kind in TargetKind)
            raise ValueError(f"Unknown target {name!r}; choose from {valid}") from None
    return kinds


def load_network(path: Path) -> NetworkSpec:
    return NetworkSpec.model_validate_json(path.read_text(encoding="utf-8"))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-m", "--modes", type=int, required=True, help="Number of modes.")
    common.add_argument("-n", "--photons", type=int, help="Number of photons.")
    common.add_argument("--theta", help="Shared splitter angle (radians unless --degrees).")
    common.add_argument("--grid", help="Theta grid lo:hi:count.")
    common.add_argument("--degrees", action="store_true", help="Read angles in degrees.")
    common.add_argument("--keep", default="1,2", help="Kept output ports a,b (default: 1,2).")
    common.add_argument(
        "--targets", "--target", default="psi+", help="Comma-separated targets, e.g. psi+,noon-."
    )
    common.add_argument("--noon-n", type=int, help="NOON photon number (default: n).")
    common.add_argument(
        "--backend",
        choices=[b.value for b in Backend],
        help=f"Lifting backend (default: {settings.DEFAULT_BACKEND}).",
    )
    common.add_argument("--network", type=Path, help="JSON network file.")
    common.add_argument("--out", type=Path, help="Output file (default: stdout).")
    common.add_argument(
        "--format",
        choices=[f.value for f in OutputFormat],
        default=OutputFormat.CSV.value,
        help="Sweep table format; json also switches the other commands to JSON output.",
    )
    common.add_argument("--seed", type=int, help=f"Seed for verify (default: {settings.SEED}).")

    parser = argparse.ArgumentParser(
        prog="fockmix",
        description="Mixed multi-photon states through beam-splitter chains.",
    )
    commands = parser.add_subparsers(dest="command", required=True)
    commands.add_parser("basis", parents=[common], help="List the Fock basis.")
    evolve = commands.add_parser("evolve", parents=[common], help="Evolve at a single angle.")
    evolve.add_argument("--input", help="Occupation vector i1,i2,... to evolve instead of the mix.")
    sweep = commands.add_parser("sweep", parents=[common], help="Sweep theta and refine extrema.")
    sweep.add_argument("--pairs", choices=["all"], help="Sweep every port pair a < b.")
    commands.add_parser("verify", parents=[common], help="Cross-check the lifting backends.")
    return parser


def build_config(args: argparse.Namespace) -> RunConfig:
    input_state = _parse_ints(args.input, "--input") if getattr(args, "input", None) else None
    photons = args.photons
    if photons is None:
        if input_state is None:
            raise ValueError("--photons is required")
        photons = sum(input_state)
    elif input_state is not None and sum(input_state) != photons:
        raise ValueError(f"Input state {input_state} does not hold {photons} photons")

    theta = None
    if args.theta is not None:
        theta = float(args.theta)
        if args.degrees:
            theta = math.radians(theta)
    keep = _parse_ints(args.keep, "--keep")
    if len(keep) != 2:
        raise ValueError(f"--keep needs exactly two ports, got {args.keep!r}")

    return RunConfig(
        modes=args.modes,
        photons=photons,
        theta=theta,
        grid=GridSpec.parse(args.grid, args.degrees) if args.grid else None,
        keep=keep,
        targets=_parse_targets(args.targets),
        noon_photons=args.noon_n,
        backend=Backend(args.backend) if args.backend else settings.DEFAULT_BACKEND,
        network_path=args.network,
        input_state=input_state,
        all_pairs=getattr(args, "pairs", None) == "all",
        out=args.out,
        format=OutputFormat(args.format),
        seed=settings.SEED if args.seed is None else args.seed,
    )


def _network_template(config: RunConfig) -> NetworkSpec | None:
    if config.network_path is None:
        return None
    network = load_network(config.network_path)
    if network.m != config.modes:
        raise ValueError(f"Network file describes {network.m} modes, expected {config.modes}")
    return network


def cmd_basis(config: RunConfig) -> BasisListing:
    basis = enumerate_basis(config.modes, config.photons)
    return BasisListing(
        m=basis.m,
        n=basis.n,
        size=len(basis),
        states=list(basis.states),
        hardcore=[is_hardcore(occ) for occ in basis.states],
    )


def cmd_evolve(config: RunConfig) -> EvolveReport:
    if config.grid is not None:
        raise ValueError("evolve takes a single --theta, not --grid")
    network = _network_template(config)
    if network is None:
        if config.theta is None:
            raise ValueError("evolve needs --theta")
        network = NetworkSpec.chain(config.modes, config.theta)
    elif config.theta is not None:
        network = network.with_theta(config.theta)

    header = {
        "m": config.modes,
        "n": config.photons,
        "theta": config.theta,
        "backend": config.backend,
    }
    if config.input_state is not None:
        basis = enumerate_basis(config.modes, config.photons)
        out = evolve_network(basis_state(basis, config.input_state), network, config.backend)
        amplitudes = [
            AmplitudeEntry(state=occ, real=amp.real, imag=amp.imag)
            for occ, amp in zip(basis.states, out.amplitudes)
            if abs(amp) > PRUNE_THRESHOLD
        ]
        return EvolveReport(**header, input_state=config.input_state, amplitudes=amplitudes)

    rho = evolve_network(mixed_input(config.modes, config.photons), network, config.backend)
    reduced = partial_trace(rho, config.keep)
    noon = config.effective_noon_photons
    return EvolveReport(
        **header,
        keep=config.keep,
        reduced_basis=list(reduced.basis.states),
        reduced_real=reduced.matrix.real.tolist(),
        reduced_imag=reduced.matrix.imag.tolist(),
        probabilities={
            kind: probability(reduced, target_state(kind, noon)) for kind in config.targets
        },
    )


def cmd_sweep(config: RunConfig) -> list[SweepResult]:
    if config.theta is not None:
        raise ValueError("sweep takes --grid, not --theta")
    kwargs = {
        "backend": config.backend,
        "network": _network_template(config),
        "noon_photons": config.effective_noon_photons,
    }
    grid = config.grid or default_grid()
    if config.all_pairs:
        if config.out is None:
            raise ValueError("--pairs all writes one file per pair and needs --out")
        pairs = sweep_port_pairs(config.modes, config.photons, config.targets, grid, **kwargs)
        results = list(pairs.values())
    else:
        results = [
            sweep_theta(config.modes, config.photons, config.keep, config.targets, grid, **kwargs)
        ]
    return [with_extrema(result) for result in results]


def _max_abs(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(a - b), initial=0.0))


def _worked_example_deviation(theta: float, backend: Backend) -> float:
    """|011> coefficient of the transformed |110> for three modes and two photons."""
    basis = enumerate_basis(3, 2)
    out = evolve_network(basis_state(basis, (1, 1, 0)), NetworkSpec.chain(3, theta), backend)
    expected = -math.sin(2 * theta) ** 2 / 2
    return abs(out.amplitude((0, 1, 1)) - expected)


def cmd_verify(config: RunConfig) -> VerifyReport:
    if config.network_path is not None:
        raise ValueError("verify checks the default chain and takes no --network")
    m, n = config.modes, config.photons
    rng = np.random.default_rng(config.seed)
    thetas = rng.uniform(0.0, math.tau, settings.VERIFY_SAMPLES)
    accept, build = settings.ACCEPT_TOLERANCE, settings.BUILD_TOLERANCE
    basis = enumerate_basis(m, n)
    inputs = [basis.index[occ] for occ in hardcore_vectors(m, n)]

    deviations: dict[str, list[float]] = {}
    tolerances: dict[str, float] = {}

    def record(name: str, value: float, tolerance: float) -> None:
        deviations.setdefault(name, []).append(value)
        tolerances[name] = tolerance

    for theta in thetas:
        network = NetworkSpec.chain(m, float(theta))
        T = compose_chain(network)
        closed = np.array([closed_form_column(m, k, theta) for k in range(1, m + 1)])
        record("closed_form_columns", _max_abs(closed, T), build)
        record("transfer_unitarity", unitarity_error(T), build)
        record("lifted_unitarity", lift_unitary(T, basis).unitarity_error(), accept)

        U = propagator(network, basis, Backend.PERMANENT, inputs)
        record(
            "sequential_vs_permanent",
            _max_abs(propagator(network, basis, Backend.SEQUENTIAL, inputs), U),
            accept,
        )
        record(
            "symbolic_vs_permanent",
            _max_abs(propagator(network, basis, Backend.SYMBOLIC, inputs), U),
            accept,
        )
        first = basis.states[inputs[0]]
        spot = np.array([transition_amplitude(T, first, out) for out in basis.states])
        record("transition_amplitude", _max_abs(spot, U[:, 0]), accept)

        for channels in zero_channel_sets(m, n):
            occ = tuple(0 if k + 1 in channels else 1 for k in range(m))
            column = U[:, inputs.index(basis.index[occ])]
            state = general_output_state(m, n, channels, float(theta))
            record("general_output_states", _max_abs(state.amplitudes, column), accept)

        rho = evolve_network(mixed_input(m, n), network, Backend.PERMANENT)
        general = general_output_density(m, n, float(theta))
        record("general_output_density", _max_abs(general.matrix, rho.matrix), accept)
        hermiticity, trace_error, min_eigenvalue = rho.checks()
        record("density_hermiticity", hermiticity, build)
        record("density_trace", trace_error, accept)
        record("density_positivity", max(0.0, -min_eigenvalue), accept)
        if m >= 2:
            record("reduced_block_diagonal", sector_leakage(partial_trace(rho, (1, 2))), build)

        if (m, n) == (3, 2):
            deviation = _worked_example_deviation(float(theta), config.backend)
            record("worked_example_011", deviation, build)

    if "worked_example_011" in deviations:
        logger.warning(
            "The |011> coefficient of the transformed |110> is -sin^2(2 theta)/2; "
            "the printed expansion of this term carries the opposite sign"
        )

    checks = [
        VerifyCheck(
            name=name,
            max_deviation=max(values),
            tolerance=tolerances[name],
            passed=max(values) <= tolerances[name],
        )
        for name, values in deviations.items()
    ]
    logger.info(f"Verified m={m} n={n} over {len(thetas)} angles")
    return VerifyReport(m=m, n=n, seed=config.seed, thetas=thetas.tolist(), checks=checks)


def render_basis(listing: BasisListing) -> str:
    lines = [f"m={listing.m} n={listing.n} size={listing.size}"]
    for occ, hardcore in zip(listing.states, listing.hardcore):
        lines.append(f"{occ}{' *' if hardcore else ''}")
    lines.append(f"* hard-core ({sum(listing.hardcore)} of {listing.size})")
    return "\n".join(lines)


def render_evolve(report: EvolveReport) -> str:
    theta = "network file" if report.theta is None else f"{report.theta:.12g}"
    lines = [f"m={report.m} n={report.n} theta={theta} backend={report.backend}"]
    if report.input_state is not None:
        lines.append(f"U{report.input_state}:")
        lines.extend(f"  {a.state}  {complex(a.real, a.imag):.12f}" for a in report.amplitudes)
        return "\n".join(lines)

    labels = [str(occ) for occ in report.reduced_basis]
    matrix = np.array(report.reduced_real) + 1j * np.array(report.reduced_imag)
    lines.append(f"reduced density on ports {report.keep}:")
    lines.append(pd.DataFrame(np.round(matrix, 12), index=labels, columns=labels).to_string())
    lines.extend(f"{kind.column} {value:.12f}" for kind, value in report.probabilities.items())
    return "\n".join(lines)


def render_extrema(result: SweepResult) -> str:
    rows = [
        {
            "keep": f"{result.keep[0]},{result.keep[1]}",
            "target": kind.column,
            "kind": ext.kind.value,
            "theta_star": f"{ext.theta_star:.10f}",
            "value": f"{ext.value:.12f}",
        }
        for kind, extrema in result.extrema.items()
        for ext in extrema
    ]
    if not rows:
        return f"no extrema for keep {result.keep}"
    return pd.DataFrame(rows).to_string(index=False)


def render_verify(report: VerifyReport) -> str:
    lines = [f"verify m={report.m} n={report.n} seed={report.seed} over {len(report.thetas)} angles"]
    width = max((len(check.name) for check in report.checks), default=0)
    for check in report.checks:
        status = "PASS" if check.passed else "FAIL"
        lines.append(
            f"{check.name:<{width}}  max_dev={check.max_deviation:.3e}  "
            f"tol={check.tolerance:.0e}  {status}"
        )
    lines.append("PASS" if report.passed else "FAIL")
    return "\n".join(lines)


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        print(text)
    else:
        out.write_text(text + "\n", encoding="utf-8")


def _pair_path(out: Path, keep: tuple[int, int]) -> Path:
    return out.with_name(f"{out.stem}_{keep[0]}{keep[1]}{out.suffix}")


def _write_sweeps(results: list[SweepResult], config: RunConfig) -> None:
    for result in results:
        path = config.out
        if path is not None and config.all_pairs:
            path = _pair_path(path, result.keep)
        write = write_json if config.format == OutputFormat.JSON else write_csv
        write(result, sys.stdout if path is None else path)
        report = render_extrema(result)
        # keep stdout clean when the table itself goes there
        print(report, file=sys.stderr if path is None else sys.stdout)


def run(config: RunConfig, command: str) -> int:
    as_json = config.format == OutputFormat.JSON
    match command:
        case "basis":
            listing = cmd_basis(config)
            text = listing.model_dump_json(indent=2) if as_json else render_basis(listing)
            _emit(text, config.out)
        case "evolve":
            report = cmd_evolve(config)
            text = report.model_dump_json(indent=2) if as_json else render_evolve(report)
            _emit(text, config.out)
        case "sweep":
            _write_sweeps(cmd_sweep(config), config)
        case "verify":
            verdict = cmd_verify(config)
            text = verdict.model_dump_json(indent=2) if as_json else render_verify(verdict)
            _emit(text, config.out)
            if not verdict.passed:
                return EXIT_VERIFY_FAILED
        case _:
            raise ValueError(f"Unknown command: {command}")
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; that status is reserved for failed verification
        return EXIT_OK if exc.code in (0, None) else EXIT_INVALID

    try:
        return run(build_config(args), args.command)
    except (ValueError, KeyError, OSError) as exc:
        message = " ".join(str(exc).split())
        logger.debug(f"{args.command} failed", exc_info=True)
        print(f"error: {message}", file=sys.stderr)
        return EXIT_INVALID
