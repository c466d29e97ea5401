"""
Theta sweeps of target-state probabilities and extremum refinement.
"""

import logging
from collections.abc import Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from functools import partial
from itertools import combinations
from pathlib import Path
from typing import TextIO

import numpy as np
import pandas as pd
from scipy.optimize import minimize_scalar

from core.settings import settings
from optics.lift import evolve_network
from optics.states import mixed_input, partial_trace, probability, target_state
from schema import (
    Backend,
    Extremum,
    ExtremumKind,
    GridSpec,
    NetworkSpec,
    SweepResult,
    TargetKind,
)

logger = logging.getLogger(__name__)

# Neighbouring samples closer than this count as equal
PLATEAU_TOLERANCE = 1e-13


def default_grid() -> GridSpec:
    return GridSpec(lo=settings.GRID_LO, hi=settings.GRID_HI, count=settings.GRID_POINTS)


def _network_at(m: int, template: NetworkSpec | None, theta: float) -> NetworkSpec:
    if template is None:
        return NetworkSpec.chain(m, theta)
    return template.with_theta(theta)


def _ordered_targets(targets: Iterable[TargetKind]) -> list[TargetKind]:
    wanted = set(targets)
    if not wanted:
        raise ValueError("At least one target state is required")
    return [kind for kind in TargetKind if kind in wanted]


def evaluate_point(
    m: int,
    n: int,
    keep: tuple[int, int],
    theta: float,
    targets: Sequence[TargetKind],
    *,
    backend: Backend | None = None,
    network: NetworkSpec | None = None,
    noon_photons: int | None = None,
) -> dict[TargetKind, float]:
    """Evolve the mixed input at one angle, reduce onto `keep` and score each target."""
    rho = evolve_network(mixed_input(m, n), _network_at(m, network, theta), backend)
    reduced = partial_trace(rho, keep)
    noon = noon_photons or max(n, 1)
    values = {kind: probability(reduced, target_state(kind, noon)) for kind in targets}
    logger.debug(f"theta={theta:.6f} {values}")
    return values


def sweep_theta(
    m: int,
    n: int,
    keep: tuple[int, int],
    targets: Iterable[TargetKind],
    grid: GridSpec | None = None,
    *,
    backend: Backend | None = None,
    network: NetworkSpec | None = None,
    noon_photons: int | None = None,
) -> SweepResult:
    kinds = _ordered_targets(targets)
    grid = grid or default_grid()
    backend = backend or settings.DEFAULT_BACKEND
    if network is not None and network.m != m:
        raise ValueError(f"Network on {network.m} modes does not match m={m}")
    noon = noon_photons or max(n, 1)
    # fail on bad (m, n, keep) before fanning out
    partial_trace(mixed_input(m, n), keep)

    thetas = grid.values()
    evaluate = partial(
        _evaluate_at, m, n, keep, kinds, backend=backend, network=network, noon_photons=noon
    )
    if settings.SWEEP_WORKERS > 1:
        with ThreadPoolExecutor(max_workers=settings.SWEEP_WORKERS) as pool:
            rows = list(pool.map(evaluate, thetas))
    else:
        rows = [evaluate(theta) for theta in thetas]
    logger.info(f"Swept m={m} n={n} keep={keep} over {len(thetas)} points with {backend}")

    return SweepResult(
        m=m,
        n=n,
        keep=keep,
        network_kind="chain" if network is None or network.is_chain() else "custom",
        network=network,
        backend=backend,
        noon_photons=noon,
        grid=thetas.tolist(),
        columns={kind: [row[kind] for row in rows] for kind in kinds},
    )


def _evaluate_at(
    m: int,
    n: int,
    keep: tuple[int, int],
    kinds: Sequence[TargetKind],
    theta: float,
    **kwargs,
) -> dict[TargetKind, float]:
    return evaluate_point(m, n, keep, float(theta), kinds, **kwargs)


def _refine(evaluate, lo: float, mid: float, hi: float, kind: ExtremumKind) -> Extremum:
    sign = -1.0 if kind == ExtremumKind.MAX else 1.0
    width = settings.REFINE_WIDTH
    # golden stops once the bracket is below xtol * (|x1| + |x2|)
    xtol = width / (2 * max(abs(mid), width))
    result = minimize_scalar(
        lambda x: sign * evaluate(x),
        bracket=(lo, mid, hi),
        method="golden",
        options={"xtol": xtol, "maxiter": 200},
    )
    theta_star = float(result.x)
    return Extremum(theta_star=theta_star, value=evaluate(theta_star), kind=kind, width=width)


def find_extrema(result: SweepResult, target: TargetKind) -> list[Extremum]:
    """Refine every strict interior local extremum of one column by golden-section search."""
    if target not in result.columns:
        raise KeyError(f"Sweep has no column for {target}")
    values = np.asarray(result.columns[target])
    grid = result.grid
    if np.ptp(values) <= 1e-12:
        logger.warning(f"Column {target.column} is constant; no extrema reported")
        return []

    def evaluate(theta: float) -> float:
        return evaluate_point(
            result.m,
            result.n,
            result.keep,
            theta,
            [target],
            backend=result.backend,
            network=result.network,
            noon_photons=result.noon_photons,
        )[target]

    found: list[Extremum] = []
    for i in range(1, len(values) - 1):
        left, here = values[i - 1], values[i]
        j = i + 1
        # two equal samples straddling the extremum form one peak or valley
        if abs(values[j] - here) <= PLATEAU_TOLERANCE and j + 1 < len(values):
            j += 1
        right = values[j]
        if here > left and here > right:
            found.append(_refine(evaluate, grid[i - 1], grid[i], grid[j], ExtremumKind.MAX))
        elif here < left and here < right:
            found.append(_refine(evaluate, grid[i - 1], grid[i], grid[j], ExtremumKind.MIN))

    extrema: list[Extremum] = []
    for ext in sorted(found, key=lambda e: e.theta_star):
        duplicate = any(
            e.kind == ext.kind and abs(e.theta_star - ext.theta_star) < settings.DEDUP_WINDOW
            for e in extrema
        )
        if not duplicate:
            extrema.append(ext)
    return extrema


def with_extrema(result: SweepResult) -> SweepResult:
    return result.model_copy(
        update={"extrema": {kind: find_extrema(result, kind) for kind in result.targets}}
    )


def sweep_port_pairs(
    m: int,
    n: int,
    targets: Iterable[TargetKind],
    grid: GridSpec | None = None,
    **kwargs,
) -> dict[tuple[int, int], SweepResult]:
    """One sweep per port pair a < b."""
    kinds = list(targets)
    return {
        pair: sweep_theta(m, n, pair, kinds, grid, **kwargs)
        for pair in combinations(range(1, m + 1), 2)
    }


def sweep_configs(
    configs: Iterable[tuple[int, int]],
    keep: tuple[int, int],
    targets: Iterable[TargetKind],
    grid: GridSpec | None = None,
    **kwargs,
) -> list[SweepResult]:
    """The same sweep for several (m, n) inputs, for overlaying curves."""
    kinds = list(targets)
    return [sweep_theta(m, n, keep, kinds, grid, **kwargs) for m, n in configs]


def to_frame(result: SweepResult) -> pd.DataFrame:
    data = {"theta": result.grid}
    data.update({kind.column: result.columns[kind] for kind in result.targets})
    return pd.DataFrame(data)


def write_csv(result: SweepResult, target: Path | TextIO) -> None:
    """Bit-stable CSV: 17 significant digits, LF line endings."""
    to_frame(result).to_csv(target, index=False, float_format="%.17g", lineterminator="\n")


def write_json(result: SweepResult, target: Path | TextIO) -> None:
    text = result.model_dump_json(indent=2, by_alias=True) + "\n"
    if isinstance(target, Path):
        target.write_text(text, encoding="utf-8")
    else:
        target.write(text)
