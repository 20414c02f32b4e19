"""Launch-power and fiber-split sweeps over a fixed link.

The split sweep answers the deployment question "given a span length budget
and two fiber types, how much of the span should be the premium fiber":
it slides the boundary between a leading fiber (placed at the span input,
where the signal power and therefore the nonlinear distortion is highest)
and a trailing fiber, re-deriving the whole performance stack per point.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, List, Optional, Sequence

from .engine import (
    Coherent,
    GnVariant,
    PerformanceCoeffs,
    ase_coefficient,
    nl_coefficient,
    optimal_power,
    osnr_eff,
    q_factor,
)
from .link import FiberSegment, SpanPlan, SystemConfig
from .quadrature import QuadratureSettings

__all__ = [
    "PowerSweepRow",
    "SplitSweepRow",
    "sweep_power",
    "sweep_split",
    "optimal_split",
    "span_with_split",
]


@dataclass(frozen=True)
class PowerSweepRow:
    power: float      # W per channel
    osnr: float       # linear
    q_db: float


@dataclass(frozen=True)
class SplitSweepRow:
    first_length: float   # m of leading fiber in the span
    split_ratio: float    # first_length / span length
    gamma_nl: float       # 1/W^2
    ase: float            # W
    mpi: float            # dimensionless
    p_opt: float          # W
    osnr_opt: float       # linear
    q_opt_db: float


def sweep_power(
    span: SpanPlan,
    sys: SystemConfig,
    powers: Sequence[float],
    variant: GnVariant = Coherent(),
    settings: QuadratureSettings = QuadratureSettings(),
) -> List[PowerSweepRow]:
    """Effective OSNR and Q over a launch-power grid (W per channel).

    The noise coefficients are derived once and reused for every power.
    """
    coeffs = PerformanceCoeffs(
        ase=ase_coefficient(span, sys),
        mpi=(1.0 - sys.mpi_compensation) * sys.mpi_coeff,
        nl=nl_coefficient(span, sys, variant, settings),
    )
    rows = []
    for p in powers:
        osnr = osnr_eff(p, coeffs)
        rows.append(PowerSweepRow(power=p, osnr=osnr, q_db=q_factor(osnr, sys)))
    return rows


def span_with_split(
    leading: FiberSegment,
    trailing: FiberSegment,
    span_length: float,
    first_length: float,
) -> SpanPlan:
    """Two-segment span with `first_length` of the leading fiber.

    Degenerate splits (0 or the full span) collapse to a single segment.
    """
    if not 0.0 <= first_length <= span_length:
        raise ValueError("first_length must lie in [0, span_length]")
    segments = []
    if first_length > 0.0:
        segments.append(replace(leading, length=first_length))
    if span_length - first_length > 0.0:
        segments.append(replace(trailing, length=span_length - first_length))
    return SpanPlan(segments=tuple(segments))


def sweep_split(
    leading: FiberSegment,
    trailing: FiberSegment,
    span_length: float,
    sys: SystemConfig,
    step: float,
    variant: GnVariant = Coherent(),
    settings: QuadratureSettings = QuadratureSettings(),
    mpi_model: Optional[Callable[[float], float]] = None,
) -> List[SplitSweepRow]:
    """Sweep the leading-fiber length from 0 to the full span.

    `step` must divide `span_length` to within 1 part in 1e9 so the sweep
    lands exactly on the endpoints.  `mpi_model`, when given, maps the
    leading-fiber length in m to the (uncompensated) MPI coefficient of that
    row, overriding the constant value from `sys`; compensation from `sys`
    still applies.  Each row re-derives the noise coefficients and evaluates
    the link at its own optimal launch power.
    """
    if not span_length > 0.0:
        raise ValueError("span_length must be > 0")
    if not 0.0 < step <= span_length:
        raise ValueError("step must lie in (0, span_length]")
    n_steps = span_length / step
    if abs(n_steps - round(n_steps)) > 1e-9 * max(1.0, n_steps):
        raise ValueError("step must divide span_length")
    n_steps = int(round(n_steps))

    rows = []
    for i in range(n_steps + 1):
        first = span_length * i / n_steps
        span = span_with_split(leading, trailing, span_length, first)
        row_sys = sys if mpi_model is None else replace(sys, mpi_coeff=mpi_model(first))
        coeffs = PerformanceCoeffs(
            ase=ase_coefficient(span, row_sys),
            mpi=(1.0 - row_sys.mpi_compensation) * row_sys.mpi_coeff,
            nl=nl_coefficient(span, row_sys, variant, settings),
        )
        p_opt = optimal_power(coeffs)
        osnr = osnr_eff(p_opt, coeffs)
        rows.append(SplitSweepRow(
            first_length=first,
            split_ratio=first / span_length,
            gamma_nl=coeffs.nl,
            ase=coeffs.ase,
            mpi=coeffs.mpi,
            p_opt=p_opt,
            osnr_opt=osnr,
            q_opt_db=q_factor(osnr, row_sys),
        ))
    return rows


def optimal_split(rows: Sequence[SplitSweepRow]) -> SplitSweepRow:
    """Row with the highest optimal-power Q; ties go to the shorter
    leading-fiber length."""
    if not rows:
        raise ValueError("empty sweep")
    best = rows[0]
    for row in rows[1:]:
        if row.q_opt_db > best.q_opt_db or (
                row.q_opt_db == best.q_opt_db and row.first_length < best.first_length):
            best = row
    return best
