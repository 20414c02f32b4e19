"""Log-weighted quadrature of the FWM integrand with certified truncation.

The nonlinear noise coefficient reduces to a single improper integral

    I = int_0^zeta_max  ln(zeta_max / zeta) * xi(zeta) dzeta,

whose integrand has a logarithmic singularity at the origin and a tail that
oscillates with period pi.  The evaluator splits the range into

* head  [0, delta]        closed Fejer antiderivatives absorb the log weight,
* body  [delta, mu]       composite Simpson on panels aligned to the pi grid,
* tail  [mu, zeta_max]    dropped once an analytic bound certifies that its
                          contribution is below the requested tolerance.

Panel contributions are combined with exact (Shewchuk) summation, so results
do not depend on evaluation order or on the number of worker threads.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, List, Optional, Tuple

import numpy as np

from .kernel import DEFAULT_POLE_WINDOW, fwm_efficiency, xi
from .link import DerivedSpan

__all__ = [
    "QuadratureSettings",
    "IntegralReport",
    "sine_integral",
    "delta_rule",
    "singular_head",
    "refined_singular_head",
    "integrate_body",
    "truncation_bound",
    "choose_truncation",
    "log_weighted_integral",
    "brute_force_gamma_integral",
    "panel_sum",
]


@dataclass(frozen=True)
class QuadratureSettings:
    """Tunables of the single-integral evaluator.

    Attributes
    ----------
    delta_safety : float
        Fraction of the head-validity radius 3*sqrt(3)/n_spans used as the
        head cut delta, in (0, 1].
    nodes_per_oscillation : int
        Simpson subintervals per span oscillation; each pi-length panel gets
        n_spans * nodes_per_oscillation subintervals.
    target_rel_truncation : float
        Relative tail tolerance epsilon_r for adaptive truncation.
    truncation_enabled : bool
        When False the body always runs to zeta_max.
    pole_window : float
        Passed through to the phased-array factor.
    workers : int
        Worker threads for panel evaluation; the result is bitwise identical
        for any value.
    """

    delta_safety: float = 0.1
    nodes_per_oscillation: int = 16
    target_rel_truncation: float = 1e-4
    truncation_enabled: bool = True
    pole_window: float = DEFAULT_POLE_WINDOW
    workers: int = 1

    def __post_init__(self) -> None:
        if not 0.0 < self.delta_safety <= 1.0:
            raise ValueError("delta_safety must lie in (0, 1]")
        if self.nodes_per_oscillation < 2:
            raise ValueError("nodes_per_oscillation must be >= 2")
        if not self.target_rel_truncation > 0.0:
            raise ValueError("target_rel_truncation must be > 0")
        if not self.pole_window > 0.0:
            raise ValueError("pole_window must be > 0")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


@dataclass(frozen=True)
class IntegralReport:
    """Result of the log-weighted integral with its error-control records.

    `value` is always the plain sum head + body; `tail_bound` is a certified
    upper bound (same units as `value`) on what truncation discarded, zero
    when the body ran to zeta_max.
    """

    value: float
    head: float
    body: float
    tail_bound: float
    delta: float
    panels_evaluated: int
    truncation_m: Optional[int]


# ---------------------------------------------------------------------------
# sine integral


def sine_integral(x: float) -> float:
    """Si(x) = int_0^x sin(t)/t dt to about 1e-14 absolute.

    Power series below x = 8; above that the auxiliary functions are
    evaluated through the continued fraction of the exponential integral
    E1(ix), using Si(x) = pi/2 + Im E1(ix).  Odd in x.
    """
    if x == 0.0:
        return 0.0
    if x < 0.0:
        return -sine_integral(-x)
    if x <= 8.0:
        return _si_series(x)
    return 0.5 * math.pi + _e1_imag_cf(x)


def _si_series(x: float) -> float:
    x2 = x * x
    term = x
    total = x
    n = 0
    while abs(term) > 1e-18:
        term *= -x2 * (2 * n + 1) / ((2 * n + 2) * (2 * n + 3) ** 2)
        total += term
        n += 1
        if n > 200:  # not reachable for x <= 8
            raise RuntimeError("sine integral series failed to converge")
    return total


def _e1_imag_cf(x: float) -> float:
    """Im E1(ix) for x > 0 via the modified Lentz continued fraction."""
    z = 1j * x
    tiny = 1e-300
    b = z + 1.0
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 400):
        a = -float(i * i)
        b = b + 2.0
        d = 1.0 / (a * d + b)
        c = b + a / c
        delta = c * d
        h = h * delta
        if abs(delta - 1.0) < 1e-16:
            return (h * np.exp(-z)).imag
    raise RuntimeError("continued fraction for the sine integral did not converge")


# ---------------------------------------------------------------------------
# head


def delta_rule(n_spans: int, zeta_max: float, settings: QuadratureSettings) -> float:
    """Head cut: delta = min(delta_safety * 3*sqrt(3)/n_spans, zeta_max/2).

    3*sqrt(3)/n_spans is the radius inside which the phased-array factor is
    still on its central lobe, so the head closed form stays accurate; the
    zeta_max/2 cap keeps a nonempty body for very narrow systems.
    """
    if n_spans < 1:
        raise ValueError("n_spans must be >= 1")
    if not zeta_max > 0.0:
        raise ValueError("zeta_max must be > 0")
    return min(settings.delta_safety * 3.0 * math.sqrt(3.0) / n_spans, 0.5 * zeta_max)


def _fejer_running_integral(x: float, n_spans: int) -> float:
    """int_0^x n_spans*phi(z) dz = x + sum_j (1/j - 1/N) sin(2 j x)."""
    total = x
    for j in range(1, n_spans):
        total += (1.0 / j - 1.0 / n_spans) * math.sin(2.0 * j * x)
    return total


def _fejer_log_moment(x: float, n_spans: int) -> float:
    """int_0^x ln(x/z) n_spans*phi(z) dz = x + sum_j (1/j - 1/N) Si(2 j x)."""
    total = x
    for j in range(1, n_spans):
        total += (1.0 / j - 1.0 / n_spans) * sine_integral(2.0 * j * x)
    return total


def singular_head(delta: float, d: DerivedSpan) -> float:
    """Closed-form estimate of the head integral int_0^delta ln(zeta_max/z) xi dz.

    Freezes the FWM efficiency at its zeta = 0 value (valid for delta well
    inside the efficiency's flat region) and integrates the log weight
    against the phased-array factor exactly via Fejer antiderivatives.
    """
    if not 0.0 < delta <= d.zeta_max:
        raise ValueError("delta must lie in (0, zeta_max]")
    eta0 = fwm_efficiency(0.0, d)
    n = d.n_spans
    return (eta0 / n) * (
        math.log(d.zeta_max / delta) * _fejer_running_integral(delta, n)
        + _fejer_log_moment(delta, n)
    )


def refined_singular_head(delta: float, d: DerivedSpan,
                          settings: QuadratureSettings) -> float:
    """Head estimate with the flat part of the weight integrated numerically.

    Splits ln(zeta_max/z) = ln(zeta_max/delta) + ln(delta/z); the first,
    constant part multiplies a plain Simpson integral of xi over [0, delta]
    (no frozen-efficiency error), while the singular remainder keeps the
    closed Fejer form.  This is the head the integral driver uses.
    """
    if not 0.0 < delta <= d.zeta_max:
        raise ValueError("delta must lie in (0, zeta_max]")
    spacing = math.pi / (d.n_spans * settings.nodes_per_oscillation)
    n_sub = max(16, 2 * int(math.ceil(delta / spacing / 2.0)))
    nodes = np.linspace(0.0, delta, n_sub + 1)
    mass = _simpson(xi(nodes, d, settings.pole_window), delta / n_sub)
    eta0 = fwm_efficiency(0.0, d)
    return math.log(d.zeta_max / delta) * mass \
        + (eta0 / d.n_spans) * _fejer_log_moment(delta, d.n_spans)


# ---------------------------------------------------------------------------
# body


def panel_sum(values: Iterable[float]) -> float:
    """Exactly rounded sum of panel contributions.

    Shewchuk summation makes the result independent of the order in which
    panels were evaluated, which keeps multi-worker runs bitwise equal to
    serial ones.
    """
    return math.fsum(values)


def _simpson(f_vals: np.ndarray, h: float) -> float:
    """Composite Simpson rule over equally spaced samples (even count)."""
    n = f_vals.shape[0] - 1
    if n < 2 or n % 2:
        raise ValueError("Simpson rule needs an even number of subintervals")
    w = np.ones(n + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return math.fsum((w * f_vals).tolist()) * h / 3.0


def _pi_panels(lower: float, upper: float) -> List[Tuple[float, float, Optional[int]]]:
    """Split [lower, upper] at multiples of pi, grading the singular end.

    Returns (a, b, k) triples where k is set when b == k*pi, i.e. when the
    panel closes a full oscillation period.  Below the first pi edge the
    log weight still varies on the scale of zeta itself, so that stretch is
    subdivided geometrically (each sub-panel about as long as its distance
    from the origin); uniform pi panels would otherwise lose four orders of
    accuracy right above the head cut.
    """
    panels: List[Tuple[float, float, Optional[int]]] = []
    first_edge = min(math.pi, upper) if lower < math.pi else None
    a = lower
    if first_edge is not None:
        # grading needs a positive anchor; integrands starting at zero are
        # smooth there and take the stretch as one panel
        while a > 0.0 and 2.0 * a < first_edge:
            panels.append((a, 2.0 * a, None))
            a = 2.0 * a
        if first_edge > a:
            panels.append((a, first_edge, 1 if first_edge == math.pi else None))
        a = first_edge
        if a >= upper:
            return panels
    k = int(math.floor(a / math.pi)) + 1
    while k * math.pi <= a:  # guard against floor landing on the edge itself
        k += 1
    while k * math.pi < upper:
        panels.append((a, k * math.pi, k))
        a = k * math.pi
        k += 1
    if upper > a:
        panels.append((a, upper, None))
    return panels


def _default_integrand(d: DerivedSpan, pole_window: float) -> Callable[[np.ndarray], np.ndarray]:
    def f(z: np.ndarray) -> np.ndarray:
        return np.log(d.zeta_max / z) * xi(z, d, pole_window)
    return f


def _panel_integral(panel: Tuple[float, float, Optional[int]],
                    f: Callable[[np.ndarray], np.ndarray],
                    sub_per_pi: int, n_floor: int) -> float:
    a, b, _ = panel
    n_sub = max(n_floor, 2 * int(math.ceil((b - a) / math.pi * sub_per_pi / 2.0)))
    nodes = np.linspace(a, b, n_sub + 1)
    return _simpson(np.asarray(f(nodes), dtype=float), (b - a) / n_sub)


def integrate_body(lower: float, upper: float, d: DerivedSpan,
                   settings: QuadratureSettings,
                   integrand: Optional[Callable[[np.ndarray], np.ndarray]] = None) -> float:
    """Composite-Simpson integral over [lower, upper] on pi-aligned panels.

    The default integrand is the log-weighted kernel ln(zeta_max/z) xi(z),
    which requires lower > 0; a custom `integrand` (used by tests and by the
    2-D cross-check) may integrate from zero.
    """
    if not upper > lower:
        raise ValueError("upper must exceed lower")
    if upper > d.zeta_max * (1.0 + 1e-12):
        raise ValueError("upper must not exceed zeta_max")
    if integrand is None:
        if not lower > 0.0:
            raise ValueError("the log-weighted integrand needs lower > 0")
        integrand = _default_integrand(d, settings.pole_window)
    elif lower < 0.0:
        raise ValueError("lower must be >= 0")

    panels = _pi_panels(lower, upper)
    sub_per_pi = d.n_spans * settings.nodes_per_oscillation
    n_floor = 2 * settings.nodes_per_oscillation
    if settings.workers > 1:
        with ThreadPoolExecutor(max_workers=settings.workers) as pool:
            vals = list(pool.map(
                lambda p: _panel_integral(p, integrand, sub_per_pi, n_floor), panels))
    else:
        vals = [_panel_integral(p, integrand, sub_per_pi, n_floor) for p in panels]
    return panel_sum(vals)


# ---------------------------------------------------------------------------
# tail bounds and truncation


def truncation_bound(m: int, d: DerivedSpan) -> Tuple[float, float]:
    """Certified bounds on the discarded tail past mu = (m+1)*pi.

    Returns (tight, loose) with tight <= loose, both bounding
    n_spans * int_mu^zeta_max ln(zeta_max/z) xi(z) dz from above:

        tight = Gamma^2 / sigma * arccot(m pi / sigma) * ln(zeta_max/(m pi))
        loose = Gamma^2 / (m pi) * ln(zeta_max/(m pi))

    where Gamma and sigma are the worst-case span strength and the slowest
    decay rate from :func:`hybridgn.link.derive_span`.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    mu = (m + 1) * math.pi
    if not mu < d.zeta_max:
        raise ValueError("truncation point (m+1)*pi must lie below zeta_max")
    g2 = d.gamma_bound * d.gamma_bound
    log_factor = math.log(d.zeta_max / (m * math.pi))
    tight = g2 / d.sigma * math.atan(d.sigma / (m * math.pi)) * log_factor
    loose = g2 / (m * math.pi) * log_factor
    return tight, loose


def choose_truncation(d: DerivedSpan, settings: QuadratureSettings,
                      running_estimate: float) -> Optional[int]:
    """Smallest m whose tight tail bound is below the relative target.

    `running_estimate` is the integral accumulated so far (head + body, same
    units as the integral); returns None when no admissible m exists, in
    which case the body must run to zeta_max.
    """
    if not running_estimate > 0.0:
        return None
    target = settings.target_rel_truncation * d.n_spans * running_estimate
    m = 1
    while (m + 1) * math.pi < d.zeta_max:
        tight, _ = truncation_bound(m, d)
        if tight <= target:
            return m
        m += 1
    return None


# ---------------------------------------------------------------------------
# driver


def log_weighted_integral(d: DerivedSpan, settings: QuadratureSettings) -> IntegralReport:
    """Evaluate I = int_0^zeta_max ln(zeta_max/z) xi(z) dz with error control.

    Head and body as documented on the module; when truncation is enabled the
    body stops at the first full period mu = (m+1)*pi at which the tight tail
    bound drops below target_rel_truncation relative to the running estimate.
    The returned report satisfies value = head + body exactly.
    """
    delta = delta_rule(d.n_spans, d.zeta_max, settings)
    head = refined_singular_head(delta, d, settings)

    integrand = _default_integrand(d, settings.pole_window)
    sub_per_pi = d.n_spans * settings.nodes_per_oscillation
    n_floor = 2 * settings.nodes_per_oscillation
    panels = _pi_panels(delta, d.zeta_max)

    values: List[float] = []
    truncation_m: Optional[int] = None
    tail_bound = 0.0
    chunk_size = 1 if settings.workers <= 1 else 8 * settings.workers
    pool = ThreadPoolExecutor(max_workers=settings.workers) if settings.workers > 1 else None
    try:
        idx = 0
        while idx < len(panels):
            chunk = panels[idx:idx + chunk_size]
            if pool is not None:
                chunk_vals = list(pool.map(
                    lambda p: _panel_integral(p, integrand, sub_per_pi, n_floor), chunk))
            else:
                chunk_vals = [_panel_integral(p, integrand, sub_per_pi, n_floor) for p in chunk]
            stopped = False
            for panel, val in zip(chunk, chunk_vals):
                values.append(val)
                k_end = panel[2]
                if settings.truncation_enabled and k_end is not None and k_end >= 2:
                    m = k_end - 1
                    running = head + panel_sum(values)
                    if running > 0.0:
                        tight, _ = truncation_bound(m, d)
                        if tight <= settings.target_rel_truncation * d.n_spans * running:
                            truncation_m = m
                            tail_bound = tight / d.n_spans
                            stopped = True
                            break
            if stopped:
                break
            idx += len(chunk)
    finally:
        if pool is not None:
            pool.shutdown()

    body = panel_sum(values)
    return IntegralReport(
        value=head + body,
        head=head,
        body=body,
        tail_bound=tail_bound,
        delta=delta,
        panels_evaluated=len(values),
        truncation_m=truncation_m,
    )


# ---------------------------------------------------------------------------
# 2-D cross-check


def brute_force_gamma_integral(d: DerivedSpan, grid_n: int,
                               integrand: Optional[Callable[[np.ndarray], np.ndarray]] = None,
                               pole_window: float = DEFAULT_POLE_WINDOW) -> float:
    """First-quadrant 2-D Simpson integral of xi(f1 f2 / (2 f_phase^2)).

    Integrates over [0, b0/2] x [0, b0/2] with grid_n subintervals per axis
    (must be even).  Multiplying by 4 and by 16/27 * n_spans^2 * osnr_bw /
    symbol_rate^3 gives the same noise coefficient as the single-integral
    path; the comparison is the main cross-validation of the reduction.
    """
    if grid_n < 2 or grid_n % 2:
        raise ValueError("grid_n must be even and >= 2")
    if integrand is None:
        integrand = lambda z: xi(z, d, pole_window)
    half = d.b0 / 2.0
    f = np.linspace(0.0, half, grid_n + 1)
    w = np.ones(grid_n + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    zeta_grid = np.outer(f, f) / (2.0 * d.f_phase * d.f_phase)
    vals = np.asarray(integrand(zeta_grid), dtype=float)
    h = half / grid_n
    return math.fsum(((w[:, None] * w[None, :]) * vals).ravel().tolist()) * h * h / 9.0
