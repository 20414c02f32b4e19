"""Shared fixtures: a transatlantic-class reference link, a toy system,
and strategies for randomly generated spans."""

from dataclasses import replace

import pytest
from hypothesis import strategies as st

from hybridgn import (
    FiberSegment,
    QuadratureSettings,
    SpanPlan,
    SystemConfig,
    derive_span,
)
from hybridgn.units import (
    attenuation_db_per_km_to_np_per_m,
    beta2_ps2_per_km_to_s2_per_m,
    gamma_per_w_km_to_per_w_m,
)

# Reference span: 50 km of large-area fiber feeding 50 km of standard fiber,
# both anomalous dispersion.  The gamma values follow from n2 = 2.6e-20 m^2/W
# at 1550 nm with 250 and 112 um^2 effective areas.
QSMF = FiberSegment(
    name="qsmf",
    length=50e3,
    attenuation=attenuation_db_per_km_to_np_per_m(0.16),
    beta2=beta2_ps2_per_km_to_s2_per_m(-26.6),
    gamma=gamma_per_w_km_to_per_w_m(0.42158152337308633),
)
SMF = FiberSegment(
    name="smf",
    length=50e3,
    attenuation=attenuation_db_per_km_to_np_per_m(0.158),
    beta2=beta2_ps2_per_km_to_s2_per_m(-26.6),
    gamma=gamma_per_w_km_to_per_w_m(0.9410301932738785),
)

#: 60 x 100 km link, 9 x 32 GBd Nyquist channels.
ATLANTIC = SystemConfig(span_count=60, symbol_rate=32e9, channel_count=9,
                        noise_figure_db=5.0, wavelength=1550e-9)

#: Down-scaled system whose 2-D brute-force reference stays cheap.
TOY = SystemConfig(span_count=2, symbol_rate=1e9, channel_count=3,
                   noise_figure_db=5.0, wavelength=1550e-9)


@pytest.fixture(scope="session")
def hybrid_span():
    return SpanPlan((QSMF, SMF))


@pytest.fixture(scope="session")
def d_atlantic(hybrid_span):
    return derive_span(hybrid_span, ATLANTIC)


@pytest.fixture(scope="session")
def d_toy(hybrid_span):
    return derive_span(hybrid_span, TOY)


@pytest.fixture(scope="session")
def settings():
    return QuadratureSettings()


def split_segments(span: SpanPlan, parts: int) -> SpanPlan:
    """Cut every segment into `parts` equal pieces; same physical span."""
    segs = []
    for seg in span.segments:
        for i in range(parts):
            segs.append(replace(seg, name=f"{seg.name}.{i}",
                                length=seg.length / parts))
    return SpanPlan(tuple(segs))


@st.composite
def span_plans(draw, max_segments=4):
    """Random plausible spans, all segments anomalous dispersion."""
    n = draw(st.integers(1, max_segments))
    segs = []
    for i in range(n):
        length = draw(st.floats(5.0, 120.0)) * 1e3
        alpha = attenuation_db_per_km_to_np_per_m(draw(st.floats(0.12, 0.35)))
        beta2 = beta2_ps2_per_km_to_s2_per_m(-draw(st.floats(2.0, 30.0)))
        gamma = gamma_per_w_km_to_per_w_m(draw(st.floats(0.3, 2.6)))
        segs.append(FiberSegment(f"seg{i}", length, alpha, beta2, gamma))
    return SpanPlan(tuple(segs))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Print one PASS/FAIL line per acceptance criterion after the run."""
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(RESULTS):
        terminalreporter.write_line(line)
