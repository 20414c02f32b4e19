"""Four-wave-mixing kernel of the nonlinear-interference integrand.

The integrand of the single-integral noise reduction factorizes as
xi(zeta) = phi(zeta) * eta(zeta): a phased-array factor phi carrying the
span-to-span coherence and an FWM efficiency eta carrying the intra-span
interference of all fiber segments.  Both are evaluated here, vectorized
over zeta.

eta keeps the dimensional factor (gamma * length)^2, so it is in 1/W^2;
phi is dimensionless and lies in [0, 1].
"""

from __future__ import annotations

import numpy as np

from .link import DerivedSpan

__all__ = [
    "SERIES_SWITCH",
    "DEFAULT_POLE_WINDOW",
    "complex_effective_length",
    "fwm_efficiency",
    "phased_array",
    "xi",
]

#: Below this |x| the expm1-style quotient loses digits; switch to the series.
SERIES_SWITCH = 1e-4

#: Half-width of the window around multiples of pi where the sin-ratio form
#: of the phased-array factor is replaced by its cosine-sum form.
DEFAULT_POLE_WINDOW = 1e-6


def complex_effective_length(x, length):
    """Effective interaction length length * (1 - exp(-x)) / x.

    `x` is the complex per-segment exponent (twice attenuation plus phase
    rotation over the segment); near x = 0 the quotient is evaluated by its
    Taylor series to avoid cancellation.  Accepts scalars or arrays.
    """
    x_arr = np.asarray(x, dtype=complex)
    scalar = x_arr.ndim == 0
    x_arr = np.atleast_1d(x_arr)
    out = np.empty_like(x_arr)

    small = np.abs(x_arr) < SERIES_SWITCH
    if np.any(small):
        xs = x_arr[small]
        # 1 - x/2 + x^2/6 - x^3/24; next term is below 1e-18 at the switch.
        out[small] = 1.0 + xs * (-0.5 + xs * (1.0 / 6.0 + xs * (-1.0 / 24.0)))
    big = ~small
    if np.any(big):
        xb = x_arr[big]
        out[big] = (1.0 - np.exp(-xb)) / xb

    out = length * out
    return complex(out[0]) if scalar else out


def _segment_amplitude(zeta: np.ndarray, d: DerivedSpan) -> np.ndarray:
    """Coherent sum of per-segment FWM amplitudes, in 1/W, per zeta value."""
    # x_k(zeta) = 2 (nu_k + i lam_k zeta), one row per segment
    x = 2.0 * (d.nu[:, None] + 1j * d.lam[:, None] * zeta[None, :])
    leff = complex_effective_length(x, d.lengths[:, None])
    # e^{-sum_{m<k} x_m}: accumulated loss and phase of the segments in front
    partial = np.cumsum(x, axis=0)
    expo = np.vstack([np.zeros((1, x.shape[1]), dtype=complex), partial[:-1]])
    return np.sum(d.gammas[:, None] * np.exp(-expo) * leff, axis=0)


def fwm_efficiency(zeta, d: DerivedSpan):
    """FWM efficiency eta(zeta) of one span, in 1/W^2.

    eta is the squared magnitude of the phase-matched nonlinear amplitude
    accumulated across the ordered segments.  It is even in zeta, equals
    (sum_k gamma_k L_eff_k)^2 at zeta = 0, and decays like 1/zeta^2.
    """
    z = np.asarray(zeta, dtype=float)
    scalar = z.ndim == 0
    amp = _segment_amplitude(np.atleast_1d(z).ravel(), d)
    eta = (amp.real ** 2 + amp.imag ** 2).reshape(np.atleast_1d(z).shape)
    return float(eta[0]) if scalar else eta


def _fejer_form(zeta: np.ndarray, n_spans: int) -> np.ndarray:
    """Cosine-sum form of the phased-array factor, finite at the poles."""
    if n_spans == 1:
        return np.ones_like(zeta)
    j = np.arange(1, n_spans)
    weights = 2.0 * (1.0 - j / n_spans)
    acc = 1.0 + np.cos(2.0 * np.outer(zeta, j)) @ weights
    return acc / n_spans


def phased_array(zeta, n_spans: int, pole_window: float = DEFAULT_POLE_WINDOW):
    """Coherence factor phi(zeta) = sin^2(N zeta) / (N^2 sin^2 zeta).

    phi is pi-periodic, peaks at 1 on multiples of pi and averages 1/N
    elsewhere.  Within `pole_window` of a pole of the quotient the
    equivalent cosine-sum (Fejer kernel) form is used.  Output is clamped
    to [0, 1] to absorb sub-eps overshoot of the trigonometric sums.
    """
    if n_spans < 1:
        raise ValueError("n_spans must be >= 1")
    z = np.asarray(zeta, dtype=float)
    scalar = z.ndim == 0
    z1 = np.atleast_1d(z).astype(float).ravel()

    if n_spans == 1:
        phi = np.ones_like(z1)
    else:
        dist = z1 - np.pi * np.round(z1 / np.pi)
        near = np.abs(dist) < pole_window
        phi = np.empty_like(z1)
        if np.any(~near):
            zr = z1[~near]
            s = np.sin(n_spans * zr) / np.sin(zr)
            phi[~near] = (s * s) / (n_spans * n_spans)
        if np.any(near):
            phi[near] = _fejer_form(z1[near], n_spans)
    phi = np.clip(phi, 0.0, 1.0).reshape(np.atleast_1d(z).shape)
    return float(phi[0]) if scalar else phi


def xi(zeta, d: DerivedSpan, pole_window: float = DEFAULT_POLE_WINDOW):
    """Full integrand factor xi = phi * eta, in 1/W^2."""
    return phased_array(zeta, d.n_spans, pole_window) * fwm_efficiency(zeta, d)
