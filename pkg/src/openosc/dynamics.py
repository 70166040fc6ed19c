"""Occupation dynamics driven by the friction/diffusion coefficients.

A single oscillator obeys the second-order form

    d2n/dt2 + 2 lambda dn/dt + 2 (dlambda/dt) n = 2 dD/dt ,

which integrates exactly once to the pair

    dn/dt = y - 2 lambda n + 2 D,        dy/dt = 0 ,

with y(0) = dn/dt(0).  Two bilinearly coupled oscillators exchange the
occupation difference, adding -beta (n_i - n_j) to the second-order form,
i.e. dy_i/dt = -beta (n_i - n_j).  Working with (n, y) avoids the time
derivatives of lambda and D altogether -- important because dD/dt has a
logarithmically divergent second derivative at t = 0+ that a naive
second-order stepper would sample.

The stepper is classic fixed-step RK4 on half the coefficient-grid spacing,
with lambda and D interpolated to the quarter points by cubic splines; the
result is reported on the coefficient grid itself.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import cumulative_trapezoid
from scipy.interpolate import CubicSpline

from .errors import (
    DomainError,
    InsufficientDataError,
    MomentBlowupError,
    UndefinedMetricError,
)
from .model import SystemSpec, equilibrium_occupation
from .transport.asymptotics import asymptotic_occupation  # noqa: F401  (re-export)
from .transport.coefficients import CoefficientSeries

#: occupations above this abort the run as a numerical blow-up
BLOWUP = 1e12

#: long-run sanity envelope: n should stay within this factor of the hottest
#: bath's equilibrium occupation; exceeding it is flagged (not fatal), and is
#: in fact the signature of the persistently oscillating regimes
ENVELOPE_FACTOR = 10.0


@dataclass
class Trajectory:
    """Occupation trajectory of one or two oscillators.

    Attributes
    ----------
    t : ndarray
    occupations : tuple of ndarray
        (n1,) or (n1, n2).
    rates : tuple of ndarray
        Time derivatives dn/dt on the same grid.
    dissipation : tuple of ndarray
        Cumulative dissipated energy per oscillator,
        E(t) = int_0^t 2 Omega lambda(s) n(s) ds.
    metadata : dict
        Diagnostics: envelope flags, coupling, initial data.
    """

    t: np.ndarray
    occupations: tuple
    rates: tuple
    dissipation: tuple
    metadata: dict = field(default_factory=dict)

    @property
    def n1(self):
        return self.occupations[0]

    @property
    def n2(self):
        if len(self.occupations) < 2:
            raise DomainError("trajectory has a single oscillator")
        return self.occupations[1]


def _uniform_step(t: np.ndarray) -> float:
    dt = np.diff(t)
    if t.size < 2 or not np.allclose(dt, dt[0], rtol=1e-9, atol=0.0):
        raise DomainError("evolution requires a uniform time grid")
    return float(dt[0])


def _quarter_grid(series: CoefficientSeries):
    """lambda and D on the quarter-spacing grid used by the RK4 substeps."""
    t = series.t
    k = t.size - 1
    tq = t[0] + (t[-1] - t[0]) * np.arange(4 * k + 1) / (4 * k)
    lam = CubicSpline(t, series.friction)(tq)
    dif = CubicSpline(t, series.diffusion)(tq)
    return lam, dif


def _rk4_pair(lams, difs, h2, n0, y0, beta, t):
    """RK4 for the (n, y) pairs of one or two oscillators.

    ``lams``/``difs`` are quarter-grid coefficient arrays, one per
    oscillator; ``h2`` is the RK4 step (half the output spacing).
    Returns occupations and rates sampled on the output grid.
    """
    n_sys = len(lams)
    n = np.array(n0, dtype=float)
    y = np.array(y0, dtype=float)
    k_out = (lams[0].size - 1) // 4
    out_n = np.empty((n_sys, k_out + 1))
    out_y = np.empty((n_sys, k_out + 1))
    out_n[:, 0], out_y[:, 0] = n, y

    lam = np.stack(lams)
    dif = np.stack(difs)

    def deriv(q, n, y):
        dn = y - 2.0 * lam[:, q] * n + 2.0 * dif[:, q]
        if n_sys == 2:
            dy = -beta * (n - n[::-1])
        else:
            dy = np.zeros_like(n)
        return dn, dy

    for m in range(2 * k_out):
        q = 2 * m
        k1n, k1y = deriv(q, n, y)
        k2n, k2y = deriv(q + 1, n + 0.5 * h2 * k1n, y + 0.5 * h2 * k1y)
        k3n, k3y = deriv(q + 1, n + 0.5 * h2 * k2n, y + 0.5 * h2 * k2y)
        k4n, k4y = deriv(q + 2, n + h2 * k3n, y + h2 * k3y)
        n = n + (h2 / 6.0) * (k1n + 2.0 * k2n + 2.0 * k3n + k4n)
        y = y + (h2 / 6.0) * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
        if not np.all(np.isfinite(n)) or np.any(np.abs(n) > BLOWUP):
            raise MomentBlowupError(
                "occupation exceeded the blow-up guard", time=float(t[(m + 1) // 2])
            )
        if m % 2 == 1:
            out_n[:, (m + 1) // 2], out_y[:, (m + 1) // 2] = n, y
    return out_n, out_y


def _envelope(spec: SystemSpec) -> float:
    return ENVELOPE_FACTOR * max(
        float(equilibrium_occupation(spec.omega, b.temperature, b.statistics))
        for b in spec.baths
    )


def evolve(series: CoefficientSeries, spec: SystemSpec, n0: float, *,
           dn0: float = 0.0) -> Trajectory:
    """Integrate a single oscillator's occupation over the series grid."""
    if n0 < 0:
        raise DomainError("initial occupation must be nonnegative")
    h = _uniform_step(series.t)
    lam_q, dif_q = _quarter_grid(series)
    out_n, out_y = _rk4_pair([lam_q], [dif_q], h / 2.0, [n0], [dn0], 0.0,
                             series.t)
    n = out_n[0]
    rate = out_y[0] - 2.0 * series.friction * n + 2.0 * series.diffusion
    E = cumulative_trapezoid(
        2.0 * spec.omega_renormalized * series.friction * n, series.t, initial=0.0
    )
    env = _envelope(spec)
    exceeded = bool(np.any(n > env))
    if exceeded:
        warnings.warn(
            "occupation left the equilibrium envelope "
            f"(max n = {n.max():.3g} > {env:.3g}); expected for persistently "
            "oscillating regimes, suspicious otherwise",
            stacklevel=2,
        )
    return Trajectory(
        t=series.t, occupations=(n,), rates=(rate,), dissipation=(E,),
        metadata={
            "n0": n0, "dn0": dn0, "envelope": env,
            "envelope_exceeded": exceeded,
        },
    )


def evolve_coupled(series1: CoefficientSeries, series2: CoefficientSeries,
                   spec1: SystemSpec, spec2: SystemSpec, beta: float,
                   n0: tuple, *, dn0: tuple = (0.0, 0.0)) -> Trajectory:
    """Integrate two bilinearly coupled oscillators (strength ``beta``)."""
    if beta < 0:
        raise DomainError("coupling strength must be nonnegative")
    if any(v < 0 for v in n0):
        raise DomainError("initial occupations must be nonnegative")
    if series1.t.shape != series2.t.shape or not np.allclose(
        series1.t, series2.t, rtol=1e-12, atol=0.0
    ):
        raise DomainError("coupled evolution requires a shared time grid")
    h = _uniform_step(series1.t)
    q1 = _quarter_grid(series1)
    q2 = _quarter_grid(series2)
    out_n, out_y = _rk4_pair([q1[0], q2[0]], [q1[1], q2[1]], h / 2.0,
                             list(n0), list(dn0), beta, series1.t)
    occ, rates, diss, exceeded = [], [], [], []
    for i, (series, spec) in enumerate(((series1, spec1), (series2, spec2))):
        n = out_n[i]
        occ.append(n)
        rates.append(out_y[i] - 2.0 * series.friction * n
                     + 2.0 * series.diffusion)
        diss.append(cumulative_trapezoid(
            2.0 * spec.omega_renormalized * series.friction * n, series.t,
            initial=0.0))
        exceeded.append(bool(np.any(n > _envelope(spec))))
    if any(exceeded):
        warnings.warn(
            "occupation left the equilibrium envelope; expected for "
            "persistently oscillating regimes, suspicious otherwise",
            stacklevel=2,
        )
    return Trajectory(
        t=series1.t, occupations=tuple(occ), rates=tuple(rates),
        dissipation=tuple(diss),
        metadata={
            "beta": beta, "n0": tuple(n0), "dn0": tuple(dn0),
            "envelope_exceeded": exceeded,
        },
    )


@dataclass
class DeltaDissipation:
    """Coupling-induced change of the dissipated energy.

    ``delta_energy[i]`` is E_i(beta) - E_i(0) on the shared grid;
    ``delta_rate[i]`` its smoothed time derivative (moving average over one
    nominal oscillator period, recorded in ``window``).
    """

    t: np.ndarray
    delta_energy: tuple
    delta_rate: tuple
    window: tuple
    coupled: Trajectory
    uncoupled: Trajectory


def delta_dissipation(series1, series2, spec1, spec2, beta, n0, *,
                      dn0=(0.0, 0.0)) -> DeltaDissipation:
    """Dissipation excess of the coupled run over the uncoupled one."""
    coupled = evolve_coupled(series1, series2, spec1, spec2, beta, n0, dn0=dn0)
    uncoupled = evolve_coupled(series1, series2, spec1, spec2, 0.0, n0, dn0=dn0)
    t = coupled.t
    h = _uniform_step(t)
    d_energy, d_rate, windows = [], [], []
    for i, spec in enumerate((spec1, spec2)):
        dE = coupled.dissipation[i] - uncoupled.dissipation[i]
        d_energy.append(dE)
        rate = np.gradient(dE, t)
        w = max(3, int(round(2.0 * np.pi / spec.omega_renormalized / h)) | 1)
        kernel = np.ones(w) / w
        d_rate.append(np.convolve(rate, kernel, mode="same"))
        windows.append(w * h)
    return DeltaDissipation(t=t, delta_energy=tuple(d_energy),
                            delta_rate=tuple(d_rate), window=tuple(windows),
                            coupled=coupled, uncoupled=uncoupled)


@dataclass
class PeriodEstimate:
    """Oscillation period from zero crossings, cross-checked by FFT."""

    period: float
    spread: float
    n_crossings: int
    fft_period: float
    low_confidence: bool


def estimate_period(t, x, window=None) -> PeriodEstimate:
    """Period of an oscillating series from upward mean crossings.

    The series (restricted to ``window`` = (t_lo, t_hi) if given) is
    detrended by its mean; consecutive upward crossings are located by
    linear interpolation and their spacings averaged.  A zero-padded FFT
    peak (parabolically interpolated) serves as the cross-check;
    disagreement beyond 5% flags low confidence.  Fewer than three
    crossings raise InsufficientDataError.
    """
    t = np.asarray(t, dtype=float)
    x = np.asarray(x, dtype=float)
    if t.shape != x.shape or t.ndim != 1:
        raise DomainError("period estimation needs matching 1-D arrays")
    if window is not None:
        lo, hi = window
        keep = (t >= lo) & (t <= hi)
        t, x = t[keep], x[keep]
        if t.size < 4:
            raise InsufficientDataError("window keeps fewer than 4 samples")
    xd = x - x.mean()
    up = np.flatnonzero((xd[:-1] < 0) & (xd[1:] >= 0))
    if up.size < 3:
        raise InsufficientDataError(
            f"found {up.size} upward crossings; need at least 3 "
            "(window too short or no oscillation)"
        )
    frac = -xd[up] / (xd[up + 1] - xd[up])
    t_cross = t[up] + frac * (t[up + 1] - t[up])
    gaps = np.diff(t_cross)
    period = float(gaps.mean())
    spread = float(gaps.std())

    h = _uniform_step(t)
    n_pad = 16 * len(xd)
    mag = np.abs(np.fft.rfft(xd, n=n_pad))
    freqs = np.fft.rfftfreq(n_pad, d=h)
    k = int(np.argmax(mag[1:])) + 1
    if 1 <= k < len(mag) - 1:
        a, b, c = mag[k - 1], mag[k], mag[k + 1]
        denom = a - 2.0 * b + c
        shift = 0.5 * (a - c) / denom if denom != 0 else 0.0
    else:
        shift = 0.0
    f_peak = freqs[k] + shift * (freqs[1] - freqs[0])
    fft_period = float(1.0 / f_peak) if f_peak > 0 else np.inf
    low = bool(abs(fft_period - period) > 0.05 * period)
    return PeriodEstimate(period=period, spread=spread,
                          n_crossings=int(up.size), fft_period=fft_period,
                          low_confidence=low)


def detect_stationarity(x, *, tol: float = 0.01):
    """(is_stationary, variation) with variation = (max-min)/|mean|."""
    x = np.asarray(x, dtype=float)
    if x.size < 2:
        raise InsufficientDataError("stationarity check needs at least 2 samples")
    denom = max(abs(float(x.mean())), 1e-300)
    variation = float((x.max() - x.min()) / denom)
    return variation < tol, variation


def antiphase_metric(x1, x2) -> float:
    """Pearson correlation of two detrended channels (-1 = antiphase)."""
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    if x1.shape != x2.shape or x1.ndim != 1:
        raise DomainError("antiphase metric needs matching 1-D arrays")
    a = x1 - x1.mean()
    b = x2 - x2.mean()
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        raise UndefinedMetricError(
            "a channel has zero variance; correlation undefined"
        )
    return float(np.dot(a, b) / (na * nb))
