"""Parameter sweeps, time series and the observables read off them.

Widths follow ``gamma = -Im E``, so an amplitude decays like ``exp(-gamma t)``.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError, StepTooCoarseError
from .evolution import evolve_auto
from .model import StateVector, _finite_real, check_lambda
from .numerics import sqrt_continuous
from .spectral import (
    EPPair,
    Spectrum,
    critical_lambda,
    discriminant,
    eigenvalues,
    exceptional_points,
    mean_energy,
)

# default grids for the three reference plots
TRAJECTORY_POINTS = 400
TIME_POINTS = 2000
T_MAX_SEPARATED = 600.0
T_MAX_CRITICAL = 300.0


def thread_count():
    """Worker count for grid evaluations, from ``EPDYN_THREADS`` (default 1)."""
    raw = os.environ.get("EPDYN_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise InvalidArgumentError(f"EPDYN_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise InvalidArgumentError(f"EPDYN_THREADS must be a positive integer, got {raw!r}")
    return n


def _grid_map(fn, items):
    # executor.map yields in submission order, so output matches the sequential run
    n = thread_count()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


@dataclass(frozen=True)
class Trajectory:
    lambdas: np.ndarray
    e1_path: np.ndarray
    e2_path: np.ndarray
    ep_pair: EPPair


@dataclass(frozen=True)
class TimeSeries:
    times: np.ndarray
    states: list
    lam: complex
    psi0: StateVector

    def component(self, name):
        """Complex samples of ``"z1"`` or ``"z2"``."""
        if name not in ("z1", "z2"):
            raise InvalidArgumentError(f"component must be z1 or z2, got {name!r}")
        return np.array([getattr(s, name) for s in self.states], dtype=complex)

    def after(self, t_from):
        """Sub-series with ``t >= t_from`` (first kept state becomes the new psi0)."""
        keep = np.flatnonzero(self.times >= t_from)
        if keep.size == 0:
            raise InvalidArgumentError(f"no samples at or after t={t_from}")
        states = [self.states[i] for i in keep]
        return TimeSeries(self.times[keep], states, self.lam, states[0])


@dataclass(frozen=True)
class WidthBeat:
    gamma1: float
    gamma2: float
    delta_e: float

    @property
    def top(self):
        """Width of the pole nearest the real axis."""
        return min(self.gamma1, self.gamma2)

    @property
    def bottom(self):
        return max(self.gamma1, self.gamma2)


def trajectory_sweep(params, lo, hi, n=TRAJECTORY_POINTS):
    """Eigenvalue paths over a uniform real coupling grid, branch-tracked."""
    lo, hi = _finite_real(lo, "lo"), _finite_real(hi, "hi")
    if not lo < hi:
        raise InvalidArgumentError(f"empty interval [{lo}, {hi}]")
    if int(n) != n or n < 2:
        raise InvalidArgumentError("n must be an integer >= 2")
    lambdas = np.linspace(lo, hi, int(n))
    disc = np.array([discriminant(params, x) for x in lambdas])
    try:
        d = sqrt_continuous(disc)
    except StepTooCoarseError as exc:
        raise StepTooCoarseError(
            exc.index,
            f"eigenvalue branch tracking failed at lambda={lambdas[exc.index]:.6g}; increase n",
        ) from None
    mean = np.array([mean_energy(params, x) for x in lambdas])
    return Trajectory(
        lambdas=lambdas,
        e1_path=mean - 0.5 * d,
        e2_path=mean + 0.5 * d,
        ep_pair=exceptional_points(params),
    )


def time_series(params, lam, psi0, t_max, n=TIME_POINTS):
    """psi(t) on a uniform grid over [0, t_max]."""
    lam = check_lambda(lam)
    t_max = _finite_real(t_max, "t_max")
    if t_max <= 0:
        raise InvalidArgumentError("t_max must be positive")
    if int(n) != n or n < 2:
        raise InvalidArgumentError("n must be an integer >= 2")
    times = np.linspace(0.0, t_max, int(n))
    states = _grid_map(lambda t: evolve_auto(params, lam, psi0, t).state, list(times))
    states[0] = psi0
    return TimeSeries(times=times, states=states, lam=lam, psi0=psi0)


def width_and_beat(spectrum: Spectrum):
    return WidthBeat(
        gamma1=-spectrum.e1.imag,
        gamma2=-spectrum.e2.imag,
        delta_e=abs(spectrum.e1.real - spectrum.e2.real),
    )


def local_maxima(values, include_start=True):
    """Indices of local maxima of a sampled curve.

    Interior points count when they exceed the left neighbour and are not
    exceeded by the right one; the first sample counts if the curve starts out
    decreasing and ``include_start`` is set.
    """
    a = np.asarray(values, dtype=float)
    idx = [
        i for i in range(1, a.size - 1) if a[i] > a[i - 1] and a[i] >= a[i + 1]
    ]
    if include_start and a.size > 1 and a[0] > a[1]:
        idx.insert(0, 0)
    return np.array(idx, dtype=int)


def beat_maxima(series, component, floor=0.0, include_start=False):
    """Times of the maxima of ``|z|`` not below ``floor``.

    By default only revivals (interior maxima) are returned, so a monotone
    decay has no beat maxima at all.
    """
    amp = np.abs(series.component(component))
    idx = local_maxima(amp, include_start=include_start)
    idx = idx[amp[idx] >= floor]
    return series.times[idx]


def envelope_fit(series, component):
    """Decay width from a least-squares line through ``log|z|``.

    With at least three maxima (the starting point included) the fit runs
    through the maxima; for a non-increasing amplitude over ten or more samples
    it runs through every sample.
    """
    amp = np.abs(series.component(component))
    t = series.times
    idx = local_maxima(amp, include_start=True)
    if idx.size >= 3:
        sel = idx
    elif amp.size >= 10 and np.all(np.diff(amp) <= 0) and amp[-1] > 0:
        sel = np.arange(amp.size)
    else:
        raise InvalidArgumentError(
            "envelope fit needs >= 3 maxima or a monotone decay over >= 10 samples"
        )
    slope, _ = np.polyfit(t[sel], np.log(amp[sel]), 1)
    return float(-slope)


def critical_summary(params, lo, hi, grid=601):
    """Critical coupling together with the two widths found there."""
    lam_c = critical_lambda(params, lo, hi, grid)
    spec = eigenvalues(params, lam_c)
    return lam_c, spec, width_and_beat(spec)
