"""Closed-form spectrum of the two-level model.

Eigenvalues are written as ``mean -/+ d/2`` where ``d`` is a square root of the
discriminant

    d**2 = (w1 - w2 + lam*(e1 - e2))**2 + 4 lam**2 delta**2
         = CC * (lam - EP1) * (lam - EP2),   CC = 4 delta**2 + (e1 - e2)**2.

Labels follow ``e1 = mean - d/2`` for whichever root ``d`` the caller supplies
(principal branch by default). Sweeps pass continuity-tracked roots instead.
"""

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DefectiveSpectrumError, DegenerateParametersError, InvalidArgumentError
from .model import _finite_real, check_lambda

EP_RELATIVE_TOLERANCE = 1e-8
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class Spectrum:
    e1: complex
    e2: complex
    d: complex
    mean: complex


@dataclass(frozen=True)
class EPPair:
    ep1: complex
    ep2: complex
    cc: complex

    @property
    def tolerance(self):
        """Distance below which a coupling counts as sitting on an EP."""
        return EP_RELATIVE_TOLERANCE * (abs(self.ep1) + abs(self.ep2))

    def nearest(self, lam):
        """Return ``("EP1" | "EP2", distance)`` for the closer exceptional point."""
        d1, d2 = abs(lam - self.ep1), abs(lam - self.ep2)
        return ("EP1", d1) if d1 <= d2 else ("EP2", d2)

    def __getitem__(self, branch):
        if branch in ("EP1", 1):
            return self.ep1
        if branch in ("EP2", 2):
            return self.ep2
        raise KeyError(branch)


@dataclass(frozen=True)
class EigenSystem:
    """Eigenvalues plus unnormalised right eigenvectors in the observational basis.

    ``n1``/``n2`` are the c-norms ``sqrt(v . v)`` (no conjugation), which vanish
    as the coupling approaches an exceptional point.
    """

    spectrum: Spectrum
    v1: np.ndarray
    v2: np.ndarray
    n1: complex
    n2: complex

    @property
    def normalized(self):
        return self.v1 / self.n1, self.v2 / self.n2


def discriminant_coefficient(params):
    """CC = 4 delta**2 + (e1 - e2)**2, the lam**2 coefficient of d**2."""
    return 4 * params.delta**2 + (params.epsilon1 - params.epsilon2) ** 2


def detuning(params, lam):
    """w1 - w2 + lam*(e1 - e2): the splitting of the uncoupled energies."""
    return params.omega1 - params.omega2 + lam * (params.epsilon1 - params.epsilon2)


def discriminant(params, lam):
    """d**2 as a polynomial in lam (no EP factorisation involved)."""
    lam = check_lambda(lam)
    return detuning(params, lam) ** 2 + 4 * (lam * params.delta) ** 2


def mean_energy(params, lam):
    """Half the trace of H(lam)."""
    return 0.5 * (params.omega1 + params.omega2 + lam * (params.epsilon1 + params.epsilon2))


def spectrum_from_root(params, lam, d):
    """Build a :class:`Spectrum` around a caller-chosen root ``d`` of the discriminant."""
    mean = mean_energy(params, lam)
    d = complex(d)
    return Spectrum(e1=mean - 0.5 * d, e2=mean + 0.5 * d, d=d, mean=mean)


def eigenvalues(params, lam):
    """Both eigenvalues of H(lam), using the principal root of the discriminant.

    >>> from epdyn.model import ModelParams
    >>> s = eigenvalues(ModelParams(1, 2, 0, 0, 0), 0.5)
    >>> s.e1, s.e2
    ((1+0j), (2+0j))
    """
    lam = check_lambda(lam)
    return spectrum_from_root(params, lam, cmath.sqrt(discriminant(params, lam)))


def exceptional_points(params):
    """The two couplings where the eigenvalues (and eigenvectors) coalesce."""
    cc = discriminant_coefficient(params)
    de = params.epsilon1 - params.epsilon2
    scale = 4 * abs(params.delta) ** 2 + abs(de) ** 2
    if scale == 0 or abs(cc) <= 1e-14 * scale:
        raise DegenerateParametersError(
            "4*delta**2 + (epsilon1 - epsilon2)**2 vanishes; exceptional points are at infinity"
        )
    dw = params.omega1 - params.omega2
    ep1 = 1j * dw / (-2 * params.delta - 1j * de)
    ep2 = 1j * dw / (2 * params.delta - 1j * de)
    return EPPair(ep1=ep1, ep2=ep2, cc=cc)


def c_product(u, v):
    """Bilinear product u1*v1 + u2*v2 (no complex conjugation)."""
    return complex(u[0] * v[0] + u[1] * v[1])


def _check_not_at_ep(params, lam):
    try:
        eps = exceptional_points(params)
    except DegenerateParametersError:
        return
    branch, dist = eps.nearest(lam)
    if dist <= eps.tolerance:
        raise DefectiveSpectrumError(
            f"lambda={lam!r} is within {dist:.3g} of {branch}; H is not diagonalisable "
            "there - use epdyn.jordan / evolve_at_ep"
        )


def eigenvectors(params, lam):
    """Eigenvalues and c-normalisable eigenvectors of the rotated Hamiltonian.

    With ``Delta = w1 - w2 + lam*(e1 - e2)`` and ``D`` the principal root,

        v1 = (D + 2 lam delta, -Delta)    for e1 = mean - D/2
        v2 = (D - 2 lam delta,  Delta)    for e2 = mean + D/2

    v2 is v1 with delta -> -delta up to the sign of its second component. If a
    vector degenerates to zero (possible only when Delta = 0) the equivalent
    form ``(Delta, -/+D + 2 lam delta)`` is used instead.
    """
    lam = check_lambda(lam)
    _check_not_at_ep(params, lam)
    spec = eigenvalues(params, lam)
    dd, b2, delta_ = spec.d, 2 * lam * params.delta, detuning(params, lam)
    if dd == 0:
        raise DefectiveSpectrumError("eigenvalues coincide; no eigenvector pair exists")

    v1 = np.array([dd + b2, -delta_], dtype=complex)
    v1_alt = np.array([delta_, -dd + b2], dtype=complex)
    v2 = np.array([dd - b2, delta_], dtype=complex)
    v2_alt = np.array([delta_, dd + b2], dtype=complex)
    if np.linalg.norm(v1) < 1e-3 * np.linalg.norm(v1_alt):
        v1 = v1_alt
    if np.linalg.norm(v2) < 1e-3 * np.linalg.norm(v2_alt):
        v2 = v2_alt
    n1 = cmath.sqrt(c_product(v1, v1))
    n2 = cmath.sqrt(c_product(v2, v2))
    return EigenSystem(spectrum=spec, v1=v1, v2=v2, n1=n1, n2=n2)


def max_imag(params, lam):
    """Imaginary part of the pole closest to the real axis."""
    s = eigenvalues(params, lam)
    return max(s.e1.imag, s.e2.imag)


def _golden_max(f, a, b, tol):
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def critical_lambda(params, lo, hi, grid=601, tol=1e-6):
    """Real coupling in ``[lo, hi]`` where a resonance pole is nearest the real axis.

    A uniform scan over ``grid`` points brackets the maximum of
    ``max(Im e1, Im e2)``; golden-section search then refines it to ``tol``.
    """
    lo, hi = _finite_real(lo, "lo"), _finite_real(hi, "hi")
    if not lo < hi:
        raise InvalidArgumentError(f"empty interval [{lo}, {hi}]")
    if int(grid) != grid or grid < 3:
        raise InvalidArgumentError("grid must be an integer >= 3")
    grid = int(grid)

    def f(x):
        return max_imag(params, x)

    xs = np.linspace(lo, hi, grid)
    vals = [f(x) for x in xs]
    i = int(np.argmax(vals))
    a, b = xs[max(i - 1, 0)], xs[min(i + 1, grid - 1)]
    x = _golden_max(f, a, b, tol)
    # the scan may have hit an endpoint of the bracket
    return float(max((a, b, x), key=f))
