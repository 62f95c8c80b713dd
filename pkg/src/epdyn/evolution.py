"""Time evolution of the two-level model and of general first-order systems.

All two-level routines take and return components in the observational
(pi/4-rotated) basis; see :mod:`epdyn.model` for the rotation convention.
Time is a real scalar; the Schrodinger equation is ``i dpsi/dt = H psi``.

Closed form
-----------
Write the rotated Hamiltonian as ``mean*I + K`` with ``K = [[-b, a], [a, b]]``,
``a = (w1 - w2 + lam*(e1 - e2))/2`` and ``b = lam*delta``. Since
``K @ K = (D/2)**2 * I``,

    exp(-i H t) = exp(-i mean t) * (cos(D t/2) I - i t sinc(D t/2) K).

Expanded in the two eigen-exponentials ``X = exp(-i e1 t)``, ``Y = exp(-i e2 t)``:

    z2 = C2 * ((X + Y)/2 - lam*delta*(X - Y)/D) - C1 * Delta*(X - Y)/(2D)

and ``z1`` follows from ``C1 <-> C2``, ``delta -> -delta``. Both ``cos`` and
``sinc`` are even in ``D``, so the result does not depend on the branch of the
square root, and the sinc form stays accurate as ``D -> 0``.
"""

import cmath
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DefectiveSpectrumError, DegenerateParametersError, InvalidArgumentError
from .model import StateVector, check_lambda
from .numerics import sinc_c
from .spectral import (
    detuning,
    discriminant,
    discriminant_coefficient,
    exceptional_points,
    mean_energy,
)

DIAGONALISABLE_GAP = 1e-8


class Method(str, Enum):
    CLOSED_FORM = "closed_form"
    EP_LIMIT = "ep_limit"
    JORDAN = "jordan"
    SPECTRAL_GENERAL = "spectral_general"


@dataclass(frozen=True)
class EvolutionResult:
    state: StateVector
    method: Method


def _check_time(t):
    if isinstance(t, complex):
        raise InvalidArgumentError("complex time is not supported")
    try:
        t = float(t)
    except (TypeError, ValueError):
        raise InvalidArgumentError(f"time must be a real number, got {t!r}") from None
    if not math.isfinite(t):
        raise InvalidArgumentError("time must be finite")
    return t


def evolve_closed(params, lam, psi0, t):
    """psi(t) for initial observational components ``psi0`` at coupling ``lam``."""
    lam = check_lambda(lam)
    t = _check_time(t)
    c1, c2 = psi0.z1, psi0.z2
    a = 0.5 * detuning(params, lam)
    b = lam * params.delta
    x = 0.5 * cmath.sqrt(discriminant(params, lam)) * t
    phase = cmath.exp(-1j * mean_energy(params, lam) * t)
    cs = cmath.cos(x)
    sn = t * sinc_c(x)
    z1 = phase * (cs * c1 - 1j * sn * (-b * c1 + a * c2))
    z2 = phase * (cs * c2 - 1j * sn * (a * c1 + b * c2))
    return StateVector(z1, z2)


def ep_energy(params):
    """Coalesced eigenvalue at EP1, in closed form."""
    p = params
    num = 1j * (p.epsilon1 * p.omega2 - p.epsilon2 * p.omega1) + p.delta * (p.omega1 + p.omega2)
    return num / (1j * (p.epsilon1 - p.epsilon2) + 2 * p.delta)


def _evolve_at_ep1(params, c1, c2, t):
    p = params
    de = p.epsilon1 - p.epsilon2
    dw = p.omega1 - p.omega2
    den = de - 2j * p.delta
    linear = p.delta * dw * t
    envelope = cmath.exp(-1j * t * ep_energy(p))
    z2 = (c2 + linear * (1j * c2 - c1) / den) * envelope
    z1 = (c1 - linear * (1j * c1 + c2) / den) * envelope
    return z1, z2


def evolve_at_ep(params, branch, psi0, t):
    """psi(t) with the coupling sitting exactly on an exceptional point.

    The amplitudes are a first-degree polynomial in ``t`` times
    ``exp(-i E_EP t)``. ``branch`` is ``"EP1"`` or ``"EP2"``; EP2 of a model
    is EP1 of the model with ``delta -> -delta``, whose rotated Hamiltonian is
    the original one with the two channels swapped.
    """
    t = _check_time(t)
    if discriminant_coefficient(params) == 0:
        raise DegenerateParametersError("no exceptional points: CC = 0")
    exceptional_points(params)  # raises on near-degenerate CC
    branch = str(branch).upper()
    if branch in ("EP1", "1"):
        z1, z2 = _evolve_at_ep1(params, psi0.z1, psi0.z2, t)
        return StateVector(z1, z2)
    if branch in ("EP2", "2"):
        w1, w2 = _evolve_at_ep1(params.flipped(), psi0.z2, psi0.z1, t)
        return StateVector(w2, w1)
    raise InvalidArgumentError(f"branch must be EP1 or EP2, got {branch!r}")


def _cluster(values, threshold):
    """Group indices of ``values`` whose mutual distances chain below ``threshold``."""
    groups = []
    for i, v in enumerate(values):
        hits = [g for g in groups if any(abs(v - values[j]) <= threshold for j in g)]
        merged = [i]
        for g in hits:
            merged.extend(g)
            groups.remove(g)
        groups.append(sorted(merged))
    return sorted(groups)


def _null_space(m, tol):
    _, s, vh = np.linalg.svd(m)
    rank = int(np.sum(s > tol))
    return vh[rank:].T


def evolve_spectral(o, c0, t):
    """Solve ``dchi/dt = o chi`` from the right and left eigensystems of ``o``.

    chi(t) = sum_k exp(E_k t) <l_k|chi0> / <l_k|r_k> |r_k>, with ``<l|`` the
    bilinear left eigen-row. Eigenvalues closer than ``1e-8 * ||o||`` are
    grouped; a group is accepted only if its eigenspace has full dimension
    (e.g. ``o = 0``), otherwise the matrix is treated as defective.
    """
    o = np.asarray(o, dtype=complex)
    if o.ndim != 2 or o.shape[0] != o.shape[1] or o.shape[0] == 0:
        raise InvalidArgumentError(f"generator must be square and non-empty, got {o.shape}")
    c0 = np.asarray(c0, dtype=complex)
    if c0.shape != (o.shape[0],):
        raise InvalidArgumentError("initial vector does not match generator dimension")
    t = _check_time(t)
    n = o.shape[0]
    scale = np.linalg.norm(o, 2)
    threshold = DIAGONALISABLE_GAP * scale

    evals, right = np.linalg.eig(o)
    levals, left = np.linalg.eig(o.T)

    out = np.zeros(n, dtype=complex)
    for group in _cluster(list(evals), threshold):
        e = complex(np.mean(evals[group]))
        if len(group) == 1:
            k = group[0]
            r = right[:, k]
            j = int(np.argmin(np.abs(levals - evals[k])))
            l = left[:, j]
            out += cmath.exp(e * t) * (l @ c0) / (l @ r) * r
            continue
        shifted = o - e * np.eye(n)
        rtol = threshold if threshold > 0 else 0.0
        x = _null_space(shifted, rtol)
        y = _null_space(shifted.T, rtol)
        if x.shape[1] != len(group) or y.shape[1] != len(group):
            raise DefectiveSpectrumError(
                "generator has a coalesced, non-diagonalisable eigenvalue; "
                "use epdyn.jordan.evolve_jordan"
            )
        gram = y.T @ x
        out += cmath.exp(e * t) * (x @ np.linalg.solve(gram, y.T @ c0))
    return out


def evolve_auto(params, lam, psi0, t):
    """Evaluate psi(t), switching to the EP-limit formula on an exceptional point."""
    lam = check_lambda(lam)
    try:
        eps = exceptional_points(params)
    except DegenerateParametersError:
        eps = None
    if eps is not None:
        branch, dist = eps.nearest(lam)
        if dist <= eps.tolerance:
            return EvolutionResult(evolve_at_ep(params, branch, psi0, t), Method.EP_LIMIT)
    return EvolutionResult(evolve_closed(params, lam, psi0, t), Method.CLOSED_FORM)
