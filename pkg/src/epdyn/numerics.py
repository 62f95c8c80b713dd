"""Numerical kernels: a series-based matrix exponential, a stable complex sinc,
and continuity-tracked square roots along a path.

The matrix exponential is deliberately self-contained (no eigen-solver, no
call into :mod:`epdyn.spectral`), so that it can serve as an independent check
of the closed-form propagators.
"""

import cmath
import math

import numpy as np

from .errors import InvalidArgumentError, StepTooCoarseError

SCALING_THRESHOLD = 0.5
SERIES_CUTOFF = 1e-18
SINC_TAYLOR_RADIUS = 1e-4

# 1, -1/3!, 1/5!, -1/7!, 1/9!
_SINC_COEFFS = tuple((-1) ** k / math.factorial(2 * k + 1) for k in range(5))


def _as_square(o):
    o = np.asarray(o, dtype=complex)
    if o.ndim != 2 or o.shape[0] != o.shape[1]:
        raise InvalidArgumentError(f"expected a square matrix, got shape {o.shape}")
    if not np.all(np.isfinite(o)):
        raise InvalidArgumentError("matrix has non-finite entries")
    return o


def expm(m):
    """Matrix exponential of ``m`` by scaling and squaring a Taylor series.

    ``m`` is scaled by ``2**-s`` until its 1-norm is at most 0.5, the series is
    summed until the next term drops below 1e-18 of the running sum, and the
    result is squared ``s`` times.
    """
    m = _as_square(m)
    n = m.shape[0]
    norm = np.abs(m).sum(axis=0).max() if n else 0.0
    s = 0
    if norm > SCALING_THRESHOLD:
        s = int(math.ceil(math.log2(norm / SCALING_THRESHOLD)))
    a = m / (2.0**s)

    result = np.eye(n, dtype=complex)
    term = np.eye(n, dtype=complex)
    k = 1
    while True:
        term = term @ a / k
        result = result + term
        if np.abs(term).max() <= SERIES_CUTOFF * np.abs(result).max():
            break
        k += 1
        if k > 60:  # ||a|| <= 0.5 converges in < 30 terms
            break
    for _ in range(s):
        result = result @ result
    return result


def expm_apply(o, v, t):
    """Return ``exp(o * t) @ v`` for a square complex generator ``o``.

    >>> expm_apply([[0, 1], [0, 0]], [0, 1], 2.0)
    array([2.+0.j, 1.+0.j])
    """
    o = _as_square(o)
    v = np.asarray(v, dtype=complex)
    if v.shape != (o.shape[0],):
        raise InvalidArgumentError(
            f"dimension mismatch: generator {o.shape}, vector {v.shape}"
        )
    if isinstance(t, complex) or not math.isfinite(t):
        raise InvalidArgumentError("t must be a finite real number")
    return expm(o * float(t)) @ v


def sinc_c(z):
    """sin(z)/z for complex ``z``, with a Taylor polynomial near the origin."""
    z = complex(z)
    if not cmath.isfinite(z):
        raise InvalidArgumentError("sinc_c needs a finite argument")
    if abs(z) >= SINC_TAYLOR_RADIUS:
        return cmath.sin(z) / z
    return _sinc_taylor(z)


def _sinc_taylor(z):
    z2 = z * z
    acc = 0j
    for c in reversed(_SINC_COEFFS):
        acc = acc * z2 + c
    return acc


def sqrt_continuous(path):
    """Square roots of ``path`` chosen so that consecutive roots stay close.

    The first sample takes the principal branch. Every later root is the sign
    choice with non-negative real inner product against the previous (nonzero)
    root. If that choice still leaves a jump of 45 degrees or more, i.e. the
    argument of the radicand moved by 90 degrees or more in one step, the sign
    is ambiguous and :class:`StepTooCoarseError` is raised with the offending
    index.

    Returns a complex numpy array of the same length as ``path``.
    """
    w = np.asarray(path, dtype=complex).ravel()
    if w.size == 0:
        raise InvalidArgumentError("path must be non-empty")
    if not np.all(np.isfinite(w)):
        raise InvalidArgumentError("path has non-finite entries")

    out = np.empty_like(w)
    ref = 0j
    cos_limit = math.cos(math.pi / 4)
    for i, wi in enumerate(w):
        r = cmath.sqrt(complex(wi))
        if ref != 0 and r != 0:
            inner = (r * ref.conjugate()).real
            if inner < 0:
                r = -r
                inner = -inner
            if inner <= cos_limit * abs(r) * abs(ref):
                raise StepTooCoarseError(i)
        out[i] = r
        if r != 0:
            ref = r
    return out
