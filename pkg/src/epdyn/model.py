"""Two-level model Hamiltonian H(lam) = diag(w1, w2) + lam * [[e1, d], [d, e2]]
and the pi/4-rotated observational basis.

Rotation convention
-------------------
Observational components are ``z = R @ psi`` with the ordinary rotation matrix

    R = [[cos a, -sin a],
         [sin a,  cos a]],   a = pi/4,

applied to components ``psi`` in the basis where H(lam) has the form above.
The rotated Hamiltonian is therefore ``R @ H @ R.T``. This is the orientation
for which the closed-form propagator, its EP limit and the numerically exact
propagator coincide (checked in the test-suite). The opposite orientation
would flip the sign of the traceless part of the rotated Hamiltonian, which
exchanges the roles of the initial states (1, 0) and (0, 1).
"""

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError

ROTATION_ANGLE = math.pi / 4


def _finite_complex(value, name):
    try:
        z = complex(value)
    except (TypeError, ValueError):
        raise InvalidArgumentError(f"{name} is not a complex number: {value!r}") from None
    if not cmath.isfinite(z):
        raise InvalidArgumentError(f"{name} must be finite, got {z!r}")
    return z


def _finite_real(value, name):
    if isinstance(value, complex):
        if value.imag != 0:
            raise InvalidArgumentError(f"{name} must be real, got {value!r}")
        value = value.real
    try:
        x = float(value)
    except (TypeError, ValueError):
        raise InvalidArgumentError(f"{name} is not a real number: {value!r}") from None
    if not math.isfinite(x):
        raise InvalidArgumentError(f"{name} must be finite, got {x!r}")
    return x


@dataclass(frozen=True)
class ModelParams:
    """The five complex constants of the model."""

    omega1: complex
    omega2: complex
    epsilon1: complex
    epsilon2: complex
    delta: complex

    def __post_init__(self):
        for name in ("omega1", "omega2", "epsilon1", "epsilon2", "delta"):
            object.__setattr__(self, name, _finite_complex(getattr(self, name), name))

    def flipped(self):
        """Same model with delta -> -delta."""
        return ModelParams(self.omega1, self.omega2, self.epsilon1, self.epsilon2, -self.delta)

    def as_dict(self):
        return {
            "omega1": self.omega1,
            "omega2": self.omega2,
            "epsilon1": self.epsilon1,
            "epsilon2": self.epsilon2,
            "delta": self.delta,
        }


PAPER_PARAMS = ModelParams(
    omega1=1.55 - 0.007j,
    omega2=1.1 - 0.007j,
    epsilon1=-0.4 - 0.0006j,
    epsilon2=0.4 + 0.0005j,
    delta=0.0115j,
)


@dataclass(frozen=True)
class StateVector:
    """Two complex amplitudes (z1, z2)."""

    z1: complex
    z2: complex

    def __post_init__(self):
        object.__setattr__(self, "z1", _finite_complex(self.z1, "z1"))
        object.__setattr__(self, "z2", _finite_complex(self.z2, "z2"))

    @classmethod
    def from_array(cls, a):
        a = np.asarray(a, dtype=complex).ravel()
        if a.shape != (2,):
            raise InvalidArgumentError(f"state needs two components, got {a.shape}")
        return cls(complex(a[0]), complex(a[1]))

    def as_array(self):
        return np.array([self.z1, self.z2], dtype=complex)

    def __iter__(self):
        yield self.z1
        yield self.z2


def check_lambda(lam):
    return _finite_complex(lam, "lambda")


def rotation_matrix(angle):
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s], [s, c]])


def hamiltonian(params, lam):
    """H(lam) = diag(w1, w2) + lam * V in the model basis, as a 2x2 array."""
    lam = check_lambda(lam)
    p = params
    return np.array(
        [
            [p.omega1 + lam * p.epsilon1, lam * p.delta],
            [lam * p.delta, p.omega2 + lam * p.epsilon2],
        ],
        dtype=complex,
    )


def rotated_hamiltonian(params, lam):
    """H(lam) expressed in the observational basis, ``R @ H @ R.T``.

    Built from the closed form ``mean*I + [[-b, a], [a, b]]`` with
    ``a = (w1 - w2 + lam*(e1 - e2)) / 2`` and ``b = lam * delta`` so that the
    result is exactly symmetric.
    """
    lam = check_lambda(lam)
    p = params
    mean = 0.5 * (p.omega1 + p.omega2 + lam * (p.epsilon1 + p.epsilon2))
    a = 0.5 * (p.omega1 - p.omega2 + lam * (p.epsilon1 - p.epsilon2))
    b = lam * p.delta
    return np.array([[mean - b, a], [a, mean + b]], dtype=complex)


def rotate_state(state, angle):
    """Apply the real rotation ``R(angle)`` to a state's component pair."""
    angle = _finite_real(angle, "angle")
    return StateVector.from_array(rotation_matrix(angle) @ state.as_array())


def to_observational(state):
    """Model-basis components -> observational (rotated) components."""
    return rotate_state(state, ROTATION_ANGLE)


def from_observational(state):
    """Observational (rotated) components -> model-basis components."""
    return rotate_state(state, -ROTATION_ANGLE)
