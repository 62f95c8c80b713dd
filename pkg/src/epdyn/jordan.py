"""Jordan-form evolution for defective generators.

At an exceptional point the generator ``O = -i H`` cannot be diagonalised; it
has ``O = S J S^-1`` with a 2x2 Jordan block, and ``exp(O t)`` acquires
polynomial-in-``t`` factors. For a block of size ``k`` with eigenvalue ``E``
the Jordan coordinates propagate as

    xi_m(t) = exp(E t) * sum_{j >= m} t**(j - m) / (j - m)! * C_j.

Only the 2x2 decomposition is computed here; larger matrices need their block
structure supplied by the caller (a numerical Jordan form of an arbitrary
matrix is ill-posed).
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import (
    DiagonalDegenerateError,
    InvalidArgumentError,
    NotDefectiveError,
    RankError,
    SingularTransformError,
)
from .evolution import _check_time
from .model import StateVector, rotated_hamiltonian
from .spectral import exceptional_points

DEFECTIVE_TOLERANCE = 1e-8


class Block(NamedTuple):
    eigenvalue: complex
    size: int


@dataclass(frozen=True)
class JordanForm:
    s: np.ndarray
    j: np.ndarray
    e_ep: complex
    phi_ep: np.ndarray
    phi_assoc: np.ndarray

    @property
    def blocks(self):
        n = self.j.shape[0]
        return [Block(self.e_ep, 2)] + [Block(self.j[k, k], 1) for k in range(2, n)]


def block_spec(pairs):
    """Normalise ``[(eigenvalue, size), ...]`` into a list of :class:`Block`."""
    blocks = []
    for e, k in pairs:
        if int(k) != k or k < 1:
            raise InvalidArgumentError(f"block size must be a positive integer, got {k!r}")
        blocks.append(Block(complex(e), int(k)))
    return blocks


def jordan_matrix(blocks):
    """Assemble J from the block list, blocks along the diagonal in order."""
    blocks = block_spec(blocks)
    n = sum(b.size for b in blocks)
    j = np.zeros((n, n), dtype=complex)
    i = 0
    for b in blocks:
        for m in range(b.size):
            j[i + m, i + m] = b.eigenvalue
            if m + 1 < b.size:
                j[i + m, i + m + 1] = 1.0
        i += b.size
    return j


def schrodinger_generator(h):
    """O = -i H, so that dchi/dt = O chi is the Schrodinger equation."""
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise InvalidArgumentError(f"expected a square matrix, got shape {h.shape}")
    return -1j * h


def associate_vector(o, e_ep, phi_ep, tolerance=DEFECTIVE_TOLERANCE):
    """Minimum-norm solution x of ``(o - e_ep) x = phi_ep``.

    Any ``x + alpha * phi_ep`` also solves the system; picking the smallest
    Euclidean norm makes the result deterministic without changing propagated
    states.
    """
    o = np.asarray(o, dtype=complex)
    phi = np.asarray(phi_ep, dtype=complex)
    n = o.shape[0]
    a = o - complex(e_ep) * np.eye(n)
    u, s, vh = np.linalg.svd(a)
    cutoff = tolerance * max(np.linalg.norm(o, 2), s[0] if s.size else 0.0)
    rank = int(np.sum(s > cutoff))
    if rank != n - 1:
        raise RankError(f"o - e_ep has rank {rank}, expected {n - 1}")
    x = vh[:rank].conj().T @ ((u[:, :rank].conj().T @ phi) / s[:rank])
    residual = np.linalg.norm(a @ x - phi)
    if residual > 1e-6 * np.linalg.norm(phi):
        raise RankError("phi_ep is not in the range of o - e_ep")
    return x


def jordan_decompose_2x2(o, tolerance=DEFECTIVE_TOLERANCE):
    """Jordan decomposition of a (numerically) defective 2x2 matrix.

    Returns J = [[e, 1], [0, e]] with ``e`` half the trace, and S whose first
    column is a unit eigenvector and whose second is the minimum-norm associate
    vector.
    """
    o = np.asarray(o, dtype=complex)
    if o.shape != (2, 2):
        raise InvalidArgumentError(f"expected a 2x2 matrix, got shape {o.shape}")
    scale = np.linalg.norm(o, 2)
    e = 0.5 * (o[0, 0] + o[1, 1])
    nil = o - e * np.eye(2)
    gap = 2 * np.sqrt(nil[0, 0] ** 2 + nil[0, 1] * nil[1, 0] + 0j)
    if abs(gap) > tolerance * scale:
        raise NotDefectiveError(f"eigenvalue gap {abs(gap):.3g} exceeds tolerance")
    if np.linalg.norm(nil, 2) <= tolerance * scale:
        raise DiagonalDegenerateError("matrix is a multiple of the identity")

    col = int(np.argmax(np.linalg.norm(nil, axis=0)))
    phi = nil[:, col] / np.linalg.norm(nil[:, col])
    assoc = associate_vector(o, e, phi, tolerance)
    s = np.column_stack([phi, assoc])
    return JordanForm(s=s, j=jordan_matrix([(e, 2)]), e_ep=complex(e), phi_ep=phi, phi_assoc=assoc)


def evolve_jordan(blocks, s, c0, t):
    """exp(S J S^-1 t) c0 through the Jordan coordinates ``S^-1 c0``."""
    blocks = block_spec(blocks)
    s = np.asarray(s, dtype=complex)
    c0 = np.asarray(c0, dtype=complex)
    t = _check_time(t)
    n = sum(b.size for b in blocks)
    if s.shape != (n, n) or c0.shape != (n,):
        raise InvalidArgumentError("block sizes, S and c0 have inconsistent dimensions")
    if np.linalg.cond(s) > 1e14:
        raise SingularTransformError("S is singular to working precision")
    c = np.linalg.solve(s, c0)

    xi = np.empty(n, dtype=complex)
    offset = 0
    for b in blocks:
        seg = c[offset : offset + b.size]
        grow = np.exp(b.eigenvalue * t)
        for m in range(b.size):
            poly = sum(t ** (j - m) / math.factorial(j - m) * seg[j] for j in range(m, b.size))
            xi[offset + m] = poly * grow
        offset += b.size
    return s @ xi


def ep_jordan_form(params, branch="EP1", tolerance=DEFECTIVE_TOLERANCE):
    """Jordan form of the model generator -i H (observational basis) at an EP."""
    lam = exceptional_points(params)[branch]
    return jordan_decompose_2x2(schrodinger_generator(rotated_hamiltonian(params, lam)), tolerance)


def evolve_model_jordan(params, branch, psi0, t):
    """Two-level evolution at an EP computed through the Jordan decomposition."""
    jf = ep_jordan_form(params, branch)
    return StateVector.from_array(evolve_jordan(jf.blocks, jf.s, psi0.as_array(), t))


def reference_ep1_basis(params):
    """Hand-derived Jordan basis of the rotated H at EP1.

    Columns are the eigenvector (i, 1) and an associate vector solving
    ``(H - E_EP) x = (i, 1)``. For the generator ``-i H`` the associate column
    is scaled by ``i``.
    """
    p = params
    top = (2 * p.delta + 1j * (p.epsilon1 - p.epsilon2)) / (p.delta * (p.omega1 - p.omega2))
    return np.array([[1j, top], [1.0, 0.0]], dtype=complex)
