"""Phase vectors, their Walsh-Hadamard rotation angles, and generators.

A phase vector ``theta`` of length ``2**m`` defines ``D(theta) = diag(exp(i theta_q))``.
Its rotation angles are ``phi_j = -(2 / 2**m) sum_k (-1)**popcount(j & k) theta_k``.
When ``theta_q == theta_{2**m - 1 - q}`` every ``phi_j`` with odd ``popcount(j)``
vanishes identically.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SYMMETRY_TOL = 1e-12


class SymmetryViolation(ValueError):
    """The phase vector is not invariant under complementing the index."""


def _width_of(n_entries: int) -> int:
    if n_entries < 1 or n_entries & (n_entries - 1):
        raise ValueError(f"length {n_entries} is not a power of two")
    return n_entries.bit_length() - 1


@dataclass(frozen=True, eq=False)
class ThetaVector:
    width: int
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or values.size != 2**self.width:
            raise ValueError(f"expected {2**self.width} phases, got shape {values.shape}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_values(cls, values) -> "ThetaVector":
        values = np.asarray(values, dtype=float)
        return cls(_width_of(values.size), values)

    def is_symmetric(self, tol: float = SYMMETRY_TOL) -> bool:
        return check_reflection_symmetry(self, tol)


@dataclass(frozen=True, eq=False)
class AngleVector:
    width: int
    values: np.ndarray

    @property
    def phi0(self) -> float:
        return float(self.values[0])


def parity(indices) -> np.ndarray:
    """popcount(j) mod 2, elementwise."""
    return np.bitwise_count(np.asarray(indices, dtype=np.uint64)) & 1


def walsh_hadamard(v, normalized: bool = True) -> np.ndarray:
    """Fast Walsh-Hadamard transform in natural (Hadamard) order.

    With ``normalized`` the transform is scaled by ``2**(-m/2)`` and is its
    own inverse.
    """
    a = np.array(v, dtype=float)
    m = _width_of(a.size)
    h = 1
    while h < a.size:
        a = a.reshape(-1, 2, h)
        a = np.stack((a[:, 0] + a[:, 1], a[:, 0] - a[:, 1]), axis=1)
        h *= 2
    a = a.reshape(-1)
    if normalized:
        a /= np.sqrt(2.0**m)
    return a


def check_reflection_symmetry(theta, tol: float = SYMMETRY_TOL) -> bool:
    values = theta.values if isinstance(theta, ThetaVector) else np.asarray(theta, dtype=float)
    return bool(np.all(np.abs(values - values[::-1]) <= tol))


def rotation_angles(theta: ThetaVector, symmetric: bool | None = None) -> AngleVector:
    """Rotation angles of ``D(theta)``.

    If ``theta`` is reflection-symmetric (checked unless ``symmetric`` is
    given) the odd-parity angles are set to exactly zero.
    """
    if symmetric is None:
        symmetric = check_reflection_symmetry(theta)
    size = theta.values.size
    phi = -2.0 / size * walsh_hadamard(theta.values, normalized=False)
    if symmetric:
        phi[parity(np.arange(size)) == 1] = 0.0
    return AngleVector(theta.width, phi)


# -- generators --------------------------------------------------------------

def theta_eckart(n: int, L: float, A: float, a: float, dt: float) -> ThetaVector:
    """Eckart-barrier phases ``-A sech(a |x_q - r0|) dt`` on an ``n``-qubit grid.

    The barrier centre sits half a cell left of the origin, which makes the
    grid values exactly mirror-symmetric.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if L <= 0:
        raise ValueError("cell length must be positive")
    dx = L / 2**n
    q = np.arange(2**n)
    r = np.abs(q - 2 ** (n - 1) + 0.5) * dx
    return ThetaVector(n, -A / np.cosh(a * r) * dt)


def theta_interaction(n: int, L: float, lambda2: float, dt: float) -> ThetaVector:
    """Softened-Coulomb pair phases ``-dt / sqrt(lambda2 + (|j - j'| dx)^2)``.

    Index ``q = j * 2**n + j'`` with the first particle in the high bits.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if L <= 0:
        raise ValueError("cell length must be positive")
    if lambda2 <= 0:
        raise ValueError("softening lambda^2 must be positive")
    dx = L / 2**n
    j = np.arange(2**n)
    dist = np.abs(j[:, None] - j[None, :]) * dx
    return ThetaVector(2 * n, (-dt / np.sqrt(lambda2 + dist**2)).reshape(-1))


def theta_interaction_3d(n: int, L: float, lambda2: float, dt: float) -> ThetaVector:
    """Pair phases for two particles on a cubic grid with ``n`` qubits per axis.

    Qubit order is ``(x, y, z)`` of particle one, then ``(x', y', z')``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if L <= 0:
        raise ValueError("cell length must be positive")
    if lambda2 <= 0:
        raise ValueError("softening lambda^2 must be positive")
    dx = L / 2**n
    j = np.arange(2**n)
    d = (j[:, None] - j[None, :]) ** 2
    # axes: x, y, z, x', y', z'
    r2 = (
        d[:, None, None, :, None, None]
        + d[None, :, None, None, :, None]
        + d[None, None, :, None, None, :]
    )
    return ThetaVector(6 * n, (-dt / np.sqrt(lambda2 + r2 * dx**2)).reshape(-1))


def random_symmetric_theta(width: int, rng: np.random.Generator, scale: float = np.pi) -> ThetaVector:
    """Uniform random phases mirrored so that ``theta_q == theta_{2**m-1-q}``."""
    half = rng.uniform(-scale, scale, size=2 ** max(width - 1, 0))
    if width == 0:
        return ThetaVector(0, half)
    return ThetaVector(width, np.concatenate([half, half[::-1]]))
