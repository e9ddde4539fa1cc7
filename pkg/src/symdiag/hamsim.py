"""Grid-based real-time evolution of one or two particles in one dimension.

States live on ``particles`` registers of ``n`` qubits each; the combined
index is ``q = j * 2**n + j'`` with the first particle in the high bits.
Kinetic phases are applied in momentum space with FFTs.  The mirror-symmetric
part of the potential is applied by evaluating a synthesized circuit, the
remaining diagonal parts directly.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.sparse.linalg import ArpackNoConvergence, LinearOperator, eigsh

from . import krylov
from .angles import ThetaVector, check_reflection_symmetry
from .circuit import extract_diagonal
from .synthesis import SynthesisResult, synthesize


class NonConvergence(RuntimeError):
    pass


@dataclass(frozen=True)
class Grid:
    n: int
    L: float

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.L <= 0:
            raise ValueError("cell length must be positive")

    @property
    def size(self) -> int:
        return 2**self.n

    @property
    def dx(self) -> float:
        return self.L / self.size

    @property
    def x(self) -> np.ndarray:
        return np.arange(self.size) * self.dx - self.L / 2

    @property
    def p(self) -> np.ndarray:
        """Momenta in FFT order; the same set as ``(j - 2**(n-1)) 2 pi / L``."""
        return 2 * np.pi * np.fft.fftfreq(self.size, d=self.dx)


# -- potentials ---------------------------------------------------------------

@dataclass(frozen=True)
class Eckart:
    """``A sech(a |x - r0|)``; ``r0=None`` puts the centre half a cell left of 0."""

    A: float
    a: float
    r0: float | None = None

    def one_body(self, grid: Grid) -> np.ndarray:
        r0 = -grid.dx / 2 if self.r0 is None else self.r0
        return self.A / np.cosh(self.a * np.abs(grid.x - r0))


@dataclass(frozen=True)
class SoftCoulomb:
    """``strength / sqrt(lambda2 + (x - center)^2)``; attraction has negative strength."""

    lambda2: float
    strength: float
    center: float

    def __post_init__(self):
        if self.lambda2 <= 0:
            raise ValueError("lambda2 must be positive")

    def one_body(self, grid: Grid) -> np.ndarray:
        return self.strength / np.sqrt(self.lambda2 + (grid.x - self.center) ** 2)


@dataclass(frozen=True)
class LinearField:
    omega0: float

    def one_body(self, grid: Grid) -> np.ndarray:
        return -self.omega0 * grid.x


@dataclass(frozen=True)
class Constant:
    value: float


@dataclass(frozen=True)
class PairSoftCoulomb:
    """Interaction ``strength / sqrt(lambda2 + (x1 - x2)^2)`` between two particles."""

    lambda2: float
    strength: float = 1.0

    def __post_init__(self):
        if self.lambda2 <= 0:
            raise ValueError("lambda2 must be positive")

    def two_body(self, grid: Grid) -> np.ndarray:
        d = np.abs(grid.x[:, None] - grid.x[None, :])
        return (self.strength / np.sqrt(self.lambda2 + d**2)).reshape(-1)


@dataclass(frozen=True)
class Composite:
    parts: tuple = ()


def _flatten(potential) -> list:
    if isinstance(potential, Composite):
        return [q for p in potential.parts for q in _flatten(p)]
    return [potential]


def _embed_one_body(v: np.ndarray, particles: int) -> np.ndarray:
    if particles == 1:
        return v
    if particles == 2:
        return (v[:, None] + v[None, :]).reshape(-1)
    raise ValueError("only one or two particles are supported")


def potential_diagonal(grid: Grid, potential, particles: int, which: str = "all") -> np.ndarray:
    """Potential on the full product grid.

    ``which`` selects ``"symmetric"`` (the part routed through a circuit),
    ``"rest"`` or ``"all"``.
    """
    total = np.zeros(grid.size**particles)
    for part in _flatten(potential):
        routed = _routed(part, particles)
        if which == "symmetric" and not routed or which == "rest" and routed:
            continue
        if isinstance(part, Constant):
            total += part.value
        elif isinstance(part, PairSoftCoulomb):
            if particles != 2:
                raise ValueError("pair interaction needs two particles")
            total += part.two_body(grid)
        else:
            total += _embed_one_body(part.one_body(grid), particles)
    return total


def _routed(part, particles: int) -> bool:
    """Parts whose phase vector is mirror-symmetric and goes through a circuit."""
    if particles == 1:
        return isinstance(part, Eckart)
    return isinstance(part, PairSoftCoulomb)


# -- configuration and state ----------------------------------------------------

@dataclass(frozen=True)
class TrotterConfig:
    order: int = 2
    dt: float = 0.1
    steps: int = 1

    def __post_init__(self):
        if self.order not in (1, 2):
            raise ValueError("Trotter order must be 1 or 2")
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if self.steps < 0:
            raise ValueError("steps must be non-negative")


def gaussian_packet(grid: Grid, x0: float, sigma: float, k0: float) -> np.ndarray:
    x = grid.x
    psi = np.exp(-((x - x0) ** 2) / (2 * sigma**2) + 1j * k0 * (x - x0))
    return psi / np.linalg.norm(psi)


def particles_of(psi: np.ndarray, grid: Grid) -> int:
    k, rem = divmod(int(np.log2(psi.size)), grid.n)
    if rem or 2 ** (k * grid.n) != psi.size or k not in (1, 2):
        raise ValueError(f"state of length {psi.size} does not fit {grid.n}-qubit registers")
    return k


def infidelity(psi1: np.ndarray, psi2: np.ndarray) -> float:
    psi1 = np.asarray(psi1)
    psi2 = np.asarray(psi2)
    if psi1.shape != psi2.shape:
        raise ValueError(f"lengths {psi1.shape} and {psi2.shape} differ")
    return float(1.0 - abs(np.vdot(psi1, psi2)) ** 2)


def density(psi: np.ndarray, grid: Grid) -> np.ndarray:
    """Probability per grid point; for two particles the sum of both marginals."""
    prob = np.abs(psi) ** 2
    if particles_of(psi, grid) == 1:
        return prob
    p = prob.reshape(grid.size, grid.size)
    return p.sum(axis=1) + p.sum(axis=0)


# -- propagators ----------------------------------------------------------------

def _kinetic_energy(grid: Grid, particles: int, mass: float) -> np.ndarray:
    t1 = grid.p**2 / (2 * mass)
    return _embed_one_body(t1, particles).reshape((grid.size,) * particles)


def centered_kinetic_phase(psi: np.ndarray, grid: Grid, dt: float, mass: float = 1.0) -> np.ndarray:
    particles = particles_of(psi, grid)
    shape = (grid.size,) * particles
    phi = np.fft.fftn(psi.reshape(shape))
    phi *= np.exp(-1j * dt * _kinetic_energy(grid, particles, mass))
    return np.fft.ifftn(phi).reshape(-1)


def potential_phase_via_circuit(psi: np.ndarray, result: SynthesisResult) -> np.ndarray:
    """Multiply by the diagonal that the synthesized circuit implements."""
    if psi.size != 2**result.circuit.width:
        raise ValueError(f"state of length {psi.size} does not match a {result.circuit.width}-qubit circuit")
    return extract_diagonal(result.circuit) * psi


def hamiltonian_action(grid: Grid, potential, particles: int, mass: float = 1.0):
    """``psi -> H psi`` with spectral kinetic energy and diagonal potential."""
    v = potential_diagonal(grid, potential, particles)
    kin = _kinetic_energy(grid, particles, mass)
    shape = kin.shape

    def apply(psi: np.ndarray) -> np.ndarray:
        t_psi = np.fft.ifftn(kin * np.fft.fftn(psi.reshape(shape))).reshape(-1)
        return t_psi + v * psi

    return apply


@dataclass
class StepOperators:
    """Per-step diagonals; the symmetric potential phase comes from a circuit."""

    grid: Grid
    potential: object
    particles: int
    dt: float
    mass: float = 1.0
    method: str = "alg1"
    synthesis: SynthesisResult | None = field(default=None, init=False)

    @cached_property
    def potential_phase(self) -> np.ndarray:
        sym = potential_diagonal(self.grid, self.potential, self.particles, "symmetric")
        rest = potential_diagonal(self.grid, self.potential, self.particles, "rest")
        phase = np.exp(-1j * self.dt * rest)
        if np.any(sym):
            theta = ThetaVector.from_values(-sym * self.dt)
            if not check_reflection_symmetry(theta, tol=1e-12 * max(1.0, np.abs(theta.values).max())):
                raise ValueError("routed potential is not mirror-symmetric on this grid")
            # rounding in x can break exact symmetry by an ulp; symmetrize
            theta = ThetaVector(theta.width, 0.5 * (theta.values + theta.values[::-1]))
            self.synthesis = synthesize(theta, self.method)
            phase = potential_phase_via_circuit(phase, self.synthesis)
        return phase

    def kinetic_phase(self, fraction: float) -> np.ndarray:
        return np.exp(-1j * fraction * self.dt * _kinetic_energy(self.grid, self.particles, self.mass))


def _apply_kinetic(psi: np.ndarray, kin_phase: np.ndarray) -> np.ndarray:
    return np.fft.ifftn(np.fft.fftn(psi.reshape(kin_phase.shape)) * kin_phase).reshape(-1)


def trotter_evolve(
    psi0: np.ndarray,
    grid: Grid,
    potential,
    cfg: TrotterConfig,
    snapshot_every: int | None = None,
    mass: float = 1.0,
    method: str = "alg1",
    ops: StepOperators | None = None,
) -> list[tuple[float, np.ndarray]]:
    """Product-formula propagation for ``cfg.steps`` steps.

    Order 1 applies the potential then the kinetic phase; order 2 is the
    symmetric split ``T/2 V T/2``.  Returns ``(time, state)`` snapshots at
    ``t = 0`` and every ``snapshot_every`` steps (default: only the end).
    """
    psi = np.asarray(psi0, dtype=complex).copy()
    particles = particles_of(psi, grid)
    if ops is None:
        ops = StepOperators(grid, potential, particles, cfg.dt, mass, method)
    v_phase = ops.potential_phase
    if cfg.order == 1:
        k_full = ops.kinetic_phase(1.0)
    else:
        k_half = ops.kinetic_phase(0.5)
    every = snapshot_every or max(cfg.steps, 1)
    snaps = [(0.0, psi.copy())]
    for k in range(1, cfg.steps + 1):
        if cfg.order == 1:
            psi = _apply_kinetic(v_phase * psi, k_full)
        else:
            psi = _apply_kinetic(v_phase * _apply_kinetic(psi, k_half), k_half)
        if k % every == 0 or k == cfg.steps:
            if snaps[-1][0] != k * cfg.dt:
                snaps.append((k * cfg.dt, psi.copy()))
    return snaps


def reference_propagator(
    psi0: np.ndarray, grid: Grid, potential, t: float, mass: float = 1.0, tol: float = 1e-10
) -> np.ndarray:
    """``exp(-i H t) psi0`` by adaptive Lanczos on the matrix-free Hamiltonian."""
    psi0 = np.asarray(psi0, dtype=complex)
    particles = particles_of(psi0, grid)
    if psi0.size > 2**14:
        raise ValueError("reference propagation is limited to 2**14 amplitudes")
    apply_h = hamiltonian_action(grid, potential, particles, mass)
    try:
        return krylov.propagate(apply_h, psi0, t, tol=tol)
    except krylov.ConvergenceError as exc:
        raise NonConvergence(str(exc)) from exc


def ground_state(
    grid: Grid, potential, particles: int, mass: float = 1.0, tol: float = 1e-12
) -> tuple[float, np.ndarray]:
    """Lowest eigenpair of the discretized Hamiltonian (Lanczos via ARPACK).

    The returned vector is real up to a global phase and has unit norm.
    """
    dim = grid.size**particles
    if dim > 2**14:
        raise ValueError("ground state search is limited to 2**14 amplitudes")
    apply_h = hamiltonian_action(grid, potential, particles, mass)
    op = LinearOperator((dim, dim), matvec=apply_h, dtype=complex)
    v0 = np.ones(dim, dtype=complex) / np.sqrt(dim)
    try:
        vals, vecs = eigsh(op, k=1, which="SA", tol=tol, v0=v0, maxiter=50 * dim)
    except ArpackNoConvergence as exc:
        raise NonConvergence(f"eigensolver did not converge: {exc}") from exc
    energy = float(vals[0])
    psi = vecs[:, 0]
    psi = psi / np.linalg.norm(psi)
    # fix the global phase so reruns agree bitwise in spirit and in sign
    k = int(np.argmax(np.abs(psi)))
    psi = psi * (abs(psi[k]) / psi[k])
    residual = float(np.linalg.norm(apply_h(psi) - energy * psi))
    if residual > 1e-8:
        raise NonConvergence(f"ground state residual {residual:.3e} above 1e-8")
    return energy, psi


# -- presets --------------------------------------------------------------------

@dataclass(frozen=True)
class EckartSetup:
    n: int = 10
    L: float = 80.0
    A: float = 100.0
    a: float = 0.5
    k0: float = 20.0
    sigma: float = 0.5
    x0: float = -10.0
    dt: float = 0.1
    t_end: float = 2.0
    order: int = 2
    snapshot_every: int = 4

    @property
    def grid(self) -> Grid:
        return Grid(self.n, self.L)

    @property
    def potential(self) -> Eckart:
        return Eckart(self.A, self.a)

    def initial_state(self) -> np.ndarray:
        return gaussian_packet(self.grid, self.x0, self.sigma, self.k0)


@dataclass(frozen=True)
class LiHSetup:
    n: int = 7
    L: float = 30.0
    omega0: float = 0.3
    lambda2_eH: float = 0.7
    lambda2_eLi: float = 2.25
    lambda2_ee: float = 0.6
    R_H: float = 0.75
    R_Li: float = -0.75
    dt: float = 0.1
    t_end: float = 10.0
    order: int = 2
    snapshot_every: int = 10

    @property
    def grid(self) -> Grid:
        return Grid(self.n, self.L)

    @property
    def lambda2_LiH(self) -> float:
        return self.lambda2_eH + self.lambda2_eLi - self.lambda2_ee

    def potential(self, field: bool = True) -> Composite:
        parts = [
            SoftCoulomb(self.lambda2_eLi, -1.0, self.R_Li),
            SoftCoulomb(self.lambda2_eH, -1.0, self.R_H),
            PairSoftCoulomb(self.lambda2_ee),
            Constant(1.0 / np.sqrt(self.lambda2_LiH + (self.R_H - self.R_Li) ** 2)),
        ]
        if field:
            parts.append(LinearField(self.omega0))
        return Composite(tuple(parts))

    def initial_state(self) -> np.ndarray:
        return ground_state(self.grid, self.potential(field=False), 2)[1]


def steps_for(t_end: float, dt: float) -> int:
    k = int(round(t_end / dt))
    if not np.isclose(k * dt, t_end, rtol=0, atol=1e-9 * max(1.0, t_end)):
        raise ValueError(f"t_end={t_end} is not a whole number of steps of {dt}")
    return k


@dataclass
class SimulationRecord:
    grid: Grid
    times: list[float]
    densities: list[np.ndarray]
    infidelities: list[float]
    norms: list[float]
    synthesis: SynthesisResult | None


def run_setup(setup: EckartSetup | LiHSetup, reference: bool = True) -> SimulationRecord:
    """Trotter run with snapshots, each compared with the Lanczos reference."""
    grid = setup.grid
    if isinstance(setup, LiHSetup):
        potential = setup.potential()
        psi0 = ground_state(grid, setup.potential(field=False), 2)[1]
    else:
        potential = setup.potential
        psi0 = setup.initial_state()
    particles = particles_of(psi0, grid)
    cfg = TrotterConfig(setup.order, setup.dt, steps_for(setup.t_end, setup.dt))
    ops = StepOperators(grid, potential, particles, setup.dt)
    snaps = trotter_evolve(psi0, grid, potential, cfg, setup.snapshot_every, ops=ops)
    infid = []
    ref, t_prev = psi0, 0.0
    for t, psi in snaps:
        if reference:
            ref = reference_propagator(ref, grid, potential, t - t_prev)
            t_prev = t
            infid.append(infidelity(psi, ref))
        else:
            infid.append(float("nan"))
    return SimulationRecord(
        grid,
        [t for t, _ in snaps],
        [density(psi, grid) for _, psi in snaps],
        infid,
        [float(np.linalg.norm(psi)) for _, psi in snaps],
        ops.synthesis,
    )
