"""Matrix-free Lanczos propagation of ``exp(-i H t) psi`` for Hermitian ``H``."""
from __future__ import annotations

from typing import Callable

import numpy as np
from scipy.linalg import eigh_tridiagonal


class ConvergenceError(RuntimeError):
    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual


def _lanczos(apply_h, v0: np.ndarray, dim: int):
    """Tridiagonal projection of ``H`` on the Krylov space of ``v0`` (unit norm).

    Returns the basis, the diagonal, the off-diagonal and the trailing
    coupling ``beta_k`` (zero on breakdown).
    """
    n = v0.size
    dim = min(dim, n)
    basis = np.empty((dim, n), dtype=complex)
    alpha = np.zeros(dim)
    beta = np.zeros(dim)
    basis[0] = v0
    w_prev = None
    for k in range(dim):
        w = apply_h(basis[k])
        alpha[k] = np.vdot(basis[k], w).real
        w = w - alpha[k] * basis[k]
        if k > 0:
            w -= beta[k - 1] * basis[k - 1]
        # full reorthogonalization keeps the small basis clean
        w -= basis[: k + 1].T @ (basis[: k + 1].conj() @ w)
        b = np.linalg.norm(w)
        beta[k] = b
        if k + 1 == dim or b < 1e-14:
            return basis[: k + 1], alpha[: k + 1], beta[:k], b
        basis[k + 1] = w / b
    return basis, alpha, beta[: dim - 1], beta[dim - 1]


def propagate(
    apply_h: Callable[[np.ndarray], np.ndarray],
    psi: np.ndarray,
    t: float,
    tol: float = 1e-10,
    krylov_dim: int = 40,
    max_steps: int = 1_000_000,
) -> np.ndarray:
    """Adaptive short-iterative Lanczos for ``exp(-i H t) psi``.

    Each substep ``tau`` is accepted when the local error estimate
    ``|beta_k (e_k^T exp(-i T_k tau) e_1)|`` is below ``tol * tau / t``, so
    the accumulated error stays near ``tol``.
    """
    psi = np.asarray(psi, dtype=complex).copy()
    if t == 0:
        return psi
    sign = 1.0 if t > 0 else -1.0
    remaining = abs(t)
    tau = remaining
    steps = 0
    while remaining > 0:
        steps += 1
        if steps > max_steps:
            raise ConvergenceError("Lanczos propagation did not finish", remaining)
        norm = np.linalg.norm(psi)
        basis, a, b, tail = _lanczos(apply_h, psi / norm, krylov_dim)
        evals, evecs = eigh_tridiagonal(a, b) if b.size else (a, np.ones((1, 1)))
        tau = min(tau, remaining)
        while True:
            coeff = evecs @ (np.exp(-1j * sign * evals * tau) * evecs[0].conj())
            err = abs(tail * coeff[-1])
            if err <= tol * tau / abs(t) or tail < 1e-14:
                break
            tau *= 0.5
            if tau < 1e-14 * abs(t):
                raise ConvergenceError("Lanczos step size underflow", err)
        psi = norm * (basis.T @ coeff)
        remaining -= tau
        if remaining < 1e-15 * abs(t):
            remaining = 0.0
        # try a larger step next time when this one was comfortably accurate
        if err < 0.1 * tol * tau / abs(t):
            tau *= 1.5
    return psi
