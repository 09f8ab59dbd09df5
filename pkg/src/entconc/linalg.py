"""Small dense complex linear algebra for few-qubit systems.

Everything operates on plain numpy arrays (dtype complex) in C order with one
fixed tensor convention used throughout the package: tensor products are
big-endian, the leftmost factor is the most significant index,

    tensor(a, b)[i * dim_b + j] == a[i] * b[j].

Only the 2x2 singular value decomposition is provided; nothing here needs
more.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Tolerances:
    """Default numerical tolerances shared across the package."""

    algebra: float = 1e-12  # unitarity, norms, probability bookkeeping
    decomposition: float = 1e-10  # SVD / Schmidt reconstruction quality
    normalization: float = 1e-9  # slack for user-entered amplitudes


DEFAULT_TOL = Tolerances()


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product of two vectors or two matrices (left factor most significant)."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.ndim != b.ndim or a.ndim not in (1, 2):
        raise ValueError(
            f"tensor expects two vectors or two matrices, got ndim {a.ndim} and {b.ndim}"
        )
    return np.kron(a, b)


def apply(m: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Matrix-vector product with an explicit dimension check."""
    m = np.asarray(m, dtype=complex)
    v = np.asarray(v, dtype=complex)
    if m.ndim != 2 or v.ndim != 1 or m.shape[1] != v.shape[0]:
        raise ValueError(f"dimension mismatch: matrix {m.shape} applied to vector {v.shape}")
    return m @ v


def adjoint(m: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.asarray(m, dtype=complex).conj().T


def norm(v: np.ndarray) -> float:
    return float(np.linalg.norm(v))


def is_unitary(m: np.ndarray, tol: float = DEFAULT_TOL.algebra) -> bool:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    residual = m.conj().T @ m - np.eye(m.shape[0])
    return float(np.max(np.abs(residual))) <= tol


def svd2x2(m: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Singular value decomposition of a 2x2 complex matrix.

    Returns ``(u, s, v)`` with ``m == u @ diag(s) @ v.conj().T``, ``s`` real,
    nonnegative and descending, and ``u``, ``v`` unitary. Columns are phase
    fixed so that the first non-negligible component of each column of ``u``
    is real and nonnegative, which makes the output reproducible. The zero
    matrix yields ``u = v = I`` and ``s = (0, 0)``.

    Solved in closed form from the eigenproblem of ``m^H m``; no iteration.
    """
    m = np.asarray(m, dtype=complex)
    if m.shape != (2, 2):
        raise ValueError(f"svd2x2 expects a 2x2 matrix, got shape {m.shape}")

    h = m.conj().T @ m
    a = h[0, 0].real
    d = h[1, 1].real
    b = h[0, 1]
    spread = math.hypot(a - d, 2.0 * abs(b))
    lam0 = 0.5 * ((a + d) + spread)

    # Eigenvector of h for the larger eigenvalue. The two candidate forms are
    # parallel; pick the better conditioned one. Both vanish only when h is a
    # multiple of the identity, where any orthonormal basis will do.
    cand0 = np.array([b, lam0 - a], dtype=complex)
    cand1 = np.array([lam0 - d, np.conjugate(b)], dtype=complex)
    v0 = cand0 if np.linalg.norm(cand0) >= np.linalg.norm(cand1) else cand1
    v0_norm = np.linalg.norm(v0)
    if v0_norm == 0.0:
        v = np.eye(2, dtype=complex)
    else:
        v0 = v0 / v0_norm
        v = np.column_stack([v0, [-np.conjugate(v0[1]), np.conjugate(v0[0])]])

    w0 = m @ v[:, 0]
    w1 = m @ v[:, 1]
    s0 = float(np.linalg.norm(w0))
    if s0 == 0.0:
        return np.eye(2, dtype=complex), np.zeros(2), np.eye(2, dtype=complex)
    s1 = min(float(np.linalg.norm(w1)), s0)

    u0 = w0 / s0
    u0 = u0 / np.linalg.norm(u0)
    # Exact orthocomplement keeps u unitary even when s1/s0 underflows the
    # working precision; re-phase it so that m @ v1 == s1 * u1 still holds.
    u1 = np.array([-np.conjugate(u0[1]), np.conjugate(u0[0])])
    z = np.vdot(u1, w1)
    if abs(z) > s0 * 1e-15:
        u1 = u1 * (z / abs(z))
    u = np.column_stack([u0, u1])

    for k in range(2):
        pivot = u[0, k] if abs(u[0, k]) > 1e-12 else u[1, k]
        if pivot == 0.0:
            continue
        phase = np.conjugate(pivot / abs(pivot))
        u[:, k] *= phase
        v[:, k] *= phase

    return u, np.array([s0, s1]), v
