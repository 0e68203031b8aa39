"""Symmetric eigenvalue computation for small dense matrices.

A cyclic Jacobi iteration with threshold skipping; adequate for the matrix
sizes appearing here (d x d Gram matrices of affine maps and element mass
matrices up to a few hundred rows).  Only eigenvalues are needed.
"""

from __future__ import annotations

import numpy as np


def symmetric_eigenvalues(
    a, tol: float = 1e-12, max_sweeps: int = 60
) -> np.ndarray:
    """Eigenvalues (ascending) of a symmetric matrix by cyclic Jacobi rotations.

    Iterates sweeps of (p, q) rotations until the off-diagonal Frobenius norm
    drops below ``tol`` relative to the matrix norm.

    Raises
    ------
    ValueError
        If the matrix is not square/symmetric.
    ArithmeticError
        If the iteration has not converged after ``max_sweeps`` sweeps.
    """
    a = np.array(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    norm = np.linalg.norm(a)
    if not np.allclose(a, a.T, atol=1e-10 * max(1.0, norm)):
        raise ValueError("matrix is not symmetric")
    a = 0.5 * (a + a.T)
    if n == 1:
        return a[0].copy()

    scale = max(1.0, norm)
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.tril(a, -1) ** 2) * 2.0)
        if off <= tol * scale:
            break
        threshold = off / (n * n)
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= threshold * 1e-4:
                    continue
                theta = 0.5 * (a[q, q] - a[p, p]) / apq
                t = np.sign(theta) / (abs(theta) + np.hypot(theta, 1.0))
                if theta == 0.0:
                    t = 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
    else:
        raise ArithmeticError(
            f"Jacobi iteration did not reach tolerance {tol} in {max_sweeps} sweeps"
        )
    return np.sort(np.diag(a))
