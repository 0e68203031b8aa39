"""One-dimensional and tensor-product polynomial bases.

Legendre and Chebyshev polynomials are evaluated with their three-term
recurrences (never through monomial coefficients, except inside exact
integer-coefficient oracles).  Lagrange bases on arbitrary distinct node
sets use the second barycentric form with weights precomputed at
construction, which stays well conditioned for clustered Gauss-Lobatto
nodes up to the supported degree cap ``MAX_DEGREE = 12``.

Multi-indices are plain tuples of non-negative integers.  Tensor data
indexed by multi-indices is stored in C order (last axis fastest), the
same order produced by :func:`multi_indices` / ``numpy.ndindex``.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterator

import numpy as np

MultiIndex = tuple[int, ...]

MAX_DEGREE = 12
MAX_DIMENSION = 3

# Two evaluation points closer than this are treated as the same node by
# the barycentric formula (exact Kronecker behaviour at the nodes).
_NODE_COINCIDENCE_TOL = 1e-14


def multi_indices(k: int, d: int) -> Iterator[MultiIndex]:
    """Iterate all multi-indices ``alpha`` with ``max(alpha) <= k``, C order."""
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    return iter(np.ndindex(*([k + 1] * d)))


def check_multi_index(alpha: MultiIndex, d: int, k: int | None = None) -> None:
    """Validate length, non-negativity and (optionally) the max-degree bound."""
    if len(alpha) != d:
        raise ValueError(f"multi-index {alpha} has length {len(alpha)}, expected {d}")
    if any(int(a) != a or a < 0 for a in alpha):
        raise ValueError(f"multi-index entries must be non-negative integers: {alpha}")
    if k is not None and max(alpha, default=0) > k:
        raise ValueError(f"multi-index {alpha} exceeds degree bound {k}")


def total_degree_indices(l: int, d: int) -> list[MultiIndex]:
    """All multi-indices of length ``d`` with ``|alpha| = l`` (lexicographic)."""
    if d == 1:
        return [(l,)]
    out: list[MultiIndex] = []
    for first in range(l, -1, -1):
        out.extend((first,) + rest for rest in total_degree_indices(l - first, d - 1))
    return out


# ---------------------------------------------------------------------------
# Legendre and Chebyshev polynomials
# ---------------------------------------------------------------------------


def legendre_eval(n: int, x):
    """Evaluate the Legendre polynomial of degree ``n``, normalized so that
    the value at 1 is 1, via the three-term recurrence."""
    if n < 0:
        raise ValueError(f"degree must be >= 0, got {n}")
    x = np.asarray(x, dtype=float)
    p_prev = np.ones_like(x)
    if n == 0:
        return p_prev[()] if p_prev.ndim == 0 else p_prev
    p_cur = x.copy()
    for m in range(2, n + 1):
        p_prev, p_cur = p_cur, ((2 * m - 1) * x * p_cur - (m - 1) * p_prev) / m
    return p_cur[()] if p_cur.ndim == 0 else p_cur


def _legendre_derivative_table(n: int, x: np.ndarray, order: int) -> np.ndarray:
    """Values of the derivatives ``P_n^(j)(x)`` for ``j = 0..order``.

    Differentiating the three-term recurrence ``m P_m = (2m-1) x P_{m-1}
    - (m-1) P_{m-2}`` j times gives a recurrence that is total on the whole
    interval, endpoints included.
    """
    cur = np.zeros((order + 1,) + x.shape)
    cur[0] = 1.0
    if n == 0:
        return cur
    nxt = np.zeros_like(cur)
    nxt[0] = x
    if order >= 1:
        nxt[1] = 1.0
    prev, cur = cur, nxt
    for m in range(2, n + 1):
        nxt = np.zeros_like(cur)
        for j in range(order + 1):
            leibniz = x * cur[j]
            if j >= 1:
                leibniz = leibniz + j * cur[j - 1]
            nxt[j] = ((2 * m - 1) * leibniz - (m - 1) * prev[j]) / m
        prev, cur = cur, nxt
    return cur


def legendre_derivative(n: int, x, order: int = 1):
    """``order``-th derivative of the degree-``n`` Legendre polynomial."""
    if n < 0:
        raise ValueError(f"degree must be >= 0, got {n}")
    if order < 1:
        raise ValueError(f"derivative order must be >= 1, got {order}")
    x = np.asarray(x, dtype=float)
    table = _legendre_derivative_table(n, np.atleast_1d(x), order)
    out = table[order]
    return out[0] if x.ndim == 0 else out


def legendre_vandermonde(points, k: int) -> np.ndarray:
    """Matrix ``V[i, n] = psi_n(points[i])`` for degrees ``n = 0..k``."""
    points = np.atleast_1d(np.asarray(points, dtype=float))
    v = np.empty((points.size, k + 1))
    v[:, 0] = 1.0
    if k >= 1:
        v[:, 1] = points
    for m in range(2, k + 1):
        v[:, m] = ((2 * m - 1) * points * v[:, m - 1] - (m - 1) * v[:, m - 2]) / m
    return v


def chebyshev_eval(n: int, x):
    """Chebyshev polynomial of the first kind, by recurrence."""
    if n < 0:
        raise ValueError(f"degree must be >= 0, got {n}")
    x = np.asarray(x, dtype=float)
    t_prev = np.ones_like(x)
    if n == 0:
        return t_prev[()] if t_prev.ndim == 0 else t_prev
    t_cur = x.copy()
    for _ in range(2, n + 1):
        t_prev, t_cur = t_cur, 2.0 * x * t_cur - t_prev
    return t_cur[()] if t_cur.ndim == 0 else t_cur


# ---------------------------------------------------------------------------
# Extremal example polynomial ((1 - T_n^2) / (1 - x^2))^2
# ---------------------------------------------------------------------------


def _poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return out


@functools.lru_cache(maxsize=None)
def _chebyshev_coefficients(n: int) -> tuple[int, ...]:
    """Monomial coefficients of T_n (ascending), exact integers."""
    t_prev, t_cur = [1], [0, 1]
    if n == 0:
        return tuple(t_prev)
    for _ in range(2, n + 1):
        doubled = [0] + [2 * c for c in t_cur]
        t_prev, t_cur = t_cur, [
            a - b for a, b in zip(doubled, t_prev + [0] * (len(doubled) - len(t_prev)))
        ]
    return tuple(t_cur)


@functools.lru_cache(maxsize=None)
def _timan_quotient_coefficients(n: int) -> tuple[int, ...]:
    """Exact integer coefficients (ascending) of ``(1 - T_n^2) / (1 - x^2)``.

    Long division is carried out on integer monomial coefficients; the
    remainder must vanish identically, which removes the singularity at
    the endpoints exactly.
    """
    tn = list(_chebyshev_coefficients(n))
    tn_sq = _poly_mul(tn, tn)
    numerator = [-c for c in tn_sq]
    numerator[0] += 1
    # Divide by 1 - x^2, working from the highest coefficient down.
    rem = list(numerator)
    deg = len(rem) - 1
    quot = [0] * (deg - 1)
    for m in range(deg, 1, -1):
        c = rem[m]
        if c == 0:
            continue
        quot[m - 2] = -c
        rem[m] = 0
        rem[m - 2] += c
    if any(rem):
        raise ArithmeticError(f"non-zero remainder dividing 1 - T_{n}^2 by 1 - x^2")
    return tuple(quot)


def timan_example_eval(n: int, x):
    """Evaluate ``((1 - T_n(x)^2) / (1 - x^2))^2`` stably, endpoints included.

    The degree-(4n-4) polynomial is formed by exact coefficient-level
    division followed by Horner evaluation of the quotient, so the value at
    ``x = +-1`` is exactly ``n**4``.
    """
    if n < 1:
        raise ValueError(f"degree must be >= 1, got {n}")
    x = np.asarray(x, dtype=float)
    coeffs = _timan_quotient_coefficients(n)
    val = np.zeros_like(x)
    for c in reversed(coeffs):
        val = val * x + c
    val = val * val
    return val[()] if val.ndim == 0 else val


# ---------------------------------------------------------------------------
# Lagrange bases
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NodeSet1D:
    """Strictly increasing, pairwise distinct nodes in [-1, 1]."""

    nodes: np.ndarray

    @property
    def size(self) -> int:
        return self.nodes.size


def node_set(nodes) -> NodeSet1D:
    nodes = np.array(nodes, dtype=float)
    if nodes.ndim != 1 or nodes.size < 1:
        raise ValueError("a node set is a non-empty 1D array")
    if np.any(np.diff(nodes) <= 0):
        raise ValueError("nodes must be strictly increasing (pairwise distinct)")
    if nodes[0] < -1.0 - 1e-12 or nodes[-1] > 1.0 + 1e-12:
        raise ValueError("nodes must lie in [-1, 1]")
    nodes.flags.writeable = False
    return NodeSet1D(nodes)


@dataclass(frozen=True)
class LagrangeBasis1D:
    """Lagrange cardinal basis on a 1D node set (second barycentric form)."""

    node_set: NodeSet1D
    degree: int
    bary_weights: np.ndarray

    @property
    def nodes(self) -> np.ndarray:
        return self.node_set.nodes


def lagrange_basis(nodes) -> LagrangeBasis1D:
    """Build the cardinal basis; barycentric weights are precomputed here."""
    ns = nodes if isinstance(nodes, NodeSet1D) else node_set(nodes)
    x = ns.nodes
    diff = x[:, None] - x[None, :]
    np.fill_diagonal(diff, 1.0)
    w = 1.0 / np.prod(diff, axis=1)
    w.flags.writeable = False
    return LagrangeBasis1D(ns, x.size - 1, w)


def lagrange_eval_matrix(basis: LagrangeBasis1D, points) -> np.ndarray:
    """Tabulate all cardinal functions: ``E[m, i] = phi_i(points[m])``.

    Points that coincide with a node (within 1e-14) are mapped to the exact
    Kronecker row, so the delta property holds exactly at the nodes.
    """
    points = np.atleast_1d(np.asarray(points, dtype=float))
    x = basis.nodes
    diff = points[:, None] - x[None, :]
    hit = np.absolute(diff) < _NODE_COINCIDENCE_TOL
    diff[hit] = 1.0
    terms = basis.bary_weights[None, :] / diff
    out = terms / np.sum(terms, axis=1)[:, None]
    rows = np.any(hit, axis=1)
    out[rows] = 0.0
    out[hit] = 1.0
    return out


def lagrange_eval(basis: LagrangeBasis1D, i: int, x):
    """Evaluate the ``i``-th cardinal function at ``x``."""
    if not 0 <= i <= basis.degree:
        raise IndexError(f"basis index {i} out of range 0..{basis.degree}")
    x = np.asarray(x, dtype=float)
    vals = lagrange_eval_matrix(basis, x)[:, i]
    return vals[0] if x.ndim == 0 else vals


def differentiation_matrix(basis: LagrangeBasis1D) -> np.ndarray:
    """Nodal differentiation matrix ``D[i, j] = phi_j'(x_i)``."""
    x = basis.nodes
    w = basis.bary_weights
    diff = x[:, None] - x[None, :]
    np.fill_diagonal(diff, 1.0)
    d = (w[None, :] / w[:, None]) / diff
    np.fill_diagonal(d, 0.0)
    np.fill_diagonal(d, -np.sum(d, axis=1))
    return d


def lagrange_derivative_matrix(
    basis: LagrangeBasis1D, points, order: int = 1
) -> np.ndarray:
    """Tabulate derivatives of the cardinal functions at arbitrary points.

    The derivative of degree ``order`` is itself a polynomial of the space,
    so it is evaluated exactly as ``E(points) @ D^order``.
    """
    if order < 0:
        raise ValueError(f"derivative order must be >= 0, got {order}")
    e = lagrange_eval_matrix(basis, points)
    if order == 0:
        return e
    d = differentiation_matrix(basis)
    d_pow = np.linalg.matrix_power(d, order)
    return e @ d_pow


def lagrange_derivative(basis: LagrangeBasis1D, i: int, x, order: int = 1):
    """Derivative of the ``i``-th cardinal function at ``x``."""
    if not 0 <= i <= basis.degree:
        raise IndexError(f"basis index {i} out of range 0..{basis.degree}")
    x = np.asarray(x, dtype=float)
    vals = lagrange_derivative_matrix(basis, x, order)[:, i]
    return vals[0] if x.ndim == 0 else vals


def tensor_basis_eval(alpha: MultiIndex, basis: LagrangeBasis1D, point) -> float:
    """Tensor-product cardinal function ``phi_alpha`` at a d-dimensional point."""
    point = np.atleast_1d(np.asarray(point, dtype=float))
    check_multi_index(tuple(alpha), point.size, basis.degree)
    val = 1.0
    for a, coord in zip(alpha, point):
        val *= float(lagrange_eval_matrix(basis, coord)[0, a])
    return val
