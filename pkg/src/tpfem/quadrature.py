"""Interpolatory quadrature rules on the reference interval and cube.

Node generation uses Newton iteration on the Legendre recurrences
(Chebyshev-zero initial guesses for Gauss, Chebyshev-extremum guesses for
Gauss-Lobatto).  Weights are always obtained by integrating the Lagrange
cardinal functions with an internally generated Gauss rule of sufficient
precision, bootstrapped from closed-form low-order rules; closed-form
weight formulas are never used for generated rules.

All generated rules must have strictly positive weights; node/weight
configurations that violate this (e.g. equispaced rules with more than 8
nodes) are rejected as unrepresentable.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from tpfem.geometry import AffineMap
from tpfem.polybasis import (
    MAX_DEGREE,
    NodeSet1D,
    lagrange_basis,
    lagrange_eval_matrix,
    legendre_derivative,
    legendre_eval,
    node_set,
)

GAUSS = "gauss"
GAUSS_LOBATTO = "gauss-lobatto"
EQUISPACED = "equispaced"

_NEWTON_MAX_ITER = 100
_MOMENT_TOL = 1e-10


def _monomial_moment(n: int) -> float:
    """Exact integral of x^n over [-1, 1]."""
    return 0.0 if n % 2 else 2.0 / (n + 1)


# ---------------------------------------------------------------------------
# Node generation
# ---------------------------------------------------------------------------


def _newton(f, fprime, x0: np.ndarray, what: str) -> np.ndarray:
    x = x0.copy()
    for _ in range(_NEWTON_MAX_ITER):
        step = f(x) / fprime(x)
        x -= step
        if np.max(np.absolute(step)) < 1e-15:
            return x
    raise ArithmeticError(
        f"Newton iteration for {what} did not converge in {_NEWTON_MAX_ITER} steps"
    )


def _symmetrize(nodes: np.ndarray) -> np.ndarray:
    """Enforce exact symmetry about 0 (pins the middle node of odd counts to 0)."""
    return 0.5 * (nodes - nodes[::-1])


def gauss_nodes(k: int) -> np.ndarray:
    """Zeros of the Legendre polynomial of degree k+1, ascending."""
    n = k + 1
    guess = -np.cos(np.pi * (2.0 * np.arange(n) + 1.0) / (2.0 * n))
    nodes = _newton(
        lambda x: legendre_eval(n, x),
        lambda x: legendre_derivative(n, x, 1),
        guess,
        f"Gauss nodes (k={k})",
    )
    nodes = _symmetrize(nodes)
    residual = np.max(np.absolute(legendre_eval(n, nodes)))
    if residual > 1e-14:
        raise ArithmeticError(f"Gauss node residual {residual:.2e} exceeds 1e-14")
    return nodes


def gauss_lobatto_nodes(k: int) -> np.ndarray:
    """The endpoints plus the k-1 zeros of the derivative of psi_k."""
    if k < 1:
        raise ValueError(f"Gauss-Lobatto needs degree >= 1, got {k}")
    if k == 1:
        return np.array([-1.0, 1.0])
    guess = -np.cos(np.pi * np.arange(1, k) / k)
    interior = _newton(
        lambda x: legendre_derivative(k, x, 1),
        lambda x: legendre_derivative(k, x, 2),
        guess,
        f"Gauss-Lobatto nodes (k={k})",
    )
    nodes = np.concatenate(([-1.0], _symmetrize(interior), [1.0]))
    # Backward-error check scaled by the local derivative magnitude.
    scale = np.maximum(1.0, np.absolute(legendre_derivative(k, nodes[1:-1], 2)))
    residual = np.max(np.absolute(legendre_derivative(k, nodes[1:-1], 1)) / scale)
    if residual > 1e-14:
        raise ArithmeticError(
            f"Gauss-Lobatto node residual {residual:.2e} exceeds 1e-14"
        )
    return nodes


def equispaced_nodes(k: int) -> np.ndarray:
    if k < 1:
        raise ValueError(f"equispaced family needs degree >= 1, got {k}")
    return np.linspace(-1.0, 1.0, k + 1)


# ---------------------------------------------------------------------------
# Bootstrapped internal Gauss rules used to integrate cardinal functions
# ---------------------------------------------------------------------------

# Closed-form Gauss rules for degrees 0..4 (nodes/weights in radicals);
# everything of higher precision is generated from these.
def _closed_form_gauss(k: int) -> tuple[np.ndarray, np.ndarray]:
    s30 = math.sqrt(30.0)
    s70 = math.sqrt(70.0)
    if k == 0:
        return np.array([0.0]), np.array([2.0])
    if k == 1:
        x = 1.0 / math.sqrt(3.0)
        return np.array([-x, x]), np.array([1.0, 1.0])
    if k == 2:
        x = math.sqrt(3.0 / 5.0)
        return np.array([-x, 0.0, x]), np.array([5.0, 8.0, 5.0]) / 9.0
    if k == 3:
        x1 = math.sqrt((3.0 - 2.0 * math.sqrt(6.0 / 5.0)) / 7.0)
        x2 = math.sqrt((3.0 + 2.0 * math.sqrt(6.0 / 5.0)) / 7.0)
        w1 = (18.0 + s30) / 36.0
        w2 = (18.0 - s30) / 36.0
        return np.array([-x2, -x1, x1, x2]), np.array([w2, w1, w1, w2])
    if k == 4:
        x1 = math.sqrt(5.0 - 2.0 * math.sqrt(10.0 / 7.0)) / 3.0
        x2 = math.sqrt(5.0 + 2.0 * math.sqrt(10.0 / 7.0)) / 3.0
        w0 = 128.0 / 225.0
        w1 = (322.0 + 13.0 * s70) / 900.0
        w2 = (322.0 - 13.0 * s70) / 900.0
        return np.array([-x2, -x1, 0.0, x1, x2]), np.array([w2, w1, w0, w1, w2])
    raise ValueError(f"no closed form stored for degree {k}")


@functools.lru_cache(maxsize=None)
def _internal_gauss(k: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss rule of degree ``k`` for internal use (nodes, weights).

    Weights of the degree-k rule are integrals of its degree-k cardinal
    functions, computed with a previously built rule whose precision 2k'+1
    covers degree k; the recursion bottoms out at the closed forms above.
    """
    if k <= 4:
        nodes, weights = _closed_form_gauss(k)
    else:
        nodes = gauss_nodes(k)
        inner_nodes, inner_weights = _internal_gauss((k + 1) // 2)
        weights = _integrate_cardinals(nodes, inner_nodes, inner_weights)
    nodes.flags.writeable = False
    weights.flags.writeable = False
    return nodes, weights


def _integrate_cardinals(
    nodes: np.ndarray, quad_nodes: np.ndarray, quad_weights: np.ndarray
) -> np.ndarray:
    tab = lagrange_eval_matrix(lagrange_basis(nodes), quad_nodes)
    return tab.T @ quad_weights


def oracle_rule_1d(min_dop: int) -> tuple[np.ndarray, np.ndarray]:
    """(nodes, weights) of an internal Gauss rule with precision >= min_dop."""
    k = max(0, math.ceil((min_dop - 1) / 2))
    return _internal_gauss(k)


# ---------------------------------------------------------------------------
# Public rules
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuadRule1D:
    """Nodes and positive weights on [-1, 1] with a verified precision degree."""

    family: str
    k: int
    nodes: NodeSet1D
    weights: np.ndarray
    dop: int

    @property
    def node_array(self) -> np.ndarray:
        return self.nodes.nodes


def _make_rule(family: str, k: int, nodes: np.ndarray, declared_dop: int) -> QuadRule1D:
    oracle_nodes, oracle_weights = oracle_rule_1d(2 * k + 13)
    weights = _integrate_cardinals(nodes, oracle_nodes, oracle_weights)
    if np.any(weights <= 0.0):
        raise ValueError(
            f"{family} rule of degree {k} has non-positive weights; "
            "such rules are not representable"
        )
    total = float(np.sum(weights))
    if abs(total - 2.0) > 1e-12:
        raise ArithmeticError(f"weights sum to {total}, expected 2")
    weights.flags.writeable = False
    rule = QuadRule1D(
        family=family, k=k, nodes=node_set(nodes), weights=weights, dop=declared_dop
    )
    measured = degree_of_precision(rule)
    if measured != declared_dop:
        raise ArithmeticError(
            f"{family} degree {k}: measured precision {measured} "
            f"!= declared {declared_dop}"
        )
    return rule


@functools.lru_cache(maxsize=None)
def gauss_rule(k: int) -> QuadRule1D:
    """Gauss rule with k+1 nodes, exact through degree 2k+1."""
    if not 0 <= k <= MAX_DEGREE:
        raise ValueError(f"supported degrees are 0..{MAX_DEGREE}, got {k}")
    return _make_rule(GAUSS, k, gauss_nodes(k), 2 * k + 1)


@functools.lru_cache(maxsize=None)
def gauss_lobatto_rule(k: int) -> QuadRule1D:
    """Gauss-Lobatto rule with k+1 nodes (endpoints included), exact to 2k-1."""
    if not 1 <= k <= MAX_DEGREE:
        raise ValueError(f"supported degrees are 1..{MAX_DEGREE}, got {k}")
    return _make_rule(GAUSS_LOBATTO, k, gauss_lobatto_nodes(k), 2 * k - 1)


@functools.lru_cache(maxsize=None)
def equispaced_rule(k: int) -> QuadRule1D:
    """Closed Newton-Cotes rule; positive weights restrict it to k <= 7.

    Included as a negative control for precision and stability studies.
    """
    if not 1 <= k <= MAX_DEGREE:
        raise ValueError(f"supported degrees are 1..{MAX_DEGREE}, got {k}")
    dop = k + 1 if k % 2 == 0 else k
    return _make_rule(EQUISPACED, k, equispaced_nodes(k), dop)


_FAMILIES = {
    GAUSS: gauss_rule,
    GAUSS_LOBATTO: gauss_lobatto_rule,
    EQUISPACED: equispaced_rule,
}


def rule_for(family: str, k: int) -> QuadRule1D:
    try:
        factory = _FAMILIES[family]
    except KeyError:
        raise ValueError(
            f"unknown family {family!r}; choose from {sorted(_FAMILIES)}"
        ) from None
    return factory(k)


def nodes_for(family: str, k: int) -> np.ndarray:
    return rule_for(family, k).node_array


# ---------------------------------------------------------------------------
# Tensorization and mapping
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuadRuleTensor:
    """Tensor product of d identical 1D rules on the reference cube.

    Flattened points/weights are in C order: the multi-index ``alpha``
    addresses entry ``ravel_multi_index(alpha, (k+1,)*d)``.
    """

    axis: QuadRule1D
    d: int
    points: np.ndarray
    weights: np.ndarray

    @property
    def k(self) -> int:
        return self.axis.k

    @property
    def family(self) -> str:
        return self.axis.family


def tensorize(rule: QuadRule1D, d: int) -> QuadRuleTensor:
    """Product rule over the reference cube ``[-1, 1]^d``."""
    if not 1 <= d <= 3:
        raise ValueError(f"supported dimensions are 1..3, got {d}")
    x = rule.node_array
    grids = np.meshgrid(*([x] * d), indexing="ij")
    points = np.stack([g.reshape(-1) for g in grids], axis=-1)
    weights = rule.weights
    for _ in range(d - 1):
        weights = np.multiply.outer(weights, rule.weights)
    weights = weights.reshape(-1)
    points.flags.writeable = False
    weights.flags.writeable = False
    return QuadRuleTensor(axis=rule, d=d, points=points, weights=weights)


@functools.lru_cache(maxsize=None)
def tensor_rule(family: str, k: int, d: int) -> QuadRuleTensor:
    """Cached tensorized rule."""
    return tensorize(rule_for(family, k), d)


@dataclass(frozen=True)
class MappedRule:
    """A tensor rule pushed to a physical element: nodes F(x_i), weights |det J| w_i."""

    base: QuadRuleTensor
    element: AffineMap
    points: np.ndarray
    weights: np.ndarray

    @property
    def d(self) -> int:
        return self.base.d


def map_rule(rule: QuadRuleTensor, element: AffineMap) -> MappedRule:
    points = element.apply(rule.points)
    weights = rule.weights * abs(element.det)
    points.flags.writeable = False
    weights.flags.writeable = False
    return MappedRule(base=rule, element=element, points=points, weights=weights)


# ---------------------------------------------------------------------------
# Degree-of-precision measurement
# ---------------------------------------------------------------------------


def _monomials_exact_1d(nodes: np.ndarray, weights: np.ndarray, m: int) -> bool:
    approx = weights @ nodes**m
    exact = _monomial_moment(m)
    return abs(approx - exact) <= _MOMENT_TOL * max(1.0, abs(exact))


def degree_of_precision(rule: QuadRule1D | QuadRuleTensor) -> int:
    """Largest m <= 2k+3 such that all (tensor) monomials of degree m integrate
    exactly against the closed-form moments of the reference domain."""
    limit = 2 * rule.k + 3
    if isinstance(rule, QuadRule1D):
        nodes, weights = rule.node_array, rule.weights
        for m in range(limit + 1):
            if not _monomials_exact_1d(nodes, weights, m):
                return m - 1
        return limit
    # Tensor rule: probe every monomial x^beta with max(beta) <= m explicitly.
    points, weights = rule.points, rule.weights
    for m in range(limit + 1):
        for beta in np.ndindex(*([m + 1] * rule.d)):
            if max(beta, default=0) != m:
                continue
            vals = np.ones(points.shape[0])
            exact = 1.0
            for axis, power in enumerate(beta):
                vals *= points[:, axis] ** power
                exact *= _monomial_moment(power)
            approx = float(weights @ vals)
            if abs(approx - exact) > _MOMENT_TOL * max(1.0, abs(exact)):
                return m - 1
    return limit
