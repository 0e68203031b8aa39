"""Approximation operators on affine elements.

Lagrange interpolation, continuous L2 projection via the orthogonal
Legendre expansion, the discrete (quadrature-weighted) L2 projection,
mass lumping over control volumes, the embedded nodal sub-projector and
its fluctuation operator, the interpolation/differentiation commutator,
and the Gauss-Lobatto cardinal square sum.

Element polynomials carry their values on a tensor node grid; gradients
and higher reference derivatives are formed with exact differentiation
matrices, never with finite differences.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from tpfem.fields import DifferenceField, Evaluator, as_points
from tpfem.geometry import AffineMap
from tpfem.polybasis import (
    LagrangeBasis1D,
    MultiIndex,
    differentiation_matrix,
    lagrange_basis,
    lagrange_eval_matrix,
    legendre_vandermonde,
)
from tpfem.quadrature import (
    GAUSS,
    GAUSS_LOBATTO,
    MappedRule,
    QuadRule1D,
    map_rule,
    oracle_rule_1d,
    rule_for,
    tensor_rule,
)

# Diagonal of the 1D Legendre Gram matrix under the value-one-at-one
# normalization, measured by the quadrature suite: integral of psi_n^2
# over [-1, 1] equals 2 / (2n + 1).
def legendre_norm_squared(n) -> np.ndarray:
    return 2.0 / (2.0 * np.asarray(n, dtype=float) + 1.0)


@functools.lru_cache(maxsize=None)
def basis_for(family: str, k: int) -> LagrangeBasis1D:
    """Cardinal basis on the quadrature nodes of the given family."""
    return lagrange_basis(rule_for(family, k).node_array)


def evaluate(f, points: np.ndarray) -> np.ndarray:
    """Evaluate a field-like object or plain callable at (n, d) points."""
    if hasattr(f, "eval"):
        return np.asarray(f.eval(points), dtype=float)
    return np.asarray(f(points), dtype=float)


def _apply_along_axis(mat: np.ndarray, tensor: np.ndarray, axis: int) -> np.ndarray:
    moved = np.moveaxis(tensor, axis, 0)
    out = np.tensordot(mat, moved, axes=(1, 0))
    return np.moveaxis(out, 0, axis)


def _contract_pointwise(mats: list[np.ndarray], tensor: np.ndarray) -> np.ndarray:
    """Evaluate a tensor-product expansion at scattered points.

    ``mats[s][m, a]`` tabulates the 1D basis of axis ``s`` at point ``m``;
    the result is the length-n vector of expansion values.
    """
    out = np.tensordot(mats[0], tensor, axes=(1, 0))
    for s in range(1, len(mats)):
        out = np.einsum("na,na...->n...", mats[s], out)
    return out


def tensor_points(nodes_1d: np.ndarray, d: int) -> np.ndarray:
    """Tensor grid of 1D nodes as an (n^d, d) array in C order."""
    grids = np.meshgrid(*([nodes_1d] * d), indexing="ij")
    return np.stack([g.reshape(-1) for g in grids], axis=-1)


def element_nodes(element: AffineMap, family: str, k: int) -> np.ndarray:
    """Physical positions of the tensor node grid on the element."""
    return element.apply(tensor_points(rule_for(family, k).node_array, element.d))


@dataclass(frozen=True)
class ElementPolynomial:
    """Member of Q_k on an affine element.

    Primary representation: values on the tensor node grid of ``family``.
    A Legendre coefficient tensor may be attached as a dual representation
    (both views agree at the nodes whenever both are present).
    """

    element: AffineMap
    k: int
    family: str
    basis: LagrangeBasis1D
    nodal: np.ndarray
    legendre: np.ndarray | None = None

    @property
    def d(self) -> int:
        return self.nodal.ndim

    @property
    def nodes_physical(self) -> np.ndarray:
        return element_nodes(self.element, self.family, self.k)

    def ref_eval(self, ref_points) -> np.ndarray:
        ref_points = as_points(ref_points, self.d)
        mats = [
            lagrange_eval_matrix(self.basis, ref_points[:, s]) for s in range(self.d)
        ]
        return _contract_pointwise(mats, self.nodal)

    def eval(self, points) -> np.ndarray:
        points = as_points(points, self.d)
        return self.ref_eval(self.element.inverse_apply(points))

    def eval_legendre_rep(self, points) -> np.ndarray:
        """Evaluate through the Legendre coefficient tensor (if attached)."""
        if self.legendre is None:
            raise ValueError("no Legendre coefficient tensor attached")
        ref = self.element.inverse_apply(as_points(points, self.d))
        mats = [legendre_vandermonde(ref[:, s], self.k) for s in range(self.d)]
        return _contract_pointwise(mats, self.legendre)

    def ref_partial_nodal(self, beta: MultiIndex) -> np.ndarray:
        """Node values of the reference-coordinate derivative d^beta."""
        d_mat = differentiation_matrix(self.basis)
        out = self.nodal
        for axis, power in enumerate(beta):
            for _ in range(power):
                out = _apply_along_axis(d_mat, out, axis)
        return out

    def partial(self, alpha: MultiIndex) -> Evaluator:
        """Physical-coordinate partial derivative as a point evaluator.

        Arbitrary orders are supported on diagonal maps (per-axis chain
        rule); general affine maps support order <= 1.
        """
        alpha = tuple(int(a) for a in alpha)
        if len(alpha) != self.d:
            raise ValueError(f"multi-index {alpha} does not match dimension {self.d}")
        order = sum(alpha)
        if order == 0:
            return self.eval
        if self.element.is_diagonal:
            scale = 1.0
            for s, power in enumerate(alpha):
                scale *= self.element.j[s, s] ** (-power)
            deriv = ElementPolynomial(
                self.element,
                self.k,
                self.family,
                self.basis,
                self.ref_partial_nodal(alpha),
            )
            return lambda points: scale * deriv.eval(points)
        if order == 1:
            axis = alpha.index(1)
            comps = [
                ElementPolynomial(
                    self.element,
                    self.k,
                    self.family,
                    self.basis,
                    self.ref_partial_nodal(
                        tuple(1 if t == s else 0 for t in range(self.d))
                    ),
                )
                for s in range(self.d)
            ]
            j_inv = self.element.j_inv

            def grad_component(points) -> np.ndarray:
                vals = np.zeros(as_points(points, self.d).shape[0])
                for s in range(self.d):
                    vals += j_inv[s, axis] * comps[s].eval(points)
                return vals

            return grad_component
        raise ValueError(
            "derivatives of order >= 2 require a diagonal element map"
        )

    def gradient_nodal(self) -> list[np.ndarray]:
        """Physical gradient components on the node grid (exact)."""
        ref = [
            self.ref_partial_nodal(tuple(1 if t == s else 0 for t in range(self.d)))
            for s in range(self.d)
        ]
        j_inv = self.element.j_inv
        return [
            sum(j_inv[t, s] * ref[t] for t in range(self.d)) for s in range(self.d)
        ]


def interpolate(
    f, element: AffineMap, k: int, family: str = GAUSS_LOBATTO
) -> ElementPolynomial:
    """Lagrange interpolation on the tensor node grid of the element."""
    d = element.d
    values = evaluate(f, element_nodes(element, family, k))
    nodal = values.reshape((k + 1,) * d)
    return ElementPolynomial(element, k, family, basis_for(family, k), nodal)


def l2_project(
    f, element: AffineMap, k: int, oversample: int = 10
) -> ElementPolynomial:
    """Orthogonal L2 projection onto Q_k via the Legendre expansion.

    Inner products are computed with an internal Gauss rule of precision
    >= 2k + 2*oversample + 1.  Coefficients divide by the measured
    orthogonality constants 2/(2n+1) per axis; the |det J| factors of
    numerator and denominator cancel on affine elements.
    """
    d = element.d
    q_nodes, q_weights = oracle_rule_1d(2 * k + 2 * oversample + 1)
    pts = element.apply(tensor_points(q_nodes, d))
    fvals = evaluate(f, pts).reshape((q_nodes.size,) * d)
    v = legendre_vandermonde(q_nodes, k)
    moment_mat = (v * q_weights[:, None]).T
    moments = fvals
    for axis in range(d):
        moments = _apply_along_axis(moment_mat, moments, axis)
    rho = legendre_norm_squared(np.arange(k + 1))
    denom = rho
    for _ in range(d - 1):
        denom = np.multiply.outer(denom, rho)
    coeffs = moments / denom

    family = GAUSS_LOBATTO if k >= 1 else GAUSS
    basis = basis_for(family, k)
    v_nodes = legendre_vandermonde(basis.nodes, k)
    nodal = coeffs
    for axis in range(d):
        nodal = _apply_along_axis(v_nodes, nodal, axis)
    return ElementPolynomial(element, k, family, basis, nodal, legendre=coeffs)


def discrete_inner_product(u, v, rule: MappedRule) -> float:
    """Quadrature-weighted nodal inner product on the rule's element."""
    uv = evaluate(u, rule.points) * evaluate(v, rule.points)
    return float(rule.weights @ uv)


def discrete_l2_project(
    f,
    element: AffineMap,
    k: int,
    family: str = GAUSS_LOBATTO,
    rule: QuadRule1D | None = None,
) -> ElementPolynomial:
    """Discrete L2 projection when the node set equals the quadrature set.

    The discrete Gram system is assembled and solved per axis (the tensor
    weights factorize), and the result is checked against plain nodal
    interpolation: with coinciding node and quadrature sets the two must
    agree to 1e-12 at every node.
    """
    basis = basis_for(family, k)
    if rule is None:
        rule = rule_for(family, k)
    if rule.node_array.size != basis.nodes.size or not np.allclose(
        rule.node_array, basis.nodes, rtol=0.0, atol=1e-14
    ):
        raise ValueError("node set and quadrature node set must coincide")
    d = element.d
    tab = lagrange_eval_matrix(basis, rule.node_array)
    gram = tab.T @ (rule.weights[:, None] * tab)
    fvals = evaluate(f, element.apply(tensor_points(rule.node_array, d)))
    rhs = fvals.reshape((k + 1,) * d)
    weighted = rule.weights[:, None] * tab
    solve_mat = np.linalg.solve(gram, weighted.T)
    coeffs = rhs
    for axis in range(d):
        coeffs = _apply_along_axis(solve_mat, coeffs, axis)
    projected = ElementPolynomial(element, k, family, basis, coeffs)
    nodal_interp = interpolate(f, element, k, family).nodal
    gap = float(np.max(np.absolute(coeffs - nodal_interp)))
    if gap > 1e-12:
        raise ArithmeticError(
            f"discrete projection deviates from interpolation by {gap:.3e} "
            "although node and quadrature sets coincide"
        )
    return projected


# ---------------------------------------------------------------------------
# Control volumes and lumping
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ControlVolumeDecomposition:
    """Axis-aligned cells tiling the element, built from cumulative weights.

    The reference breakpoints of each axis start at -1 and accumulate the
    1D weights, so cell ``alpha`` has reference measure ``prod_i w_{alpha_i}``
    and physical measure ``|det J|`` times that.
    """

    element: AffineMap
    breaks: np.ndarray
    measures: np.ndarray

    @property
    def d(self) -> int:
        return self.measures.ndim

    def total_measure(self) -> float:
        return float(np.sum(self.measures))

    def cell_index(self, ref_points: np.ndarray) -> tuple[np.ndarray, ...]:
        k_cells = self.breaks.shape[1] - 1
        idx = []
        for s in range(self.d):
            pos = np.searchsorted(self.breaks[s], ref_points[:, s], side="right") - 1
            idx.append(np.clip(pos, 0, k_cells - 1))
        return tuple(idx)


def control_volumes(element: AffineMap, rule: QuadRule1D) -> ControlVolumeDecomposition:
    d = element.d
    breaks_1d = np.concatenate(([-1.0], -1.0 + np.cumsum(rule.weights)))
    breaks = np.tile(breaks_1d, (d, 1))
    diffs = np.diff(breaks_1d)
    meas = diffs
    for _ in range(d - 1):
        meas = np.multiply.outer(meas, diffs)
    measures = meas * abs(element.det)
    breaks.flags.writeable = False
    measures.flags.writeable = False
    return ControlVolumeDecomposition(element=element, breaks=breaks, measures=measures)


@dataclass(frozen=True)
class LumpedField:
    """Piecewise constant field taking nodal values on control volumes."""

    decomposition: ControlVolumeDecomposition
    values: np.ndarray

    @property
    def d(self) -> int:
        return self.values.ndim

    def eval(self, points) -> np.ndarray:
        ref = self.decomposition.element.inverse_apply(as_points(points, self.d))
        return self.values[self.decomposition.cell_index(ref)]

    def lp_norm(self, p) -> float:
        """Exact Lp norm: piecewise constants integrate cell by cell."""
        if p == np.inf:
            return float(np.max(np.absolute(self.values)))
        meas = self.decomposition.measures
        return float(np.sum(meas * np.absolute(self.values) ** p) ** (1.0 / p))


def lump(v, element: AffineMap, rule: QuadRule1D) -> LumpedField:
    """Replace ``v`` by the piecewise constant of its quadrature-node values."""
    d = element.d
    values = evaluate(v, element.apply(tensor_points(rule.node_array, d)))
    return LumpedField(
        decomposition=control_volumes(element, rule),
        values=values.reshape((rule.k + 1,) * d),
    )


# ---------------------------------------------------------------------------
# Embedded nodal sub-projector and fluctuation operator
# ---------------------------------------------------------------------------


def embedded_subset_indices(big_k: int, k: int) -> tuple[int, ...]:
    """1D node indices of the embedded degree-K subset of Gauss-Lobatto nodes.

    Supported pairs: K = 1 with any k >= 1 (endpoints), and K = 2 with even
    k (endpoints plus center).  Anything else is rejected.
    """
    if big_k == 1 and k >= 1:
        return (0, k)
    if big_k == 2 and k >= 2 and k % 2 == 0:
        return (0, k // 2, k)
    raise ValueError(
        f"(K={big_k}, k={k}) is not a valid embedded pair for Gauss-Lobatto nodes"
    )


def embedded_subset_mask(big_k: int, k: int, d: int) -> np.ndarray:
    """Boolean tensor flagging node multi-indices in the K-subset grid."""
    subset = embedded_subset_indices(big_k, k)
    axis_mask = np.zeros(k + 1, dtype=bool)
    axis_mask[list(subset)] = True
    mask = axis_mask
    for _ in range(d - 1):
        mask = np.multiply.outer(mask, axis_mask)
    return mask


def embedded_project(f, element: AffineMap, big_k: int, k: int) -> ElementPolynomial:
    """Nodal sub-projector onto the degree-k cardinals of the K-subset nodes.

    The coefficients are the values of ``f`` at the K-subset nodes, carried
    on the degree-k cardinal functions of those nodes; all other nodal
    values vanish.
    """
    d = element.d
    subset = embedded_subset_indices(big_k, k)
    nodes_1d = rule_for(GAUSS_LOBATTO, k).node_array
    sub_points = element.apply(tensor_points(nodes_1d[list(subset)], d))
    sub_values = evaluate(f, sub_points).reshape((len(subset),) * d)
    nodal = np.zeros((k + 1,) * d)
    nodal[np.ix_(*([list(subset)] * d))] = sub_values
    return ElementPolynomial(
        element, k, GAUSS_LOBATTO, basis_for(GAUSS_LOBATTO, k), nodal
    )


class _CallableField:
    def __init__(self, fn, d):
        self.fn = fn
        self.d = d

    def eval(self, points):
        return np.asarray(self.fn(as_points(points, self.d)), dtype=float)


def fluctuation(f, element: AffineMap, big_k: int, k: int) -> DifferenceField:
    """Fluctuation operator: identity minus the embedded sub-projector."""
    proj = embedded_project(f, element, big_k, k)
    if not hasattr(f, "eval"):
        f = _CallableField(f, element.d)
    return DifferenceField(f, proj)


def fluctuation_sign_forms(
    v: ElementPolynomial, big_k: int, m: int
) -> tuple[float, float]:
    """The two discrete quadratic forms built from grad v and grad v^(2m-1).

    Returns ``(fluctuation_form, projector_form)`` where the first applies
    the fluctuation operator to both gradient fields and the second applies
    the sub-projector; both are evaluated with the element's Gauss-Lobatto
    rule (node set equal to quadrature set).
    """
    if v.family != GAUSS_LOBATTO:
        raise ValueError("sign forms are defined for Gauss-Lobatto node sets")
    if m < 1:
        raise ValueError(f"power index m must be >= 1, got {m}")
    k, d = v.k, v.d
    rule = tensor_rule(GAUSS_LOBATTO, k, d)
    weights = (rule.weights * abs(v.element.det)).reshape((k + 1,) * d)
    grad = v.gradient_nodal()
    # Chain rule at the nodes: grad(v^(2m-1)) = (2m-1) v^(2m-2) grad v.
    power = (2 * m - 1) * v.nodal ** (2 * m - 2)
    mask = embedded_subset_mask(big_k, k, d)
    fluct_form = 0.0
    proj_form = 0.0
    for g in grad:
        w = power * g
        fluct_form += float(np.sum(weights * np.where(mask, 0.0, g) * np.where(mask, 0.0, w)))
        proj_form += float(np.sum(weights * np.where(mask, g, 0.0) * np.where(mask, w, 0.0)))
    return fluct_form, proj_form


# ---------------------------------------------------------------------------
# Commutator and cardinal square sum
# ---------------------------------------------------------------------------


def commutation_error(f, element: AffineMap, k: int) -> float:
    """Discrete Gauss-Lobatto norm of I(grad f) - grad I(f), combined in l2.

    Both sides are evaluated on the node grid: interpolation of each
    gradient component samples the exact partials there, while the
    interpolant's gradient uses the exact differentiation matrices.
    """
    d = element.d
    interp = interpolate(f, element, k, GAUSS_LOBATTO)
    grad_interp = interp.gradient_nodal()
    nodes = element_nodes(element, GAUSS_LOBATTO, k)
    rule = tensor_rule(GAUSS_LOBATTO, k, d)
    weights = (rule.weights * abs(element.det)).reshape((k + 1,) * d)
    total = 0.0
    for s in range(d):
        alpha = tuple(1 if t == s else 0 for t in range(d))
        exact_grad = f.partial(alpha)(nodes).reshape((k + 1,) * d)
        total += float(np.sum(weights * (exact_grad - grad_interp[s]) ** 2))
    return float(np.sqrt(total))


def lagrange_square_sum(points, k: int, family: str = GAUSS_LOBATTO) -> np.ndarray:
    """Sum of squared tensor cardinal functions at the given points.

    Only claimed (and only allowed) for Gauss-Lobatto node sets, where the
    sum is bounded by one on the reference cube.
    """
    if family != GAUSS_LOBATTO:
        raise ValueError("the square-sum bound is only available for Gauss-Lobatto")
    points = np.atleast_2d(np.asarray(points, dtype=float))
    basis = basis_for(family, k)
    out = np.ones(points.shape[0])
    for s in range(points.shape[1]):
        tab = lagrange_eval_matrix(basis, points[:, s])
        out *= np.sum(tab * tab, axis=1)
    return out


def random_polynomial(
    element: AffineMap,
    k: int,
    rng: np.random.Generator,
    family: str = GAUSS_LOBATTO,
) -> ElementPolynomial:
    """Random member of Q_k with i.i.d. uniform [-1, 1] Legendre coefficients."""
    d = element.d
    if family == GAUSS_LOBATTO and k == 0:
        family = GAUSS
    coeffs = rng.uniform(-1.0, 1.0, size=(k + 1,) * d)
    basis = basis_for(family, k)
    v_nodes = legendre_vandermonde(basis.nodes, k)
    nodal = coeffs
    for axis in range(d):
        nodal = _apply_along_axis(v_nodes, nodal, axis)
    return ElementPolynomial(element, k, family, basis, nodal, legendre=coeffs)
