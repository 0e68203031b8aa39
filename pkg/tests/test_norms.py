"""Norm evaluation tests: closed-form values, norm axioms, discrete/lumped
agreement, face norms, and mass matrix spectra."""

import math

import numpy as np
import pytest

from tpfem.geometry import faces, identity_map, scaled_map
from tpfem.fields import sin_sum_field
from tpfem.norms import (
    NormSpec,
    discrete_lp_norm,
    face_norm,
    integrate,
    lp_norm,
    mass_matrix,
    mass_matrix_extremes,
    sobolev_norm,
    sobolev_seminorm,
)
from tpfem.operators import lump, random_polynomial
from tpfem.quadrature import GAUSS, GAUSS_LOBATTO, map_rule, rule_for, tensor_rule
from tpfem.polybasis import legendre_eval


def test_norm_spec_validation():
    NormSpec(0, 2)
    NormSpec(1, math.inf, "face")
    with pytest.raises(ValueError):
        NormSpec(-1, 2)
    with pytest.raises(ValueError):
        NormSpec(0, 3)
    with pytest.raises(ValueError):
        NormSpec(0, 2, "edge")


def test_lp_norm_constant():
    el = scaled_map(2, 0.5)
    c = lambda p: np.full(p.shape[0], -3.0)
    for p in (1, 2, 4, 6):
        assert lp_norm(c, el, p) == pytest.approx(3.0 * 0.25 ** (1 / p), rel=1e-12)
    assert lp_norm(c, el, math.inf) == pytest.approx(3.0)


def test_lp_norm_linear():
    el = identity_map(1)
    f = lambda p: p[:, 0]
    assert lp_norm(f, el, 2) == pytest.approx(math.sqrt(2 / 3), rel=1e-12)
    assert lp_norm(f, el, math.inf) == pytest.approx(1.0)


def test_lp_norm_p1_kink_tolerance():
    # |x| over [-1, 1]: exact integral 1; quadrature of the kink is accurate
    # to the documented 1e-8.
    el = identity_map(1)
    val = lp_norm(lambda p: p[:, 0], el, 1)
    assert val == pytest.approx(1.0, abs=1e-8)


def test_sup_norm_is_saturated_lower_bound():
    # The sampled sup never exceeds the true sup; for the Chebyshev-type
    # extremal cases the maximum sits at sampled points (endpoints), where
    # doubling the grid changes nothing.
    from tpfem.polybasis import chebyshev_eval

    el = identity_map(1)
    f = lambda p: chebyshev_eval(7, p[:, 0])
    coarse = lp_norm(f, el, math.inf)
    fine = float(np.max(np.abs(chebyshev_eval(7, np.linspace(-1, 1, 4001)))))
    assert coarse <= 1.0 + 1e-12
    assert abs(coarse - fine) < 1e-8
    # Generic smooth fields: still a lower bound, accurate to grid
    # resolution only.
    g = sin_sum_field(1, 2)
    assert lp_norm(g, el, math.inf) <= 1.0 + 1e-12
    assert lp_norm(g, el, math.inf) == pytest.approx(1.0, abs=1e-3)


def test_sobolev_seminorm_order_zero_is_lp():
    el = scaled_map(2, 0.8)
    f = sin_sum_field(2, 2)
    assert sobolev_seminorm(f, el, 0, 2) == pytest.approx(lp_norm(f, el, 2))


def test_sobolev_seminorm_quadratic():
    el = identity_map(1)
    f = sin_sum_field(1, 3)

    class XSquared:
        d = 1

        def eval(self, p):
            return p[:, 0] ** 2

        def partial(self, alpha):
            if alpha == (0,):
                return self.eval
            if alpha == (1,):
                return lambda p: 2.0 * p[:, 0]
            if alpha == (2,):
                return lambda p: np.full(p.shape[0], 2.0)
            return lambda p: np.zeros(p.shape[0])

    assert sobolev_seminorm(XSquared(), el, 2, 2) == pytest.approx(
        2 * math.sqrt(2), rel=1e-12
    )


def test_sobolev_seminorm_mixed_first_order():
    # f(x, y) = xy on the reference square: each first partial has squared
    # L2 norm 4/3, so the seminorm is sqrt(8/3).
    el = identity_map(2)

    class XY:
        d = 2

        def eval(self, p):
            return p[:, 0] * p[:, 1]

        def partial(self, alpha):
            if alpha == (0, 0):
                return self.eval
            if alpha == (1, 0):
                return lambda p: p[:, 1]
            if alpha == (0, 1):
                return lambda p: p[:, 0]
            return lambda p: np.zeros(p.shape[0])

    assert sobolev_seminorm(XY(), el, 1, 2) == pytest.approx(
        math.sqrt(8 / 3), rel=1e-12
    )


def test_sobolev_norm_combines_orders():
    el = identity_map(1)
    f = sin_sum_field(1, 4)
    expected = (
        sobolev_seminorm(f, el, 0, 2) ** 2 + sobolev_seminorm(f, el, 1, 2) ** 2
    ) ** 0.5
    assert sobolev_norm(f, el, 1, 2) == pytest.approx(expected, rel=1e-12)


def test_norm_axioms_on_random_polynomials():
    rng = np.random.default_rng(0)
    el = scaled_map(2, 0.9)
    for p in (1, 2, 4, math.inf):
        u = random_polynomial(el, 3, rng)
        v = random_polynomial(el, 3, rng)
        c = 2.7
        scaled = lambda pts: c * u.eval(pts)
        summed = lambda pts: u.eval(pts) + v.eval(pts)
        assert lp_norm(scaled, el, p) == pytest.approx(
            abs(c) * lp_norm(u, el, p), rel=1e-10
        )
        assert lp_norm(summed, el, p) <= (
            lp_norm(u, el, p) + lp_norm(v, el, p)
        ) * (1 + 1e-10)


def test_face_norm_constant_2d():
    el = scaled_map(2, 1.0, np.array([0.5, 0.5]))  # unit square
    c = lambda p: np.full(p.shape[0], 1.7)
    for fc in faces(el):
        assert face_norm(c, fc, 0, 2) == pytest.approx(
            1.7 * math.sqrt(fc.measure), rel=1e-12
        )


def test_face_norm_point_trace_1d():
    el = identity_map(1)
    right = [fc for fc in faces(el) if fc.side == 1][0]
    assert face_norm(lambda p: p[:, 0], right, 0, 2) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        face_norm(lambda p: p[:, 0], right, 1, 2)


def test_face_norm_linear_on_top_edge():
    el = identity_map(2)
    top = [fc for fc in faces(el) if fc.axis == 1 and fc.side == 1][0]
    assert face_norm(lambda p: p[:, 0], top, 0, 2) == pytest.approx(
        math.sqrt(2 / 3), rel=1e-12
    )


def test_face_norm_tangential_derivative():
    el = identity_map(2)
    top = [fc for fc in faces(el) if fc.axis == 1 and fc.side == 1][0]

    class XSq:
        d = 2

        def eval(self, p):
            return p[:, 0] ** 2

        def partial(self, alpha):
            if alpha == (1, 0):
                return lambda p: 2.0 * p[:, 0]
            if alpha == (0, 1):
                return lambda p: np.zeros(p.shape[0])
            return self.eval

    # d/dx of x^2 on the edge: ||2x||_{L2(edge)} = sqrt(8/3)
    assert face_norm(XSq(), top, 1, 2) == pytest.approx(math.sqrt(8 / 3), rel=1e-12)


def test_discrete_lp_norm_constant_and_infinity_rejection():
    el = scaled_map(2, 0.5)
    rule = map_rule(tensor_rule(GAUSS_LOBATTO, 2, 2), el)
    c = lambda p: np.full(p.shape[0], 2.0)
    for p in (1, 2, 4):
        assert discrete_lp_norm(c, rule, p) == pytest.approx(2.0 * 0.25 ** (1 / p))
    with pytest.raises(ValueError):
        discrete_lp_norm(c, rule, math.inf)


def test_discrete_lp_norm_equals_lumped_norm():
    rng = np.random.default_rng(1)
    el = scaled_map(1, 0.8)
    rule1d = rule_for(GAUSS_LOBATTO, 3)
    mapped = map_rule(tensor_rule(GAUSS_LOBATTO, 3, 1), el)
    for p in (1, 2, 4):
        v = random_polynomial(el, 3, rng)
        assert discrete_lp_norm(v, mapped, p) == pytest.approx(
            lp_norm(lump(v, el, rule1d), el, p), rel=1e-12
        )


def test_discrete_l2_norm_of_top_legendre_exact_under_gauss():
    el = identity_map(1)
    k = 5
    mapped = map_rule(tensor_rule(GAUSS, k, 1), el)
    psi = lambda p: legendre_eval(k, p[:, 0])
    assert discrete_lp_norm(psi, mapped, 2) ** 2 == pytest.approx(
        2.0 / (2 * k + 1), rel=1e-10
    )


def test_integrate_polynomial():
    el = scaled_map(1, 2.0, np.array([1.0]))  # [0, 2]
    assert integrate(lambda p: p[:, 0] ** 2, el) == pytest.approx(8 / 3, rel=1e-12)


def test_mass_matrix_gl_k1():
    mm = mass_matrix(GAUSS_LOBATTO, 1, 1)
    assert mm.matrix == pytest.approx(np.array([[2, 1], [1, 2]]) / 3.0, abs=1e-13)
    assert (mm.lambda_min, mm.lambda_max) == pytest.approx((1 / 3, 1.0), abs=1e-12)


def test_mass_matrix_legendre_diagonal():
    mm = mass_matrix("legendre", 4, 1)
    diag = 2.0 / (2 * np.arange(5) + 1)
    assert mm.matrix == pytest.approx(np.diag(diag), abs=1e-13)
    assert mm.lambda_min == pytest.approx(diag[-1], abs=1e-12)
    assert mm.lambda_max == pytest.approx(diag[0], abs=1e-12)


def test_mass_matrix_tensor_spectrum_is_power_of_1d():
    lo1, hi1 = mass_matrix_extremes(GAUSS_LOBATTO, 2, 1)
    lo2, hi2 = mass_matrix_extremes(GAUSS_LOBATTO, 2, 2)
    assert lo2 == pytest.approx(lo1**2, rel=1e-10)
    assert hi2 == pytest.approx(hi1**2, rel=1e-10)


def test_mass_matrix_positive_definite_and_symmetric():
    for family in (GAUSS, GAUSS_LOBATTO):
        for k in (1, 3, 5):
            mm = mass_matrix(family, k, 1)
            assert mm.lambda_min > 0
            assert np.max(np.abs(mm.matrix - mm.matrix.T)) <= 1e-12


def test_mass_matrix_size_cap():
    with pytest.raises(ValueError):
        mass_matrix(GAUSS_LOBATTO, 9, 3)
