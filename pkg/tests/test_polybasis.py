"""Polynomial basis tests: recurrence values, Kronecker/partition-of-unity
properties, orthogonality normalization, and the extremal example oracle."""

import numpy as np
import pytest

from tpfem.polybasis import (
    chebyshev_eval,
    check_multi_index,
    lagrange_basis,
    lagrange_derivative,
    lagrange_eval,
    lagrange_eval_matrix,
    legendre_derivative,
    legendre_eval,
    legendre_vandermonde,
    multi_indices,
    node_set,
    tensor_basis_eval,
    timan_example_eval,
    total_degree_indices,
)
from tpfem.quadrature import gauss_lobatto_nodes, gauss_nodes, oracle_rule_1d


def test_legendre_values():
    assert legendre_eval(0, 0.37) == 1.0
    assert legendre_eval(2, 1.0) == pytest.approx(1.0, abs=1e-15)
    assert legendre_eval(2, 0.0) == pytest.approx(-0.5, abs=1e-15)


def test_legendre_normalization_at_one():
    x = np.ones(1)
    for n in range(13):
        assert legendre_eval(n, x)[0] == pytest.approx(1.0, abs=1e-13)


def test_legendre_derivative_values():
    assert legendre_derivative(1, -0.73, 1) == pytest.approx(1.0, abs=1e-15)
    assert legendre_derivative(2, 0.5, 1) == pytest.approx(1.5, abs=1e-14)
    assert legendre_derivative(3, 1.0, 1) == pytest.approx(6.0, abs=1e-13)


def test_legendre_second_derivative_against_finite_differences():
    rng = np.random.default_rng(7)
    xs = rng.uniform(-0.9, 0.9, size=12)
    h = 1e-5
    for n in (3, 5, 8):
        fd = (legendre_eval(n, xs + h) - 2 * legendre_eval(n, xs) + legendre_eval(n, xs - h)) / h**2
        exact = legendre_derivative(n, xs, 2)
        assert np.max(np.abs(fd - exact)) < 1e-4


def test_legendre_orthogonality_and_measured_normalization():
    # Measure the Gram diagonal and decide between the two candidate
    # normalizations: 2/(2n+1) (this one holds) versus 1/(2n+1).
    nodes, weights = oracle_rule_1d(26)
    v = legendre_vandermonde(nodes, 12)
    gram = v.T @ (weights[:, None] * v)
    off = gram - np.diag(np.diag(gram))
    assert np.max(np.abs(off)) < 1e-12
    n = np.arange(13)
    measured = np.diag(gram)
    assert measured == pytest.approx(2.0 / (2 * n + 1), abs=1e-12)
    assert np.max(np.abs(measured - 1.0 / (2 * n + 1))) > 0.1


def test_chebyshev_values():
    assert chebyshev_eval(3, 0.5) == pytest.approx(-1.0, abs=1e-15)
    for n in range(0, 21, 3):
        assert chebyshev_eval(n, 1.0) == pytest.approx(1.0, abs=1e-12)
    assert chebyshev_eval(2, 0.0) == pytest.approx(-1.0, abs=1e-15)


def test_chebyshev_bounded_on_grid():
    grid = np.linspace(-1.0, 1.0, 10_000)
    for n in range(21):
        assert np.max(np.abs(chebyshev_eval(n, grid))) <= 1.0 + 1e-12


def _timan_oracle_coefficients(n):
    """Brute-force coefficient oracle: convolve, divide, convolve again."""
    t = np.zeros(n + 1, dtype=object)
    t[int(n == 0)] = 1 if n == 0 else 1
    # build T_n coefficients by the recurrence in exact ints
    prev, cur = np.array([1], dtype=object), np.array([0, 1], dtype=object)
    if n == 0:
        cur = prev
    for _ in range(2, n + 1):
        nxt = np.zeros(len(cur) + 1, dtype=object)
        nxt[1:] = 2 * cur
        nxt[: len(prev)] -= prev
        prev, cur = cur, nxt
    tn2 = np.convolve(cur, cur)
    num = -tn2
    num[0] += 1
    # synthetic division by (1 - x^2), highest degree first
    rem = num.copy()
    quot = np.zeros(len(num) - 2, dtype=object)
    for m in range(len(num) - 1, 1, -1):
        c = rem[m]
        quot[m - 2] = -c
        rem[m] = 0
        rem[m - 2] += c
    assert not rem.any()
    return np.convolve(quot, quot).astype(float)


@pytest.mark.parametrize("n", range(1, 9))
def test_timan_example_matches_coefficient_oracle(n):
    # The oracle evaluates the exact integer coefficients with integer
    # Horner on a dyadic grid (denominator 512), so it is exact up to the
    # final float rounding; float Horner on these coefficients would lose
    # digits to cancellation.
    from fractions import Fraction

    coeffs = [int(c) for c in _timan_oracle_coefficients(n)]
    deg = len(coeffs) - 1
    q = 512
    ps = range(-q, q + 1, 1)  # grid x = p/q, 1025 points
    q_pow = [q**j for j in range(deg + 1)]
    grid = np.array([p / q for p in ps])
    oracle = []
    for p in ps:
        acc = coeffs[deg]
        for j in range(deg - 1, -1, -1):
            acc = acc * p + coeffs[j] * q_pow[deg - j]
        oracle.append(float(Fraction(acc, q_pow[deg])))
    oracle = np.array(oracle)
    ours = timan_example_eval(n, grid)
    scale = np.maximum(1.0, np.abs(oracle))
    assert np.max(np.abs(ours - oracle) / scale) < 1e-10


def test_timan_example_values():
    assert timan_example_eval(1, 0.123) == pytest.approx(1.0, abs=1e-15)
    for n in range(1, 9):
        assert timan_example_eval(n, 1.0) == n**4
        assert timan_example_eval(n, -1.0) == n**4
    # Value at 0 for n=2 from the coefficient oracle: the quotient is 4x^2,
    # so the example evaluates to 16 x^4 which vanishes at the origin.
    assert timan_example_eval(2, 0.0) == pytest.approx(0.0, abs=1e-15)


def test_node_set_validation():
    with pytest.raises(ValueError):
        node_set([0.0, 0.0, 1.0])
    with pytest.raises(ValueError):
        node_set([0.5, -0.5])
    with pytest.raises(ValueError):
        node_set([-2.0, 0.0])


@pytest.mark.parametrize(
    "nodes",
    [
        gauss_nodes(3),
        gauss_lobatto_nodes(4),
        np.linspace(-1, 1, 6),
        gauss_lobatto_nodes(12),
    ],
)
def test_kronecker_property(nodes):
    basis = lagrange_basis(nodes)
    tab = lagrange_eval_matrix(basis, nodes)
    assert np.max(np.abs(tab - np.eye(nodes.size))) <= 1e-12


@pytest.mark.parametrize(
    "nodes", [gauss_nodes(5), gauss_lobatto_nodes(8), np.linspace(-1, 1, 4)]
)
def test_partition_of_unity(nodes):
    rng = np.random.default_rng(0)
    pts = rng.uniform(-1.0, 1.0, size=1000)
    basis = lagrange_basis(nodes)
    sums = lagrange_eval_matrix(basis, pts).sum(axis=1)
    assert np.max(np.abs(sums - 1.0)) <= 1e-12


def test_lagrange_eval_examples():
    basis = lagrange_basis(gauss_lobatto_nodes(2))  # nodes {-1, 0, 1}
    assert lagrange_eval(basis, 1, 0.0) == 1.0
    assert lagrange_eval(basis, 0, 1.0) == 0.0
    assert lagrange_eval(basis, 1, 0.5) == pytest.approx(0.75, abs=1e-14)
    with pytest.raises(IndexError):
        lagrange_eval(basis, 3, 0.0)


def test_lagrange_derivative_examples():
    two_nodes = lagrange_basis(np.array([-1.0, 1.0]))
    assert lagrange_derivative(two_nodes, 1, 0.37) == pytest.approx(0.5, abs=1e-14)
    gl2 = lagrange_basis(gauss_lobatto_nodes(2))
    assert lagrange_derivative(gl2, 1, 0.0) == pytest.approx(0.0, abs=1e-14)
    assert lagrange_derivative(gl2, 2, 1.0) == pytest.approx(1.5, abs=1e-14)
    with pytest.raises(IndexError):
        lagrange_derivative(gl2, -1, 0.0)


def test_lagrange_derivative_against_vandermonde_oracle():
    nodes = gauss_lobatto_nodes(5)
    basis = lagrange_basis(nodes)
    v = np.vander(nodes, increasing=True)
    xs = np.linspace(-1, 1, 17)
    for i in range(nodes.size):
        coeffs = np.linalg.solve(v, np.eye(nodes.size)[i])
        dcoeffs = coeffs[1:] * np.arange(1, nodes.size)
        oracle = np.polyval(dcoeffs[::-1], xs)
        ours = lagrange_derivative(basis, i, xs)
        assert np.max(np.abs(ours - oracle)) < 1e-11


def test_tensor_basis_eval():
    basis = lagrange_basis(gauss_lobatto_nodes(2))
    assert tensor_basis_eval((0, 0), basis, (-1.0, -1.0)) == 1.0
    assert tensor_basis_eval((1, 0), basis, (0.5, -1.0)) == pytest.approx(
        0.75, abs=1e-14
    )
    assert tensor_basis_eval((1, 1), basis, (0.0, 0.0)) == 1.0
    with pytest.raises(ValueError):
        tensor_basis_eval((1, 1, 1), basis, (0.0, 0.0))
    with pytest.raises(ValueError):
        tensor_basis_eval((5, 0), basis, (0.0, 0.0))


def test_multi_index_helpers():
    idx = list(multi_indices(2, 2))
    assert len(idx) == 9
    assert idx[0] == (0, 0) and idx[-1] == (2, 2)
    assert total_degree_indices(2, 2) == [(2, 0), (1, 1), (0, 2)]
    with pytest.raises(ValueError):
        check_multi_index((0, 1), 3)
    with pytest.raises(ValueError):
        check_multi_index((-1, 0), 2)
    with pytest.raises(ValueError):
        check_multi_index((3, 0), 2, k=2)
