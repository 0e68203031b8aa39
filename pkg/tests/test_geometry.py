"""Geometry tests: metrics values and scaling inequalities, meshes, faces,
round trips, and the Jacobi eigenvalue solver backing the spectral norms."""

import math

import numpy as np
import pytest

from tpfem.eigen import symmetric_eigenvalues
from tpfem.geometry import (
    affine_map,
    build_cartesian_mesh,
    faces,
    identity_map,
    metrics,
    scaled_map,
)


def test_jacobi_known_matrix():
    eigs = symmetric_eigenvalues([[2.0, 1.0], [1.0, 2.0]])
    assert eigs == pytest.approx([1.0, 3.0], abs=1e-12)


def test_jacobi_against_numpy_random():
    rng = np.random.default_rng(3)
    for n in (2, 3, 5, 12, 30):
        a = rng.normal(size=(n, n))
        a = a + a.T
        ours = symmetric_eigenvalues(a, tol=1e-13)
        ref = np.linalg.eigvalsh(a)
        assert ours == pytest.approx(ref, abs=1e-10 * max(1.0, np.max(np.abs(ref))))


def test_jacobi_rejects_nonsymmetric():
    with pytest.raises(ValueError):
        symmetric_eigenvalues([[0.0, 1.0], [5.0, 0.0]])


def test_affine_map_rejects_singular():
    with pytest.raises(ValueError):
        affine_map([[1.0, 0.0], [2.0, 0.0]], [0.0, 0.0])


def test_metrics_scaled_square():
    h = 0.4
    m = metrics(scaled_map(2, h))
    assert m.h == pytest.approx(h * math.sqrt(2))
    assert m.rho == pytest.approx(h)
    assert m.sigma == pytest.approx(math.sqrt(2))
    assert m.volume == pytest.approx(h * h)
    assert not m.rho_is_bound


def test_metrics_reference_interval():
    m = metrics(identity_map(1))
    assert (m.h, m.rho, m.sigma, m.volume) == pytest.approx((2.0, 2.0, 1.0, 2.0))


def test_metrics_anisotropic_diagonal():
    amap = affine_map(np.diag([1.0, 0.5]), [0.0, 0.0])
    assert abs(amap.det) == pytest.approx(0.5)
    assert metrics(amap).volume == pytest.approx(2.0)
    assert amap.norm_j == pytest.approx(1.0, abs=1e-13)
    assert amap.norm_j_inv == pytest.approx(2.0, abs=1e-13)


def test_metrics_general_map_rho_is_bound():
    amap = affine_map([[0.5, 0.2], [0.1, 0.6]], [0.0, 0.0])
    m = metrics(amap)
    assert m.rho_is_bound
    assert m.rho == pytest.approx(2.0 / amap.norm_j_inv)


def test_scaling_inequalities_on_random_maps():
    # ||J|| * ||J^-1|| >= 1 and |det J| <= ||J||^d for well-conditioned maps.
    rng = np.random.default_rng(11)
    count = 0
    while count < 100:
        d = int(rng.integers(1, 4))
        j = rng.normal(size=(d, d))
        if abs(np.linalg.det(j)) < 1e-3:
            continue
        amap = affine_map(j, np.zeros(d))
        if amap.norm_j * amap.norm_j_inv > 1e3:
            continue
        count += 1
        assert amap.norm_j * amap.norm_j_inv >= 1.0 - 1e-12
        assert abs(amap.det) <= amap.norm_j**d * (1 + 1e-12)


def test_reference_scaling_bounds():
    # ||J|| <= h_T / rho(ref) = h_T / 2 and ||J^-1|| <= h(ref) / rho_T.
    rng = np.random.default_rng(12)
    for _ in range(50):
        d = int(rng.integers(1, 4))
        j = rng.normal(size=(d, d))
        if abs(np.linalg.det(j)) < 1e-2:
            continue
        amap = affine_map(j, rng.normal(size=d))
        m = metrics(amap)
        assert amap.norm_j <= m.h / 2.0 + 1e-12
        assert amap.norm_j_inv <= 2.0 * math.sqrt(d) / m.rho + 1e-12


def test_cartesian_mesh_quasiuniformity_bounds():
    # Axis-aligned meshes satisfy the locally-quasiuniform scaling chain
    # with sigma0 = sqrt(d).
    for d in (1, 2, 3):
        mesh = build_cartesian_mesh([(0.0, 1.0)] * d, (3,) * d)
        assert mesh.sigma0 == pytest.approx(math.sqrt(d))
        assert mesh.c_qu == pytest.approx(1.0)
        for el in mesh.elements:
            m = metrics(el)
            assert el.norm_j <= m.h / 2.0 + 1e-14
            assert el.norm_j_inv <= 2.0 * math.sqrt(d) * mesh.sigma0 / m.h + 1e-14


def test_mesh_two_by_two():
    mesh = build_cartesian_mesh([(0.0, 1.0), (0.0, 1.0)], (2, 2))
    assert len(mesh.elements) == 4
    for el in mesh.elements:
        assert metrics(el).volume == pytest.approx(0.25)
    assert mesh.h == pytest.approx(math.sqrt(2) / 2)


def test_mesh_refinement_halves_h():
    coarse = build_cartesian_mesh([(0.0, 1.0)], (4,))
    fine = build_cartesian_mesh([(0.0, 1.0)], (8,))
    assert fine.h == pytest.approx(coarse.h / 2)
    assert len(fine.elements) == 2 * len(coarse.elements)


def test_mesh_covers_box_with_disjoint_interiors():
    mesh = build_cartesian_mesh([(0.0, 1.0), (0.0, 2.0)], (2, 3))
    vol = sum(metrics(el).volume for el in mesh.elements)
    assert vol == pytest.approx(2.0)
    centers = np.array([el.b for el in mesh.elements])
    assert np.unique(np.round(centers, 12), axis=0).shape[0] == 6


def test_mesh_rejects_degenerate_box():
    with pytest.raises(ValueError):
        build_cartesian_mesh([(0.0, 0.0)], (2,))
    with pytest.raises(ValueError):
        build_cartesian_mesh([(0.0, 1.0)], (0,))


def test_faces_1d_point_measure():
    fs = faces(identity_map(1))
    assert len(fs) == 2
    assert all(f.measure == pytest.approx(1.0) for f in fs)


def test_faces_2d_square():
    h = 0.3
    fs = faces(scaled_map(2, h))
    assert len(fs) == 4
    assert all(f.measure == pytest.approx(h) for f in fs)


def test_faces_3d_cube():
    h = 0.5
    fs = faces(scaled_map(3, h))
    assert len(fs) == 6
    assert all(f.measure == pytest.approx(h * h) for f in fs)


def test_face_embed_lies_on_face():
    el = scaled_map(2, 2.0, np.array([1.0, 1.0]))  # [0,2]^2
    for f in faces(el):
        pts = f.embed(np.linspace(-1, 1, 5)[:, None])
        coord = pts[:, f.axis]
        expected = 1.0 + f.side * 1.0
        assert coord == pytest.approx(np.full(5, expected))


def test_affine_round_trip():
    rng = np.random.default_rng(21)
    for _ in range(20):
        d = int(rng.integers(1, 4))
        j = rng.normal(size=(d, d)) + 3 * np.eye(d)
        amap = affine_map(j, rng.normal(size=d))
        pts = rng.uniform(-1, 1, size=(50, d))
        back = amap.inverse_apply(amap.apply(pts))
        assert np.max(np.abs(back - pts)) <= 1e-12
