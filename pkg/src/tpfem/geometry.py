"""Reference cube, affine element maps, meshes and faces.

The reference element is ``[-1, 1]^d``.  An element is the image of the
reference cube under ``F(x) = J x + b`` with ``det(J) != 0``.  Spectral
norms of ``J`` and its inverse are obtained from the eigenvalues of
``J^T J`` computed with the in-house Jacobi solver.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from tpfem.eigen import symmetric_eigenvalues

_DIAGONAL_TOL = 1e-14


@dataclass(frozen=True)
class AffineMap:
    """Invertible affine map ``x = J xhat + b`` with cached metric data."""

    j: np.ndarray
    b: np.ndarray
    det: float
    j_inv: np.ndarray
    norm_j: float
    norm_j_inv: float

    @property
    def d(self) -> int:
        return self.b.size

    def apply(self, points) -> np.ndarray:
        """Map reference points (n, d) or (d,) to physical coordinates."""
        points = np.asarray(points, dtype=float)
        return points @ self.j.T + self.b

    def inverse_apply(self, points) -> np.ndarray:
        points = np.asarray(points, dtype=float)
        return (points - self.b) @ self.j_inv.T

    @property
    def is_diagonal(self) -> bool:
        off = self.j - np.diag(np.diag(self.j))
        return bool(np.max(np.absolute(off), initial=0.0) <= _DIAGONAL_TOL)


def affine_map(j, b) -> AffineMap:
    """Construct an :class:`AffineMap`, rejecting singular Jacobians."""
    j = np.atleast_2d(np.array(j, dtype=float))
    b = np.atleast_1d(np.array(b, dtype=float))
    d = b.size
    if j.shape != (d, d):
        raise ValueError(f"J has shape {j.shape}, expected ({d}, {d})")
    if not 1 <= d <= 3:
        raise ValueError(f"supported dimensions are 1..3, got {d}")
    det = float(np.linalg.det(j))
    if det == 0.0 or not np.isfinite(det):
        raise ValueError("affine map must have det(J) != 0")
    gram = j.T @ j
    eigs = symmetric_eigenvalues(gram, tol=1e-13)
    if eigs[0] <= 0.0:
        raise ValueError("affine map is numerically singular")
    j_inv = np.linalg.inv(j)
    j.flags.writeable = False
    b.flags.writeable = False
    j_inv.flags.writeable = False
    return AffineMap(
        j=j,
        b=b,
        det=det,
        j_inv=j_inv,
        norm_j=float(np.sqrt(eigs[-1])),
        norm_j_inv=float(1.0 / np.sqrt(eigs[0])),
    )


def identity_map(d: int) -> AffineMap:
    """The reference element itself, ``[-1, 1]^d``."""
    return affine_map(np.eye(d), np.zeros(d))


def scaled_map(d: int, h: float, center=None) -> AffineMap:
    """Axis-aligned cube of side ``h`` centered at ``center`` (default origin)."""
    if center is None:
        center = np.zeros(d)
    return affine_map(np.eye(d) * (h / 2.0), center)


def reference_vertices(d: int) -> np.ndarray:
    """Corners of the reference cube, shape (2^d, d)."""
    return np.array(list(itertools.product((-1.0, 1.0), repeat=d)))


@dataclass(frozen=True)
class ElementMetrics:
    """Diameter, inradius diameter, aspect ratio and volume of an element.

    ``rho_is_bound`` marks the inradius value as a certified lower bound
    (general affine images) rather than the exact inradius (axis-aligned
    boxes).
    """

    h: float
    rho: float
    sigma: float
    volume: float
    rho_is_bound: bool


def metrics(amap: AffineMap) -> ElementMetrics:
    """Compute element metrics from the affine map."""
    d = amap.d
    verts = amap.apply(reference_vertices(d))
    h = 0.0
    for i in range(len(verts)):
        for m in range(i + 1, len(verts)):
            h = max(h, float(np.linalg.norm(verts[i] - verts[m])))
    volume = abs(amap.det) * 2.0**d
    if amap.is_diagonal:
        rho = 2.0 * float(np.min(np.absolute(np.diag(amap.j))))
        rho_is_bound = False
    else:
        rho = 2.0 / amap.norm_j_inv
        rho_is_bound = True
    return ElementMetrics(
        h=h, rho=rho, sigma=h / rho, volume=volume, rho_is_bound=rho_is_bound
    )


@dataclass(frozen=True)
class Mesh:
    """Cartesian partition of an axis-aligned box into congruent elements."""

    box: np.ndarray
    divisions: tuple[int, ...]
    elements: tuple[AffineMap, ...]
    h: float
    sigma0: float
    c_qu: float

    @property
    def d(self) -> int:
        return self.box.shape[0]


def build_cartesian_mesh(box, divisions) -> Mesh:
    """Partition ``box = [(x0, x1), (y0, y1), ...]`` into a Cartesian grid.

    Elements are axis-aligned affine images of the reference cube with
    diagonal Jacobians.  Reported are the mesh width ``h`` (max element
    diameter), the aspect-ratio bound ``sigma0`` and the quasiuniformity
    constant ``c_qu = min h_T / h``.
    """
    box = np.atleast_2d(np.asarray(box, dtype=float))
    d = box.shape[0]
    if box.shape != (d, 2) or not 1 <= d <= 3:
        raise ValueError(f"box must have shape (d, 2) with d in 1..3, got {box.shape}")
    if np.any(box[:, 1] <= box[:, 0]):
        raise ValueError("box sides must have positive length")
    divisions = tuple(int(n) for n in np.atleast_1d(divisions))
    if len(divisions) == 1 and d > 1:
        divisions = divisions * d
    if len(divisions) != d or any(n < 1 for n in divisions):
        raise ValueError(f"need {d} positive division counts, got {divisions}")

    sides = (box[:, 1] - box[:, 0]) / np.asarray(divisions, dtype=float)
    j = np.diag(sides / 2.0)
    elements = []
    for idx in np.ndindex(*divisions):
        center = box[:, 0] + sides * (np.asarray(idx, dtype=float) + 0.5)
        elements.append(affine_map(j, center))
    mets = [metrics(el) for el in elements]
    h = max(m.h for m in mets)
    box = box.copy()
    box.flags.writeable = False
    return Mesh(
        box=box,
        divisions=divisions,
        elements=tuple(elements),
        h=h,
        sigma0=max(m.sigma for m in mets),
        c_qu=min(m.h for m in mets) / h,
    )


@dataclass(frozen=True)
class Face:
    """One of the 2d faces of an element.

    ``axis`` is the reference axis with frozen coordinate ``side`` (+-1);
    the remaining axes parameterize the face.  ``measure`` is the
    (d-1)-dimensional measure of the physical face; point faces in 1D carry
    the counting measure 1.
    """

    element: AffineMap
    axis: int
    side: int
    measure: float

    @property
    def d(self) -> int:
        return self.element.d

    @property
    def free_axes(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.d) if i != self.axis)

    def embed(self, ref_points) -> np.ndarray:
        """Map (n, d-1) reference face points into physical coordinates."""
        ref_points = np.atleast_2d(np.asarray(ref_points, dtype=float))
        n = ref_points.shape[0]
        full = np.empty((n, self.d))
        full[:, self.axis] = float(self.side)
        for col, ax in enumerate(self.free_axes):
            full[:, ax] = ref_points[:, col]
        return self.element.apply(full)


def faces(element: AffineMap) -> list[Face]:
    """All 2d faces of the element with their (d-1)-measures."""
    d = element.d
    out = []
    for axis in range(d):
        free = [i for i in range(d) if i != axis]
        jf = element.j[:, free]
        gram = jf.T @ jf
        det_gram = float(np.linalg.det(gram)) if free else 1.0
        measure = 2.0 ** (d - 1) * float(np.sqrt(max(det_gram, 0.0)))
        if measure <= 0.0:
            raise ValueError("degenerate face")
        for side in (-1, 1):
            out.append(Face(element=element, axis=axis, side=side, measure=measure))
    return out
