"""Scalar fields with analytic partial derivatives.

A :class:`ScalarField` bundles a vectorized point evaluator with a table of
partial derivatives up to a declared smoothness order.  The manufactured
solutions used by the convergence studies are provided here with partials
of every requested order in closed form; a limited-regularity family
(powers of a shifted absolute value) supports qualitative degree sweeps.

Evaluation contract: every evaluator accepts an (n, d) array of points and
returns an (n,) array.  Objects exposing ``eval``/``partial`` with this
contract (fields, element polynomials, differences) are interchangeable
throughout the norm and study layers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from tpfem.polybasis import MultiIndex, total_degree_indices

Evaluator = Callable[[np.ndarray], np.ndarray]


def as_points(points, d: int) -> np.ndarray:
    points = np.asarray(points, dtype=float)
    if points.ndim == 1:
        points = points[:, None] if d == 1 else points[None, :]
    if points.ndim != 2 or points.shape[1] != d:
        raise ValueError(f"expected points of shape (n, {d}), got {points.shape}")
    return points


@dataclass(frozen=True)
class ScalarField:
    """Function on R^d together with its partial derivatives up to ``l_max``."""

    d: int
    fn: Evaluator
    partials: dict[MultiIndex, Evaluator] = field(default_factory=dict)
    l_max: int = 0

    def eval(self, points) -> np.ndarray:
        return self.fn(as_points(points, self.d))

    def partial(self, alpha: MultiIndex) -> Evaluator:
        alpha = tuple(int(a) for a in alpha)
        if len(alpha) != self.d:
            raise ValueError(f"multi-index {alpha} does not match dimension {self.d}")
        if sum(alpha) == 0:
            return self.eval
        if sum(alpha) > self.l_max or alpha not in self.partials:
            raise ValueError(
                f"partial derivative {alpha} not available (l_max={self.l_max})"
            )
        fn = self.partials[alpha]
        return lambda points: fn(as_points(points, self.d))


def validate_partials(
    f: ScalarField, rng: np.random.Generator, n_points: int = 8, tol: float = 1e-6
) -> None:
    """Finite-difference consistency check of the declared partials.

    Each first-order increment of a stored partial is compared against the
    stored higher partial by central differences at random points; the zero
    multi-index must agree with the plain evaluator.
    """
    pts = rng.uniform(-0.9, 0.9, size=(n_points, f.d))
    step = 1e-5
    for alpha, fn in f.partials.items():
        order = sum(alpha)
        if order >= f.l_max:
            continue
        base_scale = max(1.0, np.max(np.absolute(fn(pts))))
        for axis in range(f.d):
            upper = tuple(a + (1 if i == axis else 0) for i, a in enumerate(alpha))
            if upper not in f.partials:
                continue
            shift = np.zeros(f.d)
            shift[axis] = step
            fd = (fn(pts + shift) - fn(pts - shift)) / (2.0 * step)
            exact = f.partials[upper](pts)
            err = np.max(np.absolute(fd - exact))
            scale = max(base_scale, np.max(np.absolute(exact)), 1.0)
            if err > tol * scale * 1e2:
                raise ValueError(
                    f"partial {upper} inconsistent with finite differences "
                    f"of {alpha}: error {err:.3e}"
                )


def _field_from_rule(
    d: int, l_max: int, partial_rule: Callable[[MultiIndex], Evaluator]
) -> ScalarField:
    partials: dict[MultiIndex, Evaluator] = {}
    for order in range(1, l_max + 1):
        for alpha in total_degree_indices(order, d):
            partials[alpha] = partial_rule(alpha)
    zero = tuple([0] * d)
    return ScalarField(d=d, fn=partial_rule(zero), partials=partials, l_max=l_max)


def sin_sum_field(d: int, l_max: int = 10) -> ScalarField:
    """f(x) = sin(pi * (x_1 + ... + x_d)); every partial is a phase shift."""

    def rule(alpha: MultiIndex) -> Evaluator:
        order = sum(alpha)
        factor = math.pi**order
        shift = order * math.pi / 2.0
        return lambda p: factor * np.sin(math.pi * np.sum(p, axis=1) + shift)

    return _field_from_rule(d, l_max, rule)


def exp_sum_field(d: int, l_max: int = 10) -> ScalarField:
    """f(x) = exp(x_1 + ... + x_d); all partials coincide with f."""

    def rule(alpha: MultiIndex) -> Evaluator:
        return lambda p: np.exp(np.sum(p, axis=1))

    return _field_from_rule(d, l_max, rule)


def sin_prod_field(d: int, l_max: int = 10) -> ScalarField:
    """f(x) = prod_i sin(pi x_i)."""

    def rule(alpha: MultiIndex) -> Evaluator:
        factor = math.pi ** sum(alpha)
        shifts = [a * math.pi / 2.0 for a in alpha]

        def evaluate(p: np.ndarray) -> np.ndarray:
            out = np.full(p.shape[0], factor)
            for axis, shift in enumerate(shifts):
                out *= np.sin(math.pi * p[:, axis] + shift)
            return out

        return evaluate

    return _field_from_rule(d, l_max, rule)


def abs_power_field(gamma: float, x0: float = 0.3, l_max: int = 4) -> ScalarField:
    """f(x) = |x - x0|^gamma in 1D; smoothness limited by the exponent.

    Partials exist away from ``x0``; the kink limits membership to Sobolev
    orders below gamma + 1/2.  Used only for qualitative degree sweeps.
    """

    def rule(alpha: MultiIndex) -> Evaluator:
        m = alpha[0]
        factor = 1.0
        for i in range(m):
            factor *= gamma - i

        def evaluate(p: np.ndarray) -> np.ndarray:
            t = p[:, 0] - x0
            r = np.absolute(t)
            with np.errstate(divide="ignore", invalid="ignore"):
                vals = factor * np.where(r > 0, r ** (gamma - m), 0.0)
            return vals * np.sign(t) ** m

        return evaluate

    return _field_from_rule(1, l_max, rule)


_MANUFACTURED: dict[str, Callable[..., ScalarField]] = {
    "sin_sum": sin_sum_field,
    "exp_sum": exp_sum_field,
    "sin_prod": sin_prod_field,
}


def manufactured_field(
    name: str, d: int, l_max: int = 10, gamma: float = 2.6
) -> ScalarField:
    """Look up a named manufactured solution."""
    if name == "abs_power":
        if d != 1:
            raise ValueError("abs_power is a one-dimensional family")
        return abs_power_field(gamma, l_max=l_max)
    try:
        factory = _MANUFACTURED[name]
    except KeyError:
        raise ValueError(
            f"unknown field {name!r}; choose from "
            f"{sorted(_MANUFACTURED) + ['abs_power']}"
        ) from None
    return factory(d, l_max)


class DifferenceField:
    """Pointwise difference a - b of two eval/partial objects."""

    def __init__(self, a, b):
        self.a = a
        self.b = b
        self.d = a.d

    def eval(self, points) -> np.ndarray:
        return self.a.eval(points) - self.b.eval(points)

    def partial(self, alpha: MultiIndex) -> Evaluator:
        pa = self.a.partial(alpha)
        pb = self.b.partial(alpha)
        return lambda points: pa(points) - pb(points)
