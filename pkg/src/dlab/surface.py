"""The Danielewski surface ``x*y = p(z)`` and its 2-sheeted projection to C^2."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from .poly import ComplexPoly, assert_simple_zeros, derivative, eval_poly


@dataclass(frozen=True)
class SurfacePoint:
    """A point (or, with array fields, a batch of points) of C^3."""

    x: Any
    y: Any
    z: Any

    def __iter__(self):
        return iter((self.x, self.y, self.z))

    def as_tuple(self) -> tuple:
        return (self.x, self.y, self.z)


@dataclass(frozen=True)
class Danielewski:
    p: ComplexPoly

    def __post_init__(self):
        if isinstance(self.p, str):
            object.__setattr__(self, "p", ComplexPoly.parse(self.p))
        if self.p.degree < 1:
            raise ValueError("p must be non-constant")
        if not assert_simple_zeros(self.p, 1e-8):
            raise ValueError(f"p = {self.p.to_text()} has a multiple zero")
        object.__setattr__(self, "_dp", derivative(self.p))

    @property
    def n(self) -> int:
        return self.p.degree

    @property
    def dp(self) -> ComplexPoly:
        return self._dp

    def defect(self, P: SurfacePoint):
        """Relative defect ``|xy - p(z)| / (1 + |xy| + |p(z)|)``."""
        xy = P.x * P.y
        pz = eval_poly(self.p, P.z)
        with np.errstate(invalid="ignore", over="ignore"):
            return np.abs(xy - pz) / (1 + np.abs(xy) + np.abs(pz))


def contains(S: Danielewski, P: SurfacePoint, tol: float = 1e-9) -> bool:
    d = S.defect(P)
    return bool(np.all(d <= tol))


def project(P: SurfacePoint):
    """pi(x, y, z) = (x + y, z)."""
    return P.x + P.y, P.z


def fiber_roots(S: Danielewski, a, b):
    """The two roots of ``t**2 - a t + p(b)``, larger modulus first.

    The larger root comes from the sign choice that avoids cancellation in
    ``a +- sqrt(a**2 - 4 p(b))``; the smaller is ``p(b) / x1``.
    """
    a = np.asarray(a, dtype=complex)
    pb = np.asarray(eval_poly(S.p, b), dtype=complex)
    with np.errstate(invalid="ignore", over="ignore", divide="ignore"):
        sq = np.sqrt(a * a - 4 * pb)
        sq = np.where((np.conj(a) * sq).real >= 0, sq, -sq)
        x1 = 0.5 * (a + sq)
        x2 = np.where(x1 != 0, pb / np.where(x1 != 0, x1, 1), a - x1)
    if x1.ndim == 0:
        return complex(x1), complex(x2)
    return x1, x2


def fiber(S: Danielewski, a, b) -> tuple[SurfacePoint, SurfacePoint]:
    """The two points over ``(a, b)``; the second is the involution of the first.

    At a ramification point (``a**2 == 4 p(b)``) they coincide.
    """
    x1, x2 = fiber_roots(S, a, b)
    b = complex(b) if np.ndim(b) == 0 else np.asarray(b, dtype=complex)
    return SurfacePoint(x1, x2, b), SurfacePoint(x2, x1, b)


def _as_rng(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def complex_normal(rng, size=None):
    """Standard complex Gaussian: ``E|w|**2 = 1``."""
    rng = _as_rng(rng)
    shape = (2,) if size is None else (2, *np.atleast_1d(size))
    g = rng.standard_normal(shape) * np.sqrt(0.5)
    out = g[0] + 1j * g[1]
    return complex(out) if size is None else out


def random_point(S: Danielewski, scale: float = 1.0, rng=None, size=None) -> SurfacePoint:
    """Fiber point over a Gaussian ``(a, b)`` of the given scale, sheet picked by a fair coin."""
    if scale <= 0:
        raise ValueError("scale must be positive")
    rng = _as_rng(rng)
    a = complex_normal(rng, size) * scale
    b = complex_normal(rng, size) * scale
    coin = rng.random(size) < 0.5
    P1, P2 = fiber(S, a, b)
    if size is None:
        return P1 if coin else P2
    return SurfacePoint(
        np.where(coin, P1.x, P2.x), np.where(coin, P1.y, P2.y), np.asarray(b, dtype=complex)
    )


def chart_xz(S: Danielewski, x, z) -> SurfacePoint:
    """(x, z) -> (x, p(z)/x, z) on the open set x != 0."""
    if np.any(np.asarray(x) == 0):
        raise ValueError("chart undefined at x = 0")
    return SurfacePoint(x, eval_poly(S.p, z) / x, z)


def tau(P: SurfacePoint):
    """log|pi(P)|; ``-inf`` at the two points over the origin."""
    a, b = project(P)
    with np.errstate(divide="ignore"):
        out = np.log(np.hypot(np.abs(a), np.abs(b)))
    return float(out) if np.ndim(out) == 0 else out
