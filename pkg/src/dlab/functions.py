"""Functions on the surface: coordinates, parsed expressions in x, y, z, word components."""
from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from . import xnum
from .autos import Word, word_apply
from .parsing import Builder, Parser
from .surface import Danielewski, SurfacePoint

SKIP = complex("nan+nanj")


class SurfaceFunction:
    """A function ``(x, y, z) -> value`` (or a tuple of values) on the surface.

    ``fn`` must accept complex scalars and numpy arrays.  When ``extended`` is
    true it must also accept :class:`~dlab.xnum.LogPolar` arguments; the
    estimator then re-evaluates overflowing samples in extended range instead
    of discarding them.
    """

    def __init__(self, fn: Callable, name: str = "F", n_out: int = 1, extended: bool = True):
        self.fn = fn
        self.name = name
        self.n_out = n_out
        self.extended = extended

    def __call__(self, x, y, z):
        if np.ndim(x) == 0 and not isinstance(x, xnum.LogPolar):
            x, y, z = np.complex128(x), np.complex128(y), np.complex128(z)
            with np.errstate(all="ignore"):
                out = self.fn(x, y, z)
            if self.n_out == 1:
                out = complex(out)
                return out if np.isfinite(out) else SKIP
            return tuple(complex(v) if np.isfinite(v) else SKIP for v in out)
        with np.errstate(all="ignore"):
            return self.fn(x, y, z)

    def at(self, P: SurfacePoint):
        return self(P.x, P.y, P.z)

    def __repr__(self) -> str:
        return f"SurfaceFunction({self.name!r})"

    def compose_involution(self) -> "SurfaceFunction":
        """``F o I``."""
        return SurfaceFunction(lambda x, y, z: self.fn(y, x, z), f"({self.name})∘I", self.n_out, self.extended)

    def component(self, k: int) -> "SurfaceFunction":
        if self.n_out == 1:
            raise ValueError("not a tuple-valued function")
        return SurfaceFunction(lambda x, y, z: self.fn(x, y, z)[k], f"{self.name}[{k}]", 1, self.extended)


def coordinate(name: str) -> SurfaceFunction:
    idx = "xyz".index(name)
    return SurfaceFunction(lambda x, y, z: (x, y, z)[idx], name)


def bundle(functions: Sequence[SurfaceFunction]) -> SurfaceFunction:
    """Evaluate several scalar functions as one tuple-valued function (paired sampling)."""
    fs = list(functions)

    def fn(x, y, z):
        return tuple(f.fn(x, y, z) for f in fs)

    return SurfaceFunction(fn, "(" + ", ".join(f.name for f in fs) + ")", len(fs), all(f.extended for f in fs))


def word_components(S: Danielewski, W: Word, name: str = "W") -> SurfaceFunction:
    """``(u, v, w) = W(x, y, z)`` as a 3-valued surface function."""

    def fn(x, y, z):
        Q = word_apply(S, W, SurfacePoint(x, y, z), check=False)
        return (Q.x, Q.y, Q.z)

    return SurfaceFunction(fn, name, 3)


def _var(name):
    idx = "xyz".index(name)
    return lambda x, y, z: (x, y, z)[idx]


def _const(c):
    return lambda x, y, z: c


_BUILDER = Builder(
    const=_const,
    var=_var,
    add=lambda a, b: (lambda x, y, z: a(x, y, z) + b(x, y, z)),
    sub=lambda a, b: (lambda x, y, z: a(x, y, z) - b(x, y, z)),
    mul=lambda a, b: (lambda x, y, z: a(x, y, z) * b(x, y, z)),
    div=lambda a, b: (lambda x, y, z: a(x, y, z) / b(x, y, z)),
    neg=lambda a: (lambda x, y, z: -a(x, y, z)),
    exp=lambda a: (lambda x, y, z: xnum.exp(a(x, y, z))),
    pow=lambda a, k: (lambda x, y, z: a(x, y, z) ** k),
)


def parse_expression(text: str) -> SurfaceFunction:
    """Parse an expression in ``x, y, z`` (division allowed; a pole evaluates to :data:`SKIP`)."""
    fn = Parser(text, ("x", "y", "z"), _BUILDER).parse()
    return SurfaceFunction(fn, text.strip())
