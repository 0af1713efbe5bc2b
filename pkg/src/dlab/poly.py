"""Complex polynomials in one variable.

Coefficients are stored in ascending order (``coeffs[k]`` multiplies ``z**k``).
Evaluation is written with plain arithmetic operators so that it works on
Python complex scalars, numpy arrays and :class:`~dlab.xnum.LogPolar` values.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .xnum import LogPolar

_NUM = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
_LITERAL = re.compile(
    rf"^(?:-?{_NUM}|-?{_NUM}[+-](?:{_NUM})?i|-?(?:{_NUM})?i)$"
)


def parse_complex(text: str) -> complex:
    """Parse a complex literal of the form ``a``, ``a+bi``, ``a-bi``, ``bi`` or ``i``."""
    s = text.strip().replace(" ", "")
    if not _LITERAL.match(s):
        raise ValueError(f"invalid complex literal: {text!r}")
    if s.endswith("i"):
        s = s[:-1] + "j"
        # a bare 'i' (or '+i' after a real part) means 1i
        if s[-2:-1] in ("", "+", "-"):
            s = s[:-1] + "1j"
    return complex(s)


def format_complex(c: complex) -> str:
    """Inverse of :func:`parse_complex` (round-trips exactly via ``repr``)."""
    c = complex(c)
    re_, im = repr(c.real), repr(abs(c.imag))
    if c.imag == 0:
        return re_
    sign = "-" if c.imag < 0 or (c.imag == 0 and np.signbit(c.imag)) else "+"
    return f"{re_}{sign}{im}i"


@dataclass(frozen=True)
class ComplexPoly:
    coeffs: tuple

    def __post_init__(self):
        c = [complex(a) for a in self.coeffs]
        if not c:
            c = [0j]
        scale = max(abs(a) for a in c)
        while len(c) > 1 and abs(c[-1]) < 1e-14 * scale:
            c.pop()
        if scale == 0:
            c = [0j]
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def parse(cls, text: str) -> "ComplexPoly":
        """Ascending comma list, e.g. ``"-1,0,0,0,1"`` is ``z**4 - 1``."""
        parts = [t for t in text.split(",")]
        if not text.strip():
            raise ValueError("empty polynomial")
        return cls(tuple(parse_complex(t) for t in parts))

    @classmethod
    def from_roots(cls, roots: Sequence[complex]) -> "ComplexPoly":
        c = np.array([1.0 + 0j])
        for r in roots:
            c = np.convolve(c, [-r, 1.0])
        return cls(tuple(c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def to_text(self) -> str:
        return ",".join(format_complex(a) for a in self.coeffs)

    def __call__(self, z):
        return eval_poly(self, z)

    def __repr__(self) -> str:
        return f"ComplexPoly({self.to_text()!r})"


def eval_poly(p: ComplexPoly, z):
    """Horner evaluation."""
    acc = p.coeffs[-1]
    for a in reversed(p.coeffs[:-1]):
        acc = acc * z + a
    if isinstance(acc, LogPolar) or isinstance(z, LogPolar):
        return LogPolar.coerce(acc)
    if np.ndim(acc) == 0:
        if np.ndim(z) == 0:
            return complex(acc)
        return np.full(np.shape(z), acc, dtype=complex)
    return acc


def derivative(p: ComplexPoly) -> ComplexPoly:
    c = p.coeffs
    if len(c) == 1:
        return ComplexPoly((0j,))
    return ComplexPoly(tuple(k * c[k] for k in range(1, len(c))))


def roots(p: ComplexPoly) -> np.ndarray:
    """All roots with multiplicity: companion eigenvalues plus one Newton step."""
    n = p.degree
    if n < 1:
        raise ValueError("constant polynomial")
    c = np.array(p.coeffs)
    companion = np.zeros((n, n), dtype=complex)
    companion[1:, :-1] = np.eye(n - 1)
    companion[:, -1] = -c[:-1] / c[-1]
    r = np.linalg.eigvals(companion)
    dp = derivative(p)
    val, dval = eval_poly(p, r), eval_poly(dp, r)
    ok = np.abs(dval) > 0
    step = np.where(ok, val / np.where(ok, dval, 1), 0)
    polished = r - step
    better = np.abs(eval_poly(p, polished)) <= np.abs(val)
    return np.where(better, polished, r)


def assert_simple_zeros(p: ComplexPoly, tol: float = 1e-8) -> bool:
    """True iff the roots are pairwise separated by more than ``tol`` and ``|p'| > tol`` there."""
    r = roots(p)
    if len(r) > 1:
        d = np.abs(r[:, None] - r[None, :])
        d[np.diag_indices_from(d)] = np.inf
        if d.min() <= tol:
            return False
    return bool(np.abs(eval_poly(derivative(p), r)).min() > tol)


def divided_difference(p: ComplexPoly, w, z):
    """``(p(w) - p(z)) / (w - z)`` as a polynomial in ``(w, z)``; equals ``p'(z)`` at ``w == z``.

    Runs the Horner partial sums ``P_k`` of ``p`` at ``w`` alongside the
    recurrence ``D_k = P_{k+1}(w) + z * D_{k+1}``, which is the nested form of
    ``sum_k a_k sum_{i<k} w**i z**(k-1-i)``.  No division, so it is exact at
    ``w == z`` and well conditioned when ``w`` and ``z`` nearly coincide.
    """
    c = p.coeffs
    if len(c) == 1:
        return 0 * w + 0 * z
    horner = c[-1]
    dd = 0j
    for a in reversed(c[:-1]):
        dd = horner + z * dd
        horner = horner * w + a
    return dd


def complete_square(phis: Sequence[complex], d: int):
    """Square completion of ``A(f) = (phi_1 f + ... + phi_{d-1} f**(d-1) + f**d) * f**(d-2)``.

    Returns ``(us, qs)`` with ``B(f) = sum us[i] f**i`` of degree ``d - 1``
    such that ``B(f)**2 == A(f) + sum qs[i] f**i`` identically.  The
    coefficients of ``B`` are fixed from the top down by matching ``f**m`` for
    ``m = 2d-3, ..., d-1``; for ``d <= 3`` this is exactly
    ``u_{d-k} = (phi_{d-k+1} - u_{d-k+1}**2) / 2``, for larger ``d`` the cross
    terms of the convolution enter as well.
    """
    if d < 2:
        raise ValueError("complete_square needs d >= 2")
    phis = [complex(v) for v in phis]
    if len(phis) != d - 1:
        raise ValueError(f"expected {d - 1} coefficients phi_1..phi_{d - 1}, got {len(phis)}")
    phi = [0j] + phis + [1 + 0j]  # phi[j] for j = 0..d, phi[d] = 1
    u = [0j] * d
    u[d - 1] = 1 + 0j
    for m in range(2 * d - 3, d - 2, -1):
        j = m - d + 1  # unknown u_j pairs with u_{d-1}
        cross = sum(u[i] * u[m - i] for i in range(j + 1, d - 1) if j < m - i < d - 1)
        u[j] = 0.5 * (phi[m - d + 2] - cross)
    q = [sum(u[j] * u[i - j] for j in range(i + 1)) for i in range(d - 1)]
    return u, q
