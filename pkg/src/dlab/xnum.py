"""Extended-range complex numbers in log-polar form.

Iterated overshear words produce coordinates like ``r**160`` or ``exp(r)``
long before anything interesting happens to their Nevanlinna growth, so the
estimator needs values whose modulus is far outside double range.  A
:class:`LogPolar` stores ``log|v|`` (a float, ``-inf`` for zero) and the unit
phase ``v/|v|``; products are exact in the exponent and sums are rescaled to
the larger operand before adding.

Every helper here also accepts plain complex scalars and numpy arrays, so the
same formula code (Horner evaluation, overshear maps, expression trees) runs on
either representation.
"""
from __future__ import annotations

import numpy as np


def _arr(v):
    return np.asarray(v, dtype=complex)


def _unit(v):
    """v/|v|, with 1 at zero. Scaling first keeps subnormal inputs finite."""
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        hi = np.maximum(np.abs(v.real), np.abs(v.imag))
        d = np.where(hi > 0, hi, 1.0)
        w = v.real / d + 1j * (v.imag / d)
        return np.where(hi > 0, w / np.abs(w), 1.0 + 0j)


class LogPolar:
    """Complex value(s) ``phase * exp(lg)`` with arbitrary exponent range."""

    __slots__ = ("lg", "ph")
    __array_ufunc__ = None  # ndarray <op> LogPolar defers to the reflected method

    def __init__(self, lg, ph):
        self.lg = np.asarray(lg, dtype=float)
        self.ph = np.asarray(ph, dtype=complex)

    @classmethod
    def from_complex(cls, v) -> "LogPolar":
        v = _arr(v)
        with np.errstate(divide="ignore", invalid="ignore"):
            lg = np.asarray(log_abs(v), dtype=float)
            ph = _unit(v)
        return cls(lg, ph)

    @staticmethod
    def coerce(v) -> "LogPolar":
        return v if isinstance(v, LogPolar) else LogPolar.from_complex(v)

    # -- queries ----------------------------------------------------------
    @property
    def logabs(self) -> np.ndarray:
        return self.lg

    def to_complex(self):
        with np.errstate(over="ignore", invalid="ignore"):
            mag = np.exp(self.lg)
            # a zero phase component stays zero even when the modulus overflows
            re = np.where(self.ph.real == 0, 0.0, self.ph.real * mag)
            im = np.where(self.ph.imag == 0, 0.0, self.ph.imag * mag)
            out = re + 1j * im
            return complex(out) if out.ndim == 0 else out

    def __getitem__(self, idx) -> "LogPolar":
        return LogPolar(self.lg[idx], self.ph[idx])

    @property
    def shape(self) -> tuple:
        return self.lg.shape

    def __repr__(self) -> str:
        return f"LogPolar(lg={self.lg!r}, ph={self.ph!r})"

    # -- arithmetic -------------------------------------------------------
    def __mul__(self, other) -> "LogPolar":
        o = LogPolar.coerce(other)
        with np.errstate(invalid="ignore"):
            return LogPolar(self.lg + o.lg, self.ph * o.ph)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "LogPolar":
        o = LogPolar.coerce(other)
        with np.errstate(invalid="ignore"):
            return LogPolar(self.lg - o.lg, self.ph / o.ph)

    def __rtruediv__(self, other) -> "LogPolar":
        return LogPolar.coerce(other) / self

    def __neg__(self) -> "LogPolar":
        return LogPolar(self.lg, -self.ph)

    def __add__(self, other) -> "LogPolar":
        o = LogPolar.coerce(other)
        la, lb = np.broadcast_arrays(self.lg, o.lg)
        with np.errstate(invalid="ignore", over="ignore", divide="ignore"):
            m = np.maximum(la, lb)
            zero = m == -np.inf
            ms = np.where(zero, 0.0, m)
            t = self.ph * np.exp(la - ms) + o.ph * np.exp(lb - ms)
            mod = np.abs(t)
            lg = np.where(zero, -np.inf, ms + np.log(mod))
            ph = _unit(t)
        return LogPolar(lg, ph)

    __radd__ = __add__

    def __sub__(self, other) -> "LogPolar":
        return self + (-LogPolar.coerce(other))

    def __rsub__(self, other) -> "LogPolar":
        return LogPolar.coerce(other) + (-self)

    def __pow__(self, k: int) -> "LogPolar":
        if int(k) != k or k < 0:
            raise ValueError("only non-negative integer powers are supported")
        k = int(k)
        if k == 0:
            return LogPolar(np.zeros_like(self.lg), np.ones_like(self.ph))
        return LogPolar(self.lg * k, self.ph**k)

    def exp(self) -> "LogPolar":
        v = self.to_complex()
        with np.errstate(invalid="ignore"):
            return LogPolar(v.real, np.exp(1j * v.imag))


# -- representation-agnostic helpers --------------------------------------

def exp(v):
    if isinstance(v, LogPolar):
        return v.exp()
    with np.errstate(over="ignore", invalid="ignore"):
        out = np.exp(v)
    return complex(out) if np.ndim(out) == 0 else out


def log_abs(v):
    """``log|v|`` for any supported representation (``-inf`` at zero)."""
    if isinstance(v, LogPolar):
        return v.lg
    v = np.asarray(v, dtype=complex)
    re, im = np.abs(v.real), np.abs(v.imag)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        hi = np.maximum(re, im)
        lo = np.minimum(re, im)
        # |v| itself may overflow even when both parts are finite
        ratio = np.where(hi > 0, lo / np.where(hi > 0, hi, 1.0), 0.0)
        out = np.log(hi) + 0.5 * np.log1p(ratio * ratio)
    return float(out) if out.ndim == 0 else out


def where(mask, a, b):
    """Elementwise select that keeps the LogPolar representation if present."""
    if isinstance(a, LogPolar) or isinstance(b, LogPolar):
        a, b = LogPolar.coerce(a), LogPolar.coerce(b)
        return LogPolar(np.where(mask, a.lg, b.lg), np.where(mask, a.ph, b.ph))
    out = np.where(mask, a, b)
    return complex(out) if np.ndim(out) == 0 else out


def expm1_ratio(u):
    """``(exp(u) - 1) / u`` with the removable singularity at 0 filled in."""
    small = log_abs(u) < np.log(1e-4)
    series = 1 + u * (0.5 + u * (1.0 / 6.0 + u * (1.0 / 24.0)))
    if np.ndim(small) == 0 and not isinstance(u, LogPolar):
        if small:
            return complex(series)
        return complex((exp(u) - 1) / u)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        direct = (exp(u) - 1) / u
    return where(small, series, direct)
