"""Expression trees for entire functions of one complex variable.

These are the ``f`` (exponent) and ``g`` (translation) of an overshear.  The
node set has no division or logarithm, so every tree denotes an entire
function.  Smart constructors fold constants; nothing else is simplified.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import xnum
from .parsing import Builder, Parser
from .poly import format_complex

MAX_DEPTH = 64


class EntireExpr:
    """Base class; use the module-level constructors or :func:`parse_entire`."""

    depth: int

    def __call__(self, z):
        return evaluate(self, z)

    def __add__(self, other):
        return add(self, _lift(other))

    def __radd__(self, other):
        return add(_lift(other), self)

    def __sub__(self, other):
        return add(self, neg(_lift(other)))

    def __rsub__(self, other):
        return add(_lift(other), neg(self))

    def __mul__(self, other):
        return mul(self, _lift(other))

    def __rmul__(self, other):
        return mul(_lift(other), self)

    def __neg__(self):
        return neg(self)

    def __pow__(self, k: int):
        return intpow(self, k)

    def __str__(self) -> str:
        return to_text(self)


def _depth(*children: EntireExpr) -> int:
    d = 1 + max((c.depth for c in children), default=0)
    if d > MAX_DEPTH:
        raise ValueError(f"expression depth {d} exceeds {MAX_DEPTH}")
    return d


@dataclass(frozen=True, eq=False, repr=True)
class Const(EntireExpr):
    value: complex
    depth: int = field(default=1, init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "value", complex(self.value))


@dataclass(frozen=True, eq=False)
class Var(EntireExpr):
    depth: int = field(default=1, init=False, repr=False)


@dataclass(frozen=True, eq=False)
class Add(EntireExpr):
    left: EntireExpr
    right: EntireExpr
    depth: int = field(default=0, init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "depth", _depth(self.left, self.right))


@dataclass(frozen=True, eq=False)
class Mul(EntireExpr):
    left: EntireExpr
    right: EntireExpr
    depth: int = field(default=0, init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "depth", _depth(self.left, self.right))


@dataclass(frozen=True, eq=False)
class Neg(EntireExpr):
    arg: EntireExpr
    depth: int = field(default=0, init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "depth", _depth(self.arg))


@dataclass(frozen=True, eq=False)
class Exp(EntireExpr):
    arg: EntireExpr
    depth: int = field(default=0, init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "depth", _depth(self.arg))


@dataclass(frozen=True, eq=False)
class IntPow(EntireExpr):
    arg: EntireExpr
    k: int
    depth: int = field(default=0, init=False, repr=False)

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 0:
            raise ValueError("IntPow exponent must be a non-negative integer")
        object.__setattr__(self, "k", int(self.k))
        object.__setattr__(self, "depth", _depth(self.arg))


X = Var()
ZERO = Const(0)
ONE = Const(1)


def _lift(v) -> EntireExpr:
    return v if isinstance(v, EntireExpr) else Const(v)


def _is_const(e: EntireExpr, value=None) -> bool:
    return isinstance(e, Const) and (value is None or e.value == value)


# -- folding constructors ------------------------------------------------

def add(a: EntireExpr, b: EntireExpr) -> EntireExpr:
    if _is_const(a) and _is_const(b):
        return Const(a.value + b.value)
    if _is_const(a, 0):
        return b
    if _is_const(b, 0):
        return a
    return Add(a, b)


def mul(a: EntireExpr, b: EntireExpr) -> EntireExpr:
    if _is_const(a) and _is_const(b):
        return Const(a.value * b.value)
    if _is_const(a, 0) or _is_const(b, 0):
        return ZERO
    if _is_const(a, 1):
        return b
    if _is_const(b, 1):
        return a
    return Mul(a, b)


def neg(a: EntireExpr) -> EntireExpr:
    if _is_const(a):
        return Const(-a.value)
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


def exp(a: EntireExpr) -> EntireExpr:
    if _is_const(a):
        return Const(complex(np.exp(a.value)))
    return Exp(a)


def intpow(a: EntireExpr, k: int) -> EntireExpr:
    if k == 0:
        return ONE
    if k == 1:
        return a
    if _is_const(a):
        return Const(a.value**k)
    return IntPow(a, k)


def const(c) -> Const:
    return Const(c)


def polynomial(coeffs) -> EntireExpr:
    """Ascending-coefficient polynomial in ``x`` as a tree (Horner-free, sum of monomials)."""
    out: EntireExpr = ZERO
    for k, c in enumerate(coeffs):
        if c != 0:
            out = add(out, mul(Const(c), intpow(X, k)))
    return out


# -- evaluation ------------------------------------------------------------

def evaluate(e: EntireExpr, z):
    """Evaluate at a complex scalar, numpy array or LogPolar value.

    Overflow is not trapped: it surfaces as inf/nan in the result.
    """
    with np.errstate(over="ignore", invalid="ignore"):
        out = _eval(e, z)
    if isinstance(z, xnum.LogPolar):
        if isinstance(out, xnum.LogPolar):
            return out
        return xnum.LogPolar.from_complex(np.full(z.shape, out, dtype=complex))
    if np.ndim(z) == 0 and np.ndim(out) == 0:
        return complex(out)
    if np.ndim(out) == 0:
        return np.full(np.shape(z), out, dtype=complex)
    return out


def _eval(e, z):
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        return z
    if isinstance(e, Add):
        return _eval(e.left, z) + _eval(e.right, z)
    if isinstance(e, Mul):
        return _eval(e.left, z) * _eval(e.right, z)
    if isinstance(e, Neg):
        return -_eval(e.arg, z)
    if isinstance(e, Exp):
        return xnum.exp(_eval(e.arg, z))
    if isinstance(e, IntPow):
        return _eval(e.arg, z) ** e.k
    raise TypeError(f"not an entire expression: {e!r}")


def deriv(e: EntireExpr) -> EntireExpr:
    """Symbolic derivative with respect to the variable."""
    if isinstance(e, Const):
        return ZERO
    if isinstance(e, Var):
        return ONE
    if isinstance(e, Add):
        return add(deriv(e.left), deriv(e.right))
    if isinstance(e, Mul):
        return add(mul(deriv(e.left), e.right), mul(e.left, deriv(e.right)))
    if isinstance(e, Neg):
        return neg(deriv(e.arg))
    if isinstance(e, Exp):
        return mul(e, deriv(e.arg))
    if isinstance(e, IntPow):
        return mul(mul(Const(e.k), intpow(e.arg, e.k - 1)), deriv(e.arg))
    raise TypeError(f"not an entire expression: {e!r}")


def is_transcendental(e: EntireExpr) -> bool:
    """True iff the tree contains ``exp`` of a non-constant argument.

    This is a syntactic classification: ``exp(x - x)`` counts as transcendental.
    """
    if isinstance(e, (Const, Var)):
        return False
    if isinstance(e, Exp):
        return not _is_const(e.arg) or is_transcendental(e.arg)
    if isinstance(e, (Add, Mul)):
        return is_transcendental(e.left) or is_transcendental(e.right)
    return is_transcendental(e.arg)


_ANGLES = 2 * np.pi * np.arange(32) / 32
SAMPLE_POINTS = np.concatenate([np.exp(1j * _ANGLES), 5 * np.exp(1j * _ANGLES)])


def approx_equal(e1: EntireExpr, e2: EntireExpr, tol: float = 1e-10) -> bool:
    """Sampled equality on 32 points of ``|z| = 1`` and 32 points of ``|z| = 5``.

    The relative error is taken against the larger of the two moduli so that
    the relation is symmetric.  A heuristic: two distinct exp-polynomials
    agreeing on all 64 points would have to be a deliberate construction.
    """
    v1, v2 = evaluate(e1, SAMPLE_POINTS), evaluate(e2, SAMPLE_POINTS)
    with np.errstate(invalid="ignore", over="ignore"):
        rel = np.abs(v1 - v2) / (1 + np.maximum(np.abs(v1), np.abs(v2)))
    same_inf = ~np.isfinite(v1) & (v1 == v2)
    rel = np.where(same_inf, 0.0, rel)
    if np.isnan(rel).any():
        return False
    return bool(rel.max() <= tol)


# -- text form ----------------------------------------------------------------

_PREC = {"add": 1, "mul": 2, "neg": 3, "pow": 4, "atom": 5}


def _const_text(c: complex) -> str:
    if c.imag == 0 and not math.copysign(1, c.imag) < 0:
        return repr(c.real)
    return "(" + format_complex(c) + ")"


def _text(e: EntireExpr) -> tuple[str, int]:
    if isinstance(e, Const):
        s = _const_text(e.value)
        return s, (_PREC["atom"] if not s.startswith("-") else _PREC["neg"])
    if isinstance(e, Var):
        return "x", _PREC["atom"]
    if isinstance(e, Add):
        (ls, lp), (rs, rp) = _text(e.left), _text(e.right)
        if rp <= _PREC["add"]:
            rs = f"({rs})"
        return f"{ls} + {rs}", _PREC["add"]
    if isinstance(e, Mul):
        (ls, lp), (rs, rp) = _text(e.left), _text(e.right)
        ls = f"({ls})" if lp < _PREC["mul"] else ls
        rs = f"({rs})" if rp <= _PREC["mul"] else rs
        return f"{ls}*{rs}", _PREC["mul"]
    if isinstance(e, Neg):
        s, p = _text(e.arg)
        return (f"-({s})" if p < _PREC["pow"] else f"-{s}"), _PREC["neg"]
    if isinstance(e, Exp):
        return f"exp({_text(e.arg)[0]})", _PREC["atom"]
    if isinstance(e, IntPow):
        s, p = _text(e.arg)
        s = f"({s})" if p < _PREC["atom"] else s
        return f"{s}^{e.k}", _PREC["pow"]
    raise TypeError(f"not an entire expression: {e!r}")


def to_text(e: EntireExpr) -> str:
    """Render in the parser grammar; ``parse_entire(to_text(e))`` evaluates identically."""
    return _text(e)[0]


_BUILDER = Builder(
    const=Const,
    var=lambda name: X,
    add=add,
    sub=lambda a, b: add(a, neg(b)),
    mul=mul,
    div=None,
    neg=neg,
    exp=exp,
    pow=intpow,
)


def parse_entire(text: str) -> EntireExpr:
    """Parse an expression in the single variable ``x`` (no division)."""
    return Parser(text, ("x",), _BUILDER).parse()
