"""Overshear automorphisms, the involution, and words in them.

Conventions
-----------
* An overshear stores the *exponent* ``f``: the ``z``-multiplier is
  ``exp(x f(x))``, so it never vanishes and equals 1 on ``x = 0``.
* First side: ``O_{f,g}(x, y, z) = (x, y + (p(w) - p(z))/x, w)`` with
  ``w = z exp(x f(x)) + x g(x)``.  Second side is ``I O_{f,g} I``.
* A :class:`Word` lists letters outermost first: ``Word([A, B])`` is the map
  ``A o B``, so ``B`` acts first.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

import numpy as np

from . import entire as E
from . import xnum
from .entire import EntireExpr, approx_equal, parse_entire, to_text
from .poly import divided_difference
from .surface import Danielewski, SurfacePoint, contains

FIRST = "first"
SECOND = "second"
MAX_WORD_LENGTH = 64
IDENTITY_TOL = 1e-10


def _other(side: str) -> str:
    return SECOND if side == FIRST else FIRST


@dataclass(frozen=True, eq=False)
class Overshear:
    f: EntireExpr = E.ZERO
    g: EntireExpr = E.ZERO
    side: str = FIRST

    def __post_init__(self):
        for name in ("f", "g"):
            v = getattr(self, name)
            if isinstance(v, str):
                object.__setattr__(self, name, parse_entire(v))
            elif not isinstance(v, EntireExpr):
                object.__setattr__(self, name, E.Const(v))
        if self.side not in (FIRST, SECOND):
            raise ValueError(f"side must be {FIRST!r} or {SECOND!r}")

    def is_identity(self, tol: float = IDENTITY_TOL) -> bool:
        return approx_equal(self.f, E.ZERO, tol) and approx_equal(self.g, E.ZERO, tol)

    def flipped(self) -> "Overshear":
        return Overshear(self.f, self.g, _other(self.side))

    def on_side(self, side: str) -> "Overshear":
        return Overshear(self.f, self.g, side)

    def __repr__(self) -> str:
        return f"Overshear(f={to_text(self.f)!r}, g={to_text(self.g)!r}, side={self.side!r})"


class Involution:
    """The sheet swap ``(x, y, z) -> (y, x, z)``; use the :data:`I` singleton."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "I"


I = Involution()
Letter = Union[Overshear, Involution]


@dataclass(frozen=True)
class Word:
    letters: tuple = field(default_factory=tuple)

    def __post_init__(self):
        letters = tuple(self.letters)
        for a in letters:
            if not isinstance(a, (Overshear, Involution)):
                raise TypeError(f"not a letter: {a!r}")
        if len(letters) > MAX_WORD_LENGTH:
            raise ValueError(f"word of length {len(letters)} exceeds {MAX_WORD_LENGTH} letters")
        object.__setattr__(self, "letters", letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __getitem__(self, i):
        out = self.letters[i]
        return Word(out) if isinstance(i, slice) else out

    def __add__(self, other: "Word") -> "Word":
        return Word(self.letters + tuple(other))

    def inverse(self) -> "Word":
        return Word(tuple(invert(a) if isinstance(a, Overshear) else a for a in reversed(self.letters)))

    def is_normal_form(self) -> bool:
        """No involutions, no identity letters, strictly alternating sides."""
        prev = None
        for a in self.letters:
            if not isinstance(a, Overshear) or a.is_identity():
                return False
            if a.side == prev:
                return False
            prev = a.side
        return True

    @property
    def coset(self) -> bool:
        """True when a reduced word carries the trailing involution."""
        return bool(self.letters) and self.letters[-1] is I

    def overshears(self) -> "Word":
        return Word(tuple(a for a in self.letters if isinstance(a, Overshear)))

    def __repr__(self) -> str:
        return "Word(" + ", ".join(map(repr, self.letters)) + ")"


# -- point maps -------------------------------------------------------------

def involution_apply(P: SurfacePoint) -> SurfacePoint:
    return SurfacePoint(P.y, P.x, P.z)


def _first_side_map(S: Danielewski, f: EntireExpr, g: EntireExpr, x, y, z):
    fx, gx = f(x), g(x)
    u = x * fx
    w = z * xnum.exp(u) + x * gx
    # (w - z)/x, evaluated without dividing by x
    q = z * fx * xnum.expm1_ratio(u) + gx
    return x, y + divided_difference(S.p, w, z) * q, w


def overshear_apply(S: Danielewski, O: Overshear, P: SurfacePoint, check: bool = True) -> SurfacePoint:
    """Apply one overshear.  Exact on ``x = 0``; works on arrays and LogPolar values."""
    if check and not contains(S, P, 1e-9):
        raise ValueError("point off surface")
    with np.errstate(over="ignore", invalid="ignore"):
        if O.side == FIRST:
            x, y, z = _first_side_map(S, O.f, O.g, P.x, P.y, P.z)
            return SurfacePoint(x, y, z)
        y, x, z = _first_side_map(S, O.f, O.g, P.y, P.x, P.z)
        return SurfacePoint(x, y, z)


def letter_apply(S: Danielewski, a: Letter, P: SurfacePoint, check: bool = False) -> SurfacePoint:
    if a is I:
        return involution_apply(P)
    return overshear_apply(S, a, P, check=check)


def word_apply(S: Danielewski, W: Word | Sequence[Letter], P: SurfacePoint, check: bool = True) -> SurfacePoint:
    """Apply ``W`` to ``P``; the rightmost letter acts first."""
    if check and not contains(S, P, 1e-9):
        raise ValueError("point off surface")
    for a in reversed(tuple(W)):
        P = letter_apply(S, a, P)
    return P


# -- algebra --------------------------------------------------------------------

def compose_same_side(O1: Overshear, O2: Overshear) -> Overshear:
    """The single overshear equal to ``O1 o O2`` (``O2`` acts first).

    With ``O2 = O_{h,k}`` acting first and ``O1 = O_{f,g}`` second the result
    is ``O_{f+h, g + k exp(x f)}``.
    """
    if O1.side != O2.side:
        raise ValueError("compose_same_side needs overshears on the same side")
    f, g = O1.f, O1.g
    h, k = O2.f, O2.g
    return Overshear(f + h, g + k * E.exp(E.X * f), O1.side)


def invert(O: Overshear) -> Overshear:
    """``O_{f,g}**-1 = O_{-f, -g exp(-x f)}`` on the same side."""
    return Overshear(-O.f, -(O.g * E.exp(-(E.X * O.f))), O.side)


def _push_involutions(letters: Iterable[Letter]) -> tuple[list[Overshear], bool]:
    """Move every I to the right end using ``I o O_s = O_{s'} o I``."""
    out: list[Overshear] = []
    parity = False  # number of I's to the left, mod 2
    for a in letters:
        if a is I:
            parity = not parity
        else:
            out.append(a.flipped() if parity else a)
    return out, parity


def word_reduce(W: Word | Sequence[Letter]) -> Word:
    """Reduce to alternating normal form, with at most one trailing ``I`` (see :attr:`Word.coset`)."""
    letters, parity = _push_involutions(W)
    changed = True
    while changed:
        changed = False
        stack: list[Overshear] = []
        for a in letters:
            if a.is_identity():
                changed = True
                continue
            if stack and stack[-1].side == a.side:
                stack[-1] = compose_same_side(stack[-1], a)
                changed = True
                if stack[-1].is_identity():
                    stack.pop()
                continue
            stack.append(a)
        letters = stack
    return Word(tuple(letters) + ((I,) if parity else ()))


def _as_tokens(R: Word) -> list[Letter]:
    """Rewrite a reduced word over first-side overshears and I, cancelling I o I."""
    toks: list[Letter] = []

    def push(a):
        if a is I and toks and toks[-1] is I:
            toks.pop()
        else:
            toks.append(a)

    for a in R:
        if a is I:
            push(I)
        elif a.side == FIRST:
            push(a)
        else:
            push(I)
            push(a.on_side(FIRST))
            push(I)
    return toks


def conjugate_normal_form(W: Word | Sequence[Letter]) -> tuple[Word, Word]:
    """Return ``(N, C)`` with ``N = C**-1 o W o C``.

    ``N`` is empty, ``[I]``, a single first-side overshear (an element of the
    first factor, which no conjugation moves out of it), or
    ``I o O_1 o I o O_2 o ... o I o O_m`` with non-identity first-side letters.
    The case analysis: words ``O ... I`` and ``I ... I`` are conjugated by
    ``I``; words ``O_1 ... O_m`` are conjugated by ``O_1``, which merges it
    into ``O_m`` (and may cancel it, shortening the word).
    """
    N = _as_tokens(word_reduce(W))
    C: list[Letter] = []
    while True:
        if len(N) <= 1:
            break
        first_i, last_i = N[0] is I, N[-1] is I
        if first_i and not last_i:
            break
        if last_i:
            # O ... I  ->  I O ... ;  I ... I  ->  ... (both ends cancel)
            N = [I] + N[:-1] if not first_i else N[1:-1]
            C.append(I)
            continue
        # O_1 ... O_m: conjugate by O_1
        O1 = N[0]
        merged = compose_same_side(N[-1], O1)
        N = N[1:-1]
        if not merged.is_identity():
            N.append(merged)
        C.append(O1)
    return Word(tuple(N)), Word(tuple(C))


def is_conjugation_shape(N: Word) -> bool:
    """Empty, ``[I]``, a single first-side overshear, or ``I O_1 I O_2 ... I O_m``."""
    L = N.letters
    if len(L) == 0 or (len(L) == 1 and (L[0] is I or (L[0].side == FIRST and not L[0].is_identity()))):
        return True
    if len(L) % 2:
        return False
    for i, a in enumerate(L):
        if i % 2 == 0 and a is not I:
            return False
        if i % 2 == 1 and (a is I or a.side != FIRST or a.is_identity()):
            return False
    return True


# -- JSON -------------------------------------------------------------------------

def letter_to_dict(a: Letter) -> dict:
    if a is I:
        return {"kind": "involution"}
    return {"kind": "overshear", "side": a.side, "f": to_text(a.f), "g": to_text(a.g)}


def letter_from_dict(d: dict) -> Letter:
    kind = d.get("kind")
    if kind == "involution":
        return I
    if kind == "overshear":
        return Overshear(parse_entire(d.get("f", "0")), parse_entire(d.get("g", "0")), d.get("side", FIRST))
    raise ValueError(f"unknown letter kind {kind!r}")


def word_to_dict(W: Word) -> dict:
    return {"letters": [letter_to_dict(a) for a in W]}


def word_from_dict(d: dict) -> Word:
    if "letters" not in d:
        raise ValueError("word JSON needs a 'letters' array")
    return Word(tuple(letter_from_dict(a) for a in d["letters"]))


def word_to_json(W: Word, **kw) -> str:
    return json.dumps(word_to_dict(W), **kw)


def word_from_json(text: str) -> Word:
    return word_from_dict(json.loads(text))
