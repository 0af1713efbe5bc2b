"""Monte-Carlo Nevanlinna characteristic over the 2-sheeted cover, lifted vector fields, chart Jacobians.

The estimator is

    T(F, r) = E_zeta [ log+|F(P1)| + log+|F(P2)| ],   P1, P2 = fiber(S, r * zeta),

with ``zeta`` uniform on the unit sphere of C^2.  Both sheets are summed, so
no branch cut is ever needed and ``T(F o I) == T(F)`` sample for sample.

Sampling is split into fixed-size blocks.  Block ``k`` draws from a Philox
stream keyed by the seed with counter ``k``, and block statistics are merged
by a fixed pairwise tree, so results do not depend on the worker count.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import xnum
from .autos import Word, word_apply
from .functions import SurfaceFunction
from .poly import eval_poly
from .surface import Danielewski, SurfacePoint, chart_xz, fiber_roots

BLOCK = 8192
MAX_SKIP_RATE = 0.01
DEFAULT_SAMPLES = 200_000


def sample_sphere(rng: np.random.Generator, size=None):
    """Uniform point(s) ``(a, b)`` on the unit sphere of C^2."""
    shape = (4,) if size is None else (4, *np.atleast_1d(size))
    g = rng.standard_normal(shape)
    g = g / np.sqrt((g * g).sum(axis=0))
    a, b = g[0] + 1j * g[1], g[2] + 1j * g[3]
    if size is None:
        return complex(a), complex(b)
    return a, b


@dataclass(frozen=True)
class CharacteristicEstimate:
    r: float
    mean: float
    stderr: float
    n_samples: int
    n_skipped: int
    seed: int

    @property
    def skip_rate(self) -> float:
        total = self.n_samples + self.n_skipped
        return self.n_skipped / total if total else 1.0

    @property
    def valid(self) -> bool:
        return self.n_samples > 1 and self.skip_rate < MAX_SKIP_RATE

    CSV_HEADER = "r,mean,stderr,n_samples,n_skipped,seed"

    def csv_row(self) -> str:
        return f"{self.r!r},{self.mean!r},{self.stderr!r},{self.n_samples},{self.n_skipped},{self.seed}"

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "mean": self.mean,
            "stderr": self.stderr,
            "n_samples": self.n_samples,
            "n_skipped": self.n_skipped,
            "seed": self.seed,
            "valid": self.valid,
        }


@dataclass(frozen=True)
class RSchedule:
    r_start: float
    factor: float
    steps: int

    def __post_init__(self):
        if not self.r_start > 0:
            raise ValueError("r_start must be positive")
        if not self.factor > 1:
            raise ValueError("factor must exceed 1")
        if int(self.steps) != self.steps or self.steps < 1:
            raise ValueError("steps must be a positive integer")

    @property
    def radii(self) -> list[float]:
        return [self.r_start * self.factor**i for i in range(int(self.steps))]


# -- block statistics ----------------------------------------------------------

_EMPTY = (0, 0.0, 0.0)


def _merge(s, t):
    """Chan's parallel update of (count, mean, M2)."""
    na, ma, qa = s
    nb, mb, qb = t
    if na == 0:
        return t
    if nb == 0:
        return s
    n = na + nb
    d = mb - ma
    return (n, ma + d * nb / n, qa + qb + d * d * na * nb / n)


def _pairwise(stats: list):
    if not stats:
        return _EMPTY
    while len(stats) > 1:
        nxt = [_merge(stats[i], stats[i + 1]) for i in range(0, len(stats) - 1, 2)]
        if len(stats) % 2:
            nxt.append(stats[-1])
        stats = nxt
    return stats[0]


def _block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=int(seed), counter=int(block) << 64))


def _outputs(vals, n_out: int, shape) -> list:
    outs = list(vals) if n_out > 1 else [vals]
    res = []
    for v in outs:
        if isinstance(v, xnum.LogPolar):
            res.append(LogPolarBroadcast(v, shape))
        else:
            res.append(np.broadcast_to(np.asarray(v, dtype=complex), shape))
    return res


def LogPolarBroadcast(v: xnum.LogPolar, shape) -> xnum.LogPolar:
    return xnum.LogPolar(np.broadcast_to(v.lg, shape), np.broadcast_to(v.ph, shape))


def _log_moduli(F: SurfaceFunction, x, y, z) -> list[np.ndarray]:
    """``log|F_k|`` at each point, re-evaluating overflowed points in extended range."""
    with np.errstate(all="ignore"):
        outs = _outputs(F(x, y, z), F.n_out, x.shape)
    logs = [np.array(xnum.log_abs(v), dtype=float) for v in outs]
    if not F.extended:
        return logs
    bad = np.zeros(x.shape, dtype=bool)
    for v in outs:
        if isinstance(v, xnum.LogPolar):
            bad |= ~np.isfinite(v.lg) & (v.lg > 0) | np.isnan(v.lg)
        else:
            bad |= ~np.isfinite(v)
    if bad.any():
        L = xnum.LogPolar.from_complex
        with np.errstate(all="ignore"):
            again = _outputs(F(L(x[bad]), L(y[bad]), L(z[bad])), F.n_out, (int(bad.sum()),))
        for lg, v in zip(logs, again):
            lg[bad] = xnum.log_abs(v)
    return logs


def _block_stats(S: Danielewski, F: SurfaceFunction, radii, seed: int, block: int, m: int):
    """Per-radius, per-output (count, mean, M2) for one block of ``m`` paired draws."""
    rng = _block_rng(seed, block)
    a, b = sample_sphere(rng, m)
    out = []
    for r in radii:
        x1, x2 = fiber_roots(S, r * a, r * b)
        X = np.concatenate([x1, x2])
        Y = np.concatenate([x2, x1])
        Z = np.concatenate([r * b, r * b])
        row = []
        for lg in _log_moduli(F, X, Y, Z):
            skip = np.isnan(lg) | (lg == np.inf)
            lp = np.where(skip, 0.0, np.maximum(lg, 0.0))
            v = lp[:m] + lp[m:]
            keep = ~(skip[:m] | skip[m:])
            v = v[keep]
            n = int(v.size)
            if n == 0:
                row.append(_EMPTY)
                continue
            mu = float(v.mean())
            row.append((n, mu, float(((v - mu) ** 2).sum())))
        out.append(row)
    return out


def characteristic_many(
    S: Danielewski,
    F: SurfaceFunction,
    radii: Sequence[float],
    n: int = DEFAULT_SAMPLES,
    seed: int = 0,
    workers: int = 1,
) -> list[list[CharacteristicEstimate]]:
    """Estimates ``[radius][output]`` from one shared set of sphere draws (paired sampling)."""
    radii = [float(r) for r in radii]
    if any(not r > 0 for r in radii):
        raise ValueError("r must be positive")
    if n < 100:
        raise ValueError("need at least 100 samples")
    sizes = [BLOCK] * (n // BLOCK) + ([n % BLOCK] if n % BLOCK else [])

    def job(k):
        return _block_stats(S, F, radii, seed, k, sizes[k])

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            blocks = list(ex.map(job, range(len(sizes))))
    else:
        blocks = [job(k) for k in range(len(sizes))]

    result = []
    for i, r in enumerate(radii):
        row = []
        for j in range(F.n_out):
            cnt, mean, m2 = _pairwise([blk[i][j] for blk in blocks])
            se = float(np.sqrt(m2 / (cnt - 1) / cnt)) if cnt > 1 else float("nan")
            row.append(CharacteristicEstimate(r, float(mean), se, int(cnt), n - int(cnt), int(seed)))
        result.append(row)
    return result


def characteristic(S, F, r, n=DEFAULT_SAMPLES, seed=0, workers=1):
    """The estimate at one radius (a list of estimates if ``F`` is tuple-valued)."""
    row = characteristic_many(S, F, [r], n, seed, workers)[0]
    return row[0] if F.n_out == 1 else row


def characteristic_table(S, F, schedule: RSchedule, n=DEFAULT_SAMPLES, seed=0, workers=1):
    rows = characteristic_many(S, F, schedule.radii, n, seed, workers)
    return [row[0] for row in rows] if F.n_out == 1 else rows


def slope_vs_logr(estimates: Sequence[CharacteristicEstimate]) -> tuple[float, float]:
    """Least-squares slope of ``mean`` against ``log r``, with the stderr propagated from the estimates."""
    if len(estimates) < 3:
        raise ValueError("slope fit needs at least 3 estimates")
    t = np.log([e.r for e in estimates])
    m = np.array([e.mean for e in estimates])
    s = np.array([e.stderr for e in estimates])
    w = (t - t.mean()) / ((t - t.mean()) ** 2).sum()
    return float(w @ m), float(np.sqrt((w * w) @ (s * s)))


# -- lifted and pushed-forward vector fields ------------------------------------

THETA_NAMES = {
    "theta1": "theta1",
    "θ1": "theta1",
    "θ₁": "theta1",
    "theta2": "theta2",
    "θ2": "theta2",
    "θ₂": "theta2",
    "theta": "theta",
    "θ": "theta",
    "theta_tilde": "theta_tilde",
    "θ̃": "theta_tilde",
}

DEN_MARGIN = 1e-8


def _canonical(which: str) -> str:
    try:
        return THETA_NAMES[which]
    except KeyError:
        raise ValueError(f"unknown field {which!r}; use theta1, theta2, theta or theta_tilde") from None


def _curve(S: Danielewski, kind: str, x, y, z, t):
    """Point at parameter ``t`` on the integral curve through ``(x, y, z)``."""
    if kind == "theta":
        xn = x + t
        return xn, eval_poly(S.p, z) / xn, z
    if kind == "theta_tilde":
        zn = z + t
        return x, eval_poly(S.p, zn) / x, zn
    a, b = x + y, z
    if kind == "theta1":
        a = a + t
    else:
        b = b + t
    r1, r2 = fiber_roots(S, a, b)
    # continue the sheet: take the root closer to the old x
    near1 = np.abs(r1 - x) <= np.abs(r2 - x)
    xn = np.where(near1, r1, r2)
    yn = np.where(near1, r2, r1)
    return xn, yn, b


def _singular(S, kind, x, y, z, hs):
    scale = DEN_MARGIN * (1 + np.abs(x) + np.abs(y))
    if kind in ("theta1", "theta2"):
        sep = np.abs(x - y)
        near = sep <= scale
        if kind == "theta2":
            # the fiber moves at speed |p'(z)/(x - y)|; keep 2h well inside the root separation
            speed = np.abs(eval_poly(S.dp, z)) / np.where(near, 1.0, sep)
            return near | (2 * hs * speed > 0.25 * sep)
        return near | (2 * hs > 0.25 * sep)
    near = np.abs(x) <= scale
    if kind == "theta":
        return near | (2 * hs > 0.25 * np.abs(x))
    return near


def _step(kind, x, y, z, h):
    coord = {"theta": x, "theta_tilde": z, "theta1": x + y, "theta2": z}[kind]
    return h * (1 + np.abs(coord))


def _theta_values(S: Danielewski, kind: str, F: SurfaceFunction, x, y, z, h: float):
    x, y, z = (np.asarray(v, dtype=complex) for v in (x, y, z))
    hs = _step(kind, x, y, z, h)
    bad = _singular(S, kind, x, y, z, hs)

    def D(s):
        with np.errstate(all="ignore"):
            fp = F(*_curve(S, kind, x, y, z, s))
            fm = F(*_curve(S, kind, x, y, z, -s))
        return (np.asarray(fp) - np.asarray(fm)) / (2 * s)

    with np.errstate(all="ignore"):
        val = (4 * D(hs) - D(2 * hs)) / 3
    return np.where(bad, np.nan + 0j, val), bad


def theta_apply(S: Danielewski, which: str, F: SurfaceFunction, P: SurfacePoint, h: float = 1e-5) -> complex:
    """Directional derivative of ``F`` along ``theta1``, ``theta2``, ``theta`` or ``theta_tilde`` at ``P``."""
    kind = _canonical(which)
    val, bad = _theta_values(S, kind, F, P.x, P.y, P.z, h)
    if np.any(bad):
        raise ValueError("near ramification/axis")
    return complex(val) if np.ndim(val) == 0 else val


def theta_function(S: Danielewski, which: str, F: SurfaceFunction, h: float = 1e-5) -> SurfaceFunction:
    """``theta(F)`` as a surface function; singular points evaluate to nan (skipped by the estimator)."""
    kind = _canonical(which)
    if F.n_out != 1:
        raise ValueError("theta fields act on scalar functions")

    def fn(x, y, z):
        return _theta_values(S, kind, F, x, y, z, h)[0]

    return SurfaceFunction(fn, f"{kind}({F.name})", 1, extended=False)


# -- chart Jacobian ----------------------------------------------------------------

def _richardson(fn, t0, hs):
    def D(s):
        return (fn(t0 + s) - fn(t0 - s)) / (2 * s)

    return (4 * D(hs) - D(2 * hs)) / 3


def jacobian_xz(S: Danielewski, W: Word, P: SurfacePoint, h: float = 1e-5) -> complex:
    """``(x/u) (u_x w_z - u_z w_x)`` for ``(u, v, w) = W(x, y, z)`` in the ``(x, z)`` chart."""
    x0, z0 = complex(P.x), complex(P.z)
    if abs(x0) <= DEN_MARGIN * (1 + abs(x0) + abs(complex(P.y))):
        raise ValueError("chart breakdown: x = 0")
    Q = word_apply(S, W, P, check=False)
    u0 = complex(Q.x)
    if not np.isfinite(u0) or abs(u0) <= DEN_MARGIN * (1 + abs(u0) + abs(complex(Q.y))):
        raise ValueError("chart breakdown: u = 0 at the image")

    def image(x, z):
        R = word_apply(S, W, chart_xz(S, x, z), check=False)
        return np.array([complex(R.x), complex(R.z)])

    hx = h * (1 + abs(x0))
    hz = h * (1 + abs(z0))
    if 2 * hx > 0.25 * abs(x0):
        raise ValueError("chart breakdown: step crosses x = 0")

    def at(scale):
        with np.errstate(all="ignore"):
            ux, wx = _richardson(lambda x: image(x, z0), x0, hx * scale)
            uz, wz = _richardson(lambda z: image(x0, z), z0, hz * scale)
        return complex((x0 / u0) * (ux * wz - uz * wx))

    # Words with fast-varying multipliers need a finer step than h; keep h
    # when it already agrees with h/10 at least as well as h/10 with h/100.
    j0, j1, j2 = at(1.0), at(0.1), at(0.01)
    return j0 if abs(j0 - j1) <= abs(j1 - j2) else j1
