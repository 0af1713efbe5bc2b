"""Named, seeded verification experiments.

Every check is a function ``(config, seed) -> (passed, metrics, notes)``;
:func:`run_check` wraps it into a :class:`CheckReport`.  Checks never read the
clock or global RNG state, so the metrics are a pure function of
``(name, config, seed)``.  Estimator-based checks accept ``workers`` in the
config; it changes the wall time only.
"""
from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from . import entire as E
from .autos import (
    FIRST,
    SECOND,
    I,
    Overshear,
    Word,
    compose_same_side,
    conjugate_normal_form,
    invert,
    is_conjugation_shape,
    letter_apply,
    overshear_apply,
    word_apply,
)
from .functions import SurfaceFunction, bundle, coordinate, parse_expression, word_components
from .nevanlinna import (
    RSchedule,
    characteristic_many,
    jacobian_xz,
    slope_vs_logr,
    theta_function,
)
from .poly import ComplexPoly, complete_square, eval_poly
from .surface import Danielewski, SurfacePoint, random_point


@dataclass
class CheckReport:
    name: str
    passed: bool
    metrics: dict
    config: dict
    seed: int
    runtime_ms: int
    notes: str = ""

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        return d

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


@dataclass(frozen=True)
class _Entry:
    fn: Callable
    claim: str
    defaults: dict = field(default_factory=dict)


REGISTRY: dict[str, _Entry] = {}


def _register(name: str, claim: str, **defaults):
    def deco(fn):
        REGISTRY[name] = _Entry(fn, claim, defaults)
        return fn

    return deco


def run_check(name: str, config: dict | None = None, seed: int = 0) -> CheckReport:
    if name not in REGISTRY:
        raise KeyError(f"unknown check {name!r}; known: {', '.join(sorted(REGISTRY))}")
    entry = REGISTRY[name]
    unknown = set(config or {}) - set(entry.defaults) - {"workers"}
    if unknown:
        raise ValueError(f"{name}: unknown config keys {sorted(unknown)}; accepted: {sorted(entry.defaults)}")
    cfg = dict(entry.defaults)
    cfg.update(config or {})
    t0 = time.perf_counter()
    with np.errstate(all="ignore"):
        passed, metrics, notes = entry.fn(cfg, int(seed))
    ms = int(round((time.perf_counter() - t0) * 1000))
    metrics = {k: float(v) for k, v in metrics.items()}
    return CheckReport(name, bool(passed), metrics, cfg, int(seed), ms, notes)


def run_all(config: dict | None = None, seed: int = 0) -> list[CheckReport]:
    return [run_check(n, config, seed) for n in REGISTRY]


# -- shared helpers ------------------------------------------------------------

def _rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def _cn(rng, scale=1.0) -> complex:
    return complex(rng.standard_normal(), rng.standard_normal()) * scale * np.sqrt(0.5)


def random_generator(rng, kind: str | None = None, scale: float = 0.2) -> E.EntireExpr:
    """A random entire function: a polynomial of degree <= 3 or ``c exp(a x) + b``."""
    kind = kind or ("poly" if rng.random() < 0.5 else "exp")
    if kind == "poly":
        deg = int(rng.integers(0, 4))
        return E.polynomial([_cn(rng, scale) for _ in range(deg + 1)])
    c, a, b = _cn(rng, scale), _cn(rng, scale), _cn(rng, scale)
    return E.add(E.mul(E.Const(c), E.exp(E.mul(E.Const(a), E.X))), E.Const(b))


def random_overshear(rng, side=None, scale: float = 0.2) -> Overshear:
    side = side or (FIRST if rng.random() < 0.5 else SECOND)
    return Overshear(random_generator(rng, scale=scale), random_generator(rng, scale=scale), side)


def random_word(rng, length: int, scale: float = 0.2) -> Word:
    letters = []
    for _ in range(length):
        u = rng.random()
        if u < 0.25:
            letters.append(I)
        elif u < 0.35 and letters and letters[-1] is not I:
            letters.append(invert(letters[-1]))  # exercise cancellation
        else:
            letters.append(random_overshear(rng, scale=scale))
    return Word(tuple(letters))


def bounded_points(S: Danielewski, rng, n: int, bound: float = 2.0) -> SurfacePoint:
    """``n`` random surface points with every coordinate of modulus at most ``bound``.

    Overshears with cubic exponents reach ``exp(30)`` already at ``|x| = 5``,
    and then ``O^-1 o O`` cancels 1e50-sized terms.  Algebraic checks stay in
    a region where double precision can resolve them.
    """
    xs, ys, zs = [], [], []
    while len(xs) < n:
        P = random_point(S, 0.7, rng, 4 * n)
        keep = (np.abs(P.x) <= bound) & (np.abs(P.y) <= bound) & (np.abs(P.z) <= bound)
        xs += list(P.x[keep])
        ys += list(P.y[keep])
        zs += list(P.z[keep])
    return SurfacePoint(np.array(xs[:n]), np.array(ys[:n]), np.array(zs[:n]))


RESOLVABLE = 1e4


def apply_tracked(S: Danielewski, W: Word, P: SurfacePoint):
    """``W(P)`` together with the largest magnitude met along the way.

    Words grow coordinates roughly like ``|.|**deg p`` per letter, and a word
    may pass through 1e50 and come back to order one; the multiplier
    ``exp(x f(x))`` can be huge while the coordinates are not.  Double
    precision cannot resolve such round trips, so pointwise checks only assert
    on trajectories whose coordinates, multipliers (and their inverses) and
    translations all stay below :data:`RESOLVABLE`, and report how many they
    exclude.
    """

    def size(*vals):
        m = np.max(np.abs(np.array(vals)), axis=0)
        return np.where(np.isnan(m), np.inf, m)

    big = size(P.x, P.y, P.z)
    for a in reversed(W.letters):
        if a is not I:
            t = P.x if a.side == FIRST else P.y
            with np.errstate(all="ignore"):
                u = t * a.f(t)
                big = np.maximum(big, size(np.exp(np.abs(u.real)), a.g(t)))
        P = letter_apply(S, a, P)
        big = np.maximum(big, size(P.x, P.y, P.z))
    return P, big


def _rel(P: SurfacePoint, Q: SurfacePoint) -> float:
    err = 0.0
    for a, b in zip(P, Q):
        a, b = np.asarray(a), np.asarray(b)
        e = np.abs(a - b) / (1 + np.maximum(np.abs(a), np.abs(b)))
        if not np.all(np.isfinite(e)):
            return float("inf")
        err = max(err, float(np.max(e)))
    return err


def _poly(cfg) -> Danielewski:
    return Danielewski(ComplexPoly.parse(cfg["poly"]))


def _est(S, F, radii, cfg, seed):
    return characteristic_many(S, F, radii, int(cfg["samples"]), seed, int(cfg.get("workers", 1)))


def _schedule(cfg) -> list[float]:
    return RSchedule(float(cfg["r_start"]), float(cfg["factor"]), int(cfg["steps"])).radii


# -- algebra ---------------------------------------------------------------------

@_register("composition-relation", "O_{f,g} then O_{h,k} equals the single O_{f+h, g e^{xh}+k}",
           poly="-1,0,0,0,1", pairs=20, points=1000)
def _composition(cfg, seed):
    S = _poly(cfg)
    rng = _rng(seed)
    per = max(1, int(cfg["points"]) // int(cfg["pairs"]))
    worst = 0.0
    for _ in range(int(cfg["pairs"])):
        A = random_overshear(rng, FIRST)
        B = random_overshear(rng, FIRST)
        single = Overshear(A.f + B.f, A.g * E.exp(E.X * B.f) + B.g, FIRST)
        assert_same = compose_same_side(B, A)  # B o A, A acting first
        P = bounded_points(S, rng, per)
        seq = overshear_apply(S, B, overshear_apply(S, A, P))
        worst = max(worst, _rel(seq, overshear_apply(S, single, P)))
        worst = max(worst, _rel(seq, overshear_apply(S, assert_same, P)))
    return worst < 1e-9, {"max_rel_err": worst}, "O_{f,g} acts first"


@_register("surface-preservation", "words of overshears and I map the surface to itself",
           poly="-1,0,0,0,1", words=20, max_length=10, points=100, min_resolvable=0.8)
def _preservation(cfg, seed):
    S = _poly(cfg)
    rng = _rng(seed)
    worst = 0.0
    kept = total = 0
    for _ in range(int(cfg["words"])):
        W = random_word(rng, int(rng.integers(1, int(cfg["max_length"]) + 1)), scale=0.15)
        Q, big = apply_tracked(S, W, bounded_points(S, rng, int(cfg["points"])))
        ok = big <= RESOLVABLE
        total += ok.size
        kept += int(ok.sum())
        if ok.any():
            worst = max(worst, float(np.max(S.defect(Q)[ok])))
    frac = kept / total
    passed = worst < 1e-8 and frac >= float(cfg["min_resolvable"])
    return passed, {"max_defect": worst, "resolvable_fraction": frac}, "defect asserted on resolvable trajectories"


@_register("inverse-law", "O o O^-1 is the identity", poly="-1,0,0,0,1", trials=20, points=100)
def _inverse(cfg, seed):
    S = _poly(cfg)
    rng = _rng(seed)
    worst = 0.0
    for _ in range(int(cfg["trials"])):
        O = random_overshear(rng)
        P = bounded_points(S, rng, int(cfg["points"]))
        worst = max(worst, _rel(word_apply(S, Word((O, invert(O))), P), P))
        worst = max(worst, _rel(word_apply(S, Word((invert(O), O)), P), P))
    return worst < 1e-9, {"max_rel_err": worst}, ""


@_register("sequence-normal-form", "every word is conjugate to I O_1 I O_2 ... I O_m (or a short residual)",
           poly="-1,0,0,0,1", words=50, max_length=8, points=20, min_resolvable=0.8)
def _normal_form(cfg, seed):
    S = _poly(cfg)
    rng = _rng(seed)
    shape_ok = 0
    worst = 0.0
    kept = total = 0
    n = int(cfg["words"])
    for _ in range(n):
        W = random_word(rng, int(rng.integers(1, int(cfg["max_length"]) + 1)), scale=0.15)
        N, C = conjugate_normal_form(W)
        shape_ok += is_conjugation_shape(N)
        P = bounded_points(S, rng, int(cfg["points"]), 1.5)
        A, big_a = apply_tracked(S, N, P)
        B, big_b = apply_tracked(S, C.inverse() + W + C, P)
        ok = (big_a <= RESOLVABLE) & (big_b <= RESOLVABLE)
        total += ok.size
        kept += int(ok.sum())
        if ok.any():
            worst = max(worst, _rel(SurfacePoint(A.x[ok], A.y[ok], A.z[ok]), SurfacePoint(B.x[ok], B.y[ok], B.z[ok])))
    frac = kept / total
    passed = shape_ok == n and worst < 1e-8 and frac >= float(cfg["min_resolvable"])
    m = {"shape_conforming": shape_ok, "words": n, "max_witness_err": worst, "resolvable_fraction": frac}
    return passed, m, "witness asserted on resolvable trajectories"


@_register("counterexample-n2", "A(x,y,z) = (-x+y+2iz, x, ix+z) preserves xy = z^2 - 1 and A^6 = id")
def _counterexample(cfg, seed):
    A = np.array([[-1, 1, 2j], [1, 0, 0], [1j, 0, 1]], dtype=complex)
    A6 = np.linalg.matrix_power(A, 6)
    err = float(np.max(np.abs(A6 - np.eye(3))))
    # exact preservation on Gaussian-integer points of D_{z^2-1}
    defects = 0
    for zr in range(-3, 4):
        for zi in range(-3, 4):
            z = complex(zr, zi)
            for x, y in ((1, z * z - 1), (-1, 1 - z * z), (z - 1, z + 1), (z + 1, z - 1), (1j, -1j * (z * z - 1))):
                u, v, w = -x + y + 2j * z, x, 1j * x + z
                defects += (u * v - (w * w - 1)) != 0
    return err < 1e-12 and defects == 0, {"max_abs_A6_minus_id": err, "nonzero_defects": defects}, ""


@_register("shear-identity-n1", "a product of six elementary shears is the 2x2 identity")
def _shear_identity(cfg, seed):
    up = lambda t: np.array([[1, t], [0, 1]], dtype=np.int64)
    lo = lambda t: np.array([[1, 0], [t, 1]], dtype=np.int64)
    factors = [up(-1), lo(1), up(-1), lo(-1), up(1), lo(-1)]
    prod = np.eye(2, dtype=np.int64)
    for M in factors:
        prod = prod @ M
    exact = bool((prod == np.eye(2, dtype=np.int64)).all())
    return exact, {"max_abs_entry_error": float(np.abs(prod - np.eye(2)).max())}, ""


# -- Jacobians --------------------------------------------------------------------

def _generic(S, rng, n, margin=1e-3, scale=1.0):
    out = []
    while len(out) < n:
        P = random_point(S, scale, rng)
        if abs(P.x) >= margin and abs(P.x - P.y) >= margin:
            out.append(P)
    return out


@_register("jacobi-step-ratio", "one I o O_{f,g} step has chart Jacobian -dw/dz = -e^{x f(x)}",
           poly="-1,0,0,0,1", points=100)
def _jacobi(cfg, seed):
    S = _poly(cfg)
    rng = _rng(seed)
    one = two = 0.0
    used = draws = 0
    n = int(cfg["points"])
    while used < n and draws < 50 * n:
        draws += 1
        P = _generic(S, rng, 1, scale=0.7)[0]
        O1 = random_overshear(rng, FIRST, scale=0.15)
        O2 = random_overshear(rng, FIRST, scale=0.15)
        G1, G2 = Word((I, O1)), Word((I, O2))
        Q = word_apply(S, G1, P)
        R = word_apply(S, G2, Q)
        if min(abs(Q.x), abs(Q.x - Q.y), abs(R.x)) < 1e-3 or max(abs(R.x), abs(R.y)) > 1e6:
            continue
        e1 = complex(P.x) * O1.f(complex(P.x))
        e2 = complex(Q.x) * O2.f(complex(Q.x))
        if max(abs(e1.real), abs(e2.real)) > np.log(RESOLVABLE):
            continue  # multiplier beyond what differences of O(1) values resolve
        try:
            J1 = jacobian_xz(S, G1, P)
            J2 = jacobian_xz(S, G2 + G1, P)
        except ValueError:
            continue  # chart breakdown: not a generic point
        used += 1
        closed = -np.exp(e1)
        one = max(one, abs(J1 - closed) / abs(closed))
        # step ratio along the next letter: -e^{u f2(u)} at u = u_1
        ratio = J2 / J1
        closed2 = -np.exp(e2)
        two = max(two, abs(ratio - closed2) / abs(closed2))
    ok = used == n and one < 1e-4 and two < 1e-4
    m = {"max_rel_err_step": one, "max_rel_err_ratio": two, "points_used": used, "points_drawn": draws}
    return ok, m, "points whose two-step image nears x = 0, x = y or 1e6, or whose multipliers exceed RESOLVABLE, are redrawn"


# -- growth ------------------------------------------------------------------------

@_register("coordinate-growth", "T(x)/T(y) -> 1, T(x)/T(z) -> n/2, T(z) grows like 2 log r",
           poly="-1,0,0,0,1", r_start=100.0, factor=10.0, steps=5, samples=200000)
def _coordinates(cfg, seed):
    S = _poly(cfg)
    radii = _schedule(cfg)
    rows = _est(S, bundle([coordinate("x"), coordinate("y"), coordinate("z")]), radii, cfg, seed)
    tx, ty, tz = ([row[k] for row in rows] for k in range(3))
    slope, slope_se = slope_vs_logr(tz)
    top = rows[-1]
    xz = top[0].mean / top[2].mean
    xy = top[0].mean / top[1].mean
    valid = all(e.valid for row in rows for e in row)
    ok = valid and 1.8 <= slope <= 2.2 and 1.8 <= xz <= 2.2 and 0.95 <= xy <= 1.05
    m = {"slope_z": slope, "slope_z_stderr": slope_se, "ratio_xz": xz, "ratio_xy": xy, "target_xz": S.n / 2}
    return ok, m, ""


@_register("mohonko-polynomial", "T(q(z))/T(z) -> deg q", poly="-1,0,0,0,1", q="1,0,0,1", r=1e5, samples=200000)
def _mohonko(cfg, seed):
    S = _poly(cfg)
    q = ComplexPoly.parse(cfg["q"])
    Fq = SurfaceFunction(lambda x, y, z: eval_poly(q, z), "q(z)")
    row = _est(S, bundle([Fq, coordinate("z")]), [float(cfg["r"])], cfg, seed)[0]
    ratio = row[0].mean / row[1].mean
    d = q.degree
    ok = row[0].valid and row[1].valid and 0.9 * d <= ratio <= 1.1 * d
    return ok, {"ratio": ratio, "target": d}, ""


@_register("transcendental-growth", "T(e^z)/T(z) is unbounded (checked: > 5 at r = 1e3)",
           poly="-1,0,0,0,1", expr="exp(z)", r=1e3, samples=200000, threshold=5.0)
def _transcendental(cfg, seed):
    S = _poly(cfg)
    row = _est(S, bundle([parse_expression(cfg["expr"]), coordinate("z")]), [float(cfg["r"])], cfg, seed)[0]
    ratio = row[0].mean / row[1].mean
    ok = row[0].valid and ratio > float(cfg["threshold"])
    return ok, {"ratio": ratio, "skip_rate": row[0].skip_rate}, "finite surrogate for a divergent ratio"


def _step_words(gens):
    """Words whose components are (u_k, v_k, w_k): the k-th generator acts last."""
    words = []
    for k in range(1, len(gens) + 1):
        letters = []
        for O in reversed(gens[:k]):
            letters += [I, O]
        words.append(Word(tuple(letters)))
    return words


def _ratio_rows(S, W, radii, cfg, seed):
    rows = _est(S, word_components(S, W), radii, cfg, seed)
    return [(row[0].mean / row[1].mean, row[0].valid and row[1].valid) for row in rows]


@_register("step1-ratio", "after one I o O step, T(u_1)/T(v_1) >= 2 for n >= 3",
           poly="-1,0,0,0,1", f="0", g="1", r_start=100.0, factor=10.0, steps=4, samples=200000, top=3)
def _step1(cfg, seed):
    S = _poly(cfg)
    W = Word((I, Overshear(cfg["f"], cfg["g"], FIRST)))
    res = _ratio_rows(S, W, _schedule(cfg), cfg, seed)[-int(cfg["top"]):]
    ratios = [r for r, _ in res]
    ok = all(v for _, v in res) and min(ratios) >= 2.0
    m = {f"ratio_top{i + 1}": r for i, r in enumerate(ratios)}
    m["min_ratio"] = min(ratios)
    m["predicted_limit"] = S.n - 1
    return ok, m, ""


@_register("stepk-propagation", "T(u_k)/T(v_k) stays above 1 along alternating steps (n >= 4)",
           poly="1,-1,0,0,0,1", gs=["1", "0.5*x+1", "2 - x"], r_start=10.0, factor=10.0, steps=4,
           samples=50000, top=2, threshold=1.1)
def _stepk(cfg, seed):
    S = _poly(cfg)
    gens = [Overshear("0", g, FIRST) for g in cfg["gs"]]
    radii = _schedule(cfg)
    m = {}
    ok = True
    for k, W in enumerate(_step_words(gens), start=1):
        res = _ratio_rows(S, W, radii, cfg, seed)[-int(cfg["top"]):]
        for i, (r, valid) in enumerate(res):
            m[f"ratio_k{k}_top{i + 1}"] = r
            ok = ok and valid and r > float(cfg["threshold"])
    return ok, m, "polynomial shears, f = 0"


@_register("proper-subgroup", "T(x e^z) = T(y e^-z), so (x e^z, y e^-z, z) gains no growth",
           poly="-1,0,0,0,1", radii=[100.0, 1000.0], samples=200000)
def _proper(cfg, seed):
    S = _poly(cfg)
    F = bundle([parse_expression("x*exp(z)"), parse_expression("y*exp(-z)")])
    rows = _est(S, F, [float(r) for r in cfg["radii"]], cfg, seed)
    m = {}
    ok = True
    for row in rows:
        a, b = row
        se = float(np.hypot(a.stderr, b.stderr))
        diff = abs(a.mean - b.mean)
        m[f"diff_r{a.r:g}"] = diff
        m[f"bound_r{a.r:g}"] = 3 * se
        ok = ok and a.valid and b.valid and diff <= 3 * se
    return ok, m, "paired draws"


@_register("main-estimate-report", "fit K, L with T(theta f) <= 14 T(f) + K log r + L",
           poly="-1,0,0,0,1", r_start=100.0, factor=10.0, steps=4, samples=100000)
def _main_estimate(cfg, seed):
    S = _poly(cfg)
    radii = _schedule(cfg)
    logr = np.log(radii)
    m = {}
    valid = True
    for label, text in (("x", "x"), ("z", "z"), ("x+z^2", "x+z^2")):
        F = parse_expression(text)
        fns = [F, theta_function(S, "theta1", F), theta_function(S, "theta2", F)]
        rows = _est(S, bundle(fns), radii, cfg, seed)
        valid = valid and all(e.valid for row in rows for e in row)
        base = np.array([row[0].mean for row in rows])
        for j, th in ((1, "theta1"), (2, "theta2")):
            d = np.array([row[j].mean for row in rows]) - 14 * base
            K = float(np.polyfit(logr, d, 1)[0]) if len(radii) > 1 else 0.0
            L = float(np.max(d - K * logr))
            m[f"K_{th}_{label}"] = K
            m[f"L_{th}_{label}"] = L
            m[f"max_skip_{th}_{label}"] = max(row[j].skip_rate for row in rows)
    return valid, m, "report only; pass means every estimate is valid"


# -- pointwise identities ---------------------------------------------------------

def _points(S, rng, n, scale=1.5):
    return random_point(S, scale, rng, n)


@_register("invariant-decomposition", "f = f_inv + f_anti, with T(f o I) = T(f)",
           poly="-1,0,0,0,1", expr="x^2*z + exp(y/3) + z", points=100, r=100.0, samples=20000)
def _invariant(cfg, seed):
    S = _poly(cfg)
    rng = _rng(seed)
    F = parse_expression(cfg["expr"])
    FI = F.compose_involution()
    P = _points(S, rng, int(cfg["points"]))
    f, fi = F(P.x, P.y, P.z), FI(P.x, P.y, P.z)
    inv, anti = (f + fi) / 2, (f - fi) / 2
    inv_i, anti_i = (fi + f) / 2, (fi - f) / 2  # both evaluated at I(P)
    scale = 1 + np.abs(f)
    e_sum = float(np.max(np.abs(inv + anti - f) / scale))
    e_inv = float(np.max(np.abs(inv_i - inv) / scale))
    e_anti = float(np.max(np.abs(anti_i + anti) / scale))
    # lifted fields commute with I, so theta1(f_inv) is again invariant
    Finv = SurfaceFunction(lambda x, y, z: (F.fn(x, y, z) + F.fn(y, x, z)) / 2, "f_inv")
    t = theta_function(S, "theta1", Finv)
    tv, tvi = t(P.x, P.y, P.z), t(P.y, P.x, P.z)
    e_theta = float(np.nanmax(np.abs(tv - tvi) / (1 + np.abs(tv))))
    a, b = _est(S, bundle([F, FI]), [float(cfg["r"])], cfg, seed)[0]
    m = {
        "sum_err": e_sum,
        "inv_err": e_inv,
        "anti_err": e_anti,
        "theta_inv_err": e_theta,
        "T_f": a.mean,
        "T_f_I": b.mean,
        "T_diff": abs(a.mean - b.mean),
    }
    ok = max(e_sum, e_inv, e_anti, e_theta) < 1e-6 and a.mean == b.mean
    return ok, m, ""


@_register("theta-combination", "theta = ((x-y)/x) theta1 and theta~ = theta2 + (p'(z)/x) theta1",
           poly="-1,0,0,0,1", expr="x^2*z + exp(y/3) + z", points=100)
def _theta(cfg, seed):
    S = _poly(cfg)
    rng = _rng(seed)
    F = parse_expression(cfg["expr"])
    P = _points(S, rng, int(cfg["points"]))
    args = (P.x, P.y, P.z)
    th, tt, t1, t2 = (theta_function(S, w, F)(*args) for w in ("theta", "theta_tilde", "theta1", "theta2"))
    e1 = np.abs(th - (P.x - P.y) / P.x * t1) / (1 + np.abs(th))
    e2 = np.abs(tt - (t2 + eval_poly(S.dp, P.z) / P.x * t1)) / (1 + np.abs(tt))
    usable = np.isfinite(e1) & np.isfinite(e2)
    m = {
        "theta_err": float(np.max(e1[usable])),
        "theta_tilde_err": float(np.max(e2[usable])),
        "points_used": int(usable.sum()),
    }
    ok = usable.sum() >= 0.9 * len(usable) and max(m["theta_err"], m["theta_tilde_err"]) < 1e-6
    return ok, m, "the two sides are computed along different curves"


@_register("square-completion", "B(f)^2 = A(f) + sum q_i f^i", trials=100, samples_per_trial=10, max_d=8)
def _square(cfg, seed):
    rng = _rng(seed)
    worst = 0.0
    for _ in range(int(cfg["trials"])):
        d = int(rng.integers(2, int(cfg["max_d"]) + 1))
        phis = [_cn(rng) for _ in range(d - 1)]
        us, qs = complete_square(phis, d)
        for _ in range(int(cfg["samples_per_trial"])):
            f = _cn(rng, 1.5)
            B = sum(u * f**i for i, u in enumerate(us))
            A = (sum(phis[j - 1] * f**j for j in range(1, d)) + f**d) * f ** (d - 2)
            Q = sum(q * f**i for i, q in enumerate(qs))
            worst = max(worst, abs(B * B - A - Q) / (1 + abs(B * B) + abs(A)))
    return worst < 1e-10, {"max_rel_residual": worst}, ""
