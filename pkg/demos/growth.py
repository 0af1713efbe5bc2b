"""How fast do functions on a Danielewski surface grow?

We estimate the characteristic T(F, r) of a few functions on xy = z^4 - 1
over a geometric grid of radii and fit the slope against log r.  The
coordinate z grows like 2 log r (one log r per sheet), x grows twice as fast
because x * y = p(z) has degree 4, and exp(z) outgrows every multiple of
log r.

    python demos/growth.py
"""
from dlab import Danielewski, RSchedule, characteristic_table, parse_expression, slope_vs_logr

S = Danielewski("-1,0,0,0,1")
schedule = RSchedule(r_start=100, factor=10, steps=4)

for text in ("z", "x", "z^3 + 1", "exp(z)"):
    rows = characteristic_table(S, parse_expression(text), schedule, n=50_000, seed=1)
    slope, se = slope_vs_logr(rows)
    means = "  ".join(f"{e.mean:10.2f}" for e in rows)
    print(f"{text:>8}: {means}   slope {slope:8.3f} +- {se:.3f}")
