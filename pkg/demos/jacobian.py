"""Volume change of one step I o O_{f,g} in the (x, z) chart.

The chart Jacobian of a single step is -exp(x f(x)).  Composing a second
step multiplies it by -exp(u f2(u)) at the intermediate point.

    python demos/jacobian.py
"""
import cmath

from dlab import I, Overshear, Word, jacobian_xz, word_apply
from dlab.surface import Danielewski, chart_xz

S = Danielewski("-1,0,0,0,1")
O1 = Overshear("0.3*x", "1")
O2 = Overshear("0.1", "2 - x")
G1, G2 = Word((I, O1)), Word((I, O2))

P = chart_xz(S, 0.8 + 0.3j, 0.5 - 0.2j)
Q = word_apply(S, G1, P)

J1 = jacobian_xz(S, G1, P)
print("one step     ", J1, " closed form", -cmath.exp(P.x * 0.3 * P.x))
print("ratio        ", jacobian_xz(S, G2 + G1, P) / J1, " closed form", -cmath.exp(Q.x * 0.1))
