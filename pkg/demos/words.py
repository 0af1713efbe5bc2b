"""Word algebra of overshears and the sheet swap I.

Builds a word, reduces it to alternating normal form, conjugates it into the
shape I O_1 I O_2 ... I O_m, and checks the conjugacy witness at a point.
Each letter raises coordinates roughly to the 4th power, so the generators
are kept small; larger ones overflow double precision within a few letters.

    python demos/words.py
"""
import numpy as np

from dlab import I, Danielewski, Overshear, Word, conjugate_normal_form, word_apply, word_reduce
from dlab.surface import fiber

S = Danielewski("-1,0,0,0,1")
A = Overshear("0.1", "0.5")  # multiplier exp(0.1 x), translation 0.5
B = Overshear("0", "0.2*x - 0.3")  # a shear

W = Word((A, B, I, A, I, B))
print("word        ", W)
print("reduced     ", word_reduce(W))

N, C = conjugate_normal_form(W)
print("normal form ", N)
print("conjugator  ", C)

P = fiber(S, 0.7 + 0.2j, 0.4 - 0.3j)[0]
lhs = word_apply(S, N, P)
rhs = word_apply(S, C.inverse() + W + C, P)
err = max(abs(complex(a) - complex(b)) for a, b in zip(lhs, rhs))
print(f"witness error at one point: {err:.2e}")
print("inverse pair cancels:", len(word_reduce(Word((A,)) + Word((A,)).inverse())) == 0)
print("image stays on the surface:", float(np.max(S.defect(lhs))) < 1e-9)
