"""
Minimum distortion under a mutual-information budget
====================================================

``design_mip_channel`` searches for the channel that keeps expected
distortion lowest while leaking at most ``eps`` nats of mutual information.
For a uniform bit under Hamming loss the answer is known in closed form,
R(D) = ln 2 - H_b(D), which lets us see how close the solver gets.
"""

import math

import numpy as np

from localpriv import Alphabet, Prior, audit_lmip, design_mip_channel, tradeoff_curve
from localpriv.optimizer import DistortionMatrix


def hb(d):
    return 0.0 if d in (0.0, 1.0) else -(d * math.log(d) + (1 - d) * math.log(1 - d))


bit = Alphabet.range(2)
p = Prior.uniform(bit)
loss = DistortionMatrix.hamming(bit)

curve = tradeoff_curve(p, loss, np.linspace(0, math.log(2), 8))
print(curve.to_csv())
for pt in curve.points:
    print(f"eps={pt.epsilon:.3f}  D={pt.distortion:.4f}  ln2 - H_b(D)={math.log(2) - hb(pt.distortion):.4f}")

# A three-level rating, where confusing 0 with 2 costs twice as much.
ratings = Alphabet(("low", "mid", "high"))
p3 = Prior(ratings, [0.5, 0.3, 0.2])
d3 = DistortionMatrix(ratings, ratings, [[0, 1, 2], [1, 0, 1], [2, 1, 0]])
c = design_mip_channel(p3, d3, 0.3)
print(np.round(c.matrix, 3))
print("leakage:", audit_lmip(c, p3).epsilon)
