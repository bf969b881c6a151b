"""
Pufferfish noise calibrated by the infinity-Wasserstein distance
=================================================================

A secret (here: whether a household is "large") shapes the distribution of
the released count. Noise whose scale matches the largest distance any unit
of probability mass has to move between the two conditional distributions
is enough to hide the secret.
"""

import numpy as np

from localpriv import Alphabet, Prior, SecretModel, audit_pufferfish, make_wasserstein, wasserstein_inf

sizes = Alphabet.range(7, start=1)
small = [0.35, 0.35, 0.2, 0.1, 0.0, 0.0, 0.0]
large = [0.0, 0.1, 0.2, 0.3, 0.25, 0.1, 0.05]
print("W_inf(small, large) =", wasserstein_inf(Prior(sizes, small), Prior(sizes, large)))

model = SecretModel(Alphabet(("small", "large")), (("small", "large"),),
                    ({"small": small, "large": large},), sizes)
for eps in (0.5, 1.0, 2.0):
    c = make_wasserstein(model, eps)
    print(f"eps={eps}: noise ratio per step={np.exp(-eps / c.meta['w_inf']):.3f}, "
          f"audited={audit_pufferfish(c, model).epsilon:.4f}")
