"""
Collecting and aggregating privatized reports
=============================================

Each user privatizes a value locally; the collector only sees reports and
inverts the known noise to estimate the population histogram. The sampler
is numpy's PCG64 seeded explicitly, one uniform draw per report, so every
run below is reproducible.
"""

import numpy as np

from localpriv import Alphabet, estimate_frequencies, privatize

browsers = Alphabet(("firefox", "chrome", "safari", "edge"))
truth = np.array([0.1, 0.6, 0.25, 0.05])
n = 100_000
users = np.repeat(browsers.symbols, (truth * n).astype(int)).tolist()

for mech in ("krr", "oue"):
    for eps in (0.5, 1.0, 3.0):
        batch = privatize(mech, browsers, eps, users, seed=12)
        est = estimate_frequencies(batch)
        print(f"{mech} eps={eps}: estimate={np.round(est, 3)} max err={np.abs(est - truth).max():.4f}")

# Estimates are unbiased but not clipped: small counts can come out negative.
few = privatize("krr", browsers, 0.5, users[:50], seed=3)
print("50 reports:", np.round(estimate_frequencies(few), 3))
