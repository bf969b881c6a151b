"""
Classical mechanism families as explicit channels
==================================================

Every constructor returns a plain channel, so each family can be audited
with the same tools. Here we check that each one meets its advertised
guarantee.
"""

import numpy as np

from localpriv import (
    Alphabet, MetricSpace, Prior,
    audit_geo, audit_ldp, make_geo_exp, make_geometric, make_oue, make_rr, make_sampling,
)

np.set_printoptions(precision=3, suppress=True)
eps = 1.0
colors = Alphabet(("red", "green", "blue", "gray"))

krr = make_rr(colors, eps)
print("k-RR keep probability:", krr.matrix[0, 0], " LDP:", audit_ldp(krr).epsilon)

# OUE maps each value onto 2^k bit strings; the true bit stays on with 1/2.
oue = make_oue(colors, eps)
print("OUE outputs:", len(oue.output), " LDP:", audit_ldp(oue).epsilon)

# Random sampling: truth with probability p, otherwise a draw from the prior.
prior = Prior(colors, [0.4, 0.3, 0.2, 0.1])
samp = make_sampling(prior, 0.5)
print("sampling matrix:\n", samp.matrix, "\n LDP:", audit_ldp(samp).epsilon)

# Geometric noise on an integer grid, clamped at the ends.
ages = Alphabet.range(6, start=20)
geo = make_geometric(ages, eps)
line = MetricSpace.from_points(ages, ages.values())
print("geometric row for age 20:", geo.row("20"))
print("geo budget on |i-j|:", audit_geo(geo, line).epsilon)

# Exponential mechanism over an arbitrary metric (here points in the plane).
rng = np.random.default_rng(0)
places = Alphabet(tuple(f"p{i}" for i in range(5)))
plane = MetricSpace.from_points(places, rng.uniform(0, 3, size=(5, 2)))
gexp = make_geo_exp(plane, eps)
print("geo-exp budget:", audit_geo(gexp, plane).epsilon, "<=", eps)
