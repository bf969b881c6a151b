"""
Auditing randomized response under every notion
================================================

A privatization mechanism is a channel: a matrix whose row x is the
distribution of the report when the true value is x. Each auditor returns
the tightest budget the channel satisfies, plus a witness showing where
that budget is attained.
"""

import math

from localpriv import (
    Alphabet, MetricSpace, Prior, SecretModel,
    audit_di, audit_geo, audit_ldp, audit_ldp_delta, audit_lip, audit_lip_delta,
    audit_lmip, audit_mil, audit_pufferfish, make_rr,
)

# Binary randomized response that tells the truth with probability 3/4.
answers = Alphabet(("yes", "no"))
c = make_rr(answers, math.log(3))
print(c.matrix)

# Context-free guarantees depend only on the matrix.
print("LDP:", audit_ldp(c))
print("MIL:", audit_mil(c))
print("(eps=0.5) delta:", audit_ldp_delta(c, 0.5).delta)

# Context-aware guarantees also need a prior on the true answer.
prior = Prior(answers, [0.2, 0.8])
for audit in (audit_lip, audit_lmip, audit_di):
    print(audit.__name__, audit(c, prior))
print("LIP delta at eps=0.3:", audit_lip_delta(c, prior, 0.3).delta)

# Pufferfish: protect the pair (yes, no) with point-mass scenarios.
secrets = SecretModel.from_channel_inputs(answers)
print("pufferfish:", audit_pufferfish(c, secrets))

# Geo-indistinguishability with the two answers placed 2 units apart.
print("geo:", audit_geo(c, MetricSpace.from_points(answers, [0.0, 2.0])))

# The relations between notions show up directly in the numbers.
ldp, lip = audit_ldp(c).epsilon, audit_lip(c, prior).epsilon
print(f"LIP {lip:.4f} <= LDP {ldp:.4f} <= 2 LIP {2 * lip:.4f}")
