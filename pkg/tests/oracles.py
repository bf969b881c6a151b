"""Brute-force reference implementations used only by the tests.

These enumerate events (subsets of outputs and inputs), guessing maps or
couplings directly, in exact rational arithmetic where possible, and share no
code with the package. They are exponential and only meant for tiny
alphabets.
"""

import itertools
import math
from fractions import Fraction

import networkx as nx

INF = math.inf


def frac_matrix(m):
    return [[Fraction(v) for v in row] for row in m]


def subsets(n, empty=False):
    start = 0 if empty else 1
    for r in range(start, n + 1):
        yield from itertools.combinations(range(n), r)


def _ratio_log(a, b):
    """ln(a/b) for exact non-negative rationals with 0/0 -> 0."""
    if a == 0 and b == 0:
        return 0.0
    if b == 0:
        return INF
    if a == 0:
        return -INF
    return math.log(a / b)


def _mass(row, event):
    return sum((row[y] for y in event), Fraction(0))


def ldp(m):
    m = frac_matrix(m)
    best = -INF
    for x, x2 in itertools.permutations(range(len(m)), 2):
        for ev in subsets(len(m[0])):
            best = max(best, _ratio_log(_mass(m[x], ev), _mass(m[x2], ev)))
    return best


def ldp_delta(m, eps):
    m = frac_matrix(m)
    scale = math.exp(eps)
    best = 0.0
    for x, x2 in itertools.permutations(range(len(m)), 2):
        for ev in subsets(len(m[0]), empty=True):
            best = max(best, float(_mass(m[x], ev)) - scale * float(_mass(m[x2], ev)))
    return best


def _cond_and_marginal(m, p, sx, sy):
    px = sum((p[x] for x in sx), Fraction(0))
    cond = sum((p[x] * _mass(m[x], sy) for x in sx), Fraction(0)) / px
    marg = sum((p[x] * _mass(m[x], sy) for x in range(len(m))), Fraction(0))
    return cond, marg


def _support(p):
    return [x for x in range(len(p)) if p[x] > 0]


def lip(m, p):
    m, p = frac_matrix(m), [Fraction(v) for v in p]
    supp = _support(p)
    best = 0.0
    for r in range(1, len(supp) + 1):
        for sx in itertools.combinations(supp, r):
            for sy in subsets(len(m[0])):
                cond, marg = _cond_and_marginal(m, p, sx, sy)
                best = max(best, abs(_ratio_log(cond, marg)))
    return best


def lip_delta(m, p, eps):
    m, p = frac_matrix(m), [Fraction(v) for v in p]
    supp = _support(p)
    lo, hi = math.exp(-eps), math.exp(eps)
    best = 0.0
    for r in range(1, len(supp) + 1):
        for sx in itertools.combinations(supp, r):
            for sy in subsets(len(m[0]), empty=True):
                cond, marg = _cond_and_marginal(m, p, sx, sy)
                best = max(best, lo * float(cond) - float(marg), float(marg) - hi * float(cond))
    return best


def lmip(m, p):
    m, p = frac_matrix(m), [Fraction(v) for v in p]
    q = [sum((p[x] * m[x][y] for x in range(len(m))), Fraction(0)) for y in range(len(m[0]))]
    total = 0.0
    for x in range(len(m)):
        for y in range(len(m[0])):
            joint = p[x] * m[x][y]
            if joint > 0:
                total += float(joint) * math.log(joint / (p[x] * q[y]))
    return total


def di(m, p):
    m, p = frac_matrix(m), [Fraction(v) for v in p]
    supp = _support(p)
    best = 0.0
    for sy in subsets(len(m[0])):
        marg = sum((p[x] * _mass(m[x], sy) for x in range(len(m))), Fraction(0))
        if marg == 0:
            continue
        post = [p[x] * _mass(m[x], sy) / marg for x in range(len(m))]
        for x, x2 in itertools.permutations(supp, 2):
            best = max(best, _ratio_log(post[x], post[x2]))
    return best


def mil(m):
    """ln of the best expected guessing success over all maps output -> input."""
    m = frac_matrix(m)
    nx_, ny = len(m), len(m[0])
    best = Fraction(0)
    for guess in itertools.product(range(nx_), repeat=ny):
        best = max(best, sum((m[guess[y]][y] for y in range(ny)), Fraction(0)))
    return math.log(best)


def pufferfish(m, scenarios, pairs):
    """scenarios: list of {secret: data distribution}; pairs: list of (s, s')."""
    m = frac_matrix(m)
    ny = len(m[0])
    best = 0.0
    for sc in scenarios:
        for a, b in pairs:
            if a not in sc or b not in sc:
                continue
            da = [Fraction(v) for v in sc[a]]
            db = [Fraction(v) for v in sc[b]]
            for ev in subsets(ny):
                ma = sum((da[x] * _mass(m[x], ev) for x in range(len(m))), Fraction(0))
                mb = sum((db[x] * _mass(m[x], ev) for x in range(len(m))), Fraction(0))
                best = max(best, abs(_ratio_log(ma, mb)))
    return best


def geo(m, dist):
    m = frac_matrix(m)
    best = 0.0
    for x, x2 in itertools.permutations(range(len(m)), 2):
        for ev in subsets(len(m[0])):
            a, b = _mass(m[x], ev), _mass(m[x2], ev)
            if dist[x][x2] == 0:
                if a != b:
                    return INF
                continue
            best = max(best, _ratio_log(a, b) / dist[x][x2])
    return best


def w_inf_flow(values, a, b):
    """Smallest t such that a coupling of a and b moves no mass farther than t.

    Feasibility of each candidate t is a bipartite max-flow problem; the
    candidates are the pairwise distances, scanned by bisection.
    """
    src = [i for i in range(len(a)) if a[i] > 0]
    dst = [j for j in range(len(b)) if b[j] > 0]
    cands = sorted({abs(values[i] - values[j]) for i in src for j in dst})

    fa = [Fraction(v) for v in a]
    fb = [Fraction(v) for v in b]
    scale = math.lcm(*(f.denominator for f in fa + fb))
    ia = [int(f * scale) for f in fa]
    ib = [int(f * scale) for f in fb]

    def feasible(t):
        g = nx.DiGraph()
        for i in src:
            g.add_edge("s", ("a", i), capacity=ia[i])
        for j in dst:
            g.add_edge(("b", j), "t", capacity=ib[j])
        for i in src:
            for j in dst:
                if abs(values[i] - values[j]) <= t:
                    g.add_edge(("a", i), ("b", j), capacity=scale)
        return nx.maximum_flow_value(g, "s", "t") == scale

    lo, hi = 0, len(cands) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if feasible(cands[mid]):
            hi = mid
        else:
            lo = mid + 1
    return cands[lo]


def geometric_row_by_series(i, m, alpha, terms=4000):
    """Clamped two-sided geometric row by summing the pmf term by term."""
    norm = (1 - alpha) / (1 + alpha)
    row = [0.0] * m
    for z in range(-terms, terms + 1):
        j = min(max(i + z, 0), m - 1)
        row[j] += norm * alpha ** abs(z)
    return row


def k_anonymity(rows, quasi_idx):
    """Smallest class size by counting, for every row, the rows sharing its key."""
    keys = [tuple(r[q].strip() for q in quasi_idx) for r in rows]
    return min(sum(1 for k2 in keys if k2 == k) for k in keys)


def l_diversity(rows, quasi_idx, sens_idx):
    keys = [tuple(r[q].strip() for q in quasi_idx) for r in rows]
    return min(len({rows[j][sens_idx].strip() for j in range(len(rows)) if keys[j] == k})
               for k in keys)
