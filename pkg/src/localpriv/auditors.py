"""Tightest-budget auditors for local privacy notions.

Each auditor takes an explicit channel (plus whatever context the notion
needs: a prior, a metric, a secret model) and returns the smallest budget the
channel satisfies, together with a witness at which that budget is attained.

Worst-case (point-wise) notions: LDP, LIP, DI, pufferfish, geo-
indistinguishability. Average-case notions: mutual information (L-MIP) and
maximal leakage (MIL). For any full-support prior the budgets are ordered

    I(X;Y) <= MIL <= eps_LDP,      eps_LIP <= eps_LDP <= 2 * eps_LIP.

All budgets are in nats. Ties in a maximum are broken by the lowest
(x, x', y) index order, so results never depend on evaluation order.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .core import (
    INFINITY,
    ZERO_TOL,
    Channel,
    MetricSpace,
    Prior,
    SecretModel,
    _require_same,
    clamped_log,
    log_diff,
)
from .errors import DegenerateAlphabet, LocalPrivError

__all__ = [
    "Notion",
    "AuditReport",
    "audit_ldp",
    "audit_ldp_delta",
    "audit_lip",
    "audit_lip_delta",
    "audit_lmip",
    "audit_di",
    "audit_mil",
    "audit_pufferfish",
    "audit_geo",
]


class Notion(str, enum.Enum):
    LDP = "LDP"
    LDP_DELTA = "LDP_DELTA"
    LIP = "LIP"
    LIP_DELTA = "LIP_DELTA"
    LMIP = "LMIP"
    DI = "DI"
    MIL = "MIL"
    PUFFERFISH = "PUFFERFISH"
    GEO = "GEO"


_DELTA_NOTIONS = {Notion.LDP_DELTA, Notion.LIP_DELTA}


@dataclass(frozen=True)
class AuditReport:
    """Result of one audit.

    For the two delta auditors ``epsilon`` is the budget that was queried and
    ``delta`` the smallest slack making it hold. ``skipped`` lists input
    symbols left out because the prior gives them zero mass.
    """

    notion: Notion
    epsilon: float
    delta: float | None = None
    witness: tuple | None = None
    skipped: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "notion", Notion(self.notion))
        if (self.delta is not None) != (self.notion in _DELTA_NOTIONS):
            raise LocalPrivError(f"delta must be given exactly for {sorted(_DELTA_NOTIONS)}")
        if not (self.epsilon >= 0):
            raise LocalPrivError(f"epsilon must be non-negative, got {self.epsilon}")

    @property
    def finite(self) -> bool:
        return math.isfinite(self.epsilon)

    def to_dict(self) -> dict:
        return {
            "notion": self.notion.value,
            "epsilon": self.epsilon,
            "delta": self.delta,
            "witness": list(self.witness) if self.witness is not None else None,
            "skipped": list(self.skipped),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "AuditReport":
        w = d.get("witness")
        return cls(Notion(d["notion"]), float(d["epsilon"]), d.get("delta"),
                   tuple(w) if w is not None else None, tuple(d.get("skipped", ())))


def _pairwise_log_ratios(logm: np.ndarray) -> np.ndarray:
    """``R[x, x', y] = log m[x, y] - log m[x', y]`` with 0/0 -> 0."""
    return log_diff(logm[:, None, :], logm[None, :, :])


def _first_argmax(a: np.ndarray) -> tuple[int, ...]:
    return np.unravel_index(int(np.argmax(a)), a.shape)


def _clamp(m: np.ndarray) -> np.ndarray:
    return np.where(m < ZERO_TOL, 0.0, m)


def audit_ldp(c: Channel) -> AuditReport:
    """Smallest eps with ``c(y|x) <= e^eps c(y|x')`` for all x, x', y.

    The result is infinite when some output is possible under one input and
    impossible under another. Witness: ``(x, x', y)``.
    """
    k = len(c.input)
    if k < 2:
        raise DegenerateAlphabet("LDP needs at least two inputs")
    r = _pairwise_log_ratios(clamped_log(c.matrix))
    r[np.arange(k), np.arange(k), :] = -np.inf
    x, x2, y = _first_argmax(r)
    return AuditReport(Notion.LDP, float(r[x, x2, y]),
                       witness=(c.input.symbols[x], c.input.symbols[x2], c.output.symbols[y]))


def _hockey_stick(a: np.ndarray, b: np.ndarray, scale: float) -> np.ndarray:
    """``sum_y max(a[..., y] - scale * b[..., y], 0)`` with inf * 0 = 0."""
    with np.errstate(invalid="ignore", over="ignore"):
        scaled = np.where(b > 0, scale * b, 0.0)
    return np.clip(a - scaled, 0.0, None).sum(axis=-1)


def audit_ldp_delta(c: Channel, eps: float) -> AuditReport:
    """Smallest delta such that ``c`` is (eps, delta)-LDP.

    delta is the largest hockey-stick divergence between two rows,
    ``max_{x,x'} sum_y (c(y|x) - e^eps c(y|x'))_+``. Witness: ``(x, x')``.
    """
    if eps < 0:
        raise LocalPrivError("eps must be non-negative")
    k = len(c.input)
    m = _clamp(c.matrix)
    if k < 2:
        return AuditReport(Notion.LDP_DELTA, float(eps), delta=0.0)
    h = _hockey_stick(m[:, None, :], m[None, :, :], math.exp(eps) if eps < 700 else INFINITY)
    h[np.arange(k), np.arange(k)] = -np.inf
    x, x2 = _first_argmax(h)
    delta = min(max(float(h[x, x2]), 0.0), 1.0)
    return AuditReport(Notion.LDP_DELTA, float(eps), delta=delta,
                       witness=(c.input.symbols[x], c.input.symbols[x2]))


def _supported(c: Channel, p: Prior):
    _require_same(p.alphabet, c.input, "prior/channel input")
    supp = p.support()
    skipped = tuple(s for s, ok in zip(c.input.symbols, supp) if not ok)
    return supp, skipped


def audit_lip(c: Channel, p: Prior) -> AuditReport:
    """Smallest eps with ``e^-eps <= c(y|x) / q(y) <= e^eps`` (delta = 0).

    ``q`` is the output marginal under ``p``. Singleton events suffice: a
    conditional on a larger input event is a prior-weighted mixture of rows,
    and a ratio of sums never exceeds the largest ratio of terms.
    Zero-prior inputs are skipped. Witness: ``(x, y)``.
    """
    supp, skipped = _supported(c, p)
    idx = np.flatnonzero(supp)
    q = p.probs @ c.matrix
    r = np.abs(log_diff(clamped_log(c.matrix[idx]), clamped_log(q)[None, :]))
    i, y = _first_argmax(r)
    return AuditReport(Notion.LIP, float(r[i, y]),
                       witness=(c.input.symbols[idx[i]], c.output.symbols[y]),
                       skipped=skipped)


def audit_lip_delta(c: Channel, p: Prior, eps: float) -> AuditReport:
    """Smallest delta making both (eps, delta)-LIP inequalities hold for all events.

    The two inequalities are, for events S_x (positive mass) and S_y::

        q(S_y) >= e^-eps P(S_y | S_x) - delta
        q(S_y) <= e^eps  P(S_y | S_x) + delta

    Both slacks are affine in the mixture weights of S_x, so the worst S_x is
    a singleton; for fixed x the worst S_y collects every y whose per-output
    slack is positive. Witness: ``(x, *S_y)``.
    """
    if eps < 0:
        raise LocalPrivError("eps must be non-negative")
    supp, skipped = _supported(c, p)
    idx = np.flatnonzero(supp)
    m = _clamp(c.matrix)
    q = _clamp(p.probs @ c.matrix)
    up = math.exp(eps) if eps < 700 else INFINITY
    rows = m[idx]
    over = np.clip(rows / up - q[None, :], 0.0, None)     # first inequality slack
    with np.errstate(invalid="ignore", over="ignore"):
        scaled = np.where(rows > 0, up * rows, 0.0)
    under = np.clip(q[None, :] - scaled, 0.0, None)      # second inequality slack
    # interleave so ties prefer the first inequality, then lower x
    slack = np.stack([over.sum(axis=1), under.sum(axis=1)], axis=1)
    i, side = _first_argmax(slack)
    delta = min(float(slack[i, side]), 1.0)
    per_y = over[i] if side == 0 else under[i]
    event = tuple(c.output.symbols[y] for y in np.flatnonzero(per_y > 0))
    return AuditReport(Notion.LIP_DELTA, float(eps), delta=delta,
                       witness=(c.input.symbols[idx[i]],) + event, skipped=skipped)


def mutual_information(c: Channel, p: Prior) -> float:
    """``I(X;Y)`` in nats under input distribution ``p``."""
    _require_same(p.alphabet, c.input, "prior/channel input")
    joint = p.probs[:, None] * c.matrix
    q = joint.sum(axis=0)
    nz = joint > 0
    lc = np.log(np.where(nz, c.matrix, 1.0))
    lq = np.log(np.where(q > 0, q, 1.0))[None, :]
    return max(float((joint * (lc - lq))[nz].sum()), 0.0)


def audit_lmip(c: Channel, p: Prior) -> AuditReport:
    """Mutual information ``I(X;Y)``; average-case, so no witness."""
    return AuditReport(Notion.LMIP, mutual_information(c, p))


def audit_di(c: Channel, p: Prior) -> AuditReport:
    """Smallest eps bounding every posterior ratio ``P(x|y) / P(x'|y)``.

    Outputs with zero marginal and zero-prior inputs are skipped. The ratio
    is evaluated as likelihood ratio plus prior log-ratio, so under a uniform
    prior the result coincides bit-for-bit with :func:`audit_ldp`.
    Witness: ``(x, x', y)``.
    """
    if len(c.input) < 2:
        raise DegenerateAlphabet("DI needs at least two inputs")
    supp, skipped = _supported(c, p)
    idx = np.flatnonzero(supp)
    if len(idx) < 2:
        return AuditReport(Notion.DI, 0.0, skipped=skipped)
    q = p.probs @ c.matrix
    ys = np.flatnonzero(q >= ZERO_TOL)
    lm = clamped_log(c.matrix[np.ix_(idx, ys)])
    r = _pairwise_log_ratios(lm)
    lp = np.log(p.probs[idx])
    prior_term = (lp[:, None] - lp[None, :])[:, :, None]
    finite = np.isfinite(lm)[:, None, :] & np.isfinite(lm)[None, :, :]
    r = np.where(finite, r + prior_term, r)
    n = len(idx)
    r[np.arange(n), np.arange(n), :] = -np.inf
    i, j, y = _first_argmax(r)
    sym = c.input.symbols
    return AuditReport(Notion.DI, float(r[i, j, y]),
                       witness=(sym[idx[i]], sym[idx[j]], c.output.symbols[ys[y]]),
                       skipped=skipped)


def audit_mil(c: Channel) -> AuditReport:
    """Maximal leakage ``ln sum_y max_x c(y|x)``.

    This closed form equals the supremum, over all secrets U correlated with
    X and all guessing strategies, of the log gain in the probability of
    guessing U correctly after seeing Y; it does not depend on the prior.
    Witness: the maximizing input for each output, in output order.
    """
    m = c.matrix
    best = np.argmax(m, axis=0)
    total = float(m[best, np.arange(m.shape[1])].sum())
    return AuditReport(Notion.MIL, max(math.log(total), 0.0),
                       witness=tuple(c.input.symbols[i] for i in best))


def audit_pufferfish(c: Channel, sm: SecretModel) -> AuditReport:
    """Smallest eps bounding ``|ln m_i(y) / m_j(y)|`` over scenarios and pairs.

    ``m_i(y) = sum_x P(x | s_i, theta) c(y|x)`` is the output distribution
    given secret s_i under scenario theta. Pairs whose secrets are missing from
    a scenario are not constrained there. Witness: ``(scenario, s_i, s_j, y)``.
    """
    _require_same(sm.data, c.input, "secret model data/channel input")
    best, witness = -np.inf, None
    for t, scenario in enumerate(sm.scenarios):
        for a, b in sm.pairs:
            if a not in scenario or b not in scenario:
                continue
            la = clamped_log(scenario[a] @ c.matrix)
            lb = clamped_log(scenario[b] @ c.matrix)
            r = np.abs(log_diff(la, lb))
            y = int(np.argmax(r))
            if r[y] > best:
                best, witness = float(r[y]), (t, a, b, c.output.symbols[y])
    if witness is None:
        return AuditReport(Notion.PUFFERFISH, 0.0)
    return AuditReport(Notion.PUFFERFISH, best, witness=witness)


_SAME_ROW_TOL = 1e-12


def audit_geo(c: Channel, m: MetricSpace) -> AuditReport:
    """Smallest eps with ``c(y|x) <= e^(eps d(x,x')) c(y|x')`` for all x, x', y.

    Distinct inputs at distance zero must have identical rows; otherwise the
    budget is infinite. Witness: ``(x, x', y)``.
    """
    _require_same(m.alphabet, c.input, "metric/channel input")
    k = len(c.input)
    r = _pairwise_log_ratios(clamped_log(c.matrix))
    d = m.dist[:, :, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        scaled = np.where(d > 0, r / np.where(d > 0, d, 1.0), -np.inf)
    scaled = np.where((d == 0) & (r > _SAME_ROW_TOL), np.inf, scaled)
    scaled[np.arange(k), np.arange(k), :] = -np.inf
    x, x2, y = _first_argmax(scaled)
    eps = float(scaled[x, x2, y])
    if eps == -np.inf:
        return AuditReport(Notion.GEO, 0.0)
    sym = c.input.symbols
    return AuditReport(Notion.GEO, max(eps, 0.0), witness=(sym[x], sym[x2], c.output.symbols[y]))
