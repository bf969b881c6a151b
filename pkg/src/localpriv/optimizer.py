"""Optimization-based mechanism design.

``design_mip_channel`` finds a channel of (approximately) minimum expected
distortion whose mutual information with the input stays within a budget.
For a fixed slope ``s`` the Lagrangian ``E[d] + I(X;Y) / s`` is minimized by
Blahut-Arimoto alternating minimization; an outer bisection on ``log s``
then matches the information budget.

``wasserstein_inf`` is the one-dimensional infinity-Wasserstein distance used
to calibrate pufferfish noise.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .core import ZERO_TOL, Alphabet, Channel, Prior, _require_same
from .errors import LocalPrivError, NegativeEntry, NoConvergence, ShapeMismatch

RATE_TOL = 1e-4
SLOPE_RANGE = (1e-6, 1e6)
MAX_INNER = 10000
INNER_TOL = 1e-10
MAX_BISECT = 200


@dataclass(frozen=True, eq=False)
class DistortionMatrix:
    """Loss ``d[x, y]`` of reporting ``y`` when the truth is ``x``."""

    input: Alphabet
    output: Alphabet
    d: np.ndarray

    def __post_init__(self):
        d = np.array(self.d, dtype=float)
        if d.shape != (len(self.input), len(self.output)):
            raise ShapeMismatch(
                f"distortion shape {d.shape}, expected ({len(self.input)}, {len(self.output)})")
        if not np.all(np.isfinite(d)):
            raise ShapeMismatch("distortions must be finite")
        if np.any(d < 0):
            raise NegativeEntry("distortions must be non-negative")
        d.setflags(write=False)
        object.__setattr__(self, "d", d)

    @classmethod
    def hamming(cls, alphabet: Alphabet) -> "DistortionMatrix":
        return cls(alphabet, alphabet, 1.0 - np.eye(len(alphabet)))


@dataclass(frozen=True)
class TradeoffPoint:
    epsilon: float
    distortion: float
    iterations: int


@dataclass(frozen=True)
class TradeoffCurve:
    points: tuple[TradeoffPoint, ...]

    def __post_init__(self):
        pts = tuple(self.points)
        eps = np.array([p.epsilon for p in pts])
        dist = np.array([p.distortion for p in pts])
        if np.any(np.diff(eps) <= 0):
            raise LocalPrivError("tradeoff epsilons must be strictly increasing")
        if np.any(np.diff(dist) > 1e-6):
            raise LocalPrivError("tradeoff distortions must be non-increasing")
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return len(self.points)

    @property
    def epsilons(self) -> np.ndarray:
        return np.array([p.epsilon for p in self.points])

    @property
    def distortions(self) -> np.ndarray:
        return np.array([p.distortion for p in self.points])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["epsilon", "distortion", "iterations"])
        for p in self.points:
            w.writerow([repr(p.epsilon), repr(p.distortion), p.iterations])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "TradeoffCurve":
        rows = list(csv.DictReader(io.StringIO(text)))
        return cls(tuple(TradeoffPoint(float(r["epsilon"]), float(r["distortion"]),
                                       int(r["iterations"])) for r in rows))


def _rate(p: np.ndarray, c: np.ndarray) -> float:
    joint = p[:, None] * c
    q = joint.sum(axis=0)
    nz = joint > 0
    with np.errstate(divide="ignore", invalid="ignore"):
        log_ratio = np.log(c) - np.log(q)[None, :]
    return max(float((joint[nz] * log_ratio[nz]).sum()), 0.0)


def _distortion(p: np.ndarray, c: np.ndarray, d: np.ndarray) -> float:
    return float((p[:, None] * c * d).sum())


class BAResult(NamedTuple):
    matrix: np.ndarray
    rate: float
    distortion: float
    iterations: int
    converged: bool
    lagrangian: list

    @property
    def oscillating(self) -> bool:
        """True if the Lagrangian ever rose by more than round-off."""
        return bool(np.any(np.diff(self.lagrangian) > 1e-12))


def blahut_arimoto(p: np.ndarray, d: np.ndarray, s: float, max_iter: int = MAX_INNER,
                   tol: float = INNER_TOL, init: np.ndarray | None = None) -> BAResult:
    """Minimize ``E[d] + I(X;Y) / s`` over channels at a fixed slope ``s > 0``.

    Alternates ``q(y) = sum_x p(x) c(y|x)`` and
    ``c(y|x) ∝ q(y) exp(-s d(x, y))``. Each step minimizes a joint upper
    bound on the Lagrangian, so the recorded Lagrangian never increases.
    Stops when it decreases by less than ``tol`` in one step.
    """
    p = np.asarray(p, dtype=float)
    d = np.asarray(d, dtype=float)
    c = np.full(d.shape, 1.0 / d.shape[1]) if init is None else np.array(init, dtype=float)
    value = _distortion(p, c, d) + _rate(p, c) / s
    trace = [value]
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        q = p @ c
        with np.errstate(divide="ignore"):
            logw = np.log(q)[None, :] - s * d
        logw -= logw.max(axis=1, keepdims=True)
        c = np.exp(logw)
        c /= c.sum(axis=1, keepdims=True)
        new = _distortion(p, c, d) + _rate(p, c) / s
        trace.append(new)
        if value - new < tol:
            converged = True
            break
        value = new
    return BAResult(c, _rate(p, c), _distortion(p, c, d), it, converged, trace)


class MipDesign(NamedTuple):
    channel: Channel
    rate: float
    distortion: float
    iterations: int
    slope: float | None


def _check_inputs(p: Prior, d: DistortionMatrix, eps: float):
    _require_same(p.alphabet, d.input, "prior/distortion input")
    if not (eps >= 0):
        raise LocalPrivError(f"eps must be non-negative, got {eps}")
    if not np.all(p.support()):
        raise LocalPrivError("prior must have full support")


def solve_mip_channel(p: Prior, d: DistortionMatrix, eps: float) -> MipDesign:
    """Like :func:`design_mip_channel`, but also returns rate, distortion and effort."""
    _check_inputs(p, d, eps)
    px, dm = p.probs, d.d
    meta = {"family": "mip-optimal", "epsilon": float(eps)}

    def finish(c, iters, slope):
        rate, dist = _rate(px, c), _distortion(px, c, dm)
        ch = Channel(p.alphabet, d.output, c, meta={**meta, "distortion": dist})
        return MipDesign(ch, rate, dist, iters, slope)

    # zero information forces a constant channel; lowest-index argmin on ties
    y0 = int(np.argmin(px @ dm))
    constant = np.zeros(dm.shape)
    constant[:, y0] = 1.0
    if eps == 0:
        return finish(constant, 0, None)

    greedy = np.zeros(dm.shape)
    greedy[np.arange(dm.shape[0]), np.argmin(dm, axis=1)] = 1.0
    if _rate(px, greedy) <= eps + ZERO_TOL:
        return finish(greedy, 0, None)

    total = 0
    lo, hi = math.log(SLOPE_RANGE[0]), math.log(SLOPE_RANGE[1])

    def run(log_s):
        nonlocal total
        res = blahut_arimoto(px, dm, math.exp(log_s))
        total += res.iterations
        # hitting the cap while still descending just means slow progress
        # (typical at tiny slopes); only a rising Lagrangian is a failure
        if not res.converged and res.oscillating:
            raise NoConvergence(
                f"Blahut-Arimoto did not converge at slope {math.exp(log_s):.6g}",
                best=Channel(p.alphabet, d.output, res.matrix, meta=meta))
        return res

    top = run(hi)
    if top.rate <= eps + RATE_TOL:
        return finish(top.matrix, total, math.exp(hi))
    bottom = run(lo)
    if bottom.rate > eps + RATE_TOL:
        return finish(constant, total, None)
    best = bottom
    for _ in range(MAX_BISECT):
        if abs(best.rate - eps) <= RATE_TOL:
            break
        mid = 0.5 * (lo + hi)
        res = run(mid)
        if res.rate > eps:
            hi = mid
        else:
            lo = mid
        if res.rate <= eps + RATE_TOL and (
                best.rate > eps + RATE_TOL or abs(res.rate - eps) < abs(best.rate - eps)):
            best = res
    else:
        raise NoConvergence("slope bisection did not reach the rate target",
                            best=Channel(p.alphabet, d.output, best.matrix, meta=meta))
    return finish(best.matrix, total, math.exp(0.5 * (lo + hi)))


def design_mip_channel(p: Prior, d: DistortionMatrix, eps: float) -> Channel:
    """Minimum-distortion channel with ``I(X;Y) <= eps`` (within 1e-4 nats).

    ``eps = 0`` gives the constant channel on ``argmin_y E_p[d(X, y)]``. If
    the per-input distortion-minimizing deterministic channel already leaks
    at most ``eps``, that channel is returned.

    Raises:
        NoConvergence: the inner iteration or the slope bisection hit its
            cap; ``best`` holds the best channel found.
    """
    return solve_mip_channel(p, d, eps).channel


def tradeoff_curve(p: Prior, d: DistortionMatrix, eps_grid: Sequence[float]) -> TradeoffCurve:
    """One :func:`design_mip_channel` solve per budget in ``eps_grid``."""
    grid = [float(e) for e in eps_grid]
    if not grid:
        raise LocalPrivError("eps_grid is empty")
    if any(e < 0 for e in grid) or any(b <= a for a, b in zip(grid, grid[1:])):
        raise LocalPrivError("eps_grid must be non-negative and strictly increasing")
    points = []
    for e in grid:
        try:
            sol = solve_mip_channel(p, d, e)
        except NoConvergence as err:
            raise NoConvergence(f"grid point eps={e}: {err}", best=err.best, where=e) from err
        points.append(TradeoffPoint(e, sol.distortion, sol.iterations))
    return TradeoffCurve(tuple(points))


def wasserstein_inf(a: Prior, b: Prior) -> float:
    """Infinity-Wasserstein distance between two distributions on the real line.

    In one dimension the optimal coupling is the quantile coupling, so the
    distance is ``max_u |F_a^-1(u) - F_b^-1(u)|`` over the pieces where both
    quantile functions are constant.

    Raises:
        NoEmbedding: the alphabet has no numeric embedding.
    """
    _require_same(a.alphabet, b.alphabet, "wasserstein_inf")
    v = a.alphabet.values()
    order = np.argsort(v, kind="stable")
    vs = v[order]
    fa = np.cumsum(a.probs[order])
    fb = np.cumsum(b.probs[order])
    fa /= fa[-1]
    fb /= fb[-1]
    fa[-1] = fb[-1] = 1.0
    breaks = np.unique(np.concatenate([[0.0], fa, fb]))
    lo, hi = breaks[:-1], breaks[1:]
    keep = hi - lo > ZERO_TOL
    u = 0.5 * (lo[keep] + hi[keep])
    qa = vs[np.searchsorted(fa, u, side="left")]
    qb = vs[np.searchsorted(fb, u, side="left")]
    return float(np.max(np.abs(qa - qb))) if len(u) else 0.0
