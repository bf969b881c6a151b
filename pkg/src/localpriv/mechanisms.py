"""Classical local mechanisms as explicit channels, plus sampling and estimation.

Constructors return :class:`~localpriv.core.Channel` objects whose ``meta``
records the family and parameters, so a channel file written to disk still
says what it is.

Sampling uses numpy's PCG64 bit generator seeded with the caller's integer
seed. One uniform double ``u`` is drawn per report, in report order, and the
output is the first symbol whose cumulative row probability exceeds ``u``
(inverse-CDF). The same ``(channel, inputs, seed)`` therefore gives the same
report list on every platform numpy supports.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import Alphabet, Channel, Prior, SecretModel
from .errors import (
    AlphabetTooLarge,
    DegenerateAlphabet,
    EmptyBatch,
    LocalPrivError,
    NotAGrid,
    ZeroDistance,
)

OUE_MAX_K = 12


def _check_eps(eps):
    if not (eps >= 0) or math.isnan(eps):
        raise LocalPrivError(f"eps must be non-negative, got {eps}")


def rr_probs(k: int, eps: float) -> tuple[float, float]:
    """Keep / switch-to-each-other-symbol probabilities of k-ary randomized response."""
    t = math.exp(-eps)
    denom = 1.0 + (k - 1) * t
    return 1.0 / denom, t / denom


def make_rr(alphabet: Alphabet, eps: float) -> Channel:
    """k-ary randomized response.

    Reports the true symbol with probability ``e^eps / (e^eps + k - 1)`` and
    each other symbol with probability ``1 / (e^eps + k - 1)``. At k = 2 this
    is binary randomized response with truthful probability
    ``e^eps / (e^eps + 1)``.

    Note that for very large eps (around 28 and up for small k) the
    off-diagonal entries fall below the 1e-12 zero threshold, and auditors
    then report an unbounded budget.
    """
    k = len(alphabet)
    if k < 2:
        raise DegenerateAlphabet("randomized response needs at least two symbols")
    _check_eps(eps)
    keep, other = rr_probs(k, eps)
    m = np.full((k, k), other)
    np.fill_diagonal(m, keep)
    return Channel(alphabet, alphabet, m, meta={"family": "krr", "epsilon": float(eps)})


def oue_output_alphabet(k: int) -> Alphabet:
    """All length-k bit strings, bit 0 first, in lexicographic order."""
    return Alphabet(tuple("".join(b) for b in itertools.product("01", repeat=k)))


def make_oue(alphabet: Alphabet, eps: float) -> Channel:
    """Optimized unary encoding as a channel onto all 2^k bit vectors.

    The one-hot position keeps its 1 with probability 1/2; every other bit
    turns on with probability ``1 / (e^eps + 1)``, independently.
    """
    k = len(alphabet)
    if k > OUE_MAX_K:
        raise AlphabetTooLarge(f"OUE channel limited to k <= {OUE_MAX_K} (got {k})")
    if k < 2:
        raise DegenerateAlphabet("OUE needs at least two symbols")
    _check_eps(eps)
    q = 1.0 / (math.exp(eps) + 1.0) if eps < 700 else 0.0
    bits = np.array(list(itertools.product((0, 1), repeat=k)), dtype=bool)
    per_bit = np.where(bits, q, 1.0 - q)
    m = np.empty((k, 2 ** k))
    for i in range(k):
        b = per_bit.copy()
        b[:, i] = 0.5
        m[i] = b.prod(axis=1)
    return Channel(alphabet, oue_output_alphabet(k), m,
                   meta={"family": "oue", "epsilon": float(eps)})


def make_sampling(p_prior: Prior, p_truth: float) -> Channel:
    """Release the true value with probability ``p_truth``, else a draw from the prior."""
    if not 0.0 <= p_truth <= 1.0:
        raise LocalPrivError(f"p_truth must lie in [0, 1], got {p_truth}")
    k = len(p_prior.alphabet)
    m = p_truth * np.eye(k) + (1.0 - p_truth) * p_prior.probs[None, :]
    return Channel(p_prior.alphabet, p_prior.alphabet, m,
                   meta={"family": "sampling", "p_truth": float(p_truth)})


def _grid_start(alphabet: Alphabet) -> int:
    """First value of a unit-spaced integer grid, or NotAGrid."""
    if alphabet.embedding is None:
        raise NotAGrid("alphabet has no numeric embedding")
    v = np.asarray(alphabet.embedding)
    if not np.all(v == np.round(v)) or np.any(np.diff(v) != 1):
        raise NotAGrid(f"embedding is not consecutive integers: {alphabet.embedding}")
    return int(v[0])


def clamped_geometric(src: np.ndarray, m: int, alpha: float) -> np.ndarray:
    """Rows of two-sided geometric noise on grid positions ``0..m-1``.

    Noise pmf is ``(1-alpha)/(1+alpha) * alpha^|z|``; mass falling outside the
    grid is moved to the nearest endpoint, where the tail sums are
    ``alpha^i / (1+alpha)`` in closed form.
    """
    src = np.asarray(src, dtype=int)
    if m == 1:
        return np.ones((len(src), 1))
    off = np.abs(np.arange(m)[None, :] - src[:, None])
    rows = (1.0 - alpha) / (1.0 + alpha) * np.power(alpha, off)
    rows[:, 0] = np.power(alpha, src) / (1.0 + alpha)
    rows[:, -1] = np.power(alpha, m - 1 - src) / (1.0 + alpha)
    return rows


def make_geometric(alphabet: Alphabet, eps: float) -> Channel:
    """Add two-sided geometric noise (ratio ``e^-eps``) and clamp to the grid.

    The alphabet must be embedded as consecutive integers. Clamping is a
    post-processing step, so any pair of inputs at grid distance t keeps the
    ratio bound ``e^(eps t)``; the reported LDP budget of the clamped channel
    is that of the matrix as built.
    """
    _grid_start(alphabet)
    _check_eps(eps)
    k = len(alphabet)
    m = clamped_geometric(np.arange(k), k, math.exp(-eps))
    return Channel(alphabet, alphabet, m, meta={"family": "geometric", "epsilon": float(eps)})


def make_geo_exp(m, eps: float) -> Channel:
    """Exponential mechanism over a metric: ``c(y|x) ∝ exp(-(eps/2) d(x, y))``.

    Halving eps absorbs the normalizer: by the triangle inequality
    ``Z(x') / Z(x) <= e^((eps/2) d(x, x'))``, so the result is
    eps-geo-indistinguishable.

    When ``(eps/2) d(x, y)`` exceeds roughly 27 the entry drops below the
    1e-12 zero threshold; auditors then treat it as a structural zero and
    report an unbounded budget, exactly as for ``make_rr`` at huge eps.
    """
    _check_eps(eps)
    w = np.exp(-(eps / 2.0) * m.dist)
    return Channel(m.alphabet, m.alphabet, w / w.sum(axis=1, keepdims=True),
                   meta={"family": "geo-exp", "epsilon": float(eps)})


def secret_model_distance(sm: SecretModel) -> float:
    """Largest W-infinity distance between the two sides of any active pair."""
    from .optimizer import wasserstein_inf

    w = 0.0
    for scenario in sm.scenarios:
        for a, b in sm.pairs:
            if a in scenario and b in scenario:
                w = max(w, wasserstein_inf(Prior(sm.data, scenario[a]),
                                           Prior(sm.data, scenario[b])))
    return w


def make_wasserstein(sm: SecretModel, eps: float, output_grid: Alphabet | None = None) -> Channel:
    """Pufferfish noise calibration with the W-infinity sensitivity.

    ``W`` is the largest infinity-Wasserstein distance between the data
    distributions of any discriminative pair under any scenario. Geometric
    noise with ratio ``e^(-eps / W)`` is added to the embedded value and
    clamped to ``output_grid`` (default: the integer range spanned by the
    data). Coupling each pair optimally moves every unit of mass by at most
    W, which is what bounds the pufferfish ratio by ``e^eps``.

    Raises:
        NoEmbedding: the data alphabet has no numeric embedding.
        NotAGrid: data values are not integers inside a unit-spaced grid.
        ZeroDistance: ``W = 0`` but some pair has different conditionals
            (possible only when distinct symbols share an embedded value).
    """
    _check_eps(eps)
    values = sm.data.values()
    if not np.all(values == np.round(values)):
        raise NotAGrid("data embedding must be integer-valued")
    if output_grid is None:
        output_grid = Alphabet.range(int(values.max() - values.min()) + 1, int(values.min()))
    start = _grid_start(output_grid)
    src = values.astype(int) - start
    if np.any(src < 0) or np.any(src >= len(output_grid)):
        raise NotAGrid("output grid does not span the data embedding")
    w = secret_model_distance(sm)
    meta = {"family": "wasserstein", "epsilon": float(eps), "w_inf": w}
    if w == 0:
        for scenario in sm.scenarios:
            for a, b in sm.pairs:
                if a in scenario and b in scenario and not np.allclose(
                        scenario[a], scenario[b], rtol=0, atol=1e-12):
                    raise ZeroDistance(
                        f"pair ({a!r}, {b!r}) differs but has zero transport distance")
        alpha = 0.0
    else:
        alpha = math.exp(-eps / w)
    mat = clamped_geometric(src, len(output_grid), alpha)
    return Channel(sm.data, output_grid, mat, meta=meta)


def _draw(c: Channel, rows: np.ndarray, seed: int) -> np.ndarray:
    rng = np.random.Generator(np.random.PCG64(seed))
    u = rng.random(len(rows))
    cdf = np.cumsum(c.matrix, axis=1)
    cdf /= cdf[:, -1:]
    last = np.array([np.flatnonzero(r > 0).max() for r in c.matrix])
    out = np.empty(len(rows), dtype=int)
    for r in np.unique(rows):
        mask = rows == r
        out[mask] = np.minimum(np.searchsorted(cdf[r], u[mask], side="right"), last[r])
    return out


def sample_inputs(c: Channel, inputs: Sequence, seed: int) -> list[str]:
    """Privatize each input once; report ``i`` uses the ``i``-th uniform draw."""
    rows = np.array([c.input.index(x) for x in inputs], dtype=int)
    return [c.output.symbols[j] for j in _draw(c, rows, seed)]


def sample(c: Channel, x, n: int, seed: int) -> list[str]:
    """``n`` independent outputs of ``c`` on input ``x``; deterministic in ``seed``."""
    c.input.index(x)
    return sample_inputs(c, [x] * int(n), seed)


@dataclass(frozen=True, eq=False)
class ReportBatch:
    """Privatized reports from one collection round.

    ``reports`` holds symbol labels for ``"krr"`` and an ``(n, k)`` 0/1 array
    for ``"oue"``.
    """

    mechanism: str
    epsilon: float
    alphabet: Alphabet
    reports: object

    def __post_init__(self):
        mech = self.mechanism.lower()
        if mech not in ("krr", "oue"):
            raise LocalPrivError(f"unknown mechanism {self.mechanism!r}")
        object.__setattr__(self, "mechanism", mech)
        if mech == "krr":
            reports = tuple(str(r) for r in self.reports)
            for r in reports:
                self.alphabet.index(r)
        else:
            reports = np.asarray(self.reports)
            if reports.size == 0:
                reports = reports.reshape(0, len(self.alphabet))
            if reports.ndim != 2 or reports.shape[1] != len(self.alphabet):
                raise LocalPrivError(
                    f"OUE reports must have {len(self.alphabet)} bits each, got shape {reports.shape}")
            if not np.all((reports == 0) | (reports == 1)):
                raise LocalPrivError("OUE reports must be 0/1")
            reports = reports.astype(np.uint8)
            reports.setflags(write=False)
        object.__setattr__(self, "reports", reports)

    @property
    def n(self) -> int:
        return len(self.reports)


def privatize(mechanism: str, alphabet: Alphabet, eps: float, inputs: Sequence, seed: int) -> ReportBatch:
    """Run KRR or OUE on every input and collect the reports."""
    mech = mechanism.lower()
    rows = np.array([alphabet.index(x) for x in inputs], dtype=int)
    if mech == "krr":
        out = _draw(make_rr(alphabet, eps), rows, seed)
        reports = [alphabet.symbols[j] for j in out]
    elif mech == "oue":
        k = len(alphabet)
        out = _draw(make_oue(alphabet, eps), rows, seed)
        # output index j is the bit string of j, bit 0 most significant
        reports = (out[:, None] >> (k - 1 - np.arange(k))[None, :]) & 1
    else:
        raise LocalPrivError(f"unknown mechanism {mechanism!r}")
    return ReportBatch(mech, eps, alphabet, reports)


def estimate_frequencies(batch: ReportBatch) -> np.ndarray:
    """Unbiased frequency estimates from a batch of privatized reports.

    KRR: ``(p_hat_v - q) / (p - q)`` with p, q the keep/switch probabilities.
    OUE: ``(c_v / n - q) / (1/2 - q)`` with ``q = 1 / (e^eps + 1)``.

    Estimates are not clipped to [0, 1] and can be negative.
    """
    n = batch.n
    if n == 0:
        raise EmptyBatch("cannot estimate from an empty batch")
    k = len(batch.alphabet)
    if batch.mechanism == "krr":
        p, q = rr_probs(k, batch.epsilon)
        labels, hits = np.unique(np.asarray(batch.reports), return_counts=True)
        counts = np.zeros(k)
        for label, h in zip(labels, hits):
            counts[batch.alphabet.index(label)] = h
        return (counts / n - q) / (p - q)
    q = 1.0 / (math.exp(batch.epsilon) + 1.0)
    counts = batch.reports.sum(axis=0, dtype=float)
    return (counts / n - q) / (0.5 - q)
