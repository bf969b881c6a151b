"""Finite channel model: alphabets, priors, channels, metrics and secret models.

A local privatization mechanism is represented as a row-stochastic matrix
``matrix[x, y] = P(Y=y | X=x)`` between two finite, labelled alphabets. All
values are immutable after construction; arrays are stored read-only.

Ratio arithmetic is done in log space. Probabilities below :data:`ZERO_TOL`
are treated as exact zeros so that structural zeros (which make a likelihood
ratio unbounded) are told apart from floating-point dust.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence

import numpy as np

from .errors import (
    AlphabetMismatch,
    EmptyPairs,
    NoEmbedding,
    LocalPrivError,
    NegativeEntry,
    RowSumError,
    ShapeMismatch,
    UnknownSymbol,
    ZeroMarginal,
)

ZERO_TOL = 1e-12
ROW_TOL = 1e-9
METRIC_TOL = 1e-9
INFINITY = math.inf


def _frozen(a, dtype=float) -> np.ndarray:
    arr = np.array(a, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Alphabet:
    """Ordered set of distinct symbol labels, optionally embedded in the reals."""

    symbols: tuple[str, ...]
    embedding: tuple[float, ...] | None = None

    def __post_init__(self):
        symbols = tuple(str(s) for s in self.symbols)
        if len(symbols) == 0:
            raise ShapeMismatch("alphabet must contain at least one symbol")
        if len(set(symbols)) != len(symbols):
            raise ShapeMismatch(f"alphabet labels must be distinct: {symbols}")
        object.__setattr__(self, "symbols", symbols)
        if self.embedding is not None:
            emb = tuple(float(v) for v in self.embedding)
            if len(emb) != len(symbols):
                raise ShapeMismatch(
                    f"embedding has {len(emb)} values for {len(symbols)} symbols")
            if not all(math.isfinite(v) for v in emb):
                raise ShapeMismatch("embedding values must be finite")
            object.__setattr__(self, "embedding", emb)

    @classmethod
    def range(cls, k: int, start: int = 0) -> "Alphabet":
        """Integer grid ``start, ..., start+k-1`` labelled by its values."""
        values = list(range(start, start + k))
        return cls(tuple(str(v) for v in values), tuple(float(v) for v in values))

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self) -> Iterator[str]:
        return iter(self.symbols)

    def __contains__(self, symbol) -> bool:
        return str(symbol) in self._lookup

    @property
    def _lookup(self) -> dict[str, int]:
        # cached lazily on the frozen instance
        try:
            return self.__dict__["_index_cache"]
        except KeyError:
            lookup = {s: i for i, s in enumerate(self.symbols)}
            object.__setattr__(self, "_index_cache", lookup)
            return lookup

    def index(self, symbol) -> int:
        try:
            return self._lookup[str(symbol)]
        except KeyError:
            raise UnknownSymbol(f"unknown symbol {symbol!r}") from None

    def values(self) -> np.ndarray:
        if self.embedding is None:
            raise NoEmbedding("alphabet has no numeric embedding")
        return np.array(self.embedding)

    def same_symbols(self, other: "Alphabet") -> bool:
        return self.symbols == other.symbols


def _require_same(a: Alphabet, b: Alphabet, what: str):
    if not a.same_symbols(b):
        raise AlphabetMismatch(f"{what}: {a.symbols} vs {b.symbols}")


@dataclass(frozen=True, eq=False)
class Prior:
    """Probability vector over an alphabet."""

    alphabet: Alphabet
    probs: np.ndarray

    def __post_init__(self):
        probs = _frozen(self.probs)
        if probs.ndim != 1 or probs.shape[0] != len(self.alphabet):
            raise ShapeMismatch(
                f"prior has shape {probs.shape}, alphabet size {len(self.alphabet)}")
        if not np.all(np.isfinite(probs)):
            raise ShapeMismatch("prior entries must be finite")
        if np.any(probs < 0):
            raise NegativeEntry(f"prior has negative entries: {probs}")
        if abs(probs.sum() - 1.0) > ROW_TOL:
            raise RowSumError(f"prior sums to {probs.sum()!r}, not 1")
        object.__setattr__(self, "probs", probs)

    @classmethod
    def uniform(cls, alphabet: Alphabet) -> "Prior":
        k = len(alphabet)
        return cls(alphabet, np.full(k, 1.0 / k))

    def __getitem__(self, symbol) -> float:
        return float(self.probs[self.alphabet.index(symbol)])

    def support(self) -> np.ndarray:
        """Boolean mask of symbols with probability above ZERO_TOL."""
        return self.probs > ZERO_TOL


def validate_channel(c) -> None:
    """Check the channel invariants; raise on the first violation.

    Accepts a :class:`Channel` or a bare 2-D array-like.

    Raises:
        ShapeMismatch: not a non-empty 2-D finite array (or wrong size for
            the alphabets).
        NegativeEntry: an entry is below zero.
        RowSumError: an entry exceeds one or a row sum deviates from 1 by
            more than 1e-9.
    """
    if isinstance(c, Channel):
        m, n_in, n_out = c.matrix, len(c.input), len(c.output)
    else:
        m = np.asarray(c, dtype=float)
        n_in = n_out = None
    if m.ndim != 2 or m.shape[0] == 0 or m.shape[1] == 0:
        raise ShapeMismatch(f"channel matrix must be non-empty 2-D, got shape {m.shape}")
    if n_in is not None and m.shape != (n_in, n_out):
        raise ShapeMismatch(f"matrix shape {m.shape} != alphabets ({n_in}, {n_out})")
    if not np.all(np.isfinite(m)):
        raise ShapeMismatch("channel entries must be finite")
    if np.any(m < 0):
        x, y = np.argwhere(m < 0)[0]
        raise NegativeEntry(f"entry ({x}, {y}) is negative: {m[x, y]!r}")
    if np.any(m > 1 + ROW_TOL):
        x, y = np.argwhere(m > 1 + ROW_TOL)[0]
        raise RowSumError(f"entry ({x}, {y}) exceeds 1: {m[x, y]!r}")
    dev = np.abs(m.sum(axis=1) - 1.0)
    if np.any(dev > ROW_TOL):
        x = int(np.argmax(dev))
        raise RowSumError(f"row {x} sums to {m[x].sum()!r}, not 1")


@dataclass(frozen=True, eq=False)
class Channel:
    """Row-stochastic matrix ``P(Y=y|X=x)`` between two labelled alphabets.

    ``meta`` is free-form provenance (e.g. ``{"family": "krr", "epsilon": 1.0}``)
    carried through serialization; it plays no part in any computation.
    """

    input: Alphabet
    output: Alphabet
    matrix: np.ndarray
    meta: Mapping = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "matrix", _frozen(self.matrix))
        object.__setattr__(self, "meta", dict(self.meta))
        validate_channel(self)

    @classmethod
    def from_rows(cls, rows, input=None, output=None, **kw) -> "Channel":
        m = np.asarray(rows, dtype=float)
        if m.ndim != 2:
            raise ShapeMismatch(f"channel matrix must be 2-D, got shape {m.shape}")
        inp = input if input is not None else Alphabet.range(m.shape[0])
        out = output if output is not None else Alphabet.range(m.shape[1])
        return cls(inp, out, m, **kw)

    @classmethod
    def identity(cls, alphabet: Alphabet) -> "Channel":
        return cls(alphabet, alphabet, np.eye(len(alphabet)))

    @classmethod
    def constant(cls, input: Alphabet, output: Alphabet, row) -> "Channel":
        row = np.asarray(row, dtype=float)
        return cls(input, output, np.tile(row, (len(input), 1)))

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape

    def row(self, x) -> np.ndarray:
        return self.matrix[self.input.index(x)]

    def prob(self, y, x) -> float:
        """``P(Y=y | X=x)``."""
        return float(self.matrix[self.input.index(x), self.output.index(y)])


@dataclass(frozen=True, eq=False)
class MetricSpace:
    """Distance matrix over an alphabet (pseudometrics allowed)."""

    alphabet: Alphabet
    dist: np.ndarray

    def __post_init__(self):
        d = _frozen(self.dist)
        k = len(self.alphabet)
        if d.shape != (k, k):
            raise ShapeMismatch(f"distance matrix shape {d.shape}, expected ({k}, {k})")
        if not np.all(np.isfinite(d)):
            raise ShapeMismatch("distances must be finite")
        if np.any(d < 0):
            raise NegativeEntry("distances must be non-negative")
        if np.any(np.diag(d) != 0):
            raise LocalPrivError("metric must have a zero diagonal")
        if not np.array_equal(d, d.T):
            raise LocalPrivError("metric must be symmetric")
        # d[i,k] <= d[i,j] + d[j,k] for all i, j, k
        via = d[:, :, None] + d[None, :, :]
        if np.any(d[:, None, :] > via + METRIC_TOL):
            raise LocalPrivError("metric violates the triangle inequality")
        object.__setattr__(self, "dist", d)

    @classmethod
    def from_points(cls, alphabet: Alphabet, points) -> "MetricSpace":
        """Euclidean metric on points given as an array of shape (k,) or (k, dim)."""
        pts = np.asarray(points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        diff = pts[:, None, :] - pts[None, :, :]
        d = np.sqrt((diff ** 2).sum(axis=-1))
        d = (d + d.T) / 2
        np.fill_diagonal(d, 0.0)
        return cls(alphabet, d)

    @classmethod
    def discrete(cls, alphabet: Alphabet, scale: float = 1.0) -> "MetricSpace":
        k = len(alphabet)
        return cls(alphabet, scale * (1.0 - np.eye(k)))


@dataclass(frozen=True, eq=False)
class SecretModel:
    """Pufferfish secrets, discriminative pairs and data-generating scenarios.

    Each scenario maps a secret label to the conditional distribution of the
    data given that secret (a vector over ``data``). A secret absent from a
    scenario has zero probability under it, so pairs involving it are not
    constrained in that scenario.
    """

    secrets: Alphabet
    pairs: tuple[tuple[str, str], ...]
    scenarios: tuple[Mapping[str, np.ndarray], ...]
    data: Alphabet

    def __post_init__(self):
        pairs = tuple((str(a), str(b)) for a, b in self.pairs)
        if not pairs:
            raise EmptyPairs("secret model has no discriminative pairs")
        for a, b in pairs:
            self.secrets.index(a)
            self.secrets.index(b)
            if a == b:
                raise LocalPrivError(f"discriminative pair ({a!r}, {b!r}) is not distinct")
        if len(self.scenarios) == 0:
            raise LocalPrivError("secret model needs at least one scenario")
        scenarios = []
        for i, sc in enumerate(self.scenarios):
            conv = {}
            for s, probs in sc.items():
                self.secrets.index(s)
                try:
                    conv[str(s)] = Prior(self.data, probs).probs
                except LocalPrivError as e:
                    raise type(e)(f"scenario {i}, secret {s!r}: {e}") from None
            scenarios.append(conv)
        object.__setattr__(self, "pairs", pairs)
        object.__setattr__(self, "scenarios", tuple(scenarios))

    @classmethod
    def from_channel_inputs(cls, alphabet: Alphabet, pairs=None) -> "SecretModel":
        """Secrets identified with data symbols (point-mass conditionals)."""
        eye = np.eye(len(alphabet))
        if pairs is None:
            pairs = [(a, b) for a in alphabet for b in alphabet if a != b]
        scenario = {s: eye[i] for i, s in enumerate(alphabet)}
        return cls(alphabet, tuple(pairs), (scenario,), alphabet)


def output_dist(c: Channel, p: Prior) -> Prior:
    """Marginal of the output, ``q(y) = sum_x p(x) c(y|x)``."""
    _require_same(p.alphabet, c.input, "prior/channel input")
    q = p.probs @ c.matrix
    return Prior(c.output, q / q.sum())


def posterior(c: Channel, p: Prior, y) -> Prior:
    """Bayes posterior ``P(X=. | Y=y)``.

    Raises:
        ZeroMarginal: ``y`` has zero probability under ``p``.
    """
    _require_same(p.alphabet, c.input, "prior/channel input")
    joint = p.probs * c.matrix[:, c.output.index(y)]
    total = joint.sum()
    if total <= ZERO_TOL:
        raise ZeroMarginal(f"output {y!r} has zero marginal probability")
    return Prior(c.input, joint / total)


def compose(c: Channel, post: Channel) -> Channel:
    """Run ``c`` and then feed its output to ``post``."""
    _require_same(c.output, post.input, "compose")
    return Channel(c.input, post.output, c.matrix @ post.matrix)


def log_ratio(a: float, b: float) -> float:
    """``ln(a/b)`` with the conventions 0/0 -> 0, a/0 -> +inf, 0/b -> -inf.

    Values below 1e-12 count as exact zeros.
    """
    a = 0.0 if a < ZERO_TOL else float(a)
    b = 0.0 if b < ZERO_TOL else float(b)
    if a == 0.0 and b == 0.0:
        return 0.0
    if b == 0.0:
        return INFINITY
    if a == 0.0:
        return -INFINITY
    return math.log(a) - math.log(b)


def clamped_log(a) -> np.ndarray:
    """Elementwise natural log with sub-ZERO_TOL entries mapped to -inf."""
    a = np.asarray(a, dtype=float)
    out = np.full(a.shape, -np.inf)
    pos = a >= ZERO_TOL
    out[pos] = np.log(a[pos])
    return out


def log_diff(la, lb) -> np.ndarray:
    """``la - lb`` for log values where (-inf) - (-inf) is taken as 0."""
    la, lb = np.broadcast_arrays(np.asarray(la, float), np.asarray(lb, float))
    both = np.isneginf(la) & np.isneginf(lb)
    with np.errstate(invalid="ignore"):
        out = la - lb
    out[both] = 0.0
    return out


def entropy(p: Prior | Sequence[float]) -> float:
    """Shannon entropy in nats."""
    probs = p.probs if isinstance(p, Prior) else np.asarray(p, dtype=float)
    nz = probs[probs > 0]
    return float(-(nz * np.log(nz)).sum())
