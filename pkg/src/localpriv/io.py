"""Reading and writing channel, prior, metric, secret-model, distortion and batch files.

JSON layouts::

    channel     {"input": [...], "output": [...], "matrix": [[...], ...],
                 "embedding": {"input": [...], "output": [...]},   # optional
                 "meta": {...}}                                    # optional
    prior       {"alphabet": [...], "probs": [...]}
    metric      {"alphabet": [...], "dist": [[...], ...]}
    secrets     {"secrets": [...], "pairs": [[s, s'], ...],
                 "scenarios": [{"<secret>": [...]}, ...],
                 "data_alphabet": [...], "embedding": [...]}       # embedding optional
    distortion  {"input": [...], "output": [...], "d": [[...], ...]}

Report batches are CSV (header ``report`` for KRR, ``b0,b1,...`` for OUE)
with a JSON sidecar ``{"mechanism", "epsilon", "alphabet", "n"}`` stored next
to the CSV as ``<name>.meta.json``.

Floats are written with ``repr`` precision, so they round-trip exactly.
Unbounded budgets are written as the string ``"Infinity"``.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .core import Alphabet, Channel, MetricSpace, Prior, SecretModel
from .errors import LocalPrivError, ParseError
from .mechanisms import ReportBatch
from .optimizer import DistortionMatrix


def load_json(path) -> dict:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ParseError(f"cannot read file: {e.strerror}", path=str(path)) from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, path=str(path), line=e.lineno, column=e.colno) from None
    if not isinstance(obj, dict):
        raise ParseError("top-level JSON value must be an object", path=str(path))
    return obj


def _field(obj: dict, key: str, path):
    try:
        return obj[key]
    except KeyError:
        raise ParseError(f"missing field {key!r}", path=str(path)) from None


def _wrap(path, fn):
    try:
        return fn()
    except ParseError:
        raise
    except (LocalPrivError, TypeError, ValueError) as e:
        raise ParseError(str(e), path=str(path)) from None


def encode_float(x: float):
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return float(x)


def decode_float(x) -> float:
    return float(x)  # float("Infinity") == inf


def _dump(obj, path):
    Path(path).write_text(json.dumps(obj, indent=2) + "\n", encoding="utf-8")


def channel_to_dict(c: Channel) -> dict:
    out = {
        "input": list(c.input.symbols),
        "output": list(c.output.symbols),
        "matrix": c.matrix.tolist(),
    }
    if c.input.embedding is not None or c.output.embedding is not None:
        out["embedding"] = {
            "input": list(c.input.embedding) if c.input.embedding is not None else None,
            "output": list(c.output.embedding) if c.output.embedding is not None else None,
        }
    if c.meta:
        out["meta"] = {k: encode_float(v) if isinstance(v, float) else v
                       for k, v in c.meta.items()}
    return out


def channel_from_dict(obj: dict, path="<channel>") -> Channel:
    def build():
        emb = obj.get("embedding") or {}
        inp = Alphabet(tuple(_field(obj, "input", path)), emb.get("input"))
        out = Alphabet(tuple(_field(obj, "output", path)), emb.get("output"))
        return Channel(inp, out, np.array(_field(obj, "matrix", path), dtype=float),
                       meta=obj.get("meta") or {})
    return _wrap(path, build)


def load_channel(path) -> Channel:
    return channel_from_dict(load_json(path), path)


def save_channel(c: Channel, path):
    _dump(channel_to_dict(c), path)


def load_prior(path) -> Prior:
    obj = load_json(path)
    return _wrap(path, lambda: Prior(
        Alphabet(tuple(_field(obj, "alphabet", path)), obj.get("embedding")),
        np.array(_field(obj, "probs", path), dtype=float)))


def save_prior(p: Prior, path):
    obj = {"alphabet": list(p.alphabet.symbols), "probs": p.probs.tolist()}
    if p.alphabet.embedding is not None:
        obj["embedding"] = list(p.alphabet.embedding)
    _dump(obj, path)


def load_metric(path) -> MetricSpace:
    obj = load_json(path)
    return _wrap(path, lambda: MetricSpace(
        Alphabet(tuple(_field(obj, "alphabet", path))),
        np.array(_field(obj, "dist", path), dtype=float)))


def save_metric(m: MetricSpace, path):
    _dump({"alphabet": list(m.alphabet.symbols), "dist": m.dist.tolist()}, path)


def _guess_embedding(labels):
    """Numeric labels double as their own embedding."""
    try:
        return tuple(float(s) for s in labels)
    except (TypeError, ValueError):
        return None


def load_secret_model(path) -> SecretModel:
    obj = load_json(path)

    def build():
        labels = tuple(_field(obj, "data_alphabet", path))
        emb = obj.get("embedding")
        data = Alphabet(labels, emb if emb is not None else _guess_embedding(labels))
        return SecretModel(
            Alphabet(tuple(_field(obj, "secrets", path))),
            tuple(tuple(p) for p in _field(obj, "pairs", path)),
            tuple({k: np.array(v, dtype=float) for k, v in sc.items()}
                  for sc in _field(obj, "scenarios", path)),
            data,
        )
    return _wrap(path, build)


def save_secret_model(sm: SecretModel, path):
    obj = {
        "secrets": list(sm.secrets.symbols),
        "pairs": [list(p) for p in sm.pairs],
        "scenarios": [{k: v.tolist() for k, v in sc.items()} for sc in sm.scenarios],
        "data_alphabet": list(sm.data.symbols),
    }
    if sm.data.embedding is not None:
        obj["embedding"] = list(sm.data.embedding)
    _dump(obj, path)


def load_distortion(path) -> DistortionMatrix:
    obj = load_json(path)
    return _wrap(path, lambda: DistortionMatrix(
        Alphabet(tuple(_field(obj, "input", path))),
        Alphabet(tuple(_field(obj, "output", path))),
        np.array(_field(obj, "d", path), dtype=float)))


def save_distortion(d: DistortionMatrix, path):
    _dump({"input": list(d.input.symbols), "output": list(d.output.symbols),
           "d": d.d.tolist()}, path)


def sidecar_path(csv_path) -> Path:
    p = Path(csv_path)
    return p.with_name(p.stem + ".meta.json")


def save_batch(batch: ReportBatch, path):
    """Write the report CSV and its metadata sidecar."""
    path = Path(path)
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        if batch.mechanism == "krr":
            w.writerow(["report"])
            w.writerows([r] for r in batch.reports)
        else:
            w.writerow([f"b{i}" for i in range(len(batch.alphabet))])
            w.writerows(batch.reports.tolist())
    _dump({"mechanism": batch.mechanism, "epsilon": batch.epsilon,
           "alphabet": list(batch.alphabet.symbols), "n": batch.n}, sidecar_path(path))


def load_batch(path, mechanism=None, epsilon=None, alphabet=None) -> ReportBatch:
    """Read a report CSV; missing metadata comes from the sidecar if present."""
    path = Path(path)
    side = sidecar_path(path)
    meta = load_json(side) if side.exists() else {}
    mechanism = mechanism or meta.get("mechanism")
    epsilon = epsilon if epsilon is not None else meta.get("epsilon")
    labels = alphabet or meta.get("alphabet")
    if mechanism is None or epsilon is None or labels is None:
        raise ParseError("batch needs mechanism, epsilon and alphabet (flags or sidecar)",
                         path=str(path))
    try:
        with open(path, newline="", encoding="utf-8") as f:
            rows = list(csv.reader(f))
    except OSError as e:
        raise ParseError(f"cannot read file: {e.strerror}", path=str(path)) from None
    if not rows:
        raise ParseError("empty CSV (no header)", path=str(path))
    header, body = rows[0], [r for r in rows[1:] if r]
    if mechanism == "krr":
        if header != ["report"]:
            raise ParseError(f"expected header 'report', got {header}", path=str(path), line=1)
        reports = [r[0] for r in body]
    else:
        expected = [f"b{i}" for i in range(len(labels))]
        if header != expected:
            raise ParseError(f"expected header {','.join(expected)}", path=str(path), line=1)
        try:
            reports = np.array([[int(v) for v in r] for r in body], dtype=np.int64)
        except ValueError as e:
            raise ParseError(str(e), path=str(path)) from None
        reports = reports.reshape(len(body), len(labels))
    batch = _wrap(path, lambda: ReportBatch(mechanism, float(epsilon),
                                             Alphabet(tuple(labels)), reports))
    if "n" in meta and meta["n"] != batch.n:
        raise ParseError(f"sidecar says n={meta['n']}, CSV has {batch.n} reports", path=str(path))
    return batch
