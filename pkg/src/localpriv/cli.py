"""Command-line front end.

Every command prints one JSON report on stdout::

    {"command": [...], "inputs": {path: sha256}, "result": {...},
     "version": "...", "duration_s": ...}

Diagnostics go to stderr. Exit codes: 0 success, 2 usage or input error,
3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from . import auditors, io, mechanisms, optimizer
from .anonymity import Dataset, check_k_anonymity, check_l_diversity
from .core import Alphabet
from .errors import LocalPrivError, MissingInput, NoConvergence, ParseError

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 2, 3


def _to_jsonable(obj):
    if isinstance(obj, float):
        return io.encode_float(obj)
    if isinstance(obj, dict):
        return {k: _to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _to_jsonable(obj.tolist())
    if isinstance(obj, np.generic):
        return _to_jsonable(obj.item())
    return obj


@dataclass
class CliReport:
    command: list
    inputs: dict
    result: dict
    version: str = __version__
    duration_s: float = 0.0

    def to_json(self) -> str:
        return json.dumps(_to_jsonable({
            "command": self.command, "inputs": self.inputs, "result": self.result,
            "version": self.version, "duration_s": self.duration_s,
        }), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "CliReport":
        d = json.loads(text)
        return cls(d["command"], d["inputs"], d["result"], d["version"], d["duration_s"])


class _Run:
    """Collects input digests while a command executes."""

    def __init__(self):
        self.inputs = {}

    def file(self, path, what):
        if path is None:
            raise MissingInput(f"{what} is required for this command")
        p = Path(path)
        if not p.exists():
            raise ParseError("file not found", path=str(p))
        self.inputs[str(p)] = hashlib.sha256(p.read_bytes()).hexdigest()
        return p


def _alphabet(args) -> Alphabet:
    if getattr(args, "alphabet", None):
        labels = [s.strip() for s in args.alphabet.split(",")]
        try:
            emb = tuple(float(s) for s in labels)
        except ValueError:
            emb = None
        return Alphabet(tuple(labels), emb)
    if getattr(args, "k", None) is None:
        raise MissingInput("--k or --alphabet is required")
    return Alphabet.range(args.k)


def _need(value, flag):
    if value is None:
        raise MissingInput(f"{flag} is required for this command")
    return value


# ---------------------------------------------------------------- audit

_AUDIT_HELP = {
    "ldp": "epsilon-local differential privacy: worst likelihood ratio between two inputs",
    "ldp-delta": "(epsilon, delta)-local differential privacy: hockey-stick divergence at --eps",
    "lip": "epsilon-local information privacy: output marginal vs conditional ratio (needs --prior)",
    "lip-delta": "(epsilon, delta)-local information privacy: smallest delta at --eps (needs --prior)",
    "lmip": "local mutual information privacy: I(X;Y) in nats (needs --prior)",
    "di": "epsilon-differential identifiability: posterior ratio bound (needs --prior)",
    "mil": "maximal information leakage: ln sum_y max_x P(y|x)",
    "pufferfish": "epsilon-local pufferfish privacy over discriminative secret pairs (needs --secrets)",
    "geo": "geo-indistinguishability: ratio bound e^(eps d(x,x')) (needs --metric)",
}


def cmd_audit(args, run: _Run) -> dict:
    c = io.load_channel(run.file(args.channel, "--channel"))
    notion = args.notion
    if notion in ("lip", "lip-delta", "lmip", "di"):
        p = io.load_prior(run.file(args.prior, f"--prior (required by '{notion}')"))
    if notion == "ldp":
        rep = auditors.audit_ldp(c)
    elif notion == "ldp-delta":
        rep = auditors.audit_ldp_delta(c, _need(args.eps, "--eps"))
    elif notion == "lip":
        rep = auditors.audit_lip(c, p)
    elif notion == "lip-delta":
        rep = auditors.audit_lip_delta(c, p, _need(args.eps, "--eps"))
    elif notion == "lmip":
        rep = auditors.audit_lmip(c, p)
    elif notion == "di":
        rep = auditors.audit_di(c, p)
    elif notion == "mil":
        rep = auditors.audit_mil(c)
    elif notion == "pufferfish":
        sm = io.load_secret_model(run.file(args.secrets, "--secrets (required by 'pufferfish')"))
        rep = auditors.audit_pufferfish(c, sm)
    elif notion == "geo":
        m = io.load_metric(run.file(args.metric, "--metric (required by 'geo')"))
        rep = auditors.audit_geo(c, m)
    else:  # pragma: no cover - argparse restricts choices
        raise LocalPrivError(f"unknown notion {notion}")
    return rep.to_dict()


# ---------------------------------------------------------------- design

_DESIGN_HELP = {
    "krr": "k-ary randomized response (local randomized response)",
    "oue": "optimized unary encoding onto all 2^k bit vectors (k <= 12)",
    "sampling": "random sampling: release truth with --p-truth, else draw from --prior",
    "geometric": "noise adding: clamped two-sided geometric noise on an integer grid",
    "geo-exp": "exponential mechanism over --metric, geo-indistinguishable at --eps",
    "mip-optimal": "convex optimization mechanism: min distortion s.t. I(X;Y) <= --eps",
    "wasserstein": "Wasserstein mechanism: pufferfish noise calibrated by W-infinity",
}


def _parse_grid(text: str) -> Alphabet:
    try:
        lo, hi = (int(v) for v in text.split(":"))
    except ValueError:
        raise LocalPrivError(f"--grid must look like LO:HI, got {text!r}") from None
    if hi < lo:
        raise LocalPrivError("--grid upper end is below lower end")
    return Alphabet.range(hi - lo + 1, lo)


def cmd_design(args, run: _Run) -> dict:
    fam = args.family
    if fam in ("krr", "oue"):
        eps = _need(args.eps, "--eps")
        make = mechanisms.make_rr if fam == "krr" else mechanisms.make_oue
        c = make(_alphabet(args), eps)
        check = auditors.audit_ldp(c)
    elif fam == "sampling":
        p = io.load_prior(run.file(args.prior, "--prior"))
        c = mechanisms.make_sampling(p, _need(args.p_truth, "--p-truth"))
        check = auditors.audit_ldp(c) if len(c.input) > 1 else None
    elif fam == "geometric":
        c = mechanisms.make_geometric(_alphabet(args), _need(args.eps, "--eps"))
        check = auditors.audit_ldp(c) if len(c.input) > 1 else None
    elif fam == "geo-exp":
        m = io.load_metric(run.file(args.metric, "--metric"))
        c = mechanisms.make_geo_exp(m, _need(args.eps, "--eps"))
        check = auditors.audit_geo(c, m)
    elif fam == "mip-optimal":
        p = io.load_prior(run.file(args.prior, "--prior"))
        d = io.load_distortion(run.file(args.distortion, "--distortion"))
        c = optimizer.design_mip_channel(p, d, _need(args.eps, "--eps"))
        check = auditors.audit_lmip(c, p)
    elif fam == "wasserstein":
        sm = io.load_secret_model(run.file(args.secrets, "--secrets"))
        grid = _parse_grid(args.grid) if args.grid else None
        c = mechanisms.make_wasserstein(sm, _need(args.eps, "--eps"), grid)
        check = auditors.audit_pufferfish(c, sm)
    else:  # pragma: no cover
        raise LocalPrivError(f"unknown family {fam}")
    result = {"family": fam, "meta": dict(c.meta),
              "audit": check.to_dict() if check else None}
    if args.out:
        io.save_channel(c, args.out)
        result["channel_path"] = str(args.out)
    else:
        result["channel"] = io.channel_to_dict(c)
    return result


# ---------------------------------------------------------------- sample / estimate

def cmd_sample(args, run: _Run) -> dict:
    c = io.load_channel(run.file(args.channel, "--channel"))
    seed = _need(args.seed, "--seed")
    n = _need(args.n, "--n")
    x = _need(args.input, "--input")
    reports = mechanisms.sample(c, x, n, seed)
    mech = args.mechanism or c.meta.get("family")
    eps = args.eps if args.eps is not None else c.meta.get("epsilon")
    result = {"input": x, "n": n, "seed": seed}
    if mech in ("krr", "oue") and eps is not None:
        if mech == "oue":
            reports = np.array([[ch == "1" for ch in r] for r in reports], dtype=np.uint8)
        batch = mechanisms.ReportBatch(mech, io.decode_float(eps), c.input, reports)
        if args.out:
            io.save_batch(batch, args.out)
            result.update(reports_path=str(args.out), sidecar_path=str(io.sidecar_path(args.out)))
        else:
            result["reports"] = batch.reports.tolist() if mech == "oue" else list(batch.reports)
        result["mechanism"] = mech
    else:
        # not a frequency-oracle channel: plain list of output symbols
        if args.out:
            Path(args.out).write_text("report\n" + "".join(f"{r}\n" for r in reports),
                                      encoding="utf-8")
            result["reports_path"] = str(args.out)
        else:
            result["reports"] = reports
        result["mechanism"] = None
    return result


def cmd_estimate(args, run: _Run) -> dict:
    path = run.file(args.reports, "--reports")
    if io.sidecar_path(path).exists():
        run.file(io.sidecar_path(path), "sidecar")
    labels = [s.strip() for s in args.alphabet.split(",")] if args.alphabet else None
    batch = io.load_batch(path, args.mechanism, args.eps, labels)
    est = mechanisms.estimate_frequencies(batch)
    return {"mechanism": batch.mechanism, "epsilon": batch.epsilon, "n": batch.n,
            "alphabet": list(batch.alphabet.symbols), "estimates": est.tolist(),
            "argmax": batch.alphabet.symbols[int(np.argmax(est))]}


# ---------------------------------------------------------------- curve / anon

def cmd_curve(args, run: _Run) -> dict:
    p = io.load_prior(run.file(args.prior, "--prior"))
    d = io.load_distortion(run.file(args.distortion, "--distortion"))
    grid_spec = _need(args.eps_grid, "--eps-grid")
    try:
        grid = [float(v) for v in grid_spec.split(",")]
    except ValueError:
        raise LocalPrivError(f"--eps-grid must be comma-separated numbers: {grid_spec!r}") from None
    curve = optimizer.tradeoff_curve(p, d, grid)
    result = {"points": [{"epsilon": pt.epsilon, "distortion": pt.distortion,
                          "iterations": pt.iterations} for pt in curve.points]}
    if args.out:
        Path(args.out).write_text(curve.to_csv(), encoding="utf-8")
        result["curve_path"] = str(args.out)
    return result


def cmd_anon(args, run: _Run) -> dict:
    path = run.file(args.dataset, "--dataset")
    quasi = [s.strip() for s in _need(args.quasi, "--quasi").split(",")]
    ds = Dataset.from_csv(path, quasi, _need(args.sensitive, "--sensitive"))
    if args.check == "check-k":
        rep = check_k_anonymity(ds, _need(args.k, "--k"))
    else:
        rep = check_l_diversity(ds, _need(args.l, "--l"))
    return rep.to_dict()


# ---------------------------------------------------------------- parser

def _common(p, *flags):
    spec = {
        "channel": (("--channel",), dict(help="channel JSON file")),
        "prior": (("--prior",), dict(help="prior JSON file")),
        "metric": (("--metric",), dict(help="metric JSON file")),
        "secrets": (("--secrets",), dict(help="secret-model JSON file")),
        "distortion": (("--distortion",), dict(help="distortion-matrix JSON file")),
        "eps": (("--eps",), dict(type=float, help="privacy budget in nats")),
        "k": (("--k",), dict(type=int, help="alphabet size (symbols 0..k-1)")),
        "alphabet": (("--alphabet",), dict(help="comma-separated symbol labels")),
        "out": (("-o", "--out"), dict(help="output file")),
    }
    for f in flags:
        names, kw = spec[f]
        p.add_argument(*names, **kw)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="localpriv",
        description="Audit and design local privacy mechanisms given as finite channels.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    audit = sub.add_parser("audit", help="tightest budget of a channel under a privacy notion",
                           description="Compute the tightest budget (and a witness) for one notion.")
    asub = audit.add_subparsers(dest="notion", required=True)
    for notion, text in _AUDIT_HELP.items():
        p = asub.add_parser(notion, help=text, description=text)
        _common(p, "channel", "prior", "metric", "secrets", "eps")
        p.set_defaults(func=cmd_audit)

    design = sub.add_parser("design", help="build a classical mechanism as a channel file",
                            description="Construct a mechanism channel and re-audit it.")
    dsub = design.add_subparsers(dest="family", required=True)
    for fam, text in _DESIGN_HELP.items():
        p = dsub.add_parser(fam, help=text, description=text)
        _common(p, "eps", "k", "alphabet", "prior", "metric", "secrets", "distortion", "out")
        p.add_argument("--p-truth", type=float, help="truthful-release probability (sampling)")
        p.add_argument("--grid", help="output grid LO:HI (wasserstein)")
        p.set_defaults(func=cmd_design)

    text = "draw privatized reports from one row of a channel (seeded PCG64, inverse CDF)"
    p = sub.add_parser("sample", help=text, description=text)
    _common(p, "channel", "eps", "out")
    p.add_argument("--input", help="true input symbol")
    p.add_argument("--n", type=int, help="number of reports")
    p.add_argument("--seed", type=int, help="generator seed (required)")
    p.add_argument("--mechanism", choices=("krr", "oue"), help="override the channel's family tag")
    p.set_defaults(func=cmd_sample)

    text = "unbiased frequency estimates from KRR / OUE reports (utility-optimized aggregation)"
    p = sub.add_parser("estimate", help=text, description=text)
    p.add_argument("--reports", help="report CSV (sidecar <name>.meta.json read if present)")
    p.add_argument("--mechanism", choices=("krr", "oue"))
    _common(p, "eps", "alphabet")
    p.set_defaults(func=cmd_estimate)

    text = "privacy-utility tradeoff: minimum distortion vs mutual-information budget"
    p = sub.add_parser("curve", help=text, description=text)
    _common(p, "prior", "distortion", "out")
    p.add_argument("--eps-grid", help="comma-separated, strictly increasing budgets (nats)")
    p.set_defaults(func=cmd_curve)

    anon = sub.add_parser("anon", help="k-anonymity / l-diversity dataset checks")
    nsub = anon.add_subparsers(dest="check", required=True)
    for check, text in (("check-k", "local k-anonymity: every equivalence class has >= k rows"),
                        ("check-l", "local l-diversity: every class has >= l distinct sensitive values")):
        p = nsub.add_parser(check, help=text, description=text)
        p.add_argument("--dataset", help="CSV file with a header row")
        p.add_argument("--quasi", help="comma-separated quasi-identifier columns")
        p.add_argument("--sensitive", help="sensitive column")
        p.add_argument("--k", type=int)
        p.add_argument("--l", type=int)
        p.set_defaults(func=cmd_anon)
    return parser


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    run = _Run()
    start = time.perf_counter()
    try:
        result = args.func(args, run)
    except NoConvergence as e:
        print(f"error: {e}", file=stderr)
        return EXIT_NUMERIC
    except (LocalPrivError, OSError) as e:
        print(f"error: {type(e).__name__}: {e}", file=stderr)
        return EXIT_INPUT
    report = CliReport(argv, run.inputs, result, duration_s=time.perf_counter() - start)
    print(report.to_json(), file=stdout)
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
