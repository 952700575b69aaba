"""Command-line verification harness.

    entgeom verify lagrangian --n 2 --points 100 --seed 7
    entgeom verify segre|minimal|flow|bracket ...
    entgeom geometry distance|length [--input FILE ...]
    entgeom sample state|unitary|maxent --n N --count C
    entgeom evolve --hamiltonian H.json --input psi.json --t 1 --dt 1e-3

Exit status: 0 if every report passes, 1 if any fails, 2 on usage errors.
The seed defaults to ``$ENTGEOM_SEED`` and then to 0.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

import numpy as np

from . import checks
from .bipartite import random_max_entangled, state_of_gamma
from .errors import EntgeomError, ParseError, ValidationError
from .realform import realify, split_hermitian, trajectory, trajectory_csv
from .states import (
    haar_unitary,
    matrix_from_json,
    matrix_to_json,
    random_state,
    vector_from_json,
    vector_to_json,
)
from .submanifold import sweep_csv

__all__ = ["main", "emit", "load_inputs", "build_parser"]

SUPPORTED_N = (2, 3, 4)
METHODS = ("explicit-euler", "rk4", "implicit-midpoint")


class UsageError(Exception):
    pass


# --------------------------------------------------------------------------
# input / output


def _load_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def load_input(path, tol=1e-10):
    """Load one JSON file as an observable, a state vector or a Gamma array.

    A matrix object is an observable unless it carries ``"kind": "gamma"``;
    a vector object is a state.  Hermiticity (observables) and unit
    normalisation (states, Gamma arrays) are enforced to ``tol``.
    """
    obj = _load_json(path)
    if not isinstance(obj, dict):
        raise ParseError(f"{path}: top level must be a JSON object")
    kind = obj.get("kind")
    try:
        if "rows" in obj and kind != "state":
            m = matrix_from_json(obj)
            kind = kind or "observable"
        else:
            m = vector_from_json(obj)
            kind = kind or "state"
    except ValueError as exc:
        raise ParseError(f"{path}: {exc}") from None

    if kind == "observable":
        if m.shape[0] != m.shape[1]:
            raise ValidationError("square", f"{path}: observable must be square, got {m.shape}")
        err = float(np.max(np.abs(m - m.conj().T)))
        if err > tol:
            raise ValidationError("hermiticity", f"{path}: max |A - A^H| = {err:.3e}")
        return m
    if kind == "state":
        nsq = float(np.vdot(m, m).real)
        if abs(nsq - 1.0) > tol:
            raise ValidationError("normalization", f"{path}: <psi|psi> = {nsq!r}")
        return m
    if kind == "gamma":
        if m.shape[0] != m.shape[1]:
            raise ValidationError("square", f"{path}: Gamma must be square, got {m.shape}")
        nsq = float(np.trace(m @ m.conj().T).real) / m.shape[0]
        if abs(nsq - 1.0) > tol:
            raise ValidationError("normalization", f"{path}: Tr(Gamma Gamma^H)/N = {nsq!r}")
        return m
    raise ParseError(f"{path}: unknown kind {kind!r}")


def load_inputs(paths, tol=1e-10):
    return [load_input(p, tol) for p in paths]


def _load_curve(path):
    obj = _load_json(path)
    try:
        samples = obj["samples"]
        return np.array([vector_from_json(s) for s in samples])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"{path}: curve file needs a 'samples' list of vectors ({exc})") from None


def _scalar(v):
    return v is None or isinstance(v, (bool, int, float, str))


def emit(reports, fmt="json", path=None):
    """Write reports as a JSON array or as CSV of their scalar fields."""
    if fmt == "json":
        text = json.dumps(list(reports), indent=2) + "\n"
    elif fmt == "csv":
        keys = []
        for r in reports:
            keys.extend(k for k, v in r.items() if _scalar(v) and k not in keys)
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(keys)
        for r in reports:
            writer.writerow(["" if r.get(k) is None else r.get(k) for k in keys])
        text = buf.getvalue()
    else:
        raise ValueError(f"unknown format {fmt!r}")
    _write(text, path)


def _write(text, path):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


# --------------------------------------------------------------------------
# argument parsing


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v <= 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {v}")
    return v


def _positive_float(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not (v > 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return v


def _seed(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}") from None
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return v


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(2)


def _common(p, n=True, points=None):
    if n:
        p.add_argument("--n", type=_positive_int, default=2, help="local dimension (default 2)")
    if points is not None:
        p.add_argument("--points", type=_positive_int, default=points)
    p.add_argument("--seed", type=_seed, default=None, help="RNG seed (default $ENTGEOM_SEED or 0)")
    p.add_argument("--tol", type=_positive_float, default=None, help="override the check tolerance")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--output", default=None, help="report path (default stdout)")
    p.add_argument("--timing", action="store_true", help="record wall_ms (breaks byte reproducibility)")


def build_parser():
    parser = _Parser(prog="entgeom", description="Geometry of entangled pure states: verification harness.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    verify = sub.add_parser("verify", help="run a named check")
    vsub = verify.add_subparsers(dest="check", required=True, parser_class=_Parser)
    _common(vsub.add_parser("lagrangian", help="maximally entangled orbit is Lagrangian"), points=100)
    _common(vsub.add_parser("segre", help="negative control: product states are symplectic"), points=100)
    p = vsub.add_parser("minimal", help="first and second volume variation, n = 2")
    _common(p)
    p.add_argument("--grid", type=_positive_int, default=32)
    p.add_argument("--epsilon", type=_positive_float, default=1e-3)
    p.add_argument("--fields", type=_positive_int, default=20, help="random normal fields")
    p.add_argument("--tangential", type=_positive_int, default=5, help="tangential fields")
    p.add_argument("--sweep", default=None, help="write an epsilon sweep CSV for the first normal field")
    p = vsub.add_parser("volume", help="quadrature volume vs Monte Carlo, n = 2")
    _common(p, n=False)
    p.add_argument("--grid", type=_positive_int, default=32)
    p.add_argument("--samples", type=_positive_int, default=200_000)
    p = vsub.add_parser("flow", help="integrated Hamiltonian flow vs exact evolution")
    _common(p)
    p.add_argument("--dt", type=_positive_float, default=1e-3)
    p.add_argument("--t", type=_positive_float, default=1.0)
    p.add_argument("--method", choices=METHODS, default="rk4")
    p.add_argument("--hamiltonian", default=None, help="Hermitian matrix JSON (default diag(1,-1,0,...))")
    p.add_argument("--input", default=None, help="initial state JSON (default random)")
    _common(vsub.add_parser("bracket", help="Poisson algebra of quadratic observables"), points=50)

    geo = sub.add_parser("geometry", help="Fubini-Study distance and curve length")
    gsub = geo.add_subparsers(dest="quantity", required=True, parser_class=_Parser)
    p = gsub.add_parser("distance")
    _common(p, points=1000)
    p.add_argument("--input", action="append", default=[], help="state JSON (give twice)")
    p = gsub.add_parser("length")
    _common(p, points=10_000)
    p.add_argument("--input", default=None, help='curve JSON {"samples": [vector, ...]}')

    p = sub.add_parser("sample", help="draw random objects, one JSON object per line")
    p.add_argument("kind", choices=("state", "unitary", "maxent"))
    p.add_argument("--n", type=_positive_int, default=2)
    p.add_argument("--count", type=_positive_int, default=1)
    p.add_argument("--seed", type=_seed, default=None)
    p.add_argument("--output", default=None)

    p = sub.add_parser("evolve", help="integrate the Schroedinger flow, CSV trajectory")
    p.add_argument("--n", type=_positive_int, default=2)
    p.add_argument("--hamiltonian", default=None)
    p.add_argument("--input", default=None, help="initial state JSON (default random)")
    p.add_argument("--t", type=_positive_float, default=1.0)
    p.add_argument("--dt", type=_positive_float, default=1e-3)
    p.add_argument("--method", choices=METHODS, default="rk4")
    p.add_argument("--seed", type=_seed, default=None)
    p.add_argument("--output", default=None)
    return parser


def _resolve_seed(args):
    if args.seed is not None:
        return args.seed
    env = os.environ.get("ENTGEOM_SEED")
    if env is None or env == "":
        return 0
    try:
        return _seed(env)
    except argparse.ArgumentTypeError as exc:
        raise UsageError(f"ENTGEOM_SEED: {exc}") from None


def _require_n(n, allowed=SUPPORTED_N):
    if n not in allowed:
        raise UsageError(f"unsupported n = {n}; supported: {', '.join(map(str, allowed))}")


def _tol(args, default):
    return default if args.tol is None else args.tol


# --------------------------------------------------------------------------
# dispatch


def _verify(args, seed):
    c = args.check
    if c == "lagrangian":
        _require_n(args.n)
        return [checks.lagrangian_check(args.n, args.points, _tol(args, 1e-10), seed, args.timing)]
    if c == "segre":
        _require_n(args.n)
        return [checks.segre_check(args.n, args.points, _tol(args, 1e-10), seed, args.timing)]
    if c == "minimal":
        _require_n(args.n, (2,))
        rep = checks.minimal_check(
            2, args.fields, args.tangential, args.grid, args.epsilon, _tol(args, 1e-2), seed=seed, timing=args.timing
        )
        if args.sweep:
            eps = [args.epsilon * f for f in (100.0, 30.0, 10.0, 3.0, 1.0)]
            _write(sweep_csv(checks.variation_sweep(eps, args.grid, seed)), args.sweep)
        return [rep]
    if c == "volume":
        return [checks.volume_check(args.grid, args.samples, _tol(args, 1e-2), seed=seed, timing=args.timing)]
    if c == "flow":
        h = load_input(args.hamiltonian) if args.hamiltonian else None
        psi = load_input(args.input) if args.input else None
        if h is None:
            _require_n(args.n)
        return [checks.flow_check(args.n, args.dt, args.t, args.method, h, psi, args.tol, seed, args.timing)]
    if c == "bracket":
        _require_n(args.n)
        return [checks.bracket_check(args.n, args.points, seed=seed, timing=args.timing)]
    raise UsageError(f"unknown check {c!r}")


def _geometry(args, seed):
    if args.quantity == "distance":
        states = load_inputs(args.input)
        if len(states) not in (0, 2):
            raise UsageError("geometry distance takes zero or two --input files")
        psi, phi = states if states else (None, None)
        if not states:
            _require_n(args.n)
        return [checks.distance_check(psi, phi, args.n, args.points, _tol(args, 1e-3), seed, args.timing)]
    samples = _load_curve(args.input) if args.input else None
    if samples is None:
        _require_n(args.n)
    return [checks.length_check(samples, args.n, args.points, _tol(args, 1e-3), seed, args.timing)]


def _sample(args, seed):
    _require_n(args.n, range(1, 17) if args.kind != "maxent" else range(2, 17))
    rng = np.random.default_rng(seed)
    lines = []
    for k in range(args.count):
        rec = {"kind": args.kind, "n": args.n, "index": k, "seed": seed}
        if args.kind == "state":
            rec["state"] = vector_to_json(random_state(args.n, rng))
        elif args.kind == "unitary":
            rec["unitary"] = matrix_to_json(haar_unitary(args.n, rng))
        else:
            g = random_max_entangled(args.n, rng)
            rec["gamma"] = dict(matrix_to_json(g), kind="gamma")
            rec["state"] = vector_to_json(state_of_gamma(g))
        lines.append(json.dumps(rec))
    _write("\n".join(lines) + "\n", args.output)


def _evolve(args, seed):
    rng = np.random.default_rng(seed)
    h = load_input(args.hamiltonian) if args.hamiltonian else checks.default_hamiltonian(args.n)
    psi = load_input(args.input) if args.input else random_state(h.shape[0], rng)
    if psi.size != h.shape[0]:
        raise UsageError(f"state dimension {psi.size} does not match Hamiltonian {h.shape}")
    q = split_hermitian(h)
    times, xs = trajectory(q, realify(psi), args.t, args.dt, args.method)
    _write(trajectory_csv(q, times, xs), args.output)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        seed = _resolve_seed(args)
        if args.command == "sample":
            _sample(args, seed)
            return 0
        if args.command == "evolve":
            _evolve(args, seed)
            return 0
        reports = _verify(args, seed) if args.command == "verify" else _geometry(args, seed)
    except (UsageError, EntgeomError, ValueError) as exc:
        msg = " ".join(str(exc).split())
        sys.stderr.write(f"entgeom: error: {msg}\n")
        return 2
    try:
        emit(reports, args.format, args.output)
    except OSError as exc:
        sys.stderr.write(f"entgeom: error: cannot write report: {exc.strerror}\n")
        return 2
    return 0 if all(r["pass"] for r in reports) else 1


if __name__ == "__main__":
    sys.exit(main())
