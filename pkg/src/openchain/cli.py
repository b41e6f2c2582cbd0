"""Command-line front end.

Subcommands ``check``, ``solve``, ``triangularize``, ``spectrum`` and
``hamiltonian``.  Exit codes: 0 success, 1 verification or solve failure,
2 input error.  Output JSON is written with sorted keys and contains no
timestamps, so the same configuration and seed give identical bytes.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys

import numpy as np

from . import __version__, kernels
from .bethe import SolverConfig, admissible_probe, solve_bethe, verify_eigenpair
from .checks import DEFAULT_TOLERANCES, SUITES, SuiteConfig, fixed_model, hamiltonian_from_transfer, run_suite
from .config import RunConfig, load_config, parse_config, parse_tol
from .errors import InputError, NotTriangularizableError, OpenChainError
from .kernels import TriangularBoundary
from .lattice import build_hamiltonian, build_transfer
from .linalg import eigenvalues, rel_residual
from .reports import encode, summarize
from .triangular import triangularize

log = logging.getLogger("openchain")

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _dump(obj) -> str:
    return json.dumps(encode(obj), sort_keys=True, indent=2) + "\n"


def _emit(text, path):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load(args) -> RunConfig:
    cfg = load_config(args.config) if args.config else parse_config({})
    if args.seed is not None:
        if not 0 <= args.seed < 2**64:
            raise InputError("--seed must be in [0, 2^64)")
        cfg.seed = args.seed
    cfg.tolerances.update(parse_tol(args.tol))
    if args.out:
        cfg.output = args.out
    return cfg


def _need(cfg, *names):
    missing = [n for n in names if getattr(cfg, n) is None]
    if missing:
        raise InputError(f"configuration is missing {', '.join(missing)}")


def _triangular_pair(cfg):
    """Boundaries in triangular gauge; general input is triangularized first."""
    if isinstance(cfg.right, TriangularBoundary) and isinstance(cfg.left, TriangularBoundary):
        return cfg.right, cfg.left, None
    tri = triangularize(kernels.to_general(cfg.right), kernels.to_general(cfg.left))
    return tri.right_tri, tri.left_tri, tri


# ---------------------------------------------------------------------------
# subcommands

def cmd_check(args) -> int:
    cfg = _load(args)
    names = tuple(n.strip() for n in args.suite.split(",") if n.strip()) if args.suite else SUITES
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise InputError(f"unknown suite names {unknown}; choose from {', '.join(SUITES)}")
    unknown_tol = set(cfg.tolerances) - set(DEFAULT_TOLERANCES)
    if unknown_tol:
        raise InputError(f"unknown tolerance names {sorted(unknown_tol)}")
    scfg = SuiteConfig(eta=cfg.eta, seed=cfg.seed, tolerances=dict(cfg.tolerances), fixtures=cfg.fixtures)
    if cfg.lengths:
        scfg.lengths = cfg.lengths
    if cfg.draws:
        scfg.draws = cfg.draws
    if cfg.right is not None or cfg.left is not None:
        _need(cfg, "right", "left")
        try:
            scfg.model = fixed_model(cfg.params, cfg.right, cfg.left)
        except NotTriangularizableError as exc:
            _emit(_dump({"error": str(exc), "constraint_value": exc.constraint_value}), cfg.output)
            return EXIT_FAIL
    reports = run_suite(names, scfg)
    out = summarize(reports)
    out["config"] = {"suites": list(names), "seed": cfg.seed, "tolerances": cfg.tolerances}
    _emit(_dump(out), cfg.output)
    for r in reports:
        status = "ok" if r.ok else "FAIL"
        log.info("%-4s %-50s %.3e (tol %.1e, %s)", status, r.check_name, r.max_residual, r.tolerance, r.kind)
    return EXIT_OK if out["summary"]["all_ok"] else EXIT_FAIL


def _coverage(states, params, right, left, rng, probes=3, tol=1e-6):
    """Fraction of the dense spectrum matched by distinct Bethe eigenvalues (min over probes)."""
    from scipy.optimize import linear_sum_assignment

    if 2**params.L > 64:
        return None
    fam = {}
    for st in states:
        fam.setdefault((st.N, st.family), st)
    if not fam:
        return 0.0
    best = None
    for _ in range(probes):
        u = admissible_probe(rng, params, left)
        ev = eigenvalues(build_transfer(u, params, right, left))
        lam = np.array([kernels.eigenvalue_Lambda(u, st.roots, params, right, left) for st in fam.values()])
        cost = np.abs(lam[:, None] - ev[None, :]) / np.maximum(1.0, np.abs(lam))[:, None]
        rows, cols = linear_sum_assignment(cost)
        n = int(np.sum(cost[rows, cols] <= tol))
        best = n if best is None else min(best, n)
    return best / 2**params.L


def cmd_solve(args) -> int:
    cfg = _load(args)
    _need(cfg, "right", "left", "N_values")
    params = cfg.params
    try:
        right, left, tri = _triangular_pair(cfg)
    except NotTriangularizableError as exc:
        _emit(_dump({"error": str(exc), "constraint_value": exc.constraint_value}), cfg.output)
        return EXIT_FAIL
    solver = SolverConfig(seed=cfg.seed, **cfg.solver)
    eig_tol = cfg.tolerances.get("eigenpair", 1e-8)
    states_out, rows, all_states = [], [], []
    failed = False
    for N in cfg.N_values:
        sols = solve_bethe(N, params, right, left, solver)
        for st in sols:
            rep = verify_eigenpair(st, params, right, left, probes=5, seed=cfg.seed, eig_tol=eig_tol)
            sid = len(states_out)
            failed |= not rep.passed
            states_out.append({"state_id": sid, **st.to_dict(), "verification": rep.to_dict()})
            all_states.append(st)
            for probe in rep.parameters["probes"]:
                u, lam = probe["u"], probe["lambda"]
                rows.append([sid, N, u.real, u.imag, lam.real, lam.imag, probe["residual"]])
        if not sols:
            log.warning("no Bethe state converged for N=%d: %s", N, sols.diagnostics)
    cover = _coverage(all_states, params, right, left, np.random.default_rng(cfg.seed))
    result = {
        "params": {"eta": params.eta, "L": params.L, "xi": list(params.xi)},
        "right": vars(right),
        "left": vars(left),
        "triangularization": tri.to_dict() if tri else None,
        "seed": cfg.seed,
        "N_values": list(cfg.N_values),
        "states": states_out,
        "spectrum_coverage": cover,
    }
    _emit(_dump(result), cfg.output)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["state_id", "N", "probe_re", "probe_im", "lambda_re", "lambda_im", "residual"])
    for row in rows:
        writer.writerow([row[0], row[1]] + [repr(float(x)) for x in row[2:]])
    if cfg.output:
        with open(_csv_path(cfg.output), "w") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    return EXIT_FAIL if failed else EXIT_OK


def _csv_path(path):
    return path[:-5] + ".csv" if path.endswith(".json") else path + ".csv"


def cmd_triangularize(args) -> int:
    cfg = _load(args)
    _need(cfg, "right", "left")
    right, left = kernels.to_general(cfg.right), kernels.to_general(cfg.left)
    tol = cfg.tolerances.get("triangular", 1e-10)
    try:
        res = triangularize(right, left, tol=tol)
    except NotTriangularizableError as exc:
        _emit(_dump({"constraint_value": exc.constraint_value, "triangularizable": False, "error": str(exc)}),
              cfg.output)
        return EXIT_FAIL
    _emit(_dump({"triangularizable": True, **res.to_dict()}), cfg.output)
    return EXIT_OK


def cmd_spectrum(args) -> int:
    cfg = _load(args)
    _need(cfg, "right", "left")
    params = cfg.params
    if 2**params.L > 64 * 64:
        raise InputError("spectrum is limited to L <= 12")
    us = cfg.u or (0.31 + 0.17j, -0.43 + 0.61j, 0.77 - 0.29j)
    out = []
    for u in us:
        ev = eigenvalues(build_transfer(u, params, cfg.right, cfg.left))
        ev = sorted(ev, key=lambda z: (round(z.real, 10), round(z.imag, 10)))
        out.append({"u": u, "eigenvalues": ev})
    _emit(_dump({"params": {"eta": params.eta, "L": params.L, "xi": list(params.xi)}, "spectra": out}), cfg.output)
    return EXIT_OK


def cmd_hamiltonian(args) -> int:
    cfg = _load(args)
    _need(cfg, "right", "left")
    params = cfg.params
    h = build_hamiltonian(params, cfg.right, cfg.left)
    ev = sorted(np.linalg.eigvals(h), key=lambda z: (round(z.real, 10), round(z.imag, 10)))
    deriv = rel_residual(h, hamiltonian_from_transfer(params, cfg.right, cfg.left))
    result = {
        "params": {"eta": params.eta, "L": params.L},
        "matrix": h,
        "eigenvalues": ev,
        "transfer_derivative_residual": deriv,
        "notes": ["residual against eta^(2L-1)/(8 alpha alphabar) t'(0); reported, not gated"],
    }
    _emit(_dump(result), cfg.output)
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="JSON run configuration")
    common.add_argument("--seed", type=int, metavar="U64", help="overrides config seed and OPENCHAIN_SEED")
    common.add_argument("--out", metavar="PATH", help="output file (default: stdout)")
    common.add_argument("--tol", action="append", metavar="NAME=VAL", help="tolerance override (repeatable)")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="openchain", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("check", parents=[common], help="run verification checks")
    p.add_argument("--suite", metavar="LIST", help=f"comma-separated subset of: {', '.join(SUITES)}")
    p.set_defaults(func=cmd_check)
    sub.add_parser("solve", parents=[common], help="solve Bethe equations and verify eigenpairs").set_defaults(
        func=cmd_solve)
    sub.add_parser("triangularize", parents=[common], help="bring both boundaries to upper-triangular form"
                   ).set_defaults(func=cmd_triangularize)
    sub.add_parser("spectrum", parents=[common], help="dense transfer-matrix eigenvalues").set_defaults(
        func=cmd_spectrum)
    sub.add_parser("hamiltonian", parents=[common], help="Hamiltonian matrix and spectrum").set_defaults(
        func=cmd_hamiltonian)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s",
                        stream=sys.stderr)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OpenChainError as exc:
        print(f"failure: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
