"""Bethe vectors, a multistart Newton solver for the Bethe equations, and eigenpair checks."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations
from math import comb

import numpy as np
from scipy.optimize import linear_sum_assignment

from . import kernels
from .errors import InputError, PoleError, SizeError, ZeroVectorError
from .kernels import IndexSet, ModelParams, TriangularBoundary
from .lattice import build_double_row, build_transfer, reference_state
from .linalg import eigenvalues, frobenius
from .reports import CheckReport

log = logging.getLogger(__name__)

# fixed spectral points for the eigenvalue fingerprint of a state
FINGERPRINT_POINTS = (0.31 + 0.17j, -0.43 + 0.61j, 0.77 - 0.29j, -1.13 - 0.37j, 1.41 + 0.83j)
ANNULUS = (0.2, 2.0)


@dataclass(frozen=True)
class SolverConfig:
    starts: int = 100
    newton_tol: float = 1e-11
    max_iter: int = 100
    max_halvings: int = 20
    fd_step: float = 1e-6
    exclusion_tol: float = 1e-6
    max_root_modulus: float = 1e3
    degenerate_tol: float = 1e-8
    near_degenerate_tol: float = 1e-4
    dedup_tol: float = 1e-6
    seed: int = 0
    allow_large_n: bool = False
    # every second start is drawn from the wider annulus |u| <= wide_radius
    wide_radius: float = 6.0


@dataclass
class BetheState:
    N: int
    roots: tuple
    residual_norm: float
    lambda_fingerprint: tuple
    near_degenerate: bool = False
    family: int | None = None

    def to_dict(self):
        from .reports import encode

        return encode(
            {
                "N": self.N,
                "roots": list(self.roots),
                "residual_norm": self.residual_norm,
                "lambda_fingerprint": list(self.lambda_fingerprint),
                "near_degenerate": self.near_degenerate,
                "family": self.family,
            }
        )


@dataclass
class BetheVector:
    state: BetheState
    vector: np.ndarray
    trace: list = field(default_factory=list)


class BetheSolutions(list):
    """List of :class:`BetheState` carrying solver diagnostics."""

    def __init__(self, states=(), diagnostics=None):
        super().__init__(states)
        self.diagnostics = dict(diagnostics or {})


def enumerate_index_sets(N: int, max_n: int = 20):
    """All ``2**N`` subsets of ``{1..N}``, ordered by size then lexicographically."""
    if N > max_n:
        raise SizeError(f"N={N} exceeds the enumeration cap {max_n}")
    return [IndexSet(N, c) for ell in range(N + 1) for c in combinations(range(1, N + 1), ell)]


def count_check(N):
    sets = enumerate_index_sets(N)
    by_size = [sum(1 for s in sets if len(s) == ell) for ell in range(N + 1)]
    return len(sets) == 2**N and by_size == [comb(N, ell) for ell in range(N + 1)]


# ---------------------------------------------------------------------------
# admissibility

def exclusion_distance(roots, params: ModelParams, left: TriangularBoundary) -> float:
    """Smallest distance (relative to ``1 + |eta|``) of the roots to any excluded locus."""
    eta = params.eta
    vals = []
    for k, uk in enumerate(roots):
        vals += [uk, 2 * uk + eta, left.a - left.b * uk]
        for x in params.xi:
            for s1 in (1, -1):
                for s2 in (1, -1):
                    vals.append(s1 * uk + s2 * x + eta)
        for uj in roots[k + 1:]:
            vals += [uk - uj, uk + uj, uk + uj + eta, uk - uj + eta, uk - uj - eta]
    if not vals:
        return np.inf
    return min(abs(v) for v in vals) / (1 + abs(eta))


def sample_annulus(rng, n=1, lo=ANNULUS[0], hi=ANNULUS[1]):
    r = np.sqrt(rng.uniform(lo**2, hi**2, size=n))
    th = rng.uniform(0, 2 * np.pi, size=n)
    return r * np.exp(1j * th)


def admissible_probe(rng, params: ModelParams, left, roots=(), tol=1e-3, max_tries=1000):
    """Random spectral point in the sampling annulus away from every pole."""
    eta = params.eta
    for _ in range(max_tries):
        u = complex(sample_annulus(rng)[0])
        vals = [2 * u + eta, u + eta]
        vals += [s * u + x + eta for x in params.xi for s in (1, -1)]
        vals += [u - x for x in params.xi] + [u + x for x in params.xi]
        vals += [u - r for r in roots] + [u + r + eta for r in roots]
        if min(abs(v) for v in vals) > tol * (1 + abs(eta)):
            return u
    raise InputError("could not draw an admissible spectral point")


# ---------------------------------------------------------------------------
# states

def fingerprint(roots, params, right, left):
    out = []
    for p in FINGERPRINT_POINTS:
        try:
            out.append(kernels.eigenvalue_Lambda(p, roots, params, right, left))
        except PoleError:
            out.append(complex("nan"))
    return tuple(out)


def _same_multiset(r1, r2, tol):
    if len(r1) != len(r2):
        return False
    if not r1:
        return True
    a = np.asarray(r1)
    b = np.asarray(r2)
    cost = np.abs(a[:, None] - b[None, :])
    rows, cols = linear_sum_assignment(cost)
    return all(cost[i, j] <= tol * (1 + abs(a[i])) for i, j in zip(rows, cols))


def _canonical(roots):
    return tuple(sorted((complex(r) for r in roots), key=lambda z: (round(z.real, 9), round(z.imag, 9))))


def make_state(roots, params, right, left, cfg: SolverConfig = SolverConfig()) -> BetheState:
    roots = _canonical(roots)
    res = kernels.bethe_residual_norm(roots, params, right, left) if roots else 0.0
    gaps = [abs(a - b) for a, b in combinations(roots, 2)]
    near = bool(gaps) and min(gaps) < cfg.near_degenerate_tol
    return BetheState(len(roots), roots, res, fingerprint(roots, params, right, left), near)


def _fingerprints_match(f1, f2, tol=1e-9):
    a, b = np.asarray(f1), np.asarray(f2)
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        return False
    return bool(np.all(np.abs(a - b) <= tol * (1 + np.abs(a))))


def link_families(states):
    """Assign a shared ``family`` id to states with identical eigenvalue fingerprints."""
    fam = 0
    for i, s in enumerate(states):
        if s.family is not None:
            continue
        s.family = fam
        for t in states[i + 1:]:
            if t.family is None and _fingerprints_match(s.lambda_fingerprint, t.lambda_fingerprint):
                t.family = fam
        fam += 1
    return states


# ---------------------------------------------------------------------------
# Newton solver

def _residual_vec(x, params, right, left):
    return np.array(kernels.bethe_residual(x, params, right, left), dtype=complex)


def _jacobian(x, params, right, left, step):
    n = len(x)
    jac = np.empty((n, n), dtype=complex)
    for j in range(n):
        h = step * (1 + abs(x[j]))
        e = np.zeros(n, dtype=complex)
        e[j] = h
        jac[:, j] = (_residual_vec(x + e, params, right, left) - _residual_vec(x - e, params, right, left)) / (2 * h)
    return jac


def newton(x0, params, right, left, cfg: SolverConfig):
    """Damped Newton iteration; returns ``(x, status)``.

    A start is abandoned (status ``"singular"``) when the Jacobian cannot be
    solved or no step length in ``cfg.max_halvings`` halvings reduces the
    residual.
    """
    x = np.asarray(x0, dtype=complex)
    try:
        r = _residual_vec(x, params, right, left)
    except PoleError:
        return x, "pole"
    for _ in range(cfg.max_iter):
        try:
            if kernels.bethe_residual_norm(x, params, right, left) < cfg.newton_tol:
                return x, "converged"
            jac = _jacobian(x, params, right, left, cfg.fd_step)
            dx = np.linalg.solve(jac, -r)
        except (PoleError, np.linalg.LinAlgError):
            return x, "singular"
        if not np.all(np.isfinite(dx)):
            return x, "singular"
        norm0 = np.linalg.norm(r)
        lam = 1.0
        for _ in range(cfg.max_halvings + 1):
            try:
                xn = x + lam * dx
                rn = _residual_vec(xn, params, right, left)
                if np.linalg.norm(rn) <= norm0:
                    break
            except PoleError:
                pass
            lam /= 2
        else:
            return x, "singular"
        x, r = xn, rn
    try:
        if kernels.bethe_residual_norm(x, params, right, left) < cfg.newton_tol:
            return x, "converged"
    except PoleError:
        return x, "pole"
    return x, "max_iter"


def solve_bethe(N: int, params: ModelParams, right: TriangularBoundary, left: TriangularBoundary,
                cfg: SolverConfig = SolverConfig()) -> BetheSolutions:
    """Multistart Newton on the denominator-cleared Bethe equations.

    Only ``a, b`` and ``abar, bbar`` enter: the off-diagonal boundary entries
    ``c, cbar`` are never read, so one solve serves every ``c, cbar``.
    """
    if N < 0:
        raise InputError("N must be nonnegative")
    if N > params.L and not cfg.allow_large_n:
        raise InputError(f"N={N} exceeds L={params.L}; set allow_large_n to override")
    # strip c, cbar so the equations provably cannot depend on them
    right = TriangularBoundary(right.a, right.b, 0)
    left = TriangularBoundary(left.a, left.b, 0)
    diag = {"starts": 0, "converged": 0, "singular": 0, "pole": 0, "max_iter": 0,
            "excluded": 0, "degenerate": 0, "duplicates": 0}
    if N == 0:
        return BetheSolutions([make_state((), params, right, left, cfg)], diag)

    rng = np.random.default_rng(cfg.seed)
    found = []
    for i in range(cfg.starts):
        x0 = sample_annulus(rng, N, hi=ANNULUS[1] if i % 2 == 0 else cfg.wide_radius)
        diag["starts"] += 1
        x, status = newton(x0, params, right, left, cfg)
        diag[status] += 1
        if status != "converged":
            continue
        gaps = [abs(a - b) for a, b in combinations(x, 2)]
        if gaps and min(gaps) < cfg.degenerate_tol:
            diag["degenerate"] += 1
            continue
        if exclusion_distance(x, params, left) < cfg.exclusion_tol or max(abs(x)) > cfg.max_root_modulus:
            diag["excluded"] += 1
            continue
        found.append(_canonical(x))

    found.sort(key=lambda r: tuple((round(z.real, 6), round(z.imag, 6)) for z in r))
    unique = []
    for r in found:
        if any(_same_multiset(r, u, cfg.dedup_tol) for u in unique):
            diag["duplicates"] += 1
            continue
        unique.append(r)
    states = [make_state(r, params, right, left, cfg) for r in unique]
    link_families(states)
    if not states:
        log.info("no Bethe solutions for N=%d: %s", N, diag)
    return BetheSolutions(states, diag)


# ---------------------------------------------------------------------------
# vectors and verification

def b_products(roots, params, right):
    """``B(u_i)`` for each root."""
    return [build_double_row(u, params, right).B for u in roots]


def apply_B_product(bops, members, vec):
    """``prod_{i in members} B(u_i) vec`` with the product in ascending index order."""
    out = vec
    for i in reversed(members):
        out = bops[i - 1] @ out
    return out


def build_bethe_vector(state, params, right, left, order=None) -> BetheVector:
    """Sum over index sets of ``W_I prod_{i in I} B(u_i)|Omega>``.

    ``order`` optionally permutes the factor order inside each product (used
    to test that the B operators commute).
    """
    roots = state.roots if isinstance(state, BetheState) else tuple(complex(r) for r in state)
    if not isinstance(state, BetheState):
        state = BetheState(len(roots), roots, float("nan"), ())
    kernels.as_roots(roots, guard=params.guard)
    bops = b_products(roots, params, right)
    omega = reference_state(params.L)
    phi = np.zeros_like(omega)
    trace = []
    wmax = 0.0
    cmax = 0.0
    for I in enumerate_index_sets(len(roots)):
        w = kernels.bethe_weight_W(I, roots, params, right, left)
        trace.append((I, w))
        if w == 0:
            continue
        members = I.members
        if order is not None:
            members = [m for m in order if m in I.members]
            vec = omega
            for i in reversed(members):
                vec = bops[i - 1] @ vec
        else:
            vec = apply_B_product(bops, members, omega)
        contrib = w * vec
        phi = phi + contrib
        wmax = max(wmax, abs(w))
        cmax = max(cmax, float(np.linalg.norm(contrib)))
    if np.linalg.norm(phi) < 1e-12 * max(cmax, 1e-300):
        raise ZeroVectorError("Bethe vector vanishes", {"roots": roots, "max_weight": wmax})
    return BetheVector(state, phi, trace)


def verify_eigenpair(state: BetheState, params, right, left, probes=5, seed=0, eig_tol=1e-8, match_tol=1e-6,
                     dense_cap=64) -> CheckReport:
    """``||t(u) Phi - Lambda(u) Phi|| / (||t(u)||_F ||Phi||)`` at random admissible ``u``."""
    rng = np.random.default_rng(seed)
    notes = []
    try:
        phi = build_bethe_vector(state, params, right, left).vector
    except ZeroVectorError as exc:
        return CheckReport("eigenpair", {"roots": list(state.roots)}, seed, 0, float("inf"), eig_tol,
                           notes=[str(exc)])
    nphi = np.linalg.norm(phi)
    worst = 0.0
    points = []
    rows = []
    for _ in range(probes):
        u = admissible_probe(rng, params, left, state.roots)
        t = build_transfer(u, params, right, left)
        lam = kernels.eigenvalue_Lambda(u, state.roots, params, right, left)
        r = float(np.linalg.norm(t @ phi - lam * phi) / (frobenius(t) * nphi))
        entry = {"u": u, "lambda": lam, "residual": r}
        if t.shape[0] <= dense_cap:
            ev = eigenvalues(t)
            d = float(np.min(np.abs(ev - lam)) / max(1.0, abs(lam)))
            entry["dense_match"] = d
            if d > match_tol:
                notes.append(f"Lambda({u:.4g}) matches no dense eigenvalue (distance {d:.3g})")
                r = max(r, d)
        worst = max(worst, r)
        points.append(u)
        rows.append(entry)
    return CheckReport(
        "eigenpair",
        {"roots": list(state.roots), "N": state.N, "probes": rows},
        seed,
        probes,
        worst,
        eig_tol,
        notes=notes,
    )
