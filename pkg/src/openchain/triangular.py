"""Simultaneous upper-triangularization of the two boundary matrices."""
from __future__ import annotations

import cmath
from dataclasses import dataclass, field

import numpy as np

from .errors import NotTriangularizableError, NumericalError
from .kernels import GeneralBoundary, TriangularBoundary
from .lattice import LEFT, RIGHT, build_K

PROBE_U = (0.7 + 0.3j, -1.1 + 0.45j)


def constraint_value(right: GeneralBoundary, left: GeneralBoundary) -> complex:
    """Vanishes iff the two boundary matrices share an eigenvector."""
    b, g, d = right.beta, right.gamma, right.delta
    bb, gb, db = left.beta, left.gamma, left.delta
    return (db * g - d * gb) ** 2 - 4 * (b * gb - bb * g) * (db * b - d * bb)


def principal_sqrt(z) -> complex:
    """Square root with ``Re >= 0``, ties broken towards ``Im >= 0``."""
    r = cmath.sqrt(complex(z))
    if r.real < 0 or (r.real == 0 and r.imag < 0):
        r = -r
    return r


def _scale(right, left):
    vals = [right.beta, right.gamma, right.delta, left.beta, left.gamma, left.delta]
    return max(1.0, max(abs(v) for v in vals) ** 4)


def _mat(bnd: GeneralBoundary):
    return np.array(bnd.constant_part, dtype=complex)


@dataclass
class TriangularizationResult:
    M: np.ndarray
    right_tri: TriangularBoundary
    left_tri: TriangularBoundary
    lower_left_residuals: tuple
    constraint_value: complex
    printed_M: bool
    b_sign: int
    notes: list = field(default_factory=list)
    method: str = "printed"

    def to_dict(self):
        from .reports import encode

        return encode(
            {
                "M": self.M,
                "right": vars(self.right_tri),
                "left": vars(self.left_tri),
                "lower_left_residuals": list(self.lower_left_residuals),
                "constraint_value": self.constraint_value,
                "printed_M": self.printed_M,
                "b_sign": self.b_sign,
                "method": self.method,
                "notes": self.notes,
            }
        )


def _eigvec_residual(mat, v):
    """Distance of ``v`` from being an eigenvector of ``mat`` (relative)."""
    v = v / np.linalg.norm(v)
    lam = np.vdot(v, mat @ v)
    return np.linalg.norm(mat @ v - lam * v) / max(1.0, np.linalg.norm(mat))


def _candidate_vectors(kc, b):
    """Eigenvectors of ``[[beta, gamma], [delta, -beta]]`` for eigenvalue ``b``."""
    beta, gamma, delta = kc[0, 0], kc[0, 1], kc[1, 0]
    return [np.array([b + beta, delta]), np.array([gamma, b - beta])]


def _normalise(v):
    return v / v[np.argmax(np.abs(v))]


def _complete(v):
    """Pair ``v`` with the coordinate vector maximizing ``|det|``."""
    e1, e2 = np.array([1, 0], complex), np.array([0, 1], complex)
    m1 = np.column_stack([v, e1])
    m2 = np.column_stack([v, e2])
    return m1 if abs(np.linalg.det(m1)) >= abs(np.linalg.det(m2)) else m2


def triangularize(right: GeneralBoundary, left: GeneralBoundary, tol=1e-10, b_sign=None) -> TriangularizationResult:
    """Find ``M`` making ``M^-1 K M`` and ``M^-1 Kbar M`` upper triangular.

    ``b_sign`` forces the sign of ``b`` relative to the principal square root
    (``+1`` or ``-1``); by default the principal branch is tried first.  The
    closed-form matrix ``[[b + beta, delta], [delta, b + beta]]`` is used
    whenever it is invertible and its first column is a common eigenvector.
    """
    cv = constraint_value(right, left)
    scale = _scale(right, left)
    if abs(cv) > tol * scale:
        raise NotTriangularizableError(f"boundary matrices share no eigenvector (constraint = {cv:.6g})", cv)

    kc, kbc = _mat(right), _mat(left)
    nk, nkb = np.linalg.norm(kc), np.linalg.norm(kbc)
    b0 = principal_sqrt(right.beta**2 + right.gamma * right.delta)
    if right.delta == 0 and left.delta == 0 and b_sign in (None, 1 if right.beta == b0 else -1):
        # already upper triangular: nothing to do
        s = 1 if right.beta == b0 else -1
        return TriangularizationResult(np.eye(2, dtype=complex), TriangularBoundary(right.alpha, right.beta, right.gamma),
                                       TriangularBoundary(left.alpha, left.beta, left.gamma), (0.0, 0.0), cv, False, s,
                                       ["boundaries already upper triangular; M = I"], method="identity")
    signs = (1, -1) if b_sign is None else (b_sign,)
    notes = []

    chosen = None
    for s in signs:
        b = s * b0
        if nk < tol:
            # right part proportional to identity: any vector works, use the left's eigenvector
            cands = _candidate_vectors(kbc, principal_sqrt(left.beta**2 + left.gamma * left.delta))
            cands += [np.array([1, 0], complex)]
        else:
            cands = _candidate_vectors(kc, b)
        for v in cands:
            if np.linalg.norm(v) < tol * max(1.0, nk):
                continue
            if _eigvec_residual(kc, v) > 1e-9 or (nkb > 0 and _eigvec_residual(kbc, v) > 1e-9):
                continue
            chosen = (s, v)
            break
        if chosen:
            break
    if chosen is None:
        raise NumericalError("no common eigenvector found", {"constraint": cv, "b": b0, "signs": signs})
    s, v = chosen

    printed = np.array([[s * b0 + right.beta, right.delta], [right.delta, s * b0 + right.beta]], dtype=complex)
    use_printed = (
        nk >= tol
        and abs(np.linalg.det(printed)) > 1e-8 * max(1.0, np.linalg.norm(printed) ** 2)
        and _eigvec_residual(kbc, printed[:, 0]) <= 1e-9
    )
    if use_printed:
        M = printed
    else:
        M = _complete(_normalise(v))
        notes.append("closed-form M singular or not adapted; eigenvector fallback used")

    minv = np.linalg.inv(M)
    cr = minv @ kc @ M
    cl = minv @ kbc @ M
    right_tri = TriangularBoundary(right.alpha, cr[0, 0], cr[0, 1])
    left_tri = TriangularBoundary(left.alpha, cl[0, 0], cl[0, 1])

    residuals = []
    for bnd, side in ((right, RIGHT), (left, LEFT)):
        worst = 0.0
        for u in PROBE_U:
            k = build_K(u, bnd, side, 1.0)
            kt = minv @ k @ M
            worst = max(worst, abs(kt[1, 0]) / max(1.0, np.linalg.norm(k)))
        residuals.append(worst)
    return TriangularizationResult(M, right_tri, left_tri, tuple(residuals), cv, bool(use_printed), s, notes,
                                   method="printed" if use_printed else "eigenvector")


def sample_on_surface(rng: np.random.Generator, scale=1.0, max_tries=100):
    """Draw a (right, left) pair satisfying the triangularizability constraint.

    Everything except ``deltabar`` is drawn freely; ``deltabar`` is then a
    root of the (quadratic) constraint.
    """
    for _ in range(max_tries):
        z = scale * (rng.normal(size=7) + 1j * rng.normal(size=7))
        al, be, ga, de, alb, beb, gab = z
        x = be * gab - beb * ga
        coeffs = [ga**2, -2 * ga * de * gab - 4 * x * be, de**2 * gab**2 + 4 * x * de * beb]
        if abs(coeffs[0]) < 1e-3:
            continue
        roots = np.roots(coeffs)
        dbb = roots[int(rng.integers(len(roots)))]
        if not np.isfinite(dbb):
            continue
        return GeneralBoundary(al, be, ga, de), GeneralBoundary(alb, beb, gab, dbb)
    raise NumericalError("could not sample a constrained boundary pair")


def verify_parameter_map(right: GeneralBoundary, result: TriangularizationResult, left: GeneralBoundary | None = None,
                         tol=1e-10):
    """Compare the triangular parameters with ``a = alpha``, ``b^2 = beta^2 + gamma delta``, ``c = gamma + delta``."""
    from .reports import CheckReport

    def rel(x, y):
        return abs(x - y) / max(1.0, abs(y))

    rt = result.right_tri
    res = {
        "a": rel(rt.a, right.alpha),
        "b2": rel(rt.b**2, right.beta**2 + right.gamma * right.delta),
    }
    notes = []
    if result.method in ("printed", "identity"):
        res["c"] = rel(rt.c, right.gamma + right.delta)
    else:
        notes.append("c check skipped: eigenvector fallback M (c depends on column normalisation)")
    if left is not None:
        lt = result.left_tri
        res["abar"] = rel(lt.a, left.alpha)
        res["bbar2"] = rel(lt.b**2, left.beta**2 + left.gamma * left.delta)
        if result.method in ("printed", "identity"):
            res["cbar"] = rel(lt.c, left.gamma + left.delta)
    worst = max(res.values())
    return CheckReport(
        check_name="parameter_map",
        parameters={"right": vars(right), "left": vars(left) if left else None, "residuals": res},
        seed=0,
        samples=1,
        max_residual=worst,
        tolerance=tol,
        notes=notes,
    )
