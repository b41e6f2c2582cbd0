"""Dense complex linear algebra used by every operator builder.

Matrices are plain ``numpy`` complex128 arrays.  The functions here add the
dimension cap, leg embeddings on tensor-product spaces, and post-condition
checks on top of LAPACK.
"""
from __future__ import annotations

import numpy as np

from .errors import InputError, NumericalError, SingularityError, SizeError

DIM_CAP = 2**13
COND_CAP = 1e12

__all__ = [
    "DIM_CAP",
    "COND_CAP",
    "as_cmatrix",
    "kron",
    "embed_two_site",
    "embed_one_site",
    "inverse",
    "eigenvalues",
    "determinant",
    "frobenius",
    "rel_residual",
    "permutation_matrix",
]


def as_cmatrix(a) -> np.ndarray:
    """Coerce to a finite 2-d complex array."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise InputError(f"expected a 2-d matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NumericalError("matrix has non-finite entries")
    return m


def _check_dim(*dims, cap=DIM_CAP):
    for d in dims:
        if d > cap:
            raise SizeError(f"dimension {d} exceeds cap {cap}")


def kron(a, b, cap=DIM_CAP) -> np.ndarray:
    a = as_cmatrix(a)
    b = as_cmatrix(b)
    _check_dim(a.shape[0] * b.shape[0], a.shape[1] * b.shape[1], cap=cap)
    return np.kron(a, b)


def permutation_matrix() -> np.ndarray:
    """The 4x4 swap operator on two qubit legs."""
    p = np.zeros((4, 4), dtype=complex)
    for i in range(2):
        for j in range(2):
            p[2 * j + i, 2 * i + j] = 1.0
    return p


def embed_two_site(g, i: int, j: int, n_legs: int, cap=DIM_CAP) -> np.ndarray:
    """Embed a 4x4 two-leg operator on legs ``i`` and ``j`` (1-based) of ``n_legs`` qubits.

    The first tensor factor of ``g`` acts on leg ``i`` and the second on leg
    ``j``; ``i > j`` and non-adjacent legs are allowed.
    """
    g = as_cmatrix(g)
    if g.shape != (4, 4):
        raise InputError("two-site operator must be 4x4")
    if not (1 <= i <= n_legs and 1 <= j <= n_legs) or i == j:
        raise InputError(f"invalid legs ({i}, {j}) for length {n_legs}")
    dim = 2**n_legs
    _check_dim(dim, cap=cap)
    rest = [k for k in range(n_legs) if k not in (i - 1, j - 1)]
    # operator on legs ordered as (i, j, rest...), then permute to natural order
    full = np.kron(g, np.eye(2 ** len(rest), dtype=complex))
    order = [i - 1, j - 1] + rest
    t = full.reshape([2] * (2 * n_legs))
    inv = np.argsort(order)
    axes = list(inv) + [n_legs + k for k in inv]
    return np.ascontiguousarray(t.transpose(axes).reshape(dim, dim))


def embed_one_site(g, i: int, n_legs: int, cap=DIM_CAP) -> np.ndarray:
    """Embed a 2x2 operator on leg ``i`` (1-based) of ``n_legs`` qubits."""
    g = as_cmatrix(g)
    if g.shape != (2, 2):
        raise InputError("one-site operator must be 2x2")
    if not 1 <= i <= n_legs:
        raise InputError(f"invalid leg {i} for length {n_legs}")
    _check_dim(2**n_legs, cap=cap)
    left = np.eye(2 ** (i - 1), dtype=complex)
    right = np.eye(2 ** (n_legs - i), dtype=complex)
    return np.kron(np.kron(left, g), right)


def frobenius(a) -> float:
    return float(np.linalg.norm(a))


def rel_residual(lhs, rhs) -> float:
    """``||lhs - rhs||_F`` relative to the larger operand norm (absolute if both vanish)."""
    scale = max(frobenius(lhs), frobenius(rhs))
    diff = frobenius(np.asarray(lhs) - np.asarray(rhs))
    return diff / scale if scale > 0 else diff


def inverse(a, cond_cap=COND_CAP):
    """Return ``(inv, residual)`` with ``residual = ||A inv - I||_F / ||I||_F``."""
    a = as_cmatrix(a)
    n, m = a.shape
    if n != m:
        raise InputError("inverse needs a square matrix")
    cond = np.linalg.cond(a)
    if not np.isfinite(cond) or cond > cond_cap:
        raise SingularityError(f"condition number {cond:.3g} above cap {cond_cap:.3g}")
    inv = np.linalg.inv(a)
    eye = np.eye(n, dtype=complex)
    residual = frobenius(a @ inv - eye) / frobenius(eye)
    return inv, residual


def eigenvalues(a, cap=DIM_CAP, trace_rtol=1e-9) -> np.ndarray:
    """All eigenvalues of a square (generally non-normal) matrix.

    Uses LAPACK's Hessenberg reduction plus shifted QR (``zgeev``).  The trace
    identity is checked on the way out.
    """
    a = as_cmatrix(a)
    n, m = a.shape
    if n != m:
        raise InputError("eigenvalues need a square matrix")
    _check_dim(n, cap=cap)
    try:
        vals = np.linalg.eigvals(a)
    except np.linalg.LinAlgError as exc:
        raise NumericalError("eigenvalue iteration did not converge", {"dim": n, "error": str(exc)}) from exc
    tr = np.trace(a)
    scale = max(1.0, float(np.sum(np.abs(vals))), abs(tr))
    if abs(np.sum(vals) - tr) > trace_rtol * scale:
        raise NumericalError(
            "eigenvalue sum does not reproduce the trace",
            {"dim": n, "trace": tr, "sum": complex(np.sum(vals))},
        )
    return vals


def determinant(a) -> complex:
    a = as_cmatrix(a)
    if a.shape[0] != a.shape[1]:
        raise InputError("determinant needs a square matrix")
    return complex(np.linalg.det(a))
