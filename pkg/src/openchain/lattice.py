"""Operator-valued objects of the open chain on the full ``2**L`` quantum space.

Operators that also act on the auxiliary space live on ``2 * 2**L`` with the
auxiliary leg as the most significant (first) tensor factor, so the 2x2
auxiliary blocks are the four ``2**L`` square sub-blocks.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import FormMismatchError, InputError, PoleError, SizeError
from .kernels import GeneralBoundary, ModelParams, TriangularBoundary
from .linalg import DIM_CAP, embed_one_site, embed_two_site, permutation_matrix, rel_residual

RIGHT = "right"
LEFT = "left"


def build_R(u, eta) -> np.ndarray:
    a, b, c = kernels.r_weights(u, eta)
    return np.array(
        [[a, 0, 0, 0], [0, b, c, 0], [0, c, b, 0], [0, 0, 0, a]],
        dtype=complex,
    )


@dataclass(frozen=True)
class MonodromyBlocks:
    u: complex
    full: np.ndarray

    @property
    def dim(self):
        return self.full.shape[0] // 2

    def block(self, i, j):
        d = self.dim
        return self.full[i * d:(i + 1) * d, j * d:(j + 1) * d]


def _check_length(params: ModelParams):
    if 2 ** (params.L + 1) > DIM_CAP:
        raise SizeError(f"L={params.L} exceeds the dimension cap")


def build_monodromy(u, params: ModelParams) -> MonodromyBlocks:
    """Ordered product ``R_a1(u - xi_1) ... R_aL(u - xi_L)``; auxiliary leg is leg 1."""
    _check_length(params)
    u = complex(u)
    n = params.L + 1
    out = np.eye(2**n, dtype=complex)
    for j, x in enumerate(params.xi, start=2):
        out = out @ embed_two_site(build_R(u - x, params.eta), 1, j, n)
    return MonodromyBlocks(u, out)


def build_inverse_monodromy_at_minus(u, params: ModelParams) -> MonodromyBlocks:
    """``T(-u)^{-1}`` from the unitarity relation ``R(x) R(-x) = (eta^2 - x^2)``."""
    _check_length(params)
    u = complex(u)
    eta = params.eta
    n = params.L + 1
    norm = 1 + 0j
    for x in params.xi:
        norm *= (eta - u - x) * (eta + u + x)
    if abs(norm) < params.guard:
        raise PoleError("T^-1(-u) normalisation", norm)
    out = np.eye(2**n, dtype=complex)
    for j in range(params.L, 0, -1):
        out = out @ embed_two_site(build_R(u + params.xi[j - 1], eta), 1, j + 1, n)
    return MonodromyBlocks(u, out / norm)


def build_K(u, bnd, side: str, eta) -> np.ndarray:
    """Scalar 2x2 boundary matrix for ``side`` in either parameterisation."""
    u, eta = complex(u), complex(eta)
    if side == RIGHT:
        s = u
    elif side == LEFT:
        s = -u - eta
    else:
        raise InputError(f"unknown side {side!r}")
    if isinstance(bnd, GeneralBoundary):
        return np.array(
            [[s * bnd.beta + bnd.alpha, s * bnd.gamma], [s * bnd.delta, -s * bnd.beta + bnd.alpha]],
            dtype=complex,
        )
    if isinstance(bnd, TriangularBoundary):
        return np.array([[s * bnd.b + bnd.a, s * bnd.c], [0, -s * bnd.b + bnd.a]], dtype=complex)
    raise InputError(f"unsupported boundary type {type(bnd).__name__}")


def K_derivative(bnd, side: str) -> np.ndarray:
    """Analytic ``dK/du`` (constant in ``u``)."""
    bnd = kernels.to_general(bnd)
    sign = 1 if side == RIGHT else -1
    return sign * np.array(bnd.constant_part, dtype=complex)


@dataclass(frozen=True)
class DoubleRowBlocks:
    """Dressed boundary monodromy ``B(u) = T(u) K(u) T(-u)^{-1}`` and its entries."""

    u: complex
    eta: complex
    full: np.ndarray

    @property
    def dim(self):
        return self.full.shape[0] // 2

    def block(self, i, j):
        d = self.dim
        return self.full[i * d:(i + 1) * d, j * d:(j + 1) * d]

    @property
    def A(self):
        return self.block(0, 0)

    @property
    def B(self):
        return self.block(0, 1)

    @property
    def C(self):
        return self.block(1, 0)

    @property
    def D(self):
        shift = self.eta / kernels._den(2 * self.u + self.eta, kernels._guard(self.eta), "D shift")
        return self.block(1, 1) - shift * self.block(0, 0)


def build_double_row(u, params: ModelParams, right) -> DoubleRowBlocks:
    u = complex(u)
    d = 2**params.L
    t = build_monodromy(u, params).full
    tinv = build_inverse_monodromy_at_minus(u, params).full
    k = np.kron(build_K(u, right, RIGHT, params.eta), np.eye(d, dtype=complex))
    return DoubleRowBlocks(u, params.eta, t @ k @ tinv)


def transfer_trace_form(u, params: ModelParams, right, left, double_row=None) -> np.ndarray:
    """``tr_a(Kbar_a(u) B_a(u))`` by block summation."""
    b = double_row or build_double_row(u, params, right)
    kb = build_K(u, left, LEFT, params.eta)
    return kb[0, 0] * b.block(0, 0) + kb[0, 1] * b.block(1, 0) + kb[1, 0] * b.block(0, 1) + kb[1, 1] * b.block(1, 1)


def transfer_triangular_form(u, params: ModelParams, right, left: TriangularBoundary, double_row=None) -> np.ndarray:
    """``kappa1 A + kappa2 D + kappa12 C``; valid for a triangular left boundary."""
    b = double_row or build_double_row(u, params, right)
    k1, k2, k12 = kernels.kappas(u, left, params.eta)
    return k1 * b.A + k2 * b.D + k12 * b.C


FORM_TOL = 1e-11


def build_transfer(u, params: ModelParams, right, left, form_tol=FORM_TOL, return_forms=False):
    """Transfer matrix ``t(u)``.

    With a triangular left boundary both assemblies are computed and must
    agree to ``form_tol`` (relative Frobenius), otherwise
    :class:`FormMismatchError` is raised.  ``return_forms=True`` returns
    ``(trace_form, triangular_form_or_None)``.
    """
    b = build_double_row(u, params, right)
    tr = transfer_trace_form(u, params, right, left, b)
    tt = None
    if isinstance(left, TriangularBoundary):
        tt = transfer_triangular_form(u, params, right, left, b)
        r = rel_residual(tr, tt)
        if r > form_tol:
            raise FormMismatchError(f"trace and triangular forms of t(u) differ by {r:.3g}", {"u": complex(u)})
    if return_forms:
        return tr, tt
    return tr


class TransferFamily:
    """Cached evaluation of ``u -> t(u)`` for fixed chain and boundary data.

    The cache is guarded by a lock; a cached read returns the very array that
    was stored, which callers must treat as read-only.
    """

    def __init__(self, params: ModelParams, right, left, cache=True):
        self.params = params
        self.right = right
        self.left = left
        self._cache = {} if cache else None
        self._lock = threading.Lock()

    def __call__(self, u) -> np.ndarray:
        u = complex(u)
        if self._cache is None:
            return build_transfer(u, self.params, self.right, self.left)
        with self._lock:
            hit = self._cache.get(u)
        if hit is not None:
            return hit
        val = build_transfer(u, self.params, self.right, self.left)
        val.setflags(write=False)
        with self._lock:
            return self._cache.setdefault(u, val)


def build_hamiltonian(params: ModelParams, right: GeneralBoundary, left: GeneralBoundary) -> np.ndarray:
    """Open-chain Hamiltonian ``sum P_{j,j+1} + Kbar_1(0)/(2 alphabar) + K'_L(0)/(4 eta alpha)``.

    Only defined for the homogeneous chain.
    """
    if not params.homogeneous:
        raise InputError("the Hamiltonian is only defined for xi = 0")
    right = kernels.to_general(right)
    left = kernels.to_general(left)
    if right.alpha == 0 or left.alpha == 0:
        raise InputError("alpha and alphabar must be nonzero")
    L, eta = params.L, params.eta
    p = permutation_matrix()
    h = np.zeros((2**L, 2**L), dtype=complex)
    for j in range(1, L):
        h += embed_two_site(p, j, j + 1, L)
    h += embed_one_site(build_K(0, left, LEFT, eta), 1, L) / (2 * left.alpha)
    h += embed_one_site(K_derivative(right, RIGHT), L, L) / (4 * eta * right.alpha)
    return h


def reference_state(L: int) -> np.ndarray:
    """All spins up: ``e_0`` of the ``2**L`` computational basis."""
    v = np.zeros(2**L, dtype=complex)
    v[0] = 1
    return v
