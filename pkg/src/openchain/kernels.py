"""Scalar functions of the open XXX chain.

Everything here is a pure rational function of complex arguments: R-matrix
weights, exchange kernels of the reflection algebra, boundary weights,
pseudo-vacuum eigenvalues and their dressed versions, the coefficients in the
actions of A, D and C on products of B operators, Bethe-vector weights, the
transfer-matrix eigenvalue and the Bethe equations.  Every denominator passes
through a pole guard so evaluation at (or next to) a pole raises
:class:`~openchain.errors.PoleError` instead of returning a huge number.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import prod
from typing import Sequence

from .errors import InputError, PoleError

POLE_GUARD = 1e-8


@dataclass(frozen=True)
class ModelParams:
    """Crossing parameter ``eta``, chain length ``L`` and inhomogeneities ``xi``."""

    eta: complex
    L: int
    xi: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "eta", complex(self.eta))
        xi = tuple(complex(x) for x in self.xi) if self.xi else (0j,) * self.L
        object.__setattr__(self, "xi", xi)
        if abs(self.eta) == 0:
            raise InputError("eta must be nonzero")
        if self.L < 1:
            raise InputError("L must be positive")
        if len(self.xi) != self.L:
            raise InputError(f"expected {self.L} inhomogeneities, got {len(self.xi)}")

    @property
    def guard(self) -> float:
        return POLE_GUARD * (1 + abs(self.eta))

    @property
    def homogeneous(self) -> bool:
        return all(x == 0 for x in self.xi)


@dataclass(frozen=True)
class GeneralBoundary:
    """Four-parameter scalar solution ``alpha + u [[beta, gamma], [delta, -beta]]``."""

    alpha: complex
    beta: complex = 0j
    gamma: complex = 0j
    delta: complex = 0j

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma", "delta"):
            object.__setattr__(self, name, complex(getattr(self, name)))

    @property
    def constant_part(self):
        """The traceless matrix multiplying ``u`` (right) or ``-(u+eta)`` (left)."""
        return ((self.beta, self.gamma), (self.delta, -self.beta))


@dataclass(frozen=True)
class TriangularBoundary:
    """Upper-triangular boundary data ``(a, b, c)``."""

    a: complex
    b: complex = 0j
    c: complex = 0j

    def __post_init__(self):
        for name in ("a", "b", "c"):
            object.__setattr__(self, name, complex(getattr(self, name)))

    def with_c(self, c) -> "TriangularBoundary":
        return TriangularBoundary(self.a, self.b, c)


def to_general(bnd) -> GeneralBoundary:
    """A triangular boundary is the general one with ``delta = 0`` (either side)."""
    if isinstance(bnd, TriangularBoundary):
        return GeneralBoundary(bnd.a, bnd.b, bnd.c, 0)
    return bnd


@dataclass(frozen=True)
class IndexSet:
    """Strictly increasing subset of ``{1, ..., n_max}``."""

    n_max: int
    members: tuple = ()

    def __post_init__(self):
        m = tuple(int(i) for i in self.members)
        if any(b <= a for a, b in zip(m, m[1:])):
            raise InputError(f"index set {m} is not strictly increasing")
        if m and (m[0] < 1 or m[-1] > self.n_max):
            raise InputError(f"index set {m} not contained in 1..{self.n_max}")
        object.__setattr__(self, "members", m)

    def complement(self) -> "IndexSet":
        return IndexSet(self.n_max, tuple(i for i in range(1, self.n_max + 1) if i not in self.members))

    def union(self, *extra) -> "IndexSet":
        return IndexSet(self.n_max, tuple(sorted(set(self.members) | set(extra))))

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, item):
        return item in self.members

    def select(self, roots):
        """The roots labelled by this set, in index order."""
        return [roots[i - 1] for i in self.members]


def _den(x, guard, name):
    x = complex(x)
    if abs(x) < guard:
        raise PoleError(name, x)
    return x


def _guard(eta):
    return POLE_GUARD * (1 + abs(eta))


def as_roots(roots, pairwise_distinct=True, guard=POLE_GUARD) -> tuple:
    """Normalise a root list to a tuple of complex numbers."""
    r = tuple(complex(x) for x in roots)
    if pairwise_distinct:
        for i, j in combinations(range(len(r)), 2):
            if abs(r[i] - r[j]) < guard:
                raise InputError(f"roots {i + 1} and {j + 1} coincide")
    return r


# ---------------------------------------------------------------------------
# R-matrix weights and exchange kernels

def r_weights(u, eta):
    """Return the three Boltzmann weights ``(u + eta, u, eta)``."""
    u = complex(u)
    eta = complex(eta)
    return u + eta, u, eta


def f_kernel(u, v, eta):
    g = _guard(eta)
    return (u - v - eta) * (u + v) / (_den(u + v + eta, g, "f") * _den(u - v, g, "f"))


def h_kernel(u, v, eta):
    g = _guard(eta)
    return (u - v + eta) * (u + v + 2 * eta) / (_den(u - v, g, "h") * _den(u + v + eta, g, "h"))


def g_kernel(u, v, eta):
    gd = _guard(eta)
    return 2 * eta * v / (_den(2 * v + eta, gd, "g") * _den(u - v, gd, "g"))


def w_kernel(u, v, eta):
    return -eta / _den(u + v + eta, _guard(eta), "w")


def k_kernel(u, v, eta):
    g = _guard(eta)
    return -2 * eta * (u + eta) / (_den(u - v, g, "k") * _den(2 * u + eta, g, "k"))


def n_kernel(u, v, eta):
    g = _guard(eta)
    den = _den(u + v + eta, g, "n") * _den(2 * v + eta, g, "n") * _den(2 * u + eta, g, "n")
    return 4 * v * eta * (u + eta) / den


def exchange_kernels(u, v, eta) -> dict:
    """Kernels of the A-B and D-B exchange relations: f, h, g, w, k, n."""
    u, v, eta = complex(u), complex(v), complex(eta)
    return {
        "f": f_kernel(u, v, eta),
        "h": h_kernel(u, v, eta),
        "g": g_kernel(u, v, eta),
        "w": w_kernel(u, v, eta),
        "k": k_kernel(u, v, eta),
        "n": n_kernel(u, v, eta),
    }


def cb_kernels(u, v, eta) -> dict:
    """Kernels m, l, p, q, y, z of the [C(u), B(v)] expansion."""
    u, v, eta = complex(u), complex(v), complex(eta)
    gd = _guard(eta)
    s = _den(u + v + eta, gd, "cb")
    d = _den(u - v, gd, "cb")
    tu = _den(2 * u + eta, gd, "cb")
    tv = _den(2 * v + eta, gd, "cb")
    return {
        "m": 2 * eta * u * (u - v + eta) / (tu * s * d),
        "l": -2 * eta**2 * u / (tu * tv * d),
        "q": eta * (u + v) / (s * d),
        "p": -2 * eta * u / (tu * d),
        "y": -(eta**2) / (s * tv),
        "z": -eta / s,
    }


def z_kernels(u, xi_, xj, eta) -> dict:
    """The Z11, Z12, Z22 weights entering the pair terms of the C action.

    ``Z12`` is not symmetric; ``Z12(u, xj, xi)`` is obtained by swapping the
    last two arguments.
    """
    u, xi_, xj, eta = complex(u), complex(xi_), complex(xj), complex(eta)
    gd = _guard(eta)
    common = (
        _den(u + xi_ + eta, gd, "Z") * _den(u + xj + eta, gd, "Z") * _den(u - xi_, gd, "Z") * _den(u - xj, gd, "Z")
    )
    sij = _den(xi_ + xj + eta, gd, "Z")
    ti = _den(2 * xi_ + eta, gd, "Z")
    z11 = 8 * eta**2 * xi_ * xj * (xi_ + xj) * (u * u - xi_ * xj + eta * u) / (ti * _den(2 * xj + eta, gd, "Z") * sij * common)
    z12 = 4 * eta**2 * xi_ * (xj - xi_ + eta) * (u * u + eta * u + xi_ * xj + eta * xi_) / (
        ti * _den(xi_ - xj, gd, "Z12") * common
    )
    z22 = 2 * eta**2 * (xi_ + xj + 2 * eta) * (u * u - (xi_ + eta) * (xj + eta) + eta * u) / (sij * common)
    return {"Z11": z11, "Z12": z12, "Z22": z22}


# ---------------------------------------------------------------------------
# Boundary weights

def kappas(u, left: TriangularBoundary, eta):
    """Coefficients of A, D and C in the transfer matrix (triangular gauge)."""
    u, eta = complex(u), complex(eta)
    k1 = 2 * (u + eta) / _den(2 * u + eta, _guard(eta), "kappa1") * (left.a - left.b * u)
    k2 = (u + eta) * left.b + left.a
    k12 = -(u + eta) * left.c
    return k1, k2, k12


def xi_factor(u, left: TriangularBoundary, eta):
    """Boundary factor on the right-hand side of the Bethe equations (independent of ``c``)."""
    u, eta = complex(u), complex(eta)
    gd = _guard(eta)
    num = (2 * u + eta) * (left.b * (u + eta) + left.a)
    return num / (2 * _den(u, gd, "Xi") * _den(left.a - left.b * u, gd, "Xi"))


def boundary_kernels(u, left: TriangularBoundary, eta) -> dict:
    k1, k2, k12 = kappas(u, left, eta)
    return {"kappa1": k1, "kappa2": k2, "kappa12": k12, "Xi": xi_factor(u, left, eta)}


# ---------------------------------------------------------------------------
# Pseudo-vacuum and dressed eigenvalues

def lambda1(u, params: ModelParams, right: TriangularBoundary):
    u, eta, gd = complex(u), params.eta, params.guard
    out = right.a + right.b * u
    for x in params.xi:
        out *= (u - x + eta) / _den(-u - x + eta, gd, "Lambda1")
    return out


def lambda2(u, params: ModelParams, right: TriangularBoundary):
    u, eta, gd = complex(u), params.eta, params.guard
    out = 2 * u * (right.a - right.b * (u + eta)) / _den(2 * u + eta, gd, "Lambda2")
    for x in params.xi:
        out *= (u + x) * (u - x) / (_den(u + x + eta, gd, "Lambda2") * _den(-u - x + eta, gd, "Lambda2"))
    return out


def vacuum_lambdas(u, params: ModelParams, right: TriangularBoundary):
    """Eigenvalues of A(u) and D(u) on the all-up reference state."""
    return lambda1(u, params, right), lambda2(u, params, right)


def dressed_lambdas(u, xs: Sequence, params: ModelParams, right: TriangularBoundary):
    """Vacuum eigenvalues multiplied by ``prod f(u, x)`` and ``prod h(u, x)``."""
    eta = params.eta
    l1, l2 = vacuum_lambdas(u, params, right)
    return (
        l1 * prod((f_kernel(u, x, eta) for x in xs), start=1 + 0j),
        l2 * prod((h_kernel(u, x, eta) for x in xs), start=1 + 0j),
    )


def _without(xs, *positions):
    return [x for i, x in enumerate(xs) if i not in positions]


def _mn_parts(u, xs, k, params, right):
    """The four products making up ``(M_k, N_k)``: ``(g L1, w L2)`` and ``(k L2, n L1)``."""
    xk = xs[k]
    l1, l2 = dressed_lambdas(xk, _without(xs, k), params, right)
    ker = exchange_kernels(u, xk, params.eta)
    return (ker["g"] * l1, ker["w"] * l2), (ker["k"] * l2, ker["n"] * l1)


def _f_parts(u, xs, i, j, params, right):
    eta = params.eta
    rest = _without(xs, i, j)
    a1, a2 = dressed_lambdas(xs[i], rest, params, right)
    b1, b2 = dressed_lambdas(xs[j], rest, params, right)
    zij = z_kernels(u, xs[i], xs[j], eta)
    z12_swapped = z_kernels(u, xs[j], xs[i], eta)["Z12"]
    return [a1 * zij["Z11"] * b1, a1 * zij["Z12"] * b2, a2 * z12_swapped * b1, a2 * zij["Z22"] * b2]


def offdiag_MN(u, xs: Sequence, k: int, params: ModelParams, right: TriangularBoundary):
    """Coefficients ``(M_k, N_k)`` of ``B(u)|B(xs without xs[k])>`` in the A and D actions.

    ``k`` is a 0-based position in ``xs``.
    """
    m_parts, n_parts = _mn_parts(u, xs, k, params, right)
    return sum(m_parts), sum(n_parts)


def creation_G(u, xs: Sequence, i: int, params: ModelParams, right: TriangularBoundary):
    """Coefficient of ``|B(xs without xs[i])>`` in ``C(u)|B(xs)>`` (0-based ``i``)."""
    eta = params.eta
    xi_ = xs[i]
    rest = _without(xs, i)
    lu1, lu2 = dressed_lambdas(u, rest, params, right)
    lx1, lx2 = dressed_lambdas(xi_, rest, params, right)
    c = cb_kernels(u, xi_, eta)
    return lu1 * ((c["m"] + c["l"]) * lx1 + c["p"] * lx2) + lu2 * ((c["q"] + c["y"]) * lx1 + c["z"] * lx2)


def creation_F(u, xs: Sequence, i: int, j: int, params: ModelParams, right: TriangularBoundary):
    """Coefficient of ``B(u)|B(xs without xs[i], xs[j])>`` in ``C(u)|B(xs)>`` (0-based, ``i < j``)."""
    if not i < j:
        raise InputError("creation_F needs i < j")
    return sum(_f_parts(u, xs, i, j, params, right))


# ---------------------------------------------------------------------------
# Bethe vectors, eigenvalue and Bethe equations

def bethe_weight_W(I: IndexSet, roots: Sequence, params: ModelParams, right, left: TriangularBoundary):
    """Weight of ``prod_{i in I} B(u_i)|Omega>`` in the Bethe vector."""
    roots = as_roots(roots, guard=params.guard)
    if I.n_max != len(roots):
        raise InputError("index set and root list sizes differ")
    eta, gd = params.eta, params.guard
    comp = I.complement().members
    if not comp:
        return 1 + 0j
    if left.c == 0:
        return 0j
    num = 1 + 0j
    for i in comp:
        ui = roots[i - 1]
        factor = lambda2(ui, params, right) * left.c * (2 * ui + eta) / (2 * _den(left.b * ui - left.a, gd, "W"))
        for k, uk in enumerate(roots, start=1):
            if k != i:
                factor *= h_kernel(ui, uk, eta)
        num *= factor
    den = 1 + 0j
    for j, k in combinations(comp, 2):
        den *= h_kernel(roots[j - 1], roots[k - 1], eta) * f_kernel(roots[j - 1], roots[k - 1], eta)
    return num / _den(den, gd * gd, "W")


def eigenvalue_Lambda(u, roots: Sequence, params: ModelParams, right, left: TriangularBoundary):
    """Transfer-matrix eigenvalue carried by a Bethe vector with the given roots."""
    eta = params.eta
    k1, k2, _ = kappas(u, left, eta)
    l1, l2 = dressed_lambdas(u, roots, params, right)
    return k1 * l1 + k2 * l2


def bethe_residual_terms(roots: Sequence, params: ModelParams, right, left: TriangularBoundary):
    """The two sides ``(lhs_k, rhs_k)`` of each Bethe equation with denominators cleared."""
    eta = params.eta
    roots = tuple(complex(x) for x in roots)
    out = []
    for k, uk in enumerate(roots):
        others = roots[:k] + roots[k + 1:]
        lhs = lambda1(uk, params, right) * prod((f_kernel(uk, x, eta) for x in others), start=1 + 0j)
        rhs = (
            xi_factor(uk, left, eta)
            * lambda2(uk, params, right)
            * prod((h_kernel(uk, x, eta) for x in others), start=1 + 0j)
        )
        out.append((lhs, rhs))
    return out


def bethe_residual(roots: Sequence, params: ModelParams, right, left: TriangularBoundary):
    """Residual component ``k``: ``Lambda1(u_k) prod f - Xi(u_k) Lambda2(u_k) prod h``."""
    return [lhs - rhs for lhs, rhs in bethe_residual_terms(roots, params, right, left)]


def bethe_residual_norm(roots: Sequence, params: ModelParams, right, left: TriangularBoundary) -> float:
    """Largest residual component, each scaled by the magnitudes of its two sides."""
    worst = 0.0
    for lhs, rhs in bethe_residual_terms(roots, params, right, left):
        scale = abs(lhs) + abs(rhs)
        r = abs(lhs - rhs) / scale if scale > 0 else 0.0
        worst = max(worst, r)
    return worst


# ---------------------------------------------------------------------------
# Coefficients of the unwanted terms in (t(u) - Lambda(u)) Phi

def coef1_terms(u, I: IndexSet, roots, params: ModelParams, right, left: TriangularBoundary):
    """Individual contributions whose sum is the coefficient of ``Lambda1^l(u, u_I)|B(u_I)>``."""
    roots = as_roots(roots, guard=params.guard)
    eta = params.eta
    comp = I.complement().members
    if not comp:
        return []
    k1, _, k12 = kappas(u, left, eta)
    u_I = I.select(roots)
    w_I = bethe_weight_W(I, roots, params, right, left)
    terms = [k1 * w_I, -k1 * w_I * prod((f_kernel(u, roots[j - 1], eta) for j in comp), start=1 + 0j)]
    for j in comp:
        uj = roots[j - 1]
        l1, l2 = dressed_lambdas(uj, u_I, params, right)
        c = cb_kernels(u, uj, eta)
        w_j = bethe_weight_W(I.union(j), roots, params, right, left)
        terms.append(k12 * w_j * (c["m"] + c["l"]) * l1)
        terms.append(k12 * w_j * c["p"] * l2)
    return terms


def proof_coef1(u, I: IndexSet, roots, params: ModelParams, right, left: TriangularBoundary):
    return sum(coef1_terms(u, I, roots, params, right, left), 0j)


def coef_B_uI(u, I: IndexSet, roots, params, right, left):
    """Full coefficient of ``|B(u_I)>`` in ``(t(u) - Lambda(u)) Phi`` (Lambda1 and Lambda2 parts together)."""
    roots = as_roots(roots, guard=params.guard)
    eta = params.eta
    k1, k2, k12 = kappas(u, left, eta)
    u_I = I.select(roots)
    l1, l2 = dressed_lambdas(u, u_I, params, right)
    val = bethe_weight_W(I, roots, params, right, left) * (k1 * l1 + k2 * l2 - eigenvalue_Lambda(u, roots, params, right, left))
    for j in I.complement():
        J = I.union(j)
        xs = J.select(roots)
        val += k12 * bethe_weight_W(J, roots, params, right, left) * creation_G(u, xs, J.members.index(j), params, right)
    return val


def x_terms(u, I: IndexSet, roots, params: ModelParams, right, left: TriangularBoundary):
    """Elementary products whose sum is the coefficient of ``B(u)|B(u_I)>`` in ``(t(u) - Lambda(u)) Phi``."""
    roots = as_roots(roots, guard=params.guard)
    eta = params.eta
    k1, k2, k12 = kappas(u, left, eta)
    comp = I.complement().members
    terms = []
    for j in comp:
        J = I.union(j)
        w = bethe_weight_W(J, roots, params, right, left)
        m_parts, n_parts = _mn_parts(u, J.select(roots), J.members.index(j), params, right)
        terms += [w * k1 * m for m in m_parts] + [w * k2 * n for n in n_parts]
    for j, k in combinations(comp, 2):
        J = I.union(j, k)
        w = bethe_weight_W(J, roots, params, right, left)
        parts = _f_parts(u, J.select(roots), J.members.index(j), J.members.index(k), params, right)
        terms += [k12 * w * f for f in parts]
    return terms


def proof_X(u, I: IndexSet, roots, params: ModelParams, right, left: TriangularBoundary):
    return sum(x_terms(u, I, roots, params, right, left), 0j)


def pp_L(u, uj, params: ModelParams, left: TriangularBoundary):
    """Single-root weight of the reduced form of the B(u)-coefficient."""
    eta, gd = params.eta, params.guard
    k1, k2, _ = kappas(u, left, eta)
    ker = exchange_kernels(u, uj, eta)
    tail = (left.b * uj - left.a) / (_den(2 * uj + eta, gd, "L") * _den(uj + eta, gd, "L"))
    return 2 * (k1 * ker["g"] + k2 * ker["n"]) * xi_factor(uj, left, eta) * tail


def pp_Q(u, uj, ul, params: ModelParams, left: TriangularBoundary):
    """Pair weight of the reduced form of the B(u)-coefficient."""
    eta, gd = params.eta, params.guard
    z11 = z_kernels(u, uj, ul, eta)["Z11"]
    num = (left.b * uj - left.a) * (left.b * ul - left.a) * (uj + ul + 2 * eta)
    den = _den(2 * uj + eta, gd, "Q") * _den(2 * ul + eta, gd, "Q") * _den(uj + ul, gd, "Q")
    return -4 * z11 * xi_factor(uj, left, eta) * xi_factor(ul, left, eta) * num / den


def pp_terms(u, I: IndexSet, roots, params: ModelParams, right, left: TriangularBoundary):
    """Contributions to the reduced (on-shell) form of the B(u)-coefficient."""
    roots = as_roots(roots, guard=params.guard)
    eta = params.eta
    comp = I.complement().members
    fjk = {(j, k): f_kernel(roots[j - 1], roots[k - 1], eta) for j in comp for k in comp if j != k}
    hjk = {(j, k): h_kernel(roots[j - 1], roots[k - 1], eta) for j in comp for k in comp if j != k}
    terms = []
    for j in comp:
        others = [k for k in comp if k != j]
        lj = pp_L(u, roots[j - 1], params, left)
        terms.append(lj * prod((hjk[j, k] for k in others), start=1 + 0j))
        terms.append(-lj * prod((fjk[j, k] for k in others), start=1 + 0j))
    for j in comp:
        for l in comp:
            if j == l:
                continue
            rest = [k for k in comp if k not in (j, l)]
            uj, ul = roots[j - 1], roots[l - 1]
            cj, cl = -uj - eta, -ul - eta
            ff = prod((fjk[j, k] * fjk[l, k] for k in rest), start=1 + 0j)
            hh = prod((hjk[j, k] * hjk[l, k] for k in rest), start=1 + 0j)
            fh = prod((fjk[j, k] * hjk[l, k] for k in rest), start=1 + 0j)
            hf = prod((hjk[j, k] * fjk[l, k] for k in rest), start=1 + 0j)
            terms.append(0.5 * pp_Q(u, cj, cl, params, left) * ff)
            terms.append(0.5 * pp_Q(u, uj, ul, params, left) * hh)
            terms.append(0.5 * pp_Q(u, cj, ul, params, left) * fh)
            terms.append(0.5 * pp_Q(u, uj, cl, params, left) * hf)
    return terms


def proof_X_reduced(u, I: IndexSet, roots, params: ModelParams, right, left: TriangularBoundary):
    return sum(pp_terms(u, I, roots, params, right, left), 0j)


def relative_sum(terms) -> float:
    """``|sum(terms)|`` relative to ``sum(|terms|)``; zero for an empty list."""
    scale = sum(abs(t) for t in terms)
    return abs(sum(terms, 0j)) / scale if scale > 0 else 0.0
