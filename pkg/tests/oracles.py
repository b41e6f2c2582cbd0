"""Independent reference implementations used only by the tests.

Scalar formulas are transcribed again, from scratch, in exact sympy
arithmetic.  Lattice objects are rebuilt by explicit index bookkeeping on
computational basis states, and ``T(-u)^-1`` by dense inversion, so none of
the package's embedding or unitarity shortcuts are reused.
"""
from itertools import combinations

import numpy as np
import sympy as sp

# ---------------------------------------------------------------------------
# exact scalar kernels


def f(u, v, e):
    return (u - v - e) * (u + v) / ((u + v + e) * (u - v))


def h(u, v, e):
    return (u - v + e) * (u + v + 2 * e) / ((u - v) * (u + v + e))


def g(u, v, e):
    return 2 * e * v / ((2 * v + e) * (u - v))


def w(u, v, e):
    return -e / (u + v + e)


def k(u, v, e):
    return -2 * e * (u + e) / ((u - v) * (2 * u + e))


def n(u, v, e):
    return 4 * v * e * (u + e) / ((u + v + e) * (2 * v + e) * (2 * u + e))


def m(u, v, e):
    return 2 * e * u * (u - v + e) / ((2 * u + e) * (u + v + e) * (u - v))


def l_(u, v, e):
    return -2 * e**2 * u / ((2 * u + e) * (2 * v + e) * (u - v))


def q(u, v, e):
    return e * (u + v) / ((u + v + e) * (u - v))


def p(u, v, e):
    return -2 * e * u / ((2 * u + e) * (u - v))


def y(u, v, e):
    return -e**2 / ((u + v + e) * (2 * v + e))


def z(u, v, e):
    return -e / (u + v + e)


def Z11(u, a, b, e):
    return 8 * e**2 * a * b * (a + b) * (u**2 - a * b + e * u) / (
        (2 * a + e) * (2 * b + e) * (a + b + e) * (u + a + e) * (u + b + e) * (u - a) * (u - b))


def Z12(u, a, b, e):
    return 4 * e**2 * a * (b - a + e) * (u**2 + e * u + a * b + e * a) / (
        (2 * a + e) * (a - b) * (u + a + e) * (u + b + e) * (u - a) * (u - b))


def Z22(u, a, b, e):
    return 2 * e**2 * (a + b + 2 * e) * (u**2 - (a + e) * (b + e) + e * u) / (
        (a + b + e) * (u + a + e) * (u + b + e) * (u - a) * (u - b))


def Lam1(u, e, xi, a, b):
    out = a + b * u
    for x in xi:
        out *= (u - x + e) / (-u - x + e)
    return out


def Lam2(u, e, xi, a, b):
    out = 2 * u * (a - b * (u + e)) / (2 * u + e)
    for x in xi:
        out *= (u + x) * (u - x) / ((u + x + e) * (-u - x + e))
    return out


def Lam1l(u, xs, e, xi, a, b):
    out = Lam1(u, e, xi, a, b)
    for x in xs:
        out *= f(u, x, e)
    return out


def Lam2l(u, xs, e, xi, a, b):
    out = Lam2(u, e, xi, a, b)
    for x in xs:
        out *= h(u, x, e)
    return out


def kap(u, e, ab, bb, cb):
    return 2 * (u + e) * (ab - bb * u) / (2 * u + e), (u + e) * bb + ab, -(u + e) * cb


def Xi(u, e, ab, bb):
    return (2 * u + e) * (bb * (u + e) + ab) / (2 * u * (ab - bb * u))


def G(u, xs, i, e, xi, a, b):
    rest = [x for j, x in enumerate(xs) if j != i]
    x = xs[i]
    return (Lam1l(u, rest, e, xi, a, b) * ((m(u, x, e) + l_(u, x, e)) * Lam1l(x, rest, e, xi, a, b)
                                           + p(u, x, e) * Lam2l(x, rest, e, xi, a, b))
            + Lam2l(u, rest, e, xi, a, b) * ((q(u, x, e) + y(u, x, e)) * Lam1l(x, rest, e, xi, a, b)
                                             + z(u, x, e) * Lam2l(x, rest, e, xi, a, b)))


def F(u, xs, i, j, e, xi, a, b):
    rest = [x for t, x in enumerate(xs) if t not in (i, j)]
    xi_, xj = xs[i], xs[j]
    A1, A2 = Lam1l(xi_, rest, e, xi, a, b), Lam2l(xi_, rest, e, xi, a, b)
    B1, B2 = Lam1l(xj, rest, e, xi, a, b), Lam2l(xj, rest, e, xi, a, b)
    return (A1 * (Z11(u, xi_, xj, e) * B1 + Z12(u, xi_, xj, e) * B2)
            + A2 * (Z12(u, xj, xi_, e) * B1 + Z22(u, xi_, xj, e) * B2))


def W(I, us, e, xi, a, b, ab, bb, cb):
    """Weight of the product over index set ``I`` (1-based tuple)."""
    N = len(us)
    comp = [i for i in range(1, N + 1) if i not in I]
    num = 1
    for i in comp:
        ui = us[i - 1]
        t = Lam2(ui, e, xi, a, b) * cb * (2 * ui + e) / (2 * (bb * ui - ab))
        for kk in range(1, N + 1):
            if kk != i:
                t *= h(ui, us[kk - 1], e)
        num *= t
    den = 1
    for j, kk in combinations(comp, 2):
        den *= h(us[j - 1], us[kk - 1], e) * f(us[j - 1], us[kk - 1], e)
    return num / den


def Lambda(u, us, e, xi, a, b, ab, bb, cb):
    k1, k2, _ = kap(u, e, ab, bb, cb)
    return k1 * Lam1l(u, us, e, xi, a, b) + k2 * Lam2l(u, us, e, xi, a, b)


def exact(x):
    return sp.nsimplify(x) if not isinstance(x, sp.Basic) else x


# ---------------------------------------------------------------------------
# brute-force lattice


def R_np(u, e):
    return np.array([[u + e, 0, 0, 0], [0, u, e, 0], [0, e, u, 0], [0, 0, 0, u + e]], dtype=complex)


def two_leg(gate, i, j, n):
    """``gate`` on legs ``i, j`` (0-based, any order) of ``n`` qubits, by looping over basis states."""
    dim = 2**n
    g4 = gate.reshape(2, 2, 2, 2)
    out = np.zeros((dim, dim), dtype=complex)
    for col in range(dim):
        bits = [(col >> (n - 1 - t)) & 1 for t in range(n)]
        for oi in range(2):
            for oj in range(2):
                amp = g4[oi, oj, bits[i], bits[j]]
                if amp == 0:
                    continue
                nb = list(bits)
                nb[i], nb[j] = oi, oj
                out[int("".join(map(str, nb)), 2), col] += amp
    return out


def monodromy(u, e, xi):
    n = len(xi) + 1
    out = np.eye(2**n, dtype=complex)
    for site, x in enumerate(xi, start=1):
        out = out @ two_leg(R_np(u - x, e), 0, site, n)
    return out


def double_row(u, e, xi, kmat):
    d = 2 ** len(xi)
    return monodromy(u, e, xi) @ np.kron(kmat, np.eye(d)) @ np.linalg.inv(monodromy(-u, e, xi))


def K_np(u, e, alpha, beta, gamma, delta, side="right"):
    s = u if side == "right" else -u - e
    return np.array([[s * beta + alpha, s * gamma], [s * delta, -s * beta + alpha]], dtype=complex)


def transfer(u, e, xi, right, left):
    d = 2 ** len(xi)
    b = double_row(u, e, xi, K_np(u, e, *right))
    kb = K_np(u, e, *left, side="left")
    return sum(kb[i, j] * b[j * d:(j + 1) * d, i * d:(i + 1) * d] for i in range(2) for j in range(2))
