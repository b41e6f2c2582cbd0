"""Three stated identities that do not hold numerically, and what does hold instead.

1. The Hamiltonian as a scaled derivative of t(u) at u = 0.
2. The reduced form of the coefficient of B(u)|B(u_I)> on shell.
3. Crossing symmetry t(-u - eta) = t(u).
"""
import numpy as np

from openchain import GeneralBoundary, ModelParams, SolverConfig, checks, solve_bethe
from openchain.kernels import IndexSet, proof_X, proof_X_reduced
from openchain.lattice import LEFT, RIGHT, K_derivative, build_K, build_transfer
from openchain.linalg import embed_one_site, embed_two_site, permutation_matrix, rel_residual

rng = np.random.default_rng(3)
right, left = (GeneralBoundary(*(rng.normal(size=4) + 1j * rng.normal(size=4))) for _ in range(2))
eta = 0.8 + 0.1j
params = ModelParams(eta, 3)

rep = checks.check_hamiltonian(params, right, left)
print(f"1. stated Hamiltonian vs scaled t'(0): relative difference {rep.max_residual:.3f}")
step = 1e-6
dt = (build_transfer(step, params, right, left) - build_transfer(-step, params, right, left)) / (2 * step)
local = sum(embed_two_site(permutation_matrix(), j, j + 1, 3) for j in (1, 2))
local = local + embed_one_site(build_K(0, left, LEFT, eta), 1, 3) / (2 * left.alpha)
local = local + eta / (2 * right.alpha) * embed_one_site(K_derivative(right, RIGHT), 3, 3)
fixed = rel_residual(eta / (4 * right.alpha * left.alpha) * dt, local)
print(f"   eta/(4 alpha alphabar) t'(0) vs sum P + Kbar(0)/(2 alphabar) + eta K'/(2 alpha): {fixed:.1e}")

model = checks.draw_model(np.random.default_rng(12), 2)
st = solve_bethe(2, model.params, model.right_tri, model.left_tri, SolverConfig(starts=200, seed=3))[0]
for u in (0.3 + 0.2j, -0.6 + 0.5j):
    args = (u, IndexSet(2, ()), st.roots, model.params, model.right_tri, model.left_tri)
    print(f"2. u = {u}: direct coefficient {abs(proof_X(*args)):.1e}, reduced form {abs(proof_X_reduced(*args)):.3f}")

rep = checks.probe_crossing(model.params, model.right_tri, model.left_tri, 5, seed=0)
print(f"3. |t(-u-eta) - t(u)| / |t(u)| up to {rep.max_residual:.2f} (reported, never gating)")
