"""The algebraic identities behind the construction, with their negative controls.

Each line prints the worst residual found and whether the report meets its
expectation (controls are expected to fail).
"""
import numpy as np

from openchain import checks

rng = np.random.default_rng(1)
model = checks.draw_model(rng, L=3)
p, right, rt, lt = model.params, model.right, model.right_tri, model.left_tri

reports = [
    checks.check_ybe(1.0, 200, seed=1),
    checks.check_ybe(1.0, 20, seed=1, corrupt=True),
    checks.check_reflection(p, right, 10, seed=1),
    checks.check_reflection(p, right, 3, seed=1, corrupt=True),
    checks.check_dual_reflection(model.left, 1.0, 20, seed=1),
    checks.check_commutation_relations(p, rt, 20, seed=1),
    checks.check_commutation_relations(p, rt, 5, seed=1, drop="DB:n"),
    checks.check_action_formulas(p, rt, None, 3, seed=1, ell=2),
    checks.check_action_formulas(p, rt, None, 3, seed=1, ell=2, swap_z12=True),
    checks.check_vacuum(p, rt, lt, 10, seed=1),
    checks.check_vacuum_gauge_control(p, right, 5, seed=1),
    checks.check_transfer_commutativity(p, rt, lt, 10, seed=1),
    checks.check_isospectrality(p, model.right, model.left, 3, seed=1),
]
for r in reports:
    print(f"{'ok ' if r.ok else 'BAD'} {r.kind:<8} {r.check_name:<42} {r.max_residual:9.2e}  (tol {r.tolerance:.0e})")
