"""Build GETFs from an orthonormal basis and read their parameters back.

On the Pauli basis the plus branch reaches rank-1 elements at b = 1, which
is the qubit SIC. On a random qutrit basis the PSD limit sits lower, and
asking for more raises INFEASIBLE.
"""
import numpy as np

from design_forge import (DesignError, Sign, Variant, construct_getf, fit_kappas, gell_mann_set, max_feasible_tau,
                          random_rotated_set, verify_getf)
from design_forge.getf import b_from_tau

paulis = gell_mann_set(2).traceless
sic = construct_getf(paulis, gamma=1.0, b=1.0, variant=Variant.PLUS, sign=Sign.POS)
p = verify_getf(sic.elements)
print(f"qubit SIC: gamma={p.gamma:.4f} a={p.a:.4f} b={p.b:.4f} c={p.c:.4f} tau={sic.params.tau:.6f}")
print("  element ranks:", [int(np.linalg.matrix_rank(e, tol=1e-10)) for e in sic.elements])
fit = fit_kappas(sic.elements)
print(f"  as a design: kappa+={fit.kappa_plus:.6f} kappa-={fit.kappa_minus:.6f}")

group = random_rotated_set(3, 0).traceless
for variant in Variant:
    bounds = max_feasible_tau(group, 1.0, 9, variant)
    b_pos = b_from_tau(3, 9, 1.0, bounds.positive, variant)
    b_neg = b_from_tau(3, 9, 1.0, bounds.negative, variant)
    print(f"qutrit {variant.value}: largest b is {b_pos:.4f} (pos) / {b_neg:.4f} (neg)")

try:
    construct_getf(group, 1.0, 0.9, Variant.PLUS, Sign.POS)
except DesignError as exc:
    print("b = 0.9 on that basis:", exc.code)
