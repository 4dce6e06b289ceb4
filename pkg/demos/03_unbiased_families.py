"""Mutually unbiased GETF families and the index of coincidence.

An equidistant maximal family is a design with kappa- = S, and for every
state the index of coincidence is linear in the purity.
"""
import numpy as np

from design_forge import (construct_mu_getf, equidistance, fit_kappas, gell_mann_set, index_of_coincidence,
                          partition_set, reduced_linear_independence, s_range)
from design_forge.linalg import random_density_matrix

d, sizes, gammas = 2, [2, 3], [1.0, 1.0]
lo, hi = s_range(d, sizes, gammas)
print(f"admissible S for sizes {sizes}: ({lo}, {hi:.6f}]")

family = construct_mu_getf(partition_set(gell_mann_set(d), sizes), gammas, S=0.3)
S = equidistance(family)
fit = fit_kappas(family.elements)
print(f"S = {S:.6f}, mu = {family.mu:.6f}, Gamma = {family.Gamma}")
print(f"design: kappa- = {fit.kappa_minus:.6f}, kappa+ = {fit.kappa_plus:.6f} (mu - S/d = {family.mu - S / d:.6f})")
print("reduced rank:", reduced_linear_independence(family).rank)

rng = np.random.default_rng(0)
print("purity      C           law residual")
for _ in range(5):
    rep = index_of_coincidence(family, random_density_matrix(d, rng))
    print(f"{rep.purity:.6f}  {rep.C:.8f}  {rep.residual:.1e}")
