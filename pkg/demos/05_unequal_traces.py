"""Qubit designs whose elements do not share a trace.

Each sample pairs a rescaled orthogonal projector pair with three full-rank
operators of different traces. All are designs and satisfy the positivity
bounds on the traces.
"""
import numpy as np

from design_forge import equivalence_report, fit_kappas, trace_profile, validate_profile
from design_forge.corpus import random_inhomogeneous_conical_qubit

for seed in range(5):
    groups = random_inhomogeneous_conical_qubit(seed)
    ops = np.concatenate(groups)
    fit = fit_kappas(ops)
    prof = trace_profile(ops, [2, 3])
    check = validate_profile(prof, fit)
    rep = equivalence_report(ops, [2, 3])
    traces = np.round(np.trace(groups[1], axis1=1, axis2=2).real, 4)
    print(f"seed {seed}: {fit.verdict.value}, kappa+={fit.kappa_plus:.4f} kappa-={fit.kappa_minus:.4f}, "
          f"group-2 traces {traces}, {rep.classification}, bounds ok {check.bounds_ok}")
