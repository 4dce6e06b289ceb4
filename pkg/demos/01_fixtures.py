"""Walk through the three bundled fixtures.

The first set satisfies the tensor identity but has two non-PSD members, so it
is not a design. The third set is a genuine design whose second group has
unequal traces.
"""
import numpy as np

from design_forge import equivalence_report, fit_kappas, fixture, tensor_sum, trace_profile, validate_profile

np.set_printoptions(precision=4, suppress=True)

ex1 = fixture("example1")
print("example1: sum R (x) R =")
print(tensor_sum(ex1.operators).real)
fit = fit_kappas(ex1.operators)
print(f"  kappa+ = {fit.kappa_plus:.6f}, kappa- = {fit.kappa_minus:.6f}, verdict {fit.verdict.value}")
for k in fit.non_psd:
    print(f"  R_{k + 1} eigenvalues: {np.linalg.eigvalsh(ex1.operators[k])}")

ex3 = fixture("example3")
fit = fit_kappas(ex3.operators)
print(f"\nexample3: verdict {fit.verdict.value}, kappa = {fit.kappa:.6f}")
prof = trace_profile(ex3.operators, ex3.grouping)
print(f"  group kappas {np.round(prof.kappa_groups, 6)} (sum {sum(prof.kappa_groups):.6f})")
check = validate_profile(prof, fit)
print(f"  largest deviation from the trace relations: {check.max_deviation:.2e}")
rep = equivalence_report(ex3.operators, ex3.grouping)
for alpha, st in enumerate(rep.statements):
    print(f"  group {alpha}: " + ", ".join(f"{k}={v}" for k, v in st.items()))
