"""Go from frames to designs and back, and show what breaks equidistance.

Random GETFs and MU GETF families are classified as designs and turned back
into frame parameters. Shifting one b by 0.05 leaves every group a valid GETF
but the union is no longer a design.
"""
from design_forge import conical_to_getf, conical_to_mu_getf, equidistance, fit_kappas
from design_forge.corpus import maximal_sizes, random_getf, random_mu_getf, random_perturbed_mu_getf

for seed in range(4):
    f = random_getf(3, seed)
    back = conical_to_getf(f.elements)
    print(f"GETF seed {seed} [{f.params.variant.value}/{f.params.sign.value}]: "
          f"b {f.params.b:.6f} -> {back.b:.6f}, gamma {f.params.gamma:.6f} -> {back.gamma:.6f}")

for seed in range(4):
    sizes = maximal_sizes(3, 3, seed)
    fam = random_mu_getf(3, sizes, seed)
    back = conical_to_mu_getf([g.elements for g in fam.groups])
    print(f"family {sizes}: S {equidistance(fam):.6f} -> kappa- {fit_kappas(fam.elements).kappa_minus:.6f},"
          f" recovered S {equidistance(back):.6f}")

fam, alpha, shift = random_perturbed_mu_getf(3, [3, 3, 3, 3], 0)
fit = fit_kappas(fam.elements)
print(f"b of group {alpha} shifted by {shift:+}: S values {[round(s, 4) for s in fam.S_values]},"
      f" verdict {fit.verdict.value}, residual {fit.residual:.2e}")
