"""Tour of the distribution layer: laws, moments, and the bivariate log-MGF.

Every tail bound in this package is assembled from expectations of a
centered law: plain Lp moments, the quadratic summaries (sigma^2, w, z),
and the two-argument log-MGF ln E exp(l1*xi + l2*(sigma^2 - xi^2)).
This script builds the three workhorse laws and prints those primitives
next to their closed forms.
"""

import math

from selfnorm import Rademacher, StandardGaussian, UniformSymmetric

laws = {
    "rademacher": Rademacher(),
    "gaussian": StandardGaussian(),
    "uniform(sqrt 3)": UniformSymmetric(math.sqrt(3.0)),
}

print("=== variances and fourth-order summaries ===")
for name, law in laws.items():
    qm = law.quadratic_moments()
    print(f"{name:>16}: sigma^2 = {qm.sigma2:.6f}   "
          f"w = E(s2 - xi^2)^2 = {qm.w:.6f}   z = {qm.z:+.2e}")
print("(w = 0 for the sign law: xi^2 is constant; z = 0 for every symmetric law)")

print("\n=== Lp moment curves (nondecreasing in p) ===")
grid = [1.0, 2.0, 4.0, 8.0, 16.0, 64.0]
header = "".join(f"  p={p:<6g}" for p in grid)
print(f"{'law':>16}{header}")
for name, law in laws.items():
    row = "".join(f"  {law.lp_norm(p):<8.4f}" for p in grid)
    print(f"{name:>16}{row}")

print("\n=== bivariate log-MGF along interesting rays ===")
gauss = laws["gaussian"]
print("gaussian, closed form l2 - ln(1+2*l2)/2 + l1^2/(2(1+2*l2)):")
for l1, l2 in [(0.0, 0.5), (1.0, 1.0), (2.0, 0.0)]:
    closed = l2 - 0.5 * math.log(1 + 2 * l2) + l1 ** 2 / (2 * (1 + 2 * l2))
    print(f"  phi({l1}, {l2}) = {gauss.log_mgf2(l1, l2):.8f}   closed {closed:.8f}")
print(f"  phi(0, -0.5) = {gauss.log_mgf2(0.0, -0.5)}  (diverges at the domain edge)")

rad = laws["rademacher"]
print("sign law: the quadratic slot is inert because sigma^2 - xi^2 = 0:")
for l2 in (-3.0, 0.0, 7.0):
    print(f"  phi(0.8, {l2:+.0f}) = {rad.log_mgf2(0.8, l2):.8f}   "
          f"ln cosh 0.8 = {math.log(math.cosh(0.8)):.8f}")

print("\n=== the linearized summand xi + B*(sigma^2 - xi^2)/sqrt(n) ===")
print("its Lp norms drive the moment-level bound; at B=0 they reduce to |xi|_p")
for name, law in laws.items():
    d = law.summand_lp_norm(4, 2.0, 3.0)
    print(f"{name:>16}: |summand|_3 at (n=4, B=2) = {d:.6f}   "
          f"|xi|_3 = {law.lp_norm(3.0):.6f}")
print(f"gaussian exact check: |summand|_2^2 at (n=1, B=1) = "
      f"{gauss.summand_lp_norm(1, 1.0, 2.0) ** 2:.6f} (= 1 + w = 3)")
