"""The two upper-bound families for P(T(n) > B), across laws, n, and B.

T(n) = sqrt(n) * sum(xi_i) / sum(xi_i^2).  The event T(n) > B equals
"the mean of the n linearized summands exceeds B*sigma^2", which admits:

* an exponential-level bound exp(-sup_theta [theta*B*sigma^2 - cgf]);
* a moment-level bound min_p (0.6379 * p/ln(p) * |summand|_p / B)^p,
  valid for B >= e.

The exponential bound needs the MGF; the moment bound only needs
polynomial moments, at the price of a worse constant.
"""

import math

from selfnorm import (Rademacher, StandardGaussian, UniformSymmetric,
                      exp_tail_bound, exp_tail_bound_sup, power_tail_bound,
                      power_tail_bound_sup)

E = math.e
laws = {
    "rademacher": Rademacher(),
    "gaussian": StandardGaussian(),
    "uniform(sqrt 3)": UniformSymmetric(math.sqrt(3.0)),
}

print("=== exponential-level bound over (n, B) ===")
B_grid = [0.5, 1.0, 2.0, 5.0]
for name, law in laws.items():
    print(f"\n{name}:")
    print("      " + "".join(f"   B={B:<8g}" for B in B_grid))
    for n in (1, 16, 256):
        row = "".join(f"   {exp_tail_bound(law, n, B):<10.3e}" for B in B_grid)
        print(f"  n={n:<4}{row}")
print("\n(the sign law at B=2, n=1 reads 0: |T(1)| = 1 < 2, impossible event)")

print("\n=== sup over n: the uniform-in-n tail ===")
for B in (1.0, 5.0, 20.0):
    v_exp, n_exp = exp_tail_bound_sup(laws["gaussian"], B, 1, 4096)
    print(f"  gaussian, B = {B:>4}: sup bound {v_exp:.4e} attained at n = {n_exp}")
print("  small B favors large n (the CLT regime); large B favors n = 1,")
print("  where the gaussian bound scales like e^(1/2)/(2B):")
for B in (10.0, 50.0):
    v, _ = exp_tail_bound_sup(laws["gaussian"], B, 1, 4096)
    print(f"    B = {B:>4}: B * bound = {B * v:.4f}   e^0.5/2 = "
          f"{math.exp(0.5) / 2:.4f}")

print("\n=== moment-level bound (valid for B >= e) ===")
for name, law in laws.items():
    vals = []
    for B in (3.0, 10.0, 50.0):
        vals.append(f"B={B:g}: {power_tail_bound(law, 16, B):.3e}")
    print(f"  {name:>16}, n=16:  " + "   ".join(vals))

print("\nthe sign law's summand is the sign itself, so its moment bound")
print("is n-free; the sup over n collapses to any single n:")
v, n_star = power_tail_bound_sup(laws["rademacher"], 10.0, 1, 256)
print(f"  sup over n in [1, 256] at B = 10: {v:.4e} (n* = {n_star})")

print("\n=== the two families side by side (gaussian, n = 16) ===")
print("   B      exponential     moment-level")
for B in (E, 5.0, 10.0, 50.0):
    e_v = exp_tail_bound(laws["gaussian"], 16, B)
    p_v = power_tail_bound(laws["gaussian"], 16, B)
    print(f"  {B:>5.2f}   {e_v:.4e}      {p_v:.4e}")
print("(the exponential route wins whenever the MGF exists; the moment")
print("route is the fallback when only polynomial moments are finite)")
