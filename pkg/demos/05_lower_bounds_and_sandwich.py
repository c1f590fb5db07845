"""Lower bounds for the sup-over-n tail, and the n = 1 sandwich.

Two reference points from below:

* Q_1(B) = P(0 < xi < 1/B) is the exact n = 1 tail (T(1) = 1/xi), hence
  a true lower bound for the supremum over n.  For laws with a positive
  density at 0 it decays like density(0)/B: the sup tail is NOT
  exponentially small in B, unlike the classical normalized-sum tail.
* The limiting normal tail 1 - Phi(B) (reported next to the heuristic
  exp(-B^2/2); they disagree noticeably, so both are printed and
  neither is asserted as a finite-n bound).
"""

import math

from selfnorm import (MCConfig, StandardGaussian, UniformSymmetric,
                      empirical_tail, exp_tail_bound, lower_bound_clt,
                      lower_bound_q1)

gauss = StandardGaussian()
uni = UniformSymmetric(math.sqrt(3.0))

print("=== the 1/B decay of the single-observation tail ===")
print("   B      gaussian Q1    B*Q1        uniform Q1     B*Q1")
for B in (2.0, 10.0, 100.0, 1000.0):
    q_g = lower_bound_q1(gauss, B)
    q_u = lower_bound_q1(uni, B)
    print(f"  {B:>6g}   {q_g:.4e}   {B * q_g:.5f}     {q_u:.4e}   {B * q_u:.5f}")
print(f"limits: gaussian density at 0 = 1/sqrt(2*pi) = "
      f"{1 / math.sqrt(2 * math.pi):.5f}; uniform = 1/(2*sqrt(3)) = "
      f"{1 / (2 * math.sqrt(3)):.5f}")

print("\n=== two limiting-tail reference values (report-only) ===")
print("   B     exp(-B^2/2)    1 - Phi(B)")
for B in (1.0, 2.0, 3.0):
    ref = lower_bound_clt(B)
    print(f"  {B:>4}   {ref.exp_quadratic:.6f}     {ref.normal_tail:.6f}")
print("(the quadratic heuristic overshoots the actual normal tail)")

print("\n=== sandwiching the exact n = 1 tail by simulation ===")
cfg = MCConfig(n=1, trials=200000, seed=42)
B_grid = [0.5, 1.0, 2.0, 5.0]
ests = empirical_tail(gauss, cfg, B_grid)
print("gaussian, 200k trials, 99.9% intervals:")
print("   B     lower Q1      MC interval              upper exp-bound")
for est in ests:
    lo_b = lower_bound_q1(gauss, est.B)
    up_b = exp_tail_bound(gauss, 1, est.B)
    print(f"  {est.B:>4}   {lo_b:.5f}   [{est.ci_lo:.5f}, {est.ci_hi:.5f}]"
          f"   {up_b:.5f}")
print("every row: lower bound <= interval <= upper bound (the n = 1")
print("lower bound is exact, so it sits inside the interval itself)")
