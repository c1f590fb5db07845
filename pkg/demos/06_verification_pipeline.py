"""End-to-end verification: bounds vs simulation, with a negative control.

The verification gate simulates T(n) with deterministic chunked
substreams, wraps exact binomial intervals around the hit counts, and
demands that every upper bound clear the lower confidence limit (and
the n = 1 lower bound stay under the upper limit).  A deliberately
corrupted bound demonstrates that the gate actually bites.
"""

import math

from selfnorm import (BoundCurve, BoundPoint, MCConfig, Rademacher,
                      empirical_tail, exp_curve, lower_clt_curve,
                      lower_q1_curve, verify_bounds)

law = Rademacher()
n_grid = [1, 4, 16]
B_grid = [0.5, 1.0, 2.0]
cfg = MCConfig(n=1, trials=300000, seed=7)

print("=== determinism: same seed, same counts, any worker count ===")
a = empirical_tail(law, MCConfig(4, 100000, 123), [1.0])[0]
b = empirical_tail(law, MCConfig(4, 100000, 123), [1.0])[0]
print(f"  run twice: hits {a.hits} and {b.hits} (bit-identical)")
print(f"  exact P(T(4) > 1) = 1/16 = 0.0625; estimate {a.point:.5f} "
      f"in [{a.ci_lo:.5f}, {a.ci_hi:.5f}]")

curves = [exp_curve(law, n, B_grid) for n in n_grid]
curves.append(lower_q1_curve(law, B_grid))
curves.append(lower_clt_curve(B_grid))

print("\n=== full verification sweep (sign law) ===")
report = verify_bounds(law, n_grid, B_grid, cfg, curves)
print(f"  {len(report.rows)} cells checked, all pass: {report.all_pass}")
print("   family      n    B      bound        MC point     margin")
for row in report.rows:
    if row.family == "LowerCLT":
        continue
    print(f"  {row.family:>9}  {row.n_label:>4}  {row.point.B:<4g} "
          f"{row.point.value:<12.4e} {row.estimate.point:<12.4e} "
          f"{row.margin:+.3e}  {row.status}")

print("\n=== negative control: a corrupted bound must fail ===")
good = exp_curve(law, 4, B_grid)
bad = BoundCurve(good.family, good.n, tuple(
    BoundPoint(pt.B, pt.value * 1e-6, pt.optimizer) for pt in good.points))
bad_report = verify_bounds(law, n_grid, B_grid, cfg, [bad])
print(f"  bounds scaled by 1e-6: all pass = {bad_report.all_pass}, "
      f"{len(bad_report.failures)} FAIL cells")
for row in bad_report.failures:
    print(f"    FAIL at n={row.n_label}, B={row.point.B}: bound "
          f"{row.point.value:.2e} < interval floor {row.estimate.ci_lo:.2e}")

print("\nthe same pipeline runs from the command line:")
print("  selfnorm verify --dist rademacher --n 1,4,16 --B 0.5,1,2 \\")
print("      --trials 1000000 --seed 7 --output report.csv")
print("(exit status 1 whenever a FAIL cell appears)")
