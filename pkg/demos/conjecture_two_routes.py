"""The dyadic-rate conjecture tested along two unrelated routes.

Route one follows individual trajectories and averages the growth of the
power-of-two content per step.  Route two never looks at a trajectory: it
differences ensemble means across a factor-16 ladder of scales.  If the
conjectured rate B = D - log 2 is right, both converge to B + D = 1.2607...
The run below is scaled down to finish in about ten seconds; the
acceptance-sized run uses 256-bit inputs and a 10^6-pair ladder.
"""
from clgcd.experiments import conjecture_check

report = conjecture_check(bits=64, trajectory_samples=2000,
                          N_max=1 << 18, pair_samples=100_000, seed=4)

print(f"target B + D = {report.target:.6f}")
print(f"trajectory route: e2 = {report.e2_estimate:.6f} "
      f"+- {report.e2_stderr:.6f} (finite-size systematic "
      f"~{report.e2_systematic:.4f} at 64 bits)")
print(f"ensemble route:   slope ratio = {report.ratio_estimate:.6f} "
      f"+- {report.ratio_stderr:.6f}")
print(f"difference = {report.difference:+.6f}, combined error = "
      f"{report.combined_stderr:.6f}, z = {report.z_score:+.2f}")
print()
print("implied D - B (should be log 2 = {:.6f}):".format(report.log2))
print(f"  from trajectories: {report.implied_d_minus_b['trajectory']:.6f}")
print(f"  from the ensemble: {report.implied_d_minus_b['ensemble']:.6f}")
