#!/usr/bin/env python3
"""Full verification battery on one cell, plus the gradient-bound scan."""

from soliton_lab import (
    ModelParams,
    default_scan_geometry,
    run_battery,
    scan_gradient_bound,
    solve_profile,
)

params = ModelParams(n=2, alpha=1.0)
profile = solve_profile(params, t_max=200.0, tol=1e-10)

print(f"battery for n={params.n}, alpha={params.alpha}, t_max={profile.t_max:g}")
for report in run_battery(profile):
    flag = "ok " if report.passed else "FAIL"
    print(f"  [{flag}] {report.name:16} metric {report.metric: .3e}"
          f"  tolerance {report.tolerance: .3e}")
    print(f"         {report.detail}")

print()
centers, radii = default_scan_geometry(profile.t_max)
scan = scan_gradient_bound(params, centers, radii)
print(f"gradient-bound scan over {len(scan.samples)} balls:"
      f" sup ratio = {scan.sup_ratio:.4f}")
worst = max(scan.samples, key=lambda s: s.ratio)
print(f"  attained at center {worst.center_offset:.3g}, radius {worst.radius:.3g},"
      f" where sup u = {worst.M:.4g} and |grad u| = {worst.grad_norm:.4g}")
