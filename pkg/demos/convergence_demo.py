#!/usr/bin/env python3
"""Two convergence studies at desk scale, with CSV output for the plot script.

1. Model error vs the regularization parameter eps: the regularized equation
   converges linearly (in eps) to the logarithmic equation in L2.
2. Scheme error vs tau with h tied to tau: the semi-implicit scheme is
   second order in (h, tau) for fixed eps.

Both studies write CSVs in the shared schema; render them with e.g.

    python3 plots/plot.py --figure fig1 --in demo_eps_sweep.csv --out fig1.png
    python3 plots/plot.py --figure fig4 --in demo_tau_sweep.csv --out fig4.png
"""

from rlogse import harness

print("=== model error vs eps (case 1, linear regularization) ===")
rows, slopes = harness.run_eps_convergence(
    case=1, variant="linear-eps", eps_list=[1e-1, 1e-2, 1e-3, 1e-4],
    M=2048, tau=0.5 / 128, threads=4, out="demo_eps_sweep.csv")
for r in rows:
    print(f"  eps={r.eps:8.1e}  l2={r.err_l2:.3e}  h1={r.err_h1:.3e}  "
          f"linf={r.err_linf:.3e}")
print("  fitted slopes:", {k: round(s, 3) for k, s in slopes.items()})
print("  (expected: slope near 1 in l2)\n")

print("=== scheme error vs tau (fixed eps, h = 75*tau/64) ===")
rows, slopes = harness.run_tau_convergence(
    eps_list=(1e-2,), levels=4, tau0=0.02, ref_scale=4, threads=4,
    out="demo_tau_sweep.csv")
for r in rows:
    print(f"  tau={r.tau:9.5f}  h={r.h:9.5f}  l2={r.err_l2:.3e}")
print("  fitted slopes:", {k: round(s, 3) for k, s in slopes.items()})
print("  (expected: slope near 2)")
print("\nwrote demo_eps_sweep.csv and demo_tau_sweep.csv")
