#!/usr/bin/env python3
"""Track the discrete mass, momentum, and energy over a long run.

The regularized equation conserves all three exactly; the scheme conserves
them approximately, with drifts of order tau^2 + h^2.  Halving (h, tau)
should shrink every drift by about 4x.
"""

from rlogse import harness

print(f"{'h = tau':>12} {'mass drift':>12} {'momentum':>12} {'energy':>12}")
previous = None
for level in (1, 2, 4):
    h = 1.0 / (128 * level)
    spec = harness.RunSpec(case=1, domain=(-12.0, 12.0), M=round(24.0 / h),
                           tau=h, t_end=1.0, eps=1e-2,
                           first_step="analytic", diag_stride=8)
    d = harness.execute(spec).drifts
    line = (f"{h:12.6f} {d['mass']:12.3e} {d['momentum']:12.3e} "
            f"{d['energy']:12.3e}")
    if previous is not None:
        ratios = [previous[k] / d[k] for k in ("mass", "momentum", "energy")]
        line += "   shrink: " + ", ".join(f"{r:.2f}x" for r in ratios)
    print(line)
    previous = d
