#!/usr/bin/env python3
"""Render convergence figures from solver-lab result CSVs.

Reads only the public CSV schema emitted by the experiment harness; no
coupling to the solver package itself.

Figures:
    fig1   error vs eps, one curve per norm (L2, H1, Linf), log-log
    fig2a  same layout as fig1 (second test case), log-log
    fig2b  error vs time, one curve per eps, linear axes
    fig3   error vs eps for the squared regularization, log-log
    fig4   error vs tau, one curve per eps, log-log

Usage:
    plot.py --figure fig1 --in sweep.csv --out fig1.png [--slopes 1.0,0.5]
"""

from __future__ import annotations

import argparse
import csv
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

EXPECTED_COLUMNS = ["case", "variant", "eps", "h", "tau", "T", "t_eval",
                    "err_l2", "err_h1", "err_linf", "err_energy",
                    "mass_drift", "momentum_drift", "energy_drift", "steps",
                    "stab_violations", "wall_ms"]

NORM_LABELS = {"err_l2": r"$\ell^2$", "err_h1": r"$h^1$",
               "err_linf": r"$\ell^\infty$"}

DEFAULT_SLOPES = {"fig1": [1.0], "fig2a": [1.0, 0.5], "fig2b": [],
                  "fig3": [0.5], "fig4": [2.0]}


class SchemaError(ValueError):
    pass


def read_rows(path: str) -> list[dict]:
    """Load the CSV, validate the schema, and drop failed runs."""
    with open(path, newline="") as f:
        reader = csv.DictReader(f)
        header = reader.fieldnames or []
        missing = [c for c in EXPECTED_COLUMNS if c not in header]
        if missing:
            raise SchemaError(
                "input is missing required columns: " + ", ".join(missing))
        rows = [r for r in reader if r["err_l2"] != "FAILED"]
    if not rows:
        raise SchemaError("no usable data rows in input")
    return rows


def _slope_guide(ax, xs, ys, slope: float):
    """Dashed power-law reference anchored at the first data point."""
    x0, y0 = xs[0], ys[0]
    guide = [y0 * (x / x0) ** slope for x in xs]
    ax.plot(xs, guide, "k--", linewidth=0.8,
            label=f"slope {slope:g}")


def _sorted_floats(rows, key):
    return sorted({float(r[key]) for r in rows}, reverse=True)


def render_eps_sweep(rows, ax, slopes):
    """Error norms vs eps on log-log axes (fig1 / fig2a / fig3)."""
    eps = _sorted_floats(rows, "eps")
    by_eps = {float(r["eps"]): r for r in rows}
    for col, label in NORM_LABELS.items():
        ys = [float(by_eps[e][col]) for e in eps]
        ax.loglog(eps, ys, "o-", label=label)
    for s in slopes:
        ys = [float(by_eps[e]["err_l2"]) for e in eps]
        _slope_guide(ax, eps, ys, s)
    ax.set_xlabel(r"$\varepsilon$")
    ax.set_ylabel("error at $t_{\\mathrm{eval}}$")
    ax.invert_xaxis()


def render_time_evolution(rows, ax, slopes):
    """Error vs time, one curve per eps, linear axes (fig2b)."""
    eps_values = _sorted_floats(rows, "eps")
    for e in eps_values:
        pts = sorted(((float(r["t_eval"]), float(r["err_l2"]))
                      for r in rows if float(r["eps"]) == e))
        ax.plot([p[0] for p in pts], [p[1] for p in pts], "o-",
                label=rf"$\varepsilon$ = {e:g}")
    ax.set_xlabel("$t$")
    ax.set_ylabel(r"$\ell^2$ error")


def render_tau_sweep(rows, ax, slopes):
    """Error vs tau, one curve per eps, log axes (fig4)."""
    eps_values = _sorted_floats(rows, "eps")
    first = None
    for e in eps_values:
        pts = sorted(((float(r["tau"]), float(r["err_l2"]))
                      for r in rows if float(r["eps"]) == e), reverse=True)
        taus = [p[0] for p in pts]
        errs = [p[1] for p in pts]
        ax.loglog(taus, errs, "o-", label=rf"$\varepsilon$ = {e:g}")
        if first is None:
            first = (taus, errs)
    for s in slopes:  # one guide anchored to the first curve
        _slope_guide(ax, first[0], first[1], s)
    ax.set_xlabel(r"$\tau$")
    ax.set_ylabel(r"$\ell^2$ error at $t_{\mathrm{eval}}$")
    ax.invert_xaxis()


RENDERERS = {"fig1": render_eps_sweep, "fig2a": render_eps_sweep,
             "fig2b": render_time_evolution, "fig3": render_eps_sweep,
             "fig4": render_tau_sweep}


def render(figure: str, input_csv: str, output_image: str, slopes=None):
    rows = read_rows(input_csv)
    if slopes is None:
        slopes = DEFAULT_SLOPES[figure]
    fig, ax = plt.subplots(figsize=(5.0, 3.75))
    RENDERERS[figure](rows, ax, slopes)
    ax.legend(fontsize=8)
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    # strip metadata so identical inputs give byte-identical images
    fig.savefig(output_image, dpi=150, metadata={"Software": None})
    plt.close(fig)
    return output_image


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        description="Render convergence figures from result CSVs")
    parser.add_argument("--figure", required=True, choices=sorted(RENDERERS))
    parser.add_argument("--in", dest="input_csv", required=True)
    parser.add_argument("--out", dest="output_image", required=True)
    parser.add_argument("--slopes", default=None,
                        help="comma-separated guide-line slopes")
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    slopes = None
    if args.slopes is not None:
        try:
            slopes = [float(s) for s in args.slopes.split(",") if s.strip()]
        except ValueError:
            print(f"error: bad --slopes value {args.slopes!r}", file=sys.stderr)
            return 1
    try:
        render(args.figure, args.input_csv, args.output_image, slopes)
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {args.output_image}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
