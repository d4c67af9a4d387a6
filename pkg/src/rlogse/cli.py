"""Command-line surface for the experiment harness.

Subcommands: simulate, table1, conv-eps, conv-energy, evolve, gausson-check.
Exit codes: 0 success, 1 input error, 2 solver blow-up.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import analytic, harness
from .solver import BlowUpError


def _parse_list(text: str):
    return [float(tok) for tok in text.split(",") if tok.strip()]


def _parse_domain(text: str):
    parts = _parse_list(text)
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected --domain a,b")
    return (parts[0], parts[1])


def _parse_schedule(text: str):
    """Parse 'x0:n' into the halving list [x0, x0/2, ..., x0/2^(n-1)]."""
    try:
        x0_s, n_s = text.split(":")
        x0, n = float(x0_s), int(n_s)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(
            "expected START:LEVELS, e.g. 0.1:6") from exc
    return [x0 / 2**k for k in range(n)]


def load_config(path: str) -> dict:
    """Flat `key = value` config file; comma-separated lists; '#' comments."""
    cfg = {}
    with open(path) as f:
        for line in f:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"bad config line: {line!r}")
            key, val = (s.strip() for s in line.split("=", 1))
            cfg[key] = val
    return cfg


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="logse",
        description="Regularized logarithmic Schrodinger equation experiments")
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, case=True):
        if case:
            p.add_argument("--case", type=int, choices=(1, 2), default=1)
        p.add_argument("--variant", default="linear-eps",
                       choices=("log", "linear-eps", "squared-eps"))
        p.add_argument("--lambda", dest="lam", type=float, default=-1.0)
        p.add_argument("--domain", type=_parse_domain, default=None)
        p.add_argument("--out", default=None)
        p.add_argument("--threads", type=int,
                       default=harness.default_threads())
        p.add_argument("--ref-scale", type=int, default=8)
        p.add_argument("--seed", type=int, default=None,
                       help="reserved; the solver is deterministic")
        p.add_argument("--config", default=None,
                       help="flat key=value file applied before CLI flags")

    p = sub.add_parser("simulate", help="single run with diagnostics CSV")
    common(p)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--h", type=float, required=True)
    p.add_argument("--tau", type=float, required=True)
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--diag-stride", type=int, default=1)
    p.add_argument("--dump-fields", default=None, metavar="DIR")

    p = sub.add_parser("table1", help="total-error matrix vs moving Gausson")
    common(p, case=False)
    p.add_argument("--kmax", type=int, default=5)
    p.add_argument("--eps0", type=float, default=1e-3)
    p.add_argument("--T", type=float, default=1.0)

    p = sub.add_parser("conv-eps", help="model error vs regularization eps")
    common(p)
    p.add_argument("--eps-list", type=_parse_list,
                   default=[1e-1, 1e-2, 1e-3, 1e-4])
    p.add_argument("--eps-ref", type=float, default=None)
    p.add_argument("--M", type=int, default=2048)
    p.add_argument("--tau", type=float, default=0.5 / 128)
    p.add_argument("--t-eval", type=float, default=0.5)

    p = sub.add_parser("conv-energy", help="energy error vs eps")
    common(p)
    p.add_argument("--eps-list", type=_parse_list,
                   default=[3e-2, 1e-2, 3e-3, 1e-3])
    p.add_argument("--eps-ref", type=float, default=None)
    p.add_argument("--M", type=int, default=4096)
    p.add_argument("--tau", type=float, default=0.5 / 256)
    p.add_argument("--t-eval", type=float, default=0.5)

    p = sub.add_parser("evolve", help="model error vs time per eps")
    common(p)
    p.add_argument("--eps-list", type=_parse_list,
                   default=[1e-2, 1e-3, 1e-4])
    p.add_argument("--M", type=int, default=2048)
    p.add_argument("--tau", type=float, default=0.1 / 32)
    p.add_argument("--T", type=float, default=1.0)
    p.add_argument("--tk", type=float, default=0.1,
                   help="spacing of evaluation times")

    p = sub.add_parser("gausson-check",
                       help="verify the constant-width Gausson ODE solution")
    p.add_argument("--lambda", dest="lam", type=float, default=-1.0)
    p.add_argument("--a0", type=complex, default=None,
                   help="defaults to -lambda")
    p.add_argument("--b0", type=complex, default=1.0 + 0j)
    p.add_argument("--t-end", type=float, default=1.0)
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--tol", type=float, default=1e-10)

    return top


def _cmd_simulate(args) -> int:
    rows, res = harness.run_simulate(
        case=args.case, eps=args.eps, h=args.h, tau=args.tau, T=args.T,
        variant=args.variant, lam=args.lam, domain=args.domain,
        diag_stride=args.diag_stride, out=args.out,
        dump_dir=args.dump_fields)
    if res.failed_at >= 0:
        print(f"blow-up at step {res.failed_at}", file=sys.stderr)
        return 2
    last = rows[-1]
    print(f"steps={last.steps} stab_violations={last.stab_violations} "
          f"mass_drift={last.mass_drift:.3e} err_l2={last.err_l2:.6e}")
    return 0


def _cmd_table1(args) -> int:
    rows, rates = harness.run_table1(kmax=args.kmax, eps0=args.eps0,
                                     lam=args.lam, T=args.T,
                                     threads=args.threads, out=args.out)
    print(harness.format_table1(rows, rates, args.kmax, args.kmax))
    if any(r.failed for r in rows):
        return 2
    return 0


def _cmd_conv_eps(args) -> int:
    rows, slopes = harness.run_eps_convergence(
        case=args.case, variant=args.variant, eps_list=args.eps_list,
        M=args.M, tau=args.tau, t_eval=args.t_eval, lam=args.lam,
        eps_ref=args.eps_ref, threads=args.threads, out=args.out)
    for name, s in slopes.items():
        print(f"slope_{name}={s:.3f}")
    return 2 if any(r.failed for r in rows) else 0


def _cmd_conv_energy(args) -> int:
    rows, slope = harness.run_energy_convergence(
        case=args.case, eps_list=args.eps_list, M=args.M, tau=args.tau,
        t_eval=args.t_eval, lam=args.lam, eps_ref=args.eps_ref,
        threads=args.threads, out=args.out)
    print(f"slope_energy={slope:.3f}")
    return 2 if any(r.failed for r in rows) else 0


def _cmd_evolve(args) -> int:
    n = round(args.T / args.tk)
    times = [k * args.tk for k in range(n + 1)]
    rows, slopes = harness.run_time_evolution(
        case=args.case, eps_list=args.eps_list, times=times, M=args.M,
        tau=args.tau, lam=args.lam, threads=args.threads, out=args.out)
    for eps, s in sorted(slopes.items(), reverse=True):
        print(f"eps={eps:g} error_growth_slope={s:.4e}")
    return 2 if any(r.failed for r in rows) else 0


def _cmd_gausson_check(args) -> int:
    a0 = args.a0 if args.a0 is not None else complex(-args.lam)
    p = analytic.GaussianParams(a0=a0, b0=args.b0, v=0.0, lam=args.lam)
    traj = analytic.solve_gaussian_ode(p, args.t_end, args.dt)
    phi0 = args.lam * (2.0 * np.log(abs(args.b0)) - 1.0)
    r_err = float(np.max(np.abs(traj.r - 1.0)))
    phi_err = float(np.max(np.abs(traj.phi - phi0 * traj.times)))
    ok = a0 == complex(-args.lam) and r_err <= args.tol and phi_err <= args.tol
    print(f"max|r-1|={r_err:.3e} max|phi-phi0*t|={phi_err:.3e} "
          f"{'OK' if ok else 'MISMATCH'}")
    return 0 if ok else 1


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    if getattr(args, "config", None):
        try:
            cfg = load_config(args.config)
        except (ValueError, OSError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        for key, val in cfg.items():
            attr = key.replace("-", "_")
            if not hasattr(args, attr):
                print(f"unknown config key {key!r}", file=sys.stderr)
                return 1
            cur = getattr(args, attr)
            if isinstance(cur, list) or key.endswith("list"):
                setattr(args, attr, _parse_list(val))
            elif isinstance(cur, bool):
                setattr(args, attr, val.lower() in ("1", "true", "yes"))
            elif isinstance(cur, int):
                setattr(args, attr, int(val))
            elif isinstance(cur, float):
                setattr(args, attr, float(val))
            else:
                setattr(args, attr, val)
    handlers = {
        "simulate": _cmd_simulate,
        "table1": _cmd_table1,
        "conv-eps": _cmd_conv_eps,
        "conv-energy": _cmd_conv_energy,
        "evolve": _cmd_evolve,
        "gausson-check": _cmd_gausson_check,
    }
    try:
        return handlers[args.command](args)
    except BlowUpError as exc:
        print(f"solver blow-up: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
