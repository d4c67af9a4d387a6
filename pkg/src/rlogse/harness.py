"""Experiment orchestration: convergence tables, parameter sweeps, CSV output.

Every experiment is assembled from independent RunSpec jobs that can be
farmed out to a process pool; results funnel back in a deterministic order.
All emitted CSV files share one schema (CSV_HEADER below).
"""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, asdict, replace

import numpy as np

from . import analytic
from .diagnostics import (energy, error_norms, fit_loglog_slope, mass,
                          momentum, observed_order, series_from_rows,
                          conserved_hook)
from .grid import Grid1D, WaveField
from .nonlinearity import RegVariant
from .solver import (BlowUpError, FirstStepMode, SolverParams, run)

CSV_HEADER = ("case,variant,eps,h,tau,T,t_eval,err_l2,err_h1,err_linf,"
              "err_energy,mass_drift,momentum_drift,energy_drift,steps,"
              "stab_violations,wall_ms")

DOMAIN_CASE1 = (-12.0, 12.0)
DOMAIN_CASE2 = (-16.0, 16.0)


def default_threads() -> int:
    return int(os.environ.get("LOGSE_THREADS", "1"))


def initial_data(case: int, lam: float = -1.0, v: float = 1.0):
    if case == 1:
        return lambda x: analytic.initial_case1(x, lam, v)
    if case == 2:
        return analytic.initial_case2
    raise ValueError(f"unknown case {case}")


def default_domain(case: int):
    return DOMAIN_CASE1 if case == 1 else DOMAIN_CASE2


@dataclass(frozen=True)
class RunSpec:
    """One solver run, picklable for the worker pool."""

    case: int
    domain: tuple
    M: int
    tau: float
    t_end: float
    eps: float
    lam: float = -1.0
    v: float = 1.0
    variant: str = "linear-eps"
    first_step: str = "discrete"
    guard: bool = True
    snapshot_times: tuple = ()
    diag_stride: int = 0  # 0 disables the conserved-quantity series


@dataclass
class RunResult:
    spec: RunSpec
    final: np.ndarray
    snapshots: dict
    drifts: dict
    violations: int
    steps: int
    wall_ms: float
    failed_at: int = -1  # step index of blow-up, -1 if clean


def execute(spec: RunSpec) -> RunResult:
    grid = Grid1D(spec.domain[0], spec.domain[1], spec.M)
    variant = RegVariant.parse(spec.variant)
    mode = (FirstStepMode.ANALYTIC_SECOND_DERIVATIVE
            if spec.first_step == "analytic"
            else FirstStepMode.DISCRETE_SECOND_DIFFERENCE)
    u0 = WaveField.from_function(grid, initial_data(spec.case, spec.lam, spec.v))
    u0_xx = None
    if mode is FirstStepMode.ANALYTIC_SECOND_DERIVATIVE:
        if spec.case != 1:
            raise ValueError("analytic first step is only wired for case 1")
        u0_xx = WaveField.from_function(
            grid, lambda x: analytic.initial_case1_xx(x, spec.lam, spec.v))
    p = SolverParams(lam=spec.lam, eps=spec.eps, tau=spec.tau,
                     t_end=spec.t_end, variant=variant, first_step=mode,
                     stability_guard=spec.guard)
    hook = None
    stride = 1
    if spec.diag_stride > 0:
        hook = conserved_hook(spec.lam, spec.eps, variant)
        stride = spec.diag_stride
    t0 = time.perf_counter()
    try:
        out = run(u0, p, snapshot_times=spec.snapshot_times, u0_xx=u0_xx,
                  diag_hook=hook, diag_stride=stride)
        failed_at = -1
    except BlowUpError as exc:
        out = exc.partial
        failed_at = exc.step
    wall_ms = 1000.0 * (time.perf_counter() - t0)
    drifts = {"mass": 0.0, "momentum": 0.0, "energy": 0.0}
    if spec.diag_stride > 0 and out is not None and out.diagnostics:
        drifts = series_from_rows(out.diagnostics).relative_drift()
    return RunResult(
        spec=spec,
        final=out.final.values if out is not None else None,
        snapshots={t: f.values for t, f in out.snapshots.items()}
        if out is not None else {},
        drifts=drifts,
        violations=len(out.stability_violations) if out is not None else 0,
        steps=p.n_steps if failed_at < 0 else failed_at,
        wall_ms=wall_ms,
        failed_at=failed_at,
    )


def _pmap(specs, threads: int):
    specs = list(specs)
    if threads <= 1 or len(specs) <= 1:
        return [execute(s) for s in specs]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(execute, specs))


# ---------------------------------------------------------------------------
# Result rows and CSV plumbing
# ---------------------------------------------------------------------------

@dataclass
class ResultRow:
    case: int
    variant: str
    eps: float
    h: float
    tau: float
    T: float
    t_eval: float
    err_l2: float
    err_h1: float
    err_linf: float
    err_energy: float
    mass_drift: float
    momentum_drift: float
    energy_drift: float
    steps: int
    stab_violations: int
    wall_ms: float
    failed: bool = False

    def to_csv(self) -> str:
        def fmt(x):
            return repr(float(x))

        err_cols = [self.err_l2, self.err_h1, self.err_linf, self.err_energy]
        err_strs = (["FAILED"] * 4 if self.failed
                    else [fmt(e) for e in err_cols])
        cols = ([str(self.case), self.variant, fmt(self.eps), fmt(self.h),
                 fmt(self.tau), fmt(self.T), fmt(self.t_eval)]
                + err_strs
                + [fmt(self.mass_drift), fmt(self.momentum_drift),
                   fmt(self.energy_drift), str(self.steps),
                   str(self.stab_violations), fmt(self.wall_ms)])
        return ",".join(cols)


def write_csv(rows, path, meta: dict | None = None):
    with open(path, "w") as f:
        f.write(CSV_HEADER + "\n")
        for r in rows:
            f.write((r if isinstance(r, str) else r.to_csv()) + "\n")
    if meta is not None:
        with open(str(path) + ".meta.json", "w") as f:
            json.dump(meta, f, indent=2, sort_keys=True, default=str)
            f.write("\n")


def read_csv_raw(path):
    """Read an emitted CSV back as (header, rows-of-strings)."""
    with open(path) as f:
        lines = [ln.rstrip("\n") for ln in f if ln.strip()]
    header, rows = lines[0], lines[1:]
    if header != CSV_HEADER:
        raise ValueError(f"unexpected CSV header in {path}")
    return header, rows


def _row_from_result(res: RunResult, t_eval: float, errs: dict,
                     err_energy: float = 0.0) -> ResultRow:
    spec = res.spec
    h = (spec.domain[1] - spec.domain[0]) / spec.M
    failed = res.failed_at >= 0
    return ResultRow(
        case=spec.case, variant=spec.variant, eps=spec.eps, h=h, tau=spec.tau,
        T=spec.t_end, t_eval=t_eval,
        err_l2=errs.get("l2", 0.0), err_h1=errs.get("h1", 0.0),
        err_linf=errs.get("linf", 0.0), err_energy=err_energy,
        mass_drift=res.drifts["mass"], momentum_drift=res.drifts["momentum"],
        energy_drift=res.drifts["energy"], steps=res.steps,
        stab_violations=res.violations, wall_ms=res.wall_ms, failed=failed)


def _field(spec_domain, M, values) -> WaveField:
    return WaveField(Grid1D(spec_domain[0], spec_domain[1], M), values)


def _restrict(values_fine: np.ndarray, m_coarse: int) -> np.ndarray:
    """Take the coarse-node subset of a fine-grid field (node-nested grids)."""
    m_fine = values_fine.size - 1
    if m_fine % m_coarse != 0:
        raise ValueError(f"fine M={m_fine} is not a multiple of M={m_coarse}")
    return values_fine[:: m_fine // m_coarse]


# ---------------------------------------------------------------------------
# Experiments
# ---------------------------------------------------------------------------

def run_table1(kmax: int = 5, mmax: int | None = None, eps0: float = 1e-3,
               lam: float = -1.0, T: float = 1.0, threads: int = 1,
               out=None):
    """Total-error matrix vs the moving Gausson for case 1.

    Columns k = 0..kmax use (h, tau) = (0.1/2^k, 0.1/2^k); rows m = 0..mmax
    use eps = eps0/4^m.  Returns (rows, rates) where rates[m] lists the
    column-to-column orders for row m.
    """
    if mmax is None:
        mmax = kmax
    a, b = DOMAIN_CASE1
    specs = []
    for m in range(mmax + 1):
        for k in range(kmax + 1):
            h = 0.1 / 2**k
            specs.append(RunSpec(
                case=1, domain=(a, b), M=round((b - a) / h), tau=0.1 / 2**k,
                t_end=T, eps=eps0 / 4**m, lam=lam, first_step="analytic",
                diag_stride=max(1, round(T / (0.1 / 2**k)) // 32)))
    results = _pmap(specs, threads)

    rows = []
    rate_rows = []
    b0 = (-lam / np.pi) ** 0.25
    for m in range(mmax + 1):
        errs_m = []
        for k in range(kmax + 1):
            res = results[m * (kmax + 1) + k]
            grid = Grid1D(a, b, res.spec.M)
            exact = WaveField.from_function(
                grid, lambda x: analytic.moving_gausson(lam, 1.0, b0, x, T))
            if res.failed_at >= 0:
                rows.append(_row_from_result(res, T, {}))
                errs_m.append(np.nan)
                continue
            e = error_norms(exact, _field((a, b), res.spec.M, res.final))
            rows.append(_row_from_result(res, T, e))
            errs_m.append(e["l2"])
        scales = [0.1 / 2**k for k in range(kmax + 1)]
        pairs = [(s, e) for s, e in zip(scales, errs_m) if np.isfinite(e)]
        rate_rows.append(observed_order(pairs) if len(pairs) >= 2 else [])
    if out is not None:
        write_csv(rows, out, meta={"experiment": "table1", "kmax": kmax,
                                   "mmax": mmax, "eps0": eps0, "lam": lam,
                                   "T": T})
    return rows, rate_rows


def format_table1(rows, rates, kmax: int, mmax: int) -> str:
    """Text rendering of the error matrix with rate rows."""
    lines = []
    header = ["eps"] + [f"h/2^{k}" for k in range(kmax + 1)]
    lines.append("  ".join(f"{c:>10}" for c in header))
    for m in range(mmax + 1):
        block = rows[m * (kmax + 1):(m + 1) * (kmax + 1)]
        errs = ["FAILED" if r.failed else f"{r.err_l2:.3e}" for r in block]
        lines.append("  ".join(f"{c:>10}" for c in
                               [f"{block[0].eps:.2e}"] + errs))
        rstr = ["--"] + [f"{r:.2f}" if r is not None else "n/a"
                         for r in rates[m]]
        lines.append("  ".join(f"{c:>10}" for c in ["rate"] + rstr))
    return "\n".join(lines)


def _proxy_eps(eps_list, floor: float = 1e-12) -> float:
    return max(min(eps_list) / 100.0, floor)


def run_eps_convergence(case: int, variant: str, eps_list, M: int,
                        tau: float, t_eval: float = 0.5, lam: float = -1.0,
                        eps_ref: float | None = None, threads: int = 1,
                        out=None):
    """Model error u - u^eps at t_eval for each eps, plus fitted slopes.

    The stand-in for the unregularized solution u is a run with the linear
    regularization at eps_ref <= min(eps)/100 on the same (h, tau) grid, so
    discretization errors cancel in the difference.
    """
    eps_list = sorted(eps_list, reverse=True)
    if eps_ref is None:
        eps_ref = _proxy_eps(eps_list)
    domain = default_domain(case)
    base = RunSpec(case=case, domain=domain, M=M, tau=tau, t_end=t_eval,
                   eps=eps_ref, lam=lam, variant="linear-eps")
    specs = [base] + [replace(base, eps=e, variant=variant) for e in eps_list]
    results = _pmap(specs, threads)
    ref = _field(domain, M, results[0].final)
    rows = []
    for res in results[1:]:
        e = error_norms(ref, _field(domain, M, res.final))
        rows.append(_row_from_result(res, t_eval, e))
    slopes = {name: fit_loglog_slope(eps_list, [getattr(r, f"err_{name}")
                                                for r in rows])
              for name in ("l2", "h1", "linf")}
    if out is not None:
        write_csv(rows, out, meta={"experiment": "conv-eps", "case": case,
                                   "variant": variant, "eps_ref": eps_ref,
                                   "M": M, "tau": tau, "t_eval": t_eval,
                                   "slopes": slopes})
    return rows, slopes


def run_energy_convergence(case: int, eps_list, M: int, tau: float,
                           t_eval: float = 0.5, lam: float = -1.0,
                           eps_ref: float | None = None, threads: int = 1,
                           out=None):
    """|E(u) - E^eps(u^eps)| at t_eval per eps, with the fitted slope."""
    eps_list = sorted(eps_list, reverse=True)
    if eps_ref is None:
        eps_ref = _proxy_eps(eps_list)
    domain = default_domain(case)
    base = RunSpec(case=case, domain=domain, M=M, tau=tau, t_end=t_eval,
                   eps=eps_ref, lam=lam, variant="linear-eps")
    specs = [base] + [replace(base, eps=e) for e in eps_list]
    results = _pmap(specs, threads)
    ref = _field(domain, M, results[0].final)
    e_u = energy(ref, lam, 0.0, RegVariant.UNREGULARIZED)
    rows = []
    errs = []
    for res in results[1:]:
        fld = _field(domain, M, res.final)
        e_eps = energy(fld, lam, res.spec.eps, RegVariant.LINEAR_EPS)
        e_err = abs(e_u - e_eps)
        errs.append(e_err)
        rows.append(_row_from_result(res, t_eval, error_norms(ref, fld),
                                     err_energy=e_err))
    slope = fit_loglog_slope(eps_list, errs)
    if out is not None:
        write_csv(rows, out, meta={"experiment": "conv-energy", "case": case,
                                   "eps_ref": eps_ref, "M": M, "tau": tau,
                                   "t_eval": t_eval, "slope": slope})
    return rows, slope


def run_time_evolution(case: int, eps_list, times, M: int, tau: float,
                       lam: float = -1.0, eps_ref: float | None = None,
                       threads: int = 1, out=None):
    """Model error vs time for each eps, with a per-eps linear-fit slope."""
    eps_list = sorted(eps_list, reverse=True)
    times = tuple(times)
    if eps_ref is None:
        eps_ref = _proxy_eps(eps_list)
    t_end = max(times)
    domain = default_domain(case)
    base = RunSpec(case=case, domain=domain, M=M, tau=tau, t_end=t_end,
                   eps=eps_ref, lam=lam, variant="linear-eps",
                   snapshot_times=times)
    specs = [base] + [replace(base, eps=e) for e in eps_list]
    results = _pmap(specs, threads)
    ref_snaps = results[0].snapshots
    rows = []
    slopes = {}
    for res in results[1:]:
        errs_t = []
        for t in times:
            ref = _field(domain, M, ref_snaps[t])
            e = error_norms(ref, _field(domain, M, res.snapshots[t]))
            rows.append(_row_from_result(res, t, e))
            errs_t.append(e["l2"])
        slopes[res.spec.eps] = float(np.polyfit(times, errs_t, 1)[0])
    if out is not None:
        write_csv(rows, out, meta={"experiment": "evolve", "case": case,
                                   "eps_ref": eps_ref, "M": M, "tau": tau,
                                   "times": list(times), "slopes": slopes})
    return rows, slopes


def run_tau_convergence(eps_list=(1e-2, 1e-3), levels: int = 5,
                        tau0: float = 0.02, t_eval: float = 0.5,
                        lam: float = -1.0, ref_scale: int = 8,
                        threads: int = 1, out=None):
    """Scheme error at t_eval under simultaneous (h, tau) halving, case 1.

    Keeps h = 75*tau/64 (tau0 = 0.02 makes every grid land on integer M over
    [-12, 12] with t_eval/tau integral).  Per eps, the reference is a run at
    the same eps, ref_scale x finer in both h and tau; errors are taken on
    the coarse nodes.  Returns (rows, slopes-by-eps).
    """
    a, b = DOMAIN_CASE1
    taus = [tau0 / 2**k for k in range(levels)]
    ms = []
    for t in taus:
        h = 75.0 * t / 64.0
        m = (b - a) / h
        if abs(m - round(m)) > 1e-9:
            raise ValueError(f"tau={t} gives non-integer M={m}")
        ms.append(round(m))
    m_ref = ms[-1] * ref_scale
    tau_ref = taus[-1] / ref_scale
    specs = []
    for eps in eps_list:
        specs.append(RunSpec(case=1, domain=(a, b), M=m_ref, tau=tau_ref,
                             t_end=t_eval, eps=eps, lam=lam,
                             first_step="analytic"))
        for t, m in zip(taus, ms):
            specs.append(RunSpec(case=1, domain=(a, b), M=m, tau=t,
                                 t_end=t_eval, eps=eps, lam=lam,
                                 first_step="analytic"))
    results = _pmap(specs, threads)
    rows = []
    slopes = {}
    per_eps = len(taus) + 1
    for i, eps in enumerate(eps_list):
        chunk = results[i * per_eps:(i + 1) * per_eps]
        ref_vals = chunk[0].final
        errs = []
        for res in chunk[1:]:
            coarse_ref = _field((a, b), res.spec.M,
                                _restrict(ref_vals, res.spec.M))
            e = error_norms(coarse_ref, _field((a, b), res.spec.M, res.final))
            rows.append(_row_from_result(res, t_eval, e))
            errs.append(e["l2"])
        slopes[eps] = fit_loglog_slope(taus, errs)
    if out is not None:
        write_csv(rows, out, meta={"experiment": "conv-tau",
                                   "eps_list": list(eps_list), "tau0": tau0,
                                   "levels": levels, "ref_scale": ref_scale,
                                   "t_eval": t_eval, "slopes": slopes})
    return rows, slopes


def run_simulate(case: int, eps: float, h: float, tau: float, T: float,
                 variant: str = "linear-eps", lam: float = -1.0,
                 domain=None, diag_stride: int = 1, out=None,
                 dump_dir=None):
    """Single run emitting a conserved-quantity series, one row per record.

    For case 1 each row also carries the error vs the moving Gausson at that
    time (snapshots are kept at every diag record).
    """
    if domain is None:
        domain = default_domain(case)
    a, b = domain
    M = round((b - a) / h)
    if abs(M * h - (b - a)) > 1e-9 * (b - a):
        raise ValueError(f"h={h} does not divide the domain [{a}, {b}]")
    n = round(T / tau)
    rec_steps = list(range(0, n + 1, diag_stride))
    if rec_steps[-1] != n:
        rec_steps.append(n)
    times = tuple(k * tau for k in rec_steps)
    spec = RunSpec(case=case, domain=(a, b), M=M, tau=tau, t_end=T, eps=eps,
                   lam=lam, variant=variant, snapshot_times=times,
                   diag_stride=diag_stride)
    res = execute(spec)
    grid = Grid1D(a, b, M)
    b0 = (-lam / np.pi) ** 0.25
    rows = []
    for t in times:
        if t not in res.snapshots:
            continue
        fld = _field((a, b), M, res.snapshots[t])
        if case == 1:
            exact = WaveField.from_function(
                grid, lambda x: analytic.moving_gausson(lam, 1.0, b0, x, t))
            errs = error_norms(exact, fld)
        else:
            errs = {"l2": np.nan, "h1": np.nan, "linf": np.nan}
        rows.append(_row_from_result(res, t, errs))
        if dump_dir is not None:
            os.makedirs(dump_dir, exist_ok=True)
            path = os.path.join(dump_dir, f"field_t{t:.6f}.csv")
            with open(path, "w") as f:
                f.write("x,re,im\n")
                for x, u in zip(grid.nodes, fld.values):
                    f.write(f"{x!r},{u.real!r},{u.imag!r}\n")
    if out is not None:
        write_csv(rows, out, meta={"experiment": "simulate",
                                   **asdict(spec)})
    return rows, res
