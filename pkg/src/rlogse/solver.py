"""Semi-implicit leapfrog time stepper on a Dirichlet interval.

Each step solves the constant complex tridiagonal system

    [(i/(2 tau)) I + (1/2) d_x^2] u^{k+1}
        = [(i/(2 tau)) I - (1/2) d_x^2] u^{k-1} + lam * g^k,

with g^k the (regularized) logarithmic term evaluated at u^k.  The matrix is
factorized once per (grid, tau) and reused for every step, which is the
performance core of a run.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from .grid import Grid1D, WaveField, GridMismatchError
from .nonlinearity import RegVariant, log_term


class FirstStepMode(enum.Enum):
    ANALYTIC_SECOND_DERIVATIVE = "analytic"
    DISCRETE_SECOND_DIFFERENCE = "discrete"


class BlowUpError(RuntimeError):
    """Non-finite values appeared in the solution."""

    def __init__(self, step: int, partial=None):
        super().__init__(f"non-finite values after step {step}")
        self.step = step
        self.partial = partial


@dataclass(frozen=True)
class SolverParams:
    lam: float
    eps: float
    tau: float
    t_end: float
    variant: RegVariant = RegVariant.LINEAR_EPS
    first_step: FirstStepMode = FirstStepMode.DISCRETE_SECOND_DIFFERENCE
    stability_guard: bool = True

    def __post_init__(self):
        if self.tau <= 0:
            raise ValueError("tau must be > 0")
        if self.t_end <= 0:
            raise ValueError("t_end must be > 0")
        if self.eps < 0:
            raise ValueError("eps must be >= 0")
        n = round(self.t_end / self.tau)
        if n < 1 or abs(n * self.tau - self.t_end) > 1e-9 * self.t_end:
            raise ValueError(
                f"t_end={self.t_end} is not an integer multiple of tau={self.tau}")

    @property
    def n_steps(self) -> int:
        return round(self.t_end / self.tau)


@dataclass
class SolveOutput:
    snapshots: dict
    final: WaveField
    diagnostics: list
    stability_violations: list


class TridiagFactor:
    """Prefactored interior system A = (i/(2 tau)) I + (1/2) d_x^2.

    A has diagonal i/(2 tau) - 1/h^2 and off-diagonals 1/(2 h^2) on the
    (M-1)-point interior; the LU factors depend only on (M, h, tau).
    """

    def __init__(self, grid: Grid1D, tau: float):
        if tau <= 0:
            raise ValueError("tau must be > 0")
        self.grid = grid
        self.tau = tau
        h = grid.h
        n = grid.M - 1
        diag = np.full(n, 0.5j / tau - 1.0 / (h * h), dtype=np.complex128)
        off = np.full(n - 1, 0.5 / (h * h), dtype=np.complex128)
        a = sp.diags([off, diag, off], offsets=[-1, 0, 1], format="csc")
        self._matrix = a
        self._lu = splu(a, permc_spec="NATURAL")
        # cannot be singular for tau, h > 0 (nonzero imaginary diagonal)
        assert np.all(np.isfinite(self._lu.U.diagonal()))

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        """Solve A w = rhs on the interior nodes."""
        rhs = np.asarray(rhs, dtype=np.complex128)
        if rhs.shape != (self.grid.M - 1,):
            raise GridMismatchError(
                f"rhs length {rhs.shape} does not match interior size "
                f"{self.grid.M - 1}")
        return self._lu.solve(rhs)

    def matrix(self) -> np.ndarray:
        """Dense copy of A (test support; small M only)."""
        return self._matrix.toarray()


def build_factor(grid: Grid1D, tau: float) -> TridiagFactor:
    return TridiagFactor(grid, tau)


def stability_bound(eps: float, u_max: float) -> float:
    """Largest stable tau: 1 / (2 max{|ln eps|, ln(eps + max|u|)})."""
    terms = []
    if eps > 0:
        terms.append(abs(np.log(eps)))
    else:
        return 0.0
    if eps + u_max > 0:
        terms.append(np.log(eps + u_max))
    d = max(terms)
    if d <= 0:
        return np.inf
    return 1.0 / (2.0 * d)


def first_step(u0: WaveField, u0_xx, p: SolverParams) -> WaveField:
    """Taylor first step u^1 = u^0 + tau * i[u0'' - lam*u0*ln(eps+|u0|)^2]."""
    from .grid import delta_x2

    if p.first_step is FirstStepMode.ANALYTIC_SECOND_DERIVATIVE:
        if u0_xx is None:
            raise ValueError("analytic first-step mode requires u0_xx")
        _check_field(u0, u0_xx)
        uxx = u0_xx.values
    else:
        uxx = delta_x2(u0).values
    g = log_term(u0.values, p.eps, p.variant)
    u1 = u0.values + p.tau * 1j * (uxx - p.lam * g)
    u1[0] = 0.0
    u1[-1] = 0.0
    return WaveField(u0.grid, u1)


def _check_field(u: WaveField, v: WaveField):
    if u.grid != v.grid:
        raise GridMismatchError("fields on different grids")


def step(u_prev: WaveField, u_curr: WaveField, factor: TridiagFactor,
         p: SolverParams) -> WaveField:
    """Advance one leapfrog step: returns u^{k+1} from (u^{k-1}, u^k)."""
    _check_field(u_prev, u_curr)
    if factor.grid != u_prev.grid or factor.tau != p.tau:
        raise GridMismatchError("factor built for a different (grid, tau)")
    h = factor.grid.h
    vp = u_prev.values
    lap_prev = (vp[2:] - 2.0 * vp[1:-1] + vp[:-2]) / (h * h)
    g = log_term(u_curr.values[1:-1], p.eps, p.variant)
    rhs = (0.5j / p.tau) * vp[1:-1] - 0.5 * lap_prev + p.lam * g
    w = factor.solve(rhs)
    out = np.empty_like(vp)
    out[0] = 0.0
    out[-1] = 0.0
    out[1:-1] = w
    if not np.all(np.isfinite(out.view(np.float64))):
        raise BlowUpError(step=-1)
    return WaveField(u_prev.grid, out)


def run(u0: WaveField, p: SolverParams, snapshot_times=(),
        u0_xx: WaveField | None = None, diag_hook=None,
        diag_stride: int = 1) -> SolveOutput:
    """Run the full scheme from t=0 to t=t_end.

    snapshot_times must sit within 0.25*tau of a step time (no interpolation).
    diag_hook, if given, is called as diag_hook(t, field) every diag_stride
    steps (including k=0) and its results are collected in order.
    """
    n = p.n_steps
    snap_steps = {}
    for t_s in snapshot_times:
        k_s = round(t_s / p.tau)
        if abs(k_s * p.tau - t_s) > 0.25 * p.tau or not 0 <= k_s <= n:
            raise ValueError(
                f"snapshot time {t_s} is not within 0.25*tau of a step time")
        snap_steps.setdefault(k_s, t_s)

    snapshots = {}
    diagnostics = []
    violations = []

    def record(k: int, fld: WaveField):
        if k in snap_steps:
            snapshots[snap_steps[k]] = fld.copy()
        if diag_hook is not None and k % diag_stride == 0:
            diagnostics.append(diag_hook(k * p.tau, fld))

    def guard(k: int, fld: WaveField):
        if not p.stability_guard:
            return
        bound = stability_bound(p.eps, float(np.max(np.abs(fld.values))))
        if p.tau > bound:
            violations.append((k, bound, p.tau))

    record(0, u0)
    guard(0, u0)
    u_curr = first_step(u0, u0_xx, p)
    if not np.all(np.isfinite(u_curr.values.view(np.float64))):
        raise BlowUpError(1, SolveOutput(snapshots, u0, diagnostics, violations))
    record(1, u_curr)
    u_prev = u0
    factor = build_factor(u0.grid, p.tau)
    for k in range(1, n):
        guard(k, u_curr)
        try:
            u_next = step(u_prev, u_curr, factor, p)
        except BlowUpError:
            raise BlowUpError(
                k + 1, SolveOutput(snapshots, u_curr, diagnostics, violations))
        u_prev, u_curr = u_curr, u_next
        record(k + 1, u_curr)
    return SolveOutput(snapshots=snapshots, final=u_curr,
                       diagnostics=diagnostics,
                       stability_violations=violations)
