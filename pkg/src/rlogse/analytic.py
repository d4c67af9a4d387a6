"""Closed-form reference solutions for the logarithmic Schrodinger equation.

Gaussian initial data b0*exp(-(a0/2)x^2 + i v x) stays Gaussian for all time;
the width r(t) and phase phi(t) solve a small ODE system integrated here with
classical RK4.  The special case a0 = -lambda > 0 gives the uniformly moving
Gausson, available in closed form (no ODE error).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class OdeSingularityError(RuntimeError):
    """Width r(t) reached zero during integration."""

    def __init__(self, t: float):
        super().__init__(f"width r(t) became non-positive at t={t}")
        self.t = t


@dataclass(frozen=True)
class GaussianParams:
    a0: complex
    b0: complex
    v: float
    lam: float

    def __post_init__(self):
        if not complex(self.a0).real > 0:
            raise ValueError(f"need Re(a0) > 0, got a0={self.a0}")
        if self.lam == 0:
            raise ValueError("lam must be nonzero")

    @property
    def alpha0(self) -> float:
        return complex(self.a0).real


@dataclass(frozen=True)
class OdeTrajectory:
    times: np.ndarray
    r: np.ndarray
    r_dot: np.ndarray
    phi: np.ndarray

    def __len__(self) -> int:
        return self.times.size


def _rhs(p: GaussianParams, y: np.ndarray) -> np.ndarray:
    r, r_dot, _phi = y
    alpha0 = p.alpha0
    lam = p.lam
    log_b0_sq = 2.0 * np.log(abs(complex(p.b0)))
    return np.array([
        r_dot,
        4.0 * alpha0 * alpha0 / r**3 + 4.0 * lam * alpha0 / r,
        alpha0 / (r * r) + lam * log_b0_sq - lam * np.log(r),
    ])


def solve_gaussian_ode(p: GaussianParams, t_end: float, dt: float) -> OdeTrajectory:
    """Integrate (r, r_dot, phi) with fixed-step RK4, storing every step.

    r(0) = 1, r_dot(0) = -2 Im(a0), phi(0) = 0.
    """
    if dt <= 0:
        raise ValueError("dt must be > 0")
    if t_end < 0:
        raise ValueError("t_end must be >= 0")
    if t_end == 0:
        n = 0
    else:
        n = round(t_end / dt)
        if n == 0 or abs(n * dt - t_end) > 1e-9 * t_end:
            raise ValueError(f"t_end={t_end} is not an integer multiple of dt={dt}")
    y = np.array([1.0, -2.0 * complex(p.a0).imag, 0.0])
    times = np.empty(n + 1)
    traj = np.empty((n + 1, 3))
    times[0] = 0.0
    traj[0] = y
    for k in range(n):
        k1 = _rhs(p, y)
        k2 = _rhs(p, y + 0.5 * dt * k1)
        k3 = _rhs(p, y + 0.5 * dt * k2)
        k4 = _rhs(p, y + dt * k3)
        y = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not y[0] > 0:
            raise OdeSingularityError((k + 1) * dt)
        times[k + 1] = (k + 1) * dt
        traj[k + 1] = y
    return OdeTrajectory(times=times, r=traj[:, 0], r_dot=traj[:, 1],
                         phi=traj[:, 2])


def gaussian_solution(p: GaussianParams, traj: OdeTrajectory, x, k: int):
    """Evaluate the Gaussian solution at trajectory index k.

    u(x,t) = b0/sqrt(r) * exp(i(vx - v^2 t) + Y(x - 2vt, t)) with
    Y(x,t) = -i*phi - alpha0*x^2/(2 r^2) + i*(r_dot/r)*x^2/4.
    """
    if not 0 <= k < len(traj):
        raise IndexError(f"trajectory index {k} out of range (len {len(traj)})")
    t = traj.times[k]
    r = traj.r[k]
    r_dot = traj.r_dot[k]
    phi = traj.phi[k]
    x = np.asarray(x, dtype=np.float64)
    xi = x - 2.0 * p.v * t
    y = (-1j * phi - p.alpha0 * xi * xi / (2.0 * r * r)
         + 0.25j * (r_dot / r) * xi * xi)
    out = (complex(p.b0) / np.sqrt(r)) * np.exp(1j * (p.v * x - p.v**2 * t) + y)
    if out.ndim == 0:
        return complex(out)
    return out


def moving_gausson(lam: float, v: float, b0: complex, x, t: float):
    """Uniformly moving Gausson for lam < 0.

    u(x,t) = b0 exp((lam/2)(x-2vt)^2 + i(vx - (phi0+v^2)t)),
    phi0 = lam*(ln|b0|^2 - 1).
    """
    if lam >= 0:
        raise ValueError(f"the Gausson requires lam < 0, got {lam}")
    phi0 = lam * (2.0 * np.log(abs(complex(b0))) - 1.0)
    x = np.asarray(x, dtype=np.float64)
    xi = x - 2.0 * v * t
    out = complex(b0) * np.exp(0.5 * lam * xi * xi
                               + 1j * (v * x - (phi0 + v * v) * t))
    if out.ndim == 0:
        return complex(out)
    return out


def initial_case1(x, lam: float = -1.0, v: float = 1.0):
    """Gaussian data (-lam/pi)^(1/4) * exp(i v x + (lam/2) x^2), lam < 0."""
    if lam >= 0:
        raise ValueError(f"case 1 data requires lam < 0, got {lam}")
    b0 = (-lam / np.pi) ** 0.25
    x = np.asarray(x, dtype=np.float64)
    out = b0 * np.exp(1j * v * x + 0.5 * lam * x * x)
    if out.ndim == 0:
        return complex(out)
    return out


def initial_case1_xx(x, lam: float = -1.0, v: float = 1.0):
    """Analytic second derivative of the case-1 data."""
    x = np.asarray(x, dtype=np.float64)
    g1 = 1j * v + lam * x
    out = initial_case1(x, lam, v) * (g1 * g1 + lam)
    if out.ndim == 0:
        return complex(out)
    return out


def initial_case2(x):
    """Dark-soliton-times-Gaussian data tanh(x) * exp(-x^2); vanishes at 0."""
    x = np.asarray(x, dtype=np.float64)
    out = np.tanh(x) * np.exp(-x * x) + 0j
    if out.ndim == 0:
        return complex(out)
    return out
