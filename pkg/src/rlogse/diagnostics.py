"""Conserved-quantity functionals, error norms, and observed-order estimation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import WaveField, delta_x_plus, norms, _check_same_grid
from .nonlinearity import RegVariant, F, F_eps, F_eps_squared


@dataclass
class ConservedSeries:
    times: np.ndarray
    mass: np.ndarray
    momentum: np.ndarray
    energy: np.ndarray

    def __post_init__(self):
        n = self.times.size
        if not (self.mass.size == self.momentum.size == self.energy.size == n):
            raise ValueError("series lengths differ")
        if np.any(self.mass < 0):
            raise ValueError("mass entries must be >= 0")

    def relative_drift(self) -> dict:
        """Max |Q(t) - Q(0)| / |Q(0)| for each tracked quantity."""
        out = {}
        for name, q in (("mass", self.mass), ("momentum", self.momentum),
                        ("energy", self.energy)):
            out[name] = float(np.max(np.abs(q - q[0])) / abs(q[0]))
        return out


@dataclass
class ErrorReport:
    h: float
    tau: float
    eps: float
    l2: float
    h1: float
    linf: float
    energy_err: float = 0.0
    which: str = "total"  # model: u vs u_eps; scheme: u_eps vs numeric; total

    def __post_init__(self):
        for name in ("l2", "h1", "linf", "energy_err"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")


def mass(u: WaveField) -> float:
    """Trapezoidal |u|^2 integral; with zero endpoints this is h*sum interior."""
    h = u.grid.h
    return h * float(np.sum(np.abs(u.values[1:-1]) ** 2))


def momentum(u: WaveField) -> float:
    """Im of h * sum_{j=0}^{M-1} conj(u_j) * (forward difference)_j."""
    h = u.grid.h
    d = delta_x_plus(u)
    return float(np.imag(h * np.sum(np.conj(u.values[:-1]) * d)))


def energy(u: WaveField, lam: float, eps: float,
           variant: RegVariant = RegVariant.LINEAR_EPS) -> float:
    """Gradient term via the discrete H1 seminorm, potential via trapezoid."""
    h = u.grid.h
    d = delta_x_plus(u)
    grad = h * float(np.sum(np.abs(d) ** 2))
    rho = np.abs(u.values[1:-1]) ** 2
    if variant is RegVariant.UNREGULARIZED:
        pot = F(rho)
    elif variant is RegVariant.LINEAR_EPS:
        pot = F_eps(rho, eps)
    elif variant is RegVariant.SQUARED_EPS:
        pot = F_eps_squared(rho, eps)
    else:  # pragma: no cover
        raise ValueError(variant)
    return grad + lam * h * float(np.sum(pot))


def error_norms(u_ref: WaveField, u_num: WaveField) -> dict:
    """L2, full H1, and max norms of the difference u_ref - u_num."""
    _check_same_grid(u_ref, u_num)
    diff = WaveField(u_ref.grid, u_ref.values - u_num.values)
    n = norms(diff)
    return {"l2": n["l2"], "h1": n["h1"], "linf": n["linf"]}


def observed_order(errors) -> list:
    """Convergence rates log(err_k/err_{k+1}) / log(scale_k/scale_{k+1}).

    errors is a sequence of (scale, err) pairs with decreasing scales.
    Nonpositive errors give a None marker instead of a number.
    """
    errors = list(errors)
    if len(errors) < 2:
        raise ValueError("need at least 2 (scale, err) entries")
    rates = []
    for (s0, e0), (s1, e1) in zip(errors, errors[1:]):
        if s1 >= s0:
            raise ValueError("scales must decrease")
        if e0 <= 0 or e1 <= 0:
            rates.append(None)
        else:
            rates.append(float(np.log(e0 / e1) / np.log(s0 / s1)))
    return rates


def fit_loglog_slope(xs, ys) -> float:
    """Least-squares slope of log(y) vs log(x)."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if np.any(xs <= 0) or np.any(ys <= 0):
        raise ValueError("log-log fit needs positive data")
    return float(np.polyfit(np.log(xs), np.log(ys), 1)[0])


def conserved_hook(lam: float, eps: float,
                   variant: RegVariant = RegVariant.LINEAR_EPS):
    """Hook for solver.run collecting (t, mass, momentum, energy) tuples."""
    def hook(t: float, fld: WaveField):
        return (t, mass(fld), momentum(fld), energy(fld, lam, eps, variant))
    return hook


def series_from_rows(rows) -> ConservedSeries:
    arr = np.asarray(rows, dtype=float)
    return ConservedSeries(times=arr[:, 0], mass=arr[:, 1],
                           momentum=arr[:, 2], energy=arr[:, 3])
