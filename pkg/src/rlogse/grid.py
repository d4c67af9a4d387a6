"""Uniform 1D grid, finite-difference operators, and discrete inner products / norms.

All fields live on the nodes x_j = a + j*h, j = 0..M, and satisfy homogeneous
Dirichlet conditions u_0 = u_M = 0.  The discrete L2 inner product sums over
interior nodes; the forward-difference inner product sums over j = 0..M-1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class GridMismatchError(ValueError):
    """Two fields that must share a grid do not."""


@dataclass(frozen=True)
class Grid1D:
    """Uniform grid on [a, b] with M intervals (M+1 nodes)."""

    a: float
    b: float
    M: int

    def __post_init__(self):
        if self.M < 2:
            raise ValueError(f"need M >= 2, got M={self.M}")
        if not self.b > self.a:
            raise ValueError(f"need b > a, got a={self.a}, b={self.b}")

    @property
    def h(self) -> float:
        return (self.b - self.a) / self.M

    @property
    def nodes(self) -> np.ndarray:
        # a + j*h rather than cumulative sums: bit-stable node positions
        j = np.arange(self.M + 1)
        return self.a + j * self.h


class WaveField:
    """M+1 complex node values with zero endpoints."""

    __slots__ = ("grid", "values")

    def __init__(self, grid: Grid1D, values: np.ndarray):
        values = np.asarray(values, dtype=np.complex128)
        if values.shape != (grid.M + 1,):
            raise ValueError(
                f"expected {grid.M + 1} values for grid with M={grid.M}, "
                f"got shape {values.shape}"
            )
        if values[0] != 0 or values[-1] != 0:
            raise ValueError("endpoint values must be exactly zero (Dirichlet)")
        self.grid = grid
        self.values = values

    @classmethod
    def from_function(cls, grid: Grid1D, f) -> "WaveField":
        """Sample f on the nodes and force the endpoints to zero."""
        vals = np.asarray(f(grid.nodes), dtype=np.complex128)
        vals = vals.copy()
        vals[0] = 0.0
        vals[-1] = 0.0
        return cls(grid, vals)

    @classmethod
    def zeros(cls, grid: Grid1D) -> "WaveField":
        return cls(grid, np.zeros(grid.M + 1, dtype=np.complex128))

    def copy(self) -> "WaveField":
        return WaveField(self.grid, self.values.copy())

    def __len__(self) -> int:
        return self.values.size


def _check_same_grid(u: WaveField, v: WaveField):
    if u.grid != v.grid:
        raise GridMismatchError(f"grids differ: {u.grid} vs {v.grid}")


def delta_x2(u: WaveField) -> WaveField:
    """Centered second difference; endpoints of the result are zero."""
    h = u.grid.h
    v = u.values
    out = np.zeros_like(v)
    out[1:-1] = (v[2:] - 2.0 * v[1:-1] + v[:-2]) / (h * h)
    return WaveField(u.grid, out)


def delta_x_plus(u: WaveField) -> np.ndarray:
    """Forward difference (u_{j+1} - u_j)/h for j = 0..M-1."""
    h = u.grid.h
    v = u.values
    return (v[1:] - v[:-1]) / h


def inner(u: WaveField, v: WaveField) -> complex:
    """Discrete L2 inner product h * sum_{j=1}^{M-1} u_j conj(v_j)."""
    _check_same_grid(u, v)
    h = u.grid.h
    return complex(h * np.sum(u.values[1:-1] * np.conj(v.values[1:-1])))


def inner_fwd(p: np.ndarray, q: np.ndarray, h: float) -> complex:
    """Forward-difference inner product h * sum_{j=0}^{M-1} p_j conj(q_j)."""
    p = np.asarray(p)
    q = np.asarray(q)
    if p.shape != q.shape:
        raise GridMismatchError(f"length mismatch: {p.shape} vs {q.shape}")
    return complex(h * np.sum(p * np.conj(q)))


def norms(u: WaveField) -> dict:
    """Discrete L2 norm, H1 seminorm, full H1 norm, and max norm.

    l2^2   = h * sum_{j=1}^{M-1} |u_j|^2
    h1s^2  = h * sum_{j=0}^{M-1} |(u_{j+1}-u_j)/h|^2
    h1^2   = l2^2 + h1s^2
    linf   = max over all nodes (endpoints are zero anyway)
    """
    h = u.grid.h
    v = u.values
    l2_sq = h * float(np.sum(np.abs(v[1:-1]) ** 2))
    d = delta_x_plus(u)
    h1s_sq = h * float(np.sum(np.abs(d) ** 2))
    return {
        "l2": np.sqrt(l2_sq),
        "h1_semi": np.sqrt(h1s_sq),
        "h1": np.sqrt(l2_sq + h1s_sq),
        "linf": float(np.max(np.abs(v))),
    }
