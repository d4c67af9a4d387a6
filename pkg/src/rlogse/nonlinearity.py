"""The logarithmic nonlinearity, its regularizations, and the potential densities.

The model term is z * ln(|z|^2).  Two regularizations remove the singularity
at z = 0: the "linear" one replaces |z| by eps + |z| inside the log, the
"squared" one replaces |z|^2 by eps + |z|^2.  All functions accept scalars
or numpy arrays.
"""

from __future__ import annotations

import enum

import numpy as np


class RegVariant(enum.Enum):
    UNREGULARIZED = "log"
    LINEAR_EPS = "linear-eps"
    SQUARED_EPS = "squared-eps"

    @classmethod
    def parse(cls, name: str) -> "RegVariant":
        for v in cls:
            if v.value == name:
                return v
        raise ValueError(f"unknown variant {name!r}; "
                         f"expected one of {[v.value for v in cls]}")


def log_term(z, eps: float, variant: RegVariant = RegVariant.LINEAR_EPS):
    """Evaluate z * ln(eps + |z|)^2 (or the chosen variant) without lambda.

    The unregularized variant returns the limit value 0 at z = 0, since
    z ln|z|^2 -> 0.  Scalars in, scalar out; arrays in, array out.
    """
    if eps < 0:
        raise ValueError(f"eps must be >= 0, got {eps}")
    z_arr = np.asarray(z, dtype=np.complex128)
    mag = np.abs(z_arr)
    if variant is RegVariant.LINEAR_EPS:
        arg = eps + mag
    elif variant is RegVariant.SQUARED_EPS:
        arg = eps + mag * mag
    elif variant is RegVariant.UNREGULARIZED:
        arg = mag
    else:  # pragma: no cover
        raise ValueError(variant)
    with np.errstate(divide="ignore", invalid="ignore"):
        logs = np.where(arg > 0, np.log(np.where(arg > 0, arg, 1.0)), 0.0)
    if variant is RegVariant.SQUARED_EPS:
        out = z_arr * logs
    else:
        out = z_arr * (2.0 * logs)
    if np.isscalar(z) or np.ndim(z) == 0:
        return complex(out)
    return out


def F(rho):
    """Potential density F(rho) = rho*ln(rho) - rho, with F(0) = 0."""
    rho_arr = np.asarray(rho, dtype=np.float64)
    if np.any(rho_arr < 0):
        raise ValueError("rho must be >= 0")
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(rho_arr > 0,
                       rho_arr * np.log(np.where(rho_arr > 0, rho_arr, 1.0))
                       - rho_arr,
                       0.0)
    if np.isscalar(rho) or np.ndim(rho) == 0:
        return float(out)
    return out


def F_eps(rho, eps: float):
    """Regularized potential density (antiderivative of ln(eps + sqrt(s))^2).

    Closed form:
        rho*ln(eps+sqrt(rho))^2 - rho + 2*eps*sqrt(rho)
        - eps^2*ln(1+sqrt(rho)/eps)^2
    """
    if eps <= 0:
        raise ValueError(f"eps must be > 0, got {eps} (use F for eps = 0)")
    rho_arr = np.asarray(rho, dtype=np.float64)
    if np.any(rho_arr < 0):
        raise ValueError("rho must be >= 0")
    s = np.sqrt(rho_arr)
    out = (2.0 * rho_arr * np.log(eps + s) - rho_arr + 2.0 * eps * s
           - 2.0 * eps * eps * np.log1p(s / eps))
    if np.isscalar(rho) or np.ndim(rho) == 0:
        return float(out)
    return out


def F_eps_squared(rho, eps: float):
    """Potential density for the squared regularization: int_0^rho ln(eps+s) ds.

    Closed form (eps+rho)*ln(eps+rho) - rho - eps*ln(eps); zero at rho = 0.
    """
    if eps <= 0:
        raise ValueError(f"eps must be > 0, got {eps}")
    rho_arr = np.asarray(rho, dtype=np.float64)
    if np.any(rho_arr < 0):
        raise ValueError("rho must be >= 0")
    out = (eps + rho_arr) * np.log(eps + rho_arr) - rho_arr - eps * np.log(eps)
    if np.isscalar(rho) or np.ndim(rho) == 0:
        return float(out)
    return out
