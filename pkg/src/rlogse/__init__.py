"""Solver laboratory for the (regularized) logarithmic Schrodinger equation."""

from .grid import Grid1D, WaveField, delta_x2, delta_x_plus, inner, inner_fwd, norms
from .nonlinearity import RegVariant, F, F_eps, F_eps_squared, log_term
from .analytic import (GaussianParams, OdeTrajectory, gaussian_solution,
                       initial_case1, initial_case1_xx, initial_case2,
                       moving_gausson, solve_gaussian_ode)
from .solver import (BlowUpError, FirstStepMode, SolveOutput, SolverParams,
                     TridiagFactor, build_factor, first_step, run,
                     stability_bound, step)
from .diagnostics import (ConservedSeries, ErrorReport, energy, error_norms,
                          fit_loglog_slope, mass, momentum, observed_order)

__version__ = "0.1.0"
