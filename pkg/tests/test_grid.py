"""Grid, finite-difference operators, and discrete norms."""

import numpy as np
import pytest

from rlogse import Grid1D, WaveField, delta_x2, delta_x_plus, inner, inner_fwd, norms
from rlogse.grid import GridMismatchError


def random_field(grid, rng):
    vals = rng.standard_normal(grid.M + 1) + 1j * rng.standard_normal(grid.M + 1)
    vals[0] = 0.0
    vals[-1] = 0.0
    return WaveField(grid, vals)


class TestGrid1D:
    def test_nodes_and_spacing(self):
        g = Grid1D(-1.0, 3.0, 8)
        assert g.h == 0.5
        assert np.allclose(g.nodes, np.linspace(-1.0, 3.0, 9))
        assert g.nodes[0] == -1.0 and g.nodes[-1] == 3.0

    def test_validation(self):
        with pytest.raises(ValueError):
            Grid1D(0.0, 1.0, 1)
        with pytest.raises(ValueError):
            Grid1D(1.0, 0.0, 8)


class TestWaveField:
    def test_endpoint_enforcement(self):
        g = Grid1D(0.0, 1.0, 4)
        with pytest.raises(ValueError):
            WaveField(g, np.ones(5))
        with pytest.raises(ValueError):
            WaveField(g, np.ones(4))

    def test_from_function_zeroes_endpoints(self):
        g = Grid1D(0.0, 1.0, 4)
        u = WaveField.from_function(g, lambda x: np.ones_like(x))
        assert u.values[0] == 0.0 and u.values[-1] == 0.0
        assert np.all(u.values[1:-1] == 1.0)

    def test_copy_is_independent(self):
        g = Grid1D(0.0, 1.0, 4)
        u = WaveField.zeros(g)
        w = u.copy()
        w.values[2] = 1.0
        assert u.values[2] == 0.0


class TestOperators:
    def test_second_difference_exact_on_quadratic(self):
        # centered second difference is exact for polynomials up to degree 3
        g = Grid1D(-2.0, 2.0, 16)
        u = WaveField.from_function(g, lambda x: (x - 2.0) * (x + 2.0))
        lap = delta_x2(u)
        assert np.allclose(lap.values[2:-2], 2.0, atol=1e-12)

    def test_second_difference_sine_mode(self):
        # discrete eigenfunction: d_x^2 sin = -(4/h^2) sin^2(pi h / (2L)) sin
        g = Grid1D(0.0, 1.0, 64)
        u = WaveField.from_function(g, lambda x: np.sin(np.pi * x))
        lap = delta_x2(u)
        mu = 4.0 / g.h**2 * np.sin(np.pi * g.h / 2.0) ** 2
        assert np.allclose(lap.values, -mu * u.values, atol=1e-12)
        assert mu == pytest.approx(np.pi**2, rel=1e-3)

    def test_summation_by_parts(self):
        # (-d_x^2 u, v) = <d+ u, d+ v> for Dirichlet fields
        rng = np.random.default_rng(7)
        for m in (4, 9, 32, 101, 512):
            g = Grid1D(-1.0, 2.5, m)
            u = random_field(g, rng)
            v = random_field(g, rng)
            lhs = -inner(delta_x2(u), v)
            rhs = inner_fwd(delta_x_plus(u), delta_x_plus(v), g.h)
            assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))

    def test_forward_difference_linear(self):
        g = Grid1D(0.0, 1.0, 10)
        u = WaveField.from_function(g, lambda x: x * (1.0 - x))
        d = delta_x_plus(u)
        assert d.shape == (10,)
        # derivative of x - x^2 sampled at midpoints: 1 - 2(x_j + h/2)
        mids = g.nodes[:-1] + g.h / 2.0
        assert np.allclose(d.real, 1.0 - 2.0 * mids, atol=1e-12)


class TestNorms:
    def test_hand_computed_values(self):
        # u = (0, 3+4i, 0) on h = 1: l2 = 5, h1 seminorm = sqrt(50)
        g = Grid1D(0.0, 2.0, 2)
        u = WaveField(g, np.array([0.0, 3.0 + 4.0j, 0.0]))
        n = norms(u)
        assert n["l2"] == pytest.approx(5.0, abs=1e-14)
        assert n["h1_semi"] == pytest.approx(np.sqrt(50.0), abs=1e-12)
        assert n["h1"] == pytest.approx(np.sqrt(75.0), abs=1e-12)
        assert n["linf"] == pytest.approx(5.0, abs=1e-14)

    def test_gaussian_l2_matches_integral(self):
        # ||exp(-x^2/2)||_L2 = pi^(1/4) on the whole line
        g = Grid1D(-12.0, 12.0, 4096)
        u = WaveField.from_function(g, lambda x: np.exp(-0.5 * x * x))
        assert norms(u)["l2"] == pytest.approx(np.pi**0.25, rel=1e-4)

    def test_scaling(self):
        rng = np.random.default_rng(3)
        g = Grid1D(0.0, 1.0, 50)
        u = random_field(g, rng)
        n1 = norms(u)
        u2 = WaveField(g, 2.0 * u.values)
        n2 = norms(u2)
        for key in ("l2", "h1_semi", "h1", "linf"):
            assert n2[key] == pytest.approx(2.0 * n1[key], rel=1e-12)


class TestInnerProducts:
    def test_inner_is_sesquilinear(self):
        rng = np.random.default_rng(11)
        g = Grid1D(0.0, 1.0, 30)
        u, v = random_field(g, rng), random_field(g, rng)
        assert inner(u, v) == pytest.approx(np.conj(inner(v, u)), abs=1e-12)
        w = WaveField(g, (2.0 + 1.0j) * u.values)
        assert inner(w, v) == pytest.approx((2.0 + 1.0j) * inner(u, v), abs=1e-12)

    def test_norm_from_inner(self):
        rng = np.random.default_rng(13)
        g = Grid1D(-3.0, 3.0, 77)
        u = random_field(g, rng)
        assert np.sqrt(inner(u, u).real) == pytest.approx(norms(u)["l2"], rel=1e-13)

    def test_grid_mismatch(self):
        u = WaveField.zeros(Grid1D(0.0, 1.0, 4))
        v = WaveField.zeros(Grid1D(0.0, 1.0, 8))
        with pytest.raises(GridMismatchError):
            inner(u, v)
        with pytest.raises(GridMismatchError):
            inner_fwd(np.zeros(4), np.zeros(8), 0.25)
