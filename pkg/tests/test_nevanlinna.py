import math

import numpy as np
import pytest
from scipy.integrate import quad

from anndyn.errors import PoleOnCircleError
from anndyn.funcmodel import FunctionModel
from anndyn.logscale import ExtLog
from anndyn.nevanlinna import (characteristic, characteristic_iterate,
                               counting, fit_growth, growth_report,
                               max_modulus, proximity, proximity_detail)


def quad_logplus_oracle(log_abs_f, tol=1e-11):
    """Independent proximity oracle: scipy quadrature of log^+|f| over the circle."""
    val, err = quad(lambda t: max(log_abs_f(t), 0.0), 0.0, 2 * math.pi,
                    limit=400, epsabs=tol, epsrel=1e-12)
    return val / (2 * math.pi)


class TestProximity:
    def test_exp_at_pi(self, exp_model):
        # closed form m(r, e^z) = r/pi; cross-checked by scipy quadrature
        oracle = quad_logplus_oracle(lambda t: math.pi * math.cos(t))
        assert oracle == pytest.approx(1.0, abs=1e-9)
        assert proximity(exp_model, math.pi) == pytest.approx(1.0, abs=1e-8)

    def test_identity_on_unit_circle(self):
        model = FunctionModel.make_rational([0, 1.0], [1.0])  # f(z) = z
        assert proximity(model, 1.0) == pytest.approx(0.0, abs=1e-12)

    def test_eos_at_10(self, eos_model):
        # quadrature at the nudged radius (poles +-10 sit on the circle)
        det = proximity_detail(eos_model, 10.0)
        assert det.nudged
        assert det.radius_used == pytest.approx(10.0 * (1 + 1e-6))

        def log_abs(t):
            r = det.radius_used
            x, y = r * math.cos(t), r * math.sin(t)
            re_z2 = r * r * math.cos(2 * t)
            if abs(y) > 15:
                ln_sin = math.pi * abs(y) - math.log(2.0)
            else:
                ln_sin = 0.5 * math.log(math.sin(math.pi * x) ** 2
                                        + math.sinh(math.pi * y) ** 2)
            return re_z2 + math.log(math.pi * r) - ln_sin

        oracle = quad_logplus_oracle(log_abs, tol=1e-9)
        assert det.value == pytest.approx(oracle, abs=2e-6)
        # measured size: about (r^2/pi) - 0.586 r; the naive r^2/pi overshoots
        assert 0.85 * 100 / math.pi < det.value < 1.05 * 100 / math.pi

    def test_monotone_in_r(self, exp_model, eos_model, sparse_model):
        for model in (exp_model, eos_model, sparse_model):
            vals = [proximity(model, r) for r in (2.3, 4.7, 9.1, 18.2, 36.5)]
            assert all(b >= a - 1e-9 for a, b in zip(vals, vals[1:])), model.family
            assert all(v >= 0 for v in vals)


class TestCounting:
    def test_exp_no_poles(self, exp_model):
        assert counting(exp_model, 12345.0) == 0.0

    def test_two_simple_poles(self):
        model = FunctionModel.make_rational([1.0], [2.0, -3.0, 1.0])  # 1/((z-1)(z-2))
        expect = math.log(3.0) + math.log(1.5)
        assert counting(model, 3.0) == pytest.approx(expect, abs=1e-12)

    def test_eos_at_10_5(self, eos_model):
        oracle = 2 * sum(math.log(10.5 / n) for n in range(1, 11))
        got = counting(eos_model, 10.5)
        assert got == pytest.approx(oracle, abs=1e-9)
        assert got == pytest.approx(16.8186800, abs=1e-6)

    def test_pole_at_origin(self):
        model = FunctionModel.make_rational([1.0], [0, 1.0])  # 1/z
        assert counting(model, math.e) == pytest.approx(1.0, abs=1e-12)

    def test_monotone_and_nonnegative(self, eos_model, sparse_model):
        for model in (eos_model, sparse_model):
            vals = [counting(model, r) for r in (1.5, 3.3, 8.8, 20.2, 51.7)]
            assert all(b >= a for a, b in zip(vals, vals[1:]))
            assert all(v >= 0 for v in vals)


class TestCharacteristic:
    def test_exp(self, exp_model):
        assert characteristic(exp_model, math.pi) == pytest.approx(1.0, abs=1e-8)

    def test_identity_at_e(self):
        model = FunctionModel.make_rational([0, 1.0], [1.0])
        assert characteristic(model, math.e) == pytest.approx(1.0, abs=1e-10)

    def test_additivity(self, eos_model):
        det = proximity_detail(eos_model, 10.0)
        T = characteristic(eos_model, 10.0)
        N = counting(eos_model, det.radius_used)
        assert T == pytest.approx(det.value + N, rel=1e-10)

    def test_log_convexity_proxy(self, exp_model, eos_model):
        for model in (exp_model, eos_model):
            rs = [5.5, 11.3, 22.6, 45.2]
            ts = [characteristic(model, r) for r in rs]
            for i in range(len(rs) - 2):
                x1, x2, x3 = (math.log(r) for r in rs[i:i + 3])
                lam = (x2 - x1) / (x3 - x1)
                interp = (1 - lam) * ts[i] + lam * ts[i + 2]
                assert ts[i + 1] <= interp + 1e-6


class TestCharacteristicIterate:
    def test_zeroth(self, eos_model):
        assert characteristic_iterate(eos_model, 7.0, 0) == ExtLog.from_float(7.0)

    def test_exp_first_and_second(self, exp_model):
        t1 = characteristic_iterate(exp_model, math.pi, 1)
        assert t1.to_float() == pytest.approx(math.e, rel=1e-7)
        t2 = characteristic_iterate(exp_model, math.pi, 2)
        assert t2.to_float() == pytest.approx(math.exp(math.e / math.pi), rel=1e-7)

    def test_monotone_in_r_and_n(self, exp_model):
        # increasing in r at every depth
        for n in (1, 2, 3):
            a = characteristic_iterate(exp_model, 10.0, n)
            b = characteristic_iterate(exp_model, 15.0, n)
            assert a < b
        # increasing in n once That_1(r) >= r
        r = 10.0
        assert characteristic_iterate(exp_model, r, 1).to_float() >= r
        prev = ExtLog.from_float(r)
        for n in range(1, 4):
            cur = characteristic_iterate(exp_model, r, n)
            assert prev < cur
            prev = cur

    def test_level_two_reached(self, exp_model):
        t3 = characteristic_iterate(exp_model, 10.0, 3)
        assert t3.level >= 1
        t2 = characteristic_iterate(exp_model, 100.0, 2)
        assert t2.level == 2


class TestMaxModulus:
    def test_exp(self, exp_model):
        assert max_modulus(exp_model, 10.0) == pytest.approx(10.0, abs=1e-9)

    def test_quadratic(self):
        model = FunctionModel.make_rational([1.0, 0, 1.0], [1.0])  # z^2 + 1
        assert max_modulus(model, 2.0) == pytest.approx(math.log(5.0), abs=1e-9)

    def test_eos_against_dense_sampling(self, eos_model):
        r = 3.5
        t = np.arange(1 << 20) * (2 * np.pi / (1 << 20))
        x, y = r * np.cos(t), r * np.sin(t)
        re_z2 = r * r * np.cos(2 * t)
        ln_sin = 0.5 * np.log(np.sin(np.pi * x) ** 2 + np.sinh(np.pi * y) ** 2)
        oracle = np.max(re_z2 + math.log(math.pi * r) - ln_sin)
        assert max_modulus(eos_model, r) == pytest.approx(float(oracle), abs=1e-4)

    def test_pole_on_circle(self, eos_model):
        with pytest.raises(PoleOnCircleError):
            max_modulus(eos_model, 5.0)


class TestGrowthReport:
    def test_exp_ratio_infinite(self, exp_model):
        rep = growth_report(exp_model, [10.0, 20.0, 40.0], K=2.0)
        assert all(v == math.inf for v in rep.growth_ratio)
        assert rep.phi_hat == rep.growth_ratio

    def test_exp_doubling_margin(self, exp_model):
        rep = growth_report(exp_model, [10.0], K=2.0)
        expect = 20 / math.pi - (1 + math.log(2) / math.log(10)) * (10 / math.pi)
        assert rep.doubling_margin[0] == pytest.approx(expect, abs=1e-6)
        assert rep.doubling_margin[0] == pytest.approx(2.22495, abs=1e-4)

    def test_eos_ratio_strictly_increasing(self, eos_model):
        rep = growth_report(eos_model, [10.0, 20.0, 40.0, 80.0], K=2.0)
        assert all(b > a for a, b in zip(rep.growth_ratio, rep.growth_ratio[1:]))

    def test_sandwich_exp_eos(self, exp_model, eos_model):
        for model in (exp_model, eos_model):
            rep = growth_report(model, [5.0, 10.0, 20.0], K=2.0)
            assert all(rep.hayman_ok), model.family

    def test_m_n_t_columns_consistent(self, eos_model):
        rep = growth_report(eos_model, [6.5, 13.0, 26.0], K=2.0)
        for i in range(3):
            assert rep.T[i] == pytest.approx(rep.m[i] + rep.N[i], rel=1e-10)

    def test_grid_must_increase(self, exp_model):
        with pytest.raises(ValueError):
            growth_report(exp_model, [10.0, 10.0], K=2.0)


class TestGrowthFit:
    def test_exp_power_law(self, exp_model):
        fit = fit_growth(exp_model)
        assert fit.q == pytest.approx(1.0, abs=1e-6)
        assert fit.a == pytest.approx(1 / math.pi, rel=1e-6)
        assert fit.b == 0.0
        assert fit.residual < 1e-6

    def test_eos_power_law(self, eos_model):
        fit = fit_growth(eos_model)
        assert fit.q == pytest.approx(2.0, abs=1e-4)
        # measured leading constant is about 1/pi, not the claimed 2
        assert fit.a == pytest.approx(1 / math.pi, rel=1e-3)
        assert fit.p == pytest.approx(1.0, abs=1e-4)
        assert fit.b == pytest.approx(2.0, rel=1e-3)
        assert fit.residual < 0.05
