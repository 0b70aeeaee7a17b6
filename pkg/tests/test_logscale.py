import math
import random

import pytest

from anndyn.errors import OverflowRangeError
from anndyn.logscale import MANTISSA_CAP, ExtLog, LogPolar, wrap_angle


class TestLogPolar:
    def test_roundtrip_moderate(self):
        rng = random.Random(10)
        for _ in range(500):
            z = complex(rng.uniform(-50, 50), rng.uniform(-50, 50))
            if z == 0:
                continue
            back = LogPolar.from_complex(z).to_complex()
            assert abs(back - z) <= 1e-12 * abs(z)

    def test_roundtrip_extreme_logmod(self):
        # representation survives |logmod| up to 700
        rng = random.Random(11)
        for _ in range(500):
            lm = rng.uniform(-700, 700)
            arg = rng.uniform(-math.pi, math.pi)
            p = LogPolar(lm, arg)
            q = LogPolar.from_complex(p.to_complex())
            assert abs(q.logmod - lm) <= 1e-12 * max(1.0, abs(lm))
            assert abs(wrap_angle(q.arg - arg)) <= 1e-12

    def test_arg_normalized(self):
        assert LogPolar(0.0, 3 * math.pi).arg == pytest.approx(math.pi)
        assert LogPolar(0.0, -math.pi).arg == pytest.approx(math.pi)
        assert -math.pi < LogPolar(1.0, 123456.789).arg <= math.pi

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            LogPolar.from_complex(0)

    def test_overflow_to_complex(self):
        with pytest.raises(OverflowRangeError):
            LogPolar(800.0, 0.0).to_complex()


def random_canonical(rng):
    level = rng.choice([0, 0, 0, 1, 1, 2, 3])
    if level == 0:
        return ExtLog(0, rng.uniform(0, MANTISSA_CAP - 1e-9))
    return ExtLog(level, rng.uniform(math.log(MANTISSA_CAP), MANTISSA_CAP - 1e-9))


class TestExtLog:
    def test_canonical_form(self):
        # mantissa always lands below the cap, at the smallest possible level
        assert ExtLog.from_float(5000.0) == ExtLog(1, math.log(5000.0))
        assert ExtLog(1, 3.0) == ExtLog(0, math.exp(3.0))
        assert ExtLog(2, 1.0) == ExtLog(0, math.exp(math.exp(1.0)))
        x = ExtLog.from_log(22026.4658)
        assert x.level == 2
        assert x.mantissa == pytest.approx(math.log(22026.4658))

    def test_from_log_negative(self):
        x = ExtLog.from_log(-5.0)
        assert x.level == 0
        assert x.mantissa == pytest.approx(math.exp(-5.0))

    def test_exp_log_inverse(self):
        rng = random.Random(12)
        for _ in range(2000):
            x = random_canonical(rng)
            y = x.exp().log()
            assert y.level == x.level
            assert y.mantissa == pytest.approx(x.mantissa, rel=1e-12, abs=1e-12)
        with pytest.raises(ValueError):
            ExtLog.from_float(0.5).log()

    def test_ordering_total_transitive_antisymmetric(self):
        rng = random.Random(13)
        for _ in range(100_000):
            a, b, c = (random_canonical(rng) for _ in range(3))
            # totality
            assert (a < b) or (b < a) or (a == b)
            # antisymmetry
            assert not ((a < b) and (b < a))
            # transitivity
            if a < b and b < c:
                assert a < c

    def test_order_matches_floats_at_level0(self):
        assert ExtLog.from_float(3.0) < ExtLog.from_float(699.0)
        assert ExtLog.from_float(699.0) < ExtLog.from_float(701.0)
        assert ExtLog.from_float(701.0) < ExtLog.from_log(800.0)

    def test_times_pow_add(self):
        x = ExtLog.from_float(100.0)
        assert x.times_float(3.0).to_float() == pytest.approx(300.0)
        assert x.pow_float(2.0).to_float() == pytest.approx(10000.0)
        assert x.add_float(-40.0).to_float() == pytest.approx(60.0)
        y = ExtLog.from_log(500.0)  # e^500
        assert y.times_float(2.0).mantissa == pytest.approx(500.0 + math.log(2.0))
        assert y.pow_float(1.2).mantissa == pytest.approx(600.0)
        big = ExtLog(2, 30.0)
        # float-scale shifts are absorbed below level-2 resolution
        assert big.add_float(1e200) == big
        assert big.times_float(2.0).level == 2

    def test_to_float_overflow(self):
        assert ExtLog(2, 30.0).to_float() == math.inf
        assert ExtLog.from_log(400.0).to_float() == pytest.approx(math.exp(400.0))
