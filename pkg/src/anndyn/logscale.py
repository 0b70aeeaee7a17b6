"""Log-scale complex values and iterated-exponential magnitudes.

Forward orbits of the builtin families outgrow ordinary floats after one or
two steps.  Values are therefore carried either as a (log modulus, argument)
pair, or, once even the log modulus leaves float range, as a nonnegative
magnitude in level-index form exp^k(m).
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from functools import total_ordering

from .errors import OverflowRangeError

TAU = 2.0 * math.pi

#: canonical ExtLog mantissas live in [0, MANTISSA_CAP) at level 0 and in
#: [log(MANTISSA_CAP), MANTISSA_CAP) at level >= 1
MANTISSA_CAP = 700.0
_MANTISSA_FLOOR = math.log(MANTISSA_CAP)

#: largest x with exp(x) finite in a double (~709.78)
FLOAT_LOG_MAX = math.log(sys.float_info.max)


def wrap_angle(a: float) -> float:
    """Reduce an angle into (-pi, pi]."""
    a = math.fmod(a, TAU)
    if a <= -math.pi:
        a += TAU
    elif a > math.pi:
        a -= TAU
    return a


@dataclass(frozen=True)
class LogPolar:
    """A nonzero complex number stored as (log modulus, argument).

    Safe far beyond float range: only ``to_complex`` ever exponentiates.
    The argument is always normalized into (-pi, pi].
    """

    logmod: float
    arg: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "arg", wrap_angle(float(self.arg)))
        object.__setattr__(self, "logmod", float(self.logmod))

    @classmethod
    def from_complex(cls, z: complex) -> "LogPolar":
        z = complex(z)
        if z == 0:
            raise ValueError("zero has no log-polar representation")
        return cls(math.log(abs(z)), math.atan2(z.imag, z.real))

    def to_complex(self) -> complex:
        if self.logmod > FLOAT_LOG_MAX:
            raise OverflowRangeError(
                f"modulus exp({self.logmod!r}) exceeds float range")
        m = math.exp(self.logmod)
        return complex(m * math.cos(self.arg), m * math.sin(self.arg))

    def scaled(self, log_factor: float, rot: float = 0.0) -> "LogPolar":
        """Multiply by a factor given as (log modulus, rotation)."""
        return LogPolar(self.logmod + log_factor, self.arg + rot)


@total_ordering
@dataclass(frozen=True)
class ExtLog:
    """A nonnegative magnitude exp^level(mantissa) in canonical level-index form.

    Canonical form keeps the level as small as possible with mantissa below
    ``MANTISSA_CAP``; levels then order the values directly, which makes the
    comparison total: levels are compared first, mantissas break ties.
    """

    level: int
    mantissa: float

    def __post_init__(self):
        lv = int(self.level)
        m = float(self.mantissa)
        if lv < 0:
            raise ValueError("level must be nonnegative")
        if math.isnan(m):
            raise ValueError("mantissa must not be NaN")
        # pull down while the value still fits one level lower
        while lv > 0 and m < _MANTISSA_FLOOR:
            m = math.exp(m)
            lv -= 1
        # push up while the mantissa exceeds the cap
        while not math.isfinite(m) or m >= MANTISSA_CAP:
            if not math.isfinite(m):
                raise ValueError("non-finite mantissa")
            m = math.log(m)
            lv += 1
        if lv == 0 and m < 0:
            raise ValueError("ExtLog represents nonnegative magnitudes only")
        object.__setattr__(self, "level", lv)
        object.__setattr__(self, "mantissa", m)

    # -- construction -----------------------------------------------------

    @classmethod
    def from_float(cls, x: float) -> "ExtLog":
        if x < 0:
            raise ValueError("ExtLog represents nonnegative magnitudes only")
        return cls(0, float(x))

    @classmethod
    def from_log(cls, logval: float) -> "ExtLog":
        """The value exp(logval); logval may be any float."""
        return cls(1, float(logval))

    # -- exp / log --------------------------------------------------------

    def exp(self) -> "ExtLog":
        return ExtLog(self.level + 1, self.mantissa)

    def log(self) -> "ExtLog":
        if self.level >= 1:
            return ExtLog(self.level - 1, self.mantissa)
        if self.mantissa < 1.0:
            raise ValueError("log of a value below 1 is negative")
        return ExtLog(0, math.log(self.mantissa))

    # -- ordering ---------------------------------------------------------

    def _key(self):
        return (self.level, self.mantissa)

    def __lt__(self, other: "ExtLog") -> bool:
        return self._key() < other._key()

    # -- arithmetic against ordinary floats --------------------------------

    def times_float(self, c: float) -> "ExtLog":
        """The value scaled by c > 0 (absorbed at level >= 2 where a float
        factor is below mantissa resolution)."""
        if c <= 0:
            raise ValueError("scale factor must be positive")
        if self.level == 0:
            if self.mantissa == 0.0:
                return self
            return ExtLog.from_log(math.log(self.mantissa) + math.log(c))
        if self.level == 1:
            return ExtLog.from_log(self.mantissa + math.log(c))
        return ExtLog(self.level - 1, self.mantissa).add_float(math.log(c)).exp()

    def add_float(self, a: float) -> "ExtLog":
        """The value plus a (which must leave it nonnegative)."""
        if self.level == 0:
            return ExtLog.from_float(self.mantissa + a)
        if self.level == 1:
            q = a * math.exp(-self.mantissa)
            if q <= -1.0:
                raise ValueError("addition would make the magnitude negative")
            return ExtLog.from_log(self.mantissa + math.log1p(q))
        # at level >= 2 any float shift is below representation resolution
        return self

    def pow_float(self, q: float) -> "ExtLog":
        """The value raised to q > 0."""
        if q <= 0:
            raise ValueError("exponent must be positive")
        if self.level == 0:
            if self.mantissa == 0.0:
                return self
            return ExtLog.from_log(q * math.log(self.mantissa))
        return ExtLog(self.level - 1, self.mantissa).times_float(q).exp()

    # -- conversion ---------------------------------------------------------

    def to_float(self) -> float:
        if self.level == 0:
            return self.mantissa
        if self.level == 1 and self.mantissa <= FLOAT_LOG_MAX:
            return math.exp(self.mantissa)
        return math.inf

    def __repr__(self) -> str:
        if self.level == 0:
            return f"ExtLog({self.mantissa:.6g})"
        return f"ExtLog(exp^{self.level}({self.mantissa:.6g}))"
