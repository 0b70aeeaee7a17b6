"""Builtin meromorphic function families with exact pole sets and
overflow-safe log-scale evaluation.

Families:

* ``rational``        -- p(z)/q(z) from coefficient lists (low-to-high degree)
* ``exp``             -- e^z
* ``entire_over_sin`` -- pi*z*e^{z^2}/sin(pi*z); simple poles at nonzero
                         integers, equals e^{z^2} * prod (1 - z^2/n^2)^{-1}
* ``sparse_poles``    -- sum_n z^2/(r_n^2 (z^2 - r_n^2)) over radii growing
                         as r_{n+1} = factor * r_n^2; simple poles at +-r_n

Ordinary evaluation (`eval_at`) raises once the result leaves float range;
`log_eval` works on log-polar input and returns a certified error bound on
the log modulus, so circle integrals and forward orbits never overflow.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import OverflowRangeError, PoleError
from .logscale import FLOAT_LOG_MAX, LogPolar, wrap_angle

RATIONAL = "rational"
EXP = "exp"
ENTIRE_OVER_SIN = "entire_over_sin"
SPARSE_POLES = "sparse_poles"

FAMILIES = (RATIONAL, EXP, ENTIRE_OVER_SIN, SPARSE_POLES)

#: log-modulus below which log_eval may fall back to direct complex evaluation
DIRECT_EVAL_LOGMOD = 600.0

#: relative pole-proximity cutoff for eval_at returning the pole marker
POLE_CUTOFF = 1e-12

#: absolute argument error above which the arg of a log_eval result is flagged
ARG_TOL = 1e-9

_EPS = 2.220446049250313e-16


@dataclass(frozen=True)
class PoleRecord:
    location: complex
    multiplicity: int


@dataclass(frozen=True)
class LogEval:
    """Result of a log-scale evaluation: value, certified absolute error on
    the log modulus, and whether the argument survived range reduction."""

    value: LogPolar
    logmod_err: float
    arg_ok: bool


def check_sparse_radii(radii, factor) -> str | None:
    """Return the first violated sparse-poles constraint, or None.

    Constraints: r_n > n, r_{n+1} > 16 r_n^2, and sum 1/r_n^2 < 2/7 with a
    geometric tail bound covering the implicit continuation r_{n+1} = factor*r_n^2.
    """
    for i, r in enumerate(radii, start=1):
        if not r > i:
            return f"r_n > n fails at n={i}: r={r}"
    for a, b in zip(radii, radii[1:]):
        if not b > 16 * a * a:
            return f"r_(n+1) > 16 r_n^2 fails: {b} <= 16*{a}^2"
    total = sum(1.0 / (r * r) for r in radii)
    total += sparse_tail_bound(radii[-1], factor)
    if not total < 2.0 / 7.0:
        return f"sum 1/r_n^2 = {total} >= 2/7"
    return None


def sparse_tail_bound(last_radius: float, factor: float) -> float:
    """Upper bound on sum 1/r_n^2 over the continuation beyond last_radius."""
    nxt = factor * last_radius * last_radius
    # ratio between consecutive tail terms is below 1/(256 r^2) <= 1/2
    return 2.0 / (nxt * nxt)


@dataclass(frozen=True)
class FunctionModel:
    """One concrete meromorphic function from the builtin families."""

    family: str
    num: tuple = ()
    den: tuple = (1.0 + 0j,)
    r1: float = 0.0
    factor: float = 0.0
    count: int = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.family == RATIONAL:
            if not self.num or not self.den:
                raise ValueError("rational family needs num and den coefficients")
            if all(c == 0 for c in self.den):
                raise ValueError("denominator is identically zero")
        if self.family == SPARSE_POLES:
            if not (self.r1 > 1 and self.factor > 16 and self.count >= 1):
                raise ValueError("sparse_poles needs r1 > 1, factor > 16, count >= 1")
            bad = check_sparse_radii(self.radii(), self.factor)
            if bad is not None:
                raise ValueError(bad)

    # -- constructors -------------------------------------------------------

    @classmethod
    def make_exp(cls) -> "FunctionModel":
        return cls(EXP)

    @classmethod
    def make_rational(cls, num, den) -> "FunctionModel":
        return cls(RATIONAL, num=tuple(complex(c) for c in num),
                   den=tuple(complex(c) for c in den))

    @classmethod
    def make_entire_over_sin(cls) -> "FunctionModel":
        return cls(ENTIRE_OVER_SIN)

    @classmethod
    def make_sparse_poles(cls, r1: float, factor: float, count: int) -> "FunctionModel":
        return cls(SPARSE_POLES, r1=float(r1), factor=float(factor), count=int(count))

    # -- sparse radii -------------------------------------------------------

    def radii(self) -> list[float]:
        """The stored pole radii of the sparse family (length = count)."""
        out = [self.r1]
        for _ in range(self.count - 1):
            out.append(self.factor * out[-1] * out[-1])
        return out

    def radii_up_to(self, bound: float) -> list[float]:
        """All pole radii <= bound, extending the generating recursion past
        the stored count when needed."""
        out = []
        r = self.r1
        while r <= bound and math.isfinite(r):
            out.append(r)
            r = self.factor * r * r
        return out


def model_from_json(obj) -> FunctionModel:
    """Build a model from its JSON description (dict, JSON text, or path-free).

    Schemas: {"family":"exp"} | {"family":"entire_over_sin"} |
    {"family":"sparse_poles","r1":8,"factor":17,"count":6} |
    {"family":"rational","num":[[re,im],...],"den":[[re,im],...]}
    """
    if isinstance(obj, str):
        obj = json.loads(obj)
    fam = obj.get("family")
    if fam == EXP:
        return FunctionModel.make_exp()
    if fam == ENTIRE_OVER_SIN:
        return FunctionModel.make_entire_over_sin()
    if fam == SPARSE_POLES:
        return FunctionModel.make_sparse_poles(obj["r1"], obj.get("factor", 17), obj.get("count", 3))
    if fam == RATIONAL:
        num = [complex(c[0], c[1]) for c in obj["num"]]
        den = [complex(c[0], c[1]) for c in obj["den"]]
        return FunctionModel.make_rational(num, den)
    raise ValueError(f"unknown family {fam!r}")


def model_to_json(model: FunctionModel) -> dict:
    if model.family == RATIONAL:
        return {"family": RATIONAL,
                "num": [[c.real, c.imag] for c in model.num],
                "den": [[c.real, c.imag] for c in model.den]}
    if model.family == SPARSE_POLES:
        return {"family": SPARSE_POLES, "r1": model.r1,
                "factor": model.factor, "count": model.count}
    return {"family": model.family}


# ---------------------------------------------------------------------------
# pole enumeration
# ---------------------------------------------------------------------------

def _rational_poles(model: FunctionModel) -> list[PoleRecord]:
    den = np.trim_zeros(np.asarray(model.den, dtype=complex), "b")
    if len(den) <= 1:
        return []
    roots = np.roots(den[::-1])
    # repeated denominator roots come back split by ~eps^(1/multiplicity);
    # cluster at 1e-5 relative (distinct poles that close are out of scope)
    records: list[PoleRecord] = []
    for root in roots:
        for i, rec in enumerate(records):
            if abs(root - rec.location) <= 1e-5 * max(1.0, abs(root)):
                records[i] = PoleRecord(rec.location, rec.multiplicity + 1)
                break
        else:
            records.append(PoleRecord(complex(root), 1))
    return records


def poles_within(model: FunctionModel, radius: float) -> list[PoleRecord]:
    """All poles with |location| <= radius, sorted by modulus then argument.

    Exact for every family: rational poles come from the denominator roots,
    entire_over_sin has simple poles at the nonzero integers, sparse_poles at
    +-r_n (the radius recursion is extended as far as needed).
    """
    if radius <= 0:
        raise ValueError("radius must be positive")
    if model.family == EXP:
        recs = []
    elif model.family == RATIONAL:
        recs = [p for p in _rational_poles(model) if abs(p.location) <= radius]
    elif model.family == ENTIRE_OVER_SIN:
        n = int(math.floor(radius + 1e-12))
        if n > 2_000_000:
            raise ValueError("pole list would exceed 2e6 entries; use counting()")
        recs = [PoleRecord(complex(k), 1) for k in range(1, n + 1)]
        recs += [PoleRecord(complex(-k), 1) for k in range(1, n + 1)]
    else:
        recs = []
        for r in model.radii_up_to(radius * (1 + 1e-15)):
            recs.append(PoleRecord(complex(r), 1))
            recs.append(PoleRecord(complex(-r), 1))
    recs.sort(key=lambda p: (abs(p.location), math.atan2(p.location.imag, p.location.real)))
    return recs


def nearest_pole_modulus(model: FunctionModel, r: float) -> float | None:
    """Pole modulus closest to r, without enumerating the whole pole set."""
    if model.family == EXP:
        return None
    if model.family == ENTIRE_OVER_SIN:
        n = round(r)
        if n == 0:
            return 1.0
        return float(n)
    if model.family == SPARSE_POLES:
        cands = model.radii_up_to(4 * r + 4 * model.r1)
        if not cands:
            return model.r1
        return min(cands, key=lambda m: abs(m - r))
    moduli = [abs(p.location) for p in _rational_poles(model)]
    return min(moduli, key=lambda m: abs(m - r)) if moduli else None


def has_pole_in_annulus(model: FunctionModel, lo: float, hi: float) -> bool:
    """Whether any pole modulus lies strictly inside (lo, hi)."""
    if model.family == EXP:
        return False
    if model.family == ENTIRE_OVER_SIN:
        return math.floor(hi - 1e-12) > lo or (lo < 1.0 < hi)
    if model.family == SPARSE_POLES:
        return any(lo < m < hi for m in model.radii_up_to(hi * (1 + 1e-15)))
    return any(lo < abs(p.location) < hi for p in _rational_poles(model))


def nearest_pole_distance(model: FunctionModel, z: complex) -> float:
    """Distance from z to the nearest pole (inf for pole-free families)."""
    if model.family == EXP:
        return math.inf
    if model.family == RATIONAL:
        poles = _rational_poles(model)
        return min((abs(z - p.location) for p in poles), default=math.inf)
    if model.family == ENTIRE_OVER_SIN:
        n = round(z.real)
        cands = {n - 1, n, n + 1}
        cands = [k for k in cands if k != 0]
        return min((abs(z - k) for k in cands), default=math.inf)
    # sparse: poles at +-r_n; only radii near |z| matter
    az = abs(z)
    best = math.inf
    for r in model.radii_up_to(4 * az + 4 * model.r1):
        best = min(best, abs(z - r), abs(z + r))
    return best


def _pole_guard(model: FunctionModel, z: complex, cutoff: float = POLE_CUTOFF):
    d = nearest_pole_distance(model, z)
    if d < cutoff * max(1.0, abs(z)):
        raise PoleError(f"point {z} is within {cutoff} (rel) of a pole")


# ---------------------------------------------------------------------------
# direct evaluation
# ---------------------------------------------------------------------------

def _polyval(coeffs, z: complex) -> complex:
    acc = 0j
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


def _log_sin_pi(z: complex) -> tuple[complex, float]:
    """log sin(pi z) as a complex number (argument unwrapped), with an
    absolute error bound on the real part.

    For |Im z| > 20 the dominant exponential is factored out; the neglected
    correction is below e^{-2 pi |Im z|}.  Otherwise sin(pi z) is evaluated
    directly; for huge |Re z| its phase carries the rounding of pi*Re z,
    which the error bound reflects.
    """
    x, y = z.real, z.imag
    if y > 20.0:
        rem = math.exp(-2.0 * math.pi * y)
        return complex(math.pi * y - math.log(2.0), math.pi / 2 - math.pi * x), 2 * rem
    if y < -20.0:
        rem = math.exp(2.0 * math.pi * y)
        return complex(-math.pi * y - math.log(2.0), math.pi * x - math.pi / 2), 2 * rem
    s = cmath.sin(complex(x * math.pi, y * math.pi))
    if s == 0:
        raise PoleError(f"sin(pi z) vanishes at z={z}", pole=complex(round(x)))
    # rounding of the huge real part dominates the error
    err = math.pi * (abs(x) + abs(y) + 1.0) * _EPS * (1.0 + math.cosh(math.pi * y) / abs(s))
    return cmath.log(s), err


def _sparse_radii_for(model: FunctionModel, az: float) -> list[float]:
    """All stored radii plus continuation radii up to 4*az."""
    use = model.radii()
    r = model.factor * use[-1] ** 2
    while r <= 4.0 * az and math.isfinite(r):
        use.append(r)
        r = model.factor * r * r
    return use


def _sparse_terms(model: FunctionModel, z: complex):
    """Terms z^2/(r^2 (z^2-r^2)): all stored radii plus extensions up to
    4|z|, with a certified bound on the omitted tail.

    Every omitted radius exceeds 4|z|, so |r^2 - z^2| >= (15/16) r^2 and each
    omitted term is below (16/15) |z|^2 / r^4; successive terms shrink by far
    more than half, so twice the first bound covers the whole tail."""
    az = abs(z)
    use = _sparse_radii_for(model, az)
    terms = []
    for r in use:
        r2 = r * r
        z2 = z * z
        terms.append(z2 / (r2 * (z2 - r2)))
    nxt = model.factor * use[-1] ** 2
    tail = 2.0 * (16.0 / 15.0) * az * az / (nxt * nxt * nxt * nxt)
    return terms, tail


def eval_with_bound(model: FunctionModel, z: complex) -> tuple[complex, float]:
    """Sparse-family value together with its certified absolute tail bound."""
    if model.family != SPARSE_POLES:
        raise ValueError("eval_with_bound applies to the sparse_poles family")
    _pole_guard(model, z)
    terms, tail = _sparse_terms(model, z)
    return sum(terms), tail


def eval_at(model: FunctionModel, z: complex) -> complex:
    """f(z) by direct arithmetic.

    Raises PoleError within 1e-12 (relative) of a pole and OverflowRangeError
    when the result modulus exceeds float range (use log_eval instead).
    """
    z = complex(z)
    _pole_guard(model, z)
    if model.family == EXP:
        if z.real > FLOAT_LOG_MAX:
            raise OverflowRangeError("e^z overflows; use log_eval")
        return cmath.exp(z)
    if model.family == RATIONAL:
        try:
            n = _polyval(model.num, z)
            d = _polyval(model.den, z)
        except OverflowError as exc:
            raise OverflowRangeError("polynomial overflow; use log_eval") from exc
        if d == 0:
            raise PoleError(f"denominator vanishes at {z}")
        if _isbad(n) or _isbad(d):
            raise OverflowRangeError("polynomial overflow; use log_eval")
        return n / d
    if model.family == ENTIRE_OVER_SIN:
        if z == 0:
            return 1.0 + 0j  # removable: pi z / sin(pi z) -> 1
        z2 = z * z
        if abs(z2.real) < 700.0 and math.pi * abs(z.imag) < 700.0 and abs(z2) < 1e300:
            return math.pi * z * cmath.exp(z2) / cmath.sin(math.pi * z)
        logsin, _ = _log_sin_pi(z)
        w = z2 + cmath.log(math.pi * z) - logsin
        if w.real > FLOAT_LOG_MAX:
            raise OverflowRangeError("value overflows; use log_eval")
        return cmath.exp(w)
    # sparse poles
    terms, _ = _sparse_terms(model, z)
    return sum(terms)


def _isbad(w: complex) -> bool:
    return not (math.isfinite(w.real) and math.isfinite(w.imag))


# ---------------------------------------------------------------------------
# log-scale evaluation
# ---------------------------------------------------------------------------

def log_eval(model: FunctionModel, p: LogPolar) -> LogEval:
    """f at a log-polar point, with a certified absolute error on the log
    modulus.

    Below the direct-evaluation threshold (log modulus 600) the value may be
    computed by ordinary arithmetic; beyond it the family's dominant-term
    expansion is used.  The argument is carried but flagged unreliable once
    the phase entering range reduction exceeds float resolution.
    """
    if model.family == EXP:
        return _log_eval_exp(p)
    if model.family == RATIONAL:
        return _log_eval_rational(model, p)
    if model.family == ENTIRE_OVER_SIN:
        return _log_eval_eos(model, p)
    return _log_eval_sparse(model, p)


def _arg_ok(amplitude: float) -> bool:
    return amplitude * _EPS < ARG_TOL


def _log_eval_exp(p: LogPolar) -> LogEval:
    # log|e^z| = Re z = e^L cos(theta); arg = Im z = e^L sin(theta) mod 2pi
    if p.logmod > FLOAT_LOG_MAX:
        raise OverflowRangeError("|z| itself exceeds float range")
    m = math.exp(p.logmod)
    re = m * math.cos(p.arg)
    im = m * math.sin(p.arg)
    if not math.isfinite(re):
        raise OverflowRangeError("log modulus of e^z exceeds float range")
    err = max(1e-15, abs(re) * 4 * _EPS + m * abs(p.arg) * _EPS)
    return LogEval(LogPolar(re, wrap_angle(im)), err, _arg_ok(abs(im)))


def _log_eval_rational(model: FunctionModel, p: LogPolar) -> LogEval:
    num = np.trim_zeros(np.asarray(model.num, dtype=complex), "b")
    den = np.trim_zeros(np.asarray(model.den, dtype=complex), "b")
    if len(num) == 0:
        raise ValueError("zero numerator has no log-polar value")
    dn, dd = len(num) - 1, len(den) - 1
    # direct route while safely representable
    if p.logmod <= min(DIRECT_EVAL_LOGMOD, 650.0 / max(1, dn, dd)):
        z = p.to_complex()
        n = _polyval(num, z)
        d = _polyval(den, z)
        if d == 0:
            raise PoleError(f"denominator vanishes at {z}")
        if n == 0:
            return LogEval(LogPolar(-math.inf, 0.0), 0.0, True)
        if not (_isbad(n) or _isbad(d)):
            val = LogPolar(math.log(abs(n)) - math.log(abs(d)),
                           cmath.phase(n) - cmath.phase(d))
            return LogEval(val, max(1e-14, abs(val.logmod)) * 8 * _EPS, True)
    # leading-term ratio with geometric correction bounds
    an, bd = num[-1], den[-1]
    rel = 0.0
    for k in range(dn):
        rel += abs(num[k] / an) * math.exp((k - dn) * p.logmod)
    for k in range(dd):
        rel += abs(den[k] / bd) * math.exp((k - dd) * p.logmod)
    logmod = math.log(abs(an)) - math.log(abs(bd)) + (dn - dd) * p.logmod
    arg = cmath.phase(an) - cmath.phase(bd) + (dn - dd) * p.arg
    err = -math.log1p(-rel) if rel < 0.5 else math.inf
    return LogEval(LogPolar(logmod, arg), max(err, 1e-14), _arg_ok(abs(dn - dd) * abs(p.arg)))


def _log_eval_eos(model: FunctionModel, p: LogPolar) -> LogEval:
    # log|f| = Re z^2 + log pi + log|z| - log|sin pi z|
    if 2 * p.logmod > FLOAT_LOG_MAX + math.log(2.0):
        raise OverflowRangeError("log modulus of e^{z^2} exceeds float range")
    if p.logmod > FLOAT_LOG_MAX:
        raise OverflowRangeError("|z| itself exceeds float range")
    z = p.to_complex()
    m2 = math.exp(2 * p.logmod)
    re_z2 = m2 * math.cos(2 * p.arg)
    im_z2 = m2 * math.sin(2 * p.arg)
    if not math.isfinite(re_z2):
        raise OverflowRangeError("Re z^2 exceeds float range")
    logsin, sin_err = _log_sin_pi(z)
    logmod = re_z2 + math.log(math.pi) + p.logmod - logsin.real
    arg = im_z2 + p.arg - logsin.imag
    err = abs(re_z2) * 4 * _EPS + sin_err + 1e-14
    amp = max(abs(im_z2), math.pi * abs(z.real))
    return LogEval(LogPolar(logmod, wrap_angle(arg)), err, _arg_ok(amp))


def _log_eval_sparse(model: FunctionModel, p: LogPolar) -> LogEval:
    # dominant term factored out so hugely disparate terms combine safely
    L, th = p.logmod, p.arg
    radii = model.radii()
    r = model.factor * radii[-1] ** 2
    while L >= math.log(r / 4.0) and math.isfinite(r):
        radii.append(r)
        r = model.factor * r * r
    pieces: list[LogPolar] = []
    for r in radii:
        lr = math.log(r)
        if L >= lr:  # t = 1/(r^2 (1 - (r/z)^2))
            q = cmath.exp(complex(2 * (lr - L), -2 * th))  # (r/z)^2
            base = 1.0 - q
            if base == 0:
                raise PoleError(f"log-polar point coincides with pole radius {r}")
            pieces.append(LogPolar(-2 * lr - math.log(abs(base)), -cmath.phase(base)))
        else:  # t = -(z/r)^2 / (r^2 (1 - (z/r)^2))
            q = cmath.exp(complex(2 * (L - lr), 2 * th))  # (z/r)^2
            base = 1.0 - q
            pieces.append(LogPolar(2 * (L - lr) - 2 * lr - math.log(abs(base)),
                                   2 * th + math.pi - cmath.phase(base)))
    nxt = model.factor * radii[-1] ** 2
    log_tail = math.log(32.0 / 15.0) + 2 * L - 4 * math.log(nxt)
    tail = math.exp(log_tail) if log_tail < 700 else math.inf
    top = max(pieces, key=lambda q: q.logmod)
    acc = 0j
    for q in pieces:
        acc += math.exp(q.logmod - top.logmod) * cmath.exp(1j * q.arg)
    if acc == 0:  # exact cancellation: a zero of f, not a pole
        return LogEval(LogPolar(-math.inf, 0.0), 0.0, True)
    logmod = top.logmod + math.log(abs(acc))
    arg = cmath.phase(acc)
    rel_tail = tail * math.exp(-logmod) if logmod > -700 else math.inf
    err = 16 * _EPS * len(pieces) + (rel_tail if rel_tail < 0.5 else math.inf)
    return LogEval(LogPolar(logmod, arg), err, True)


# ---------------------------------------------------------------------------
# derivatives
# ---------------------------------------------------------------------------

def derivative_eval(model: FunctionModel, z: complex) -> complex:
    """Closed-form f'(z); requires z at least 1e-9 away from every pole."""
    z = complex(z)
    if nearest_pole_distance(model, z) < 1e-9 * max(1.0, abs(z)):
        raise PoleError("derivative requested too close to a pole")
    if model.family == EXP:
        return cmath.exp(z)
    if model.family == RATIONAL:
        n = _polyval(model.num, z)
        d = _polyval(model.den, z)
        dn = _polyval(_poly_deriv(model.num), z)
        dd = _polyval(_poly_deriv(model.den), z)
        return (dn * d - n * dd) / (d * d)
    if model.family == ENTIRE_OVER_SIN:
        # f'/f = 2z + 1/z - pi cot(pi z), with the removable singularity at 0
        f = eval_at(model, z)
        if abs(z) < 0.1:
            # 1/z - pi cot(pi z) = (pi^2/3) z + (pi^4/45) z^3 + (2 pi^6/945) z^5 + ...
            w = (math.pi ** 2 / 3) * z + (math.pi ** 4 / 45) * z ** 3 \
                + (2 * math.pi ** 6 / 945) * z ** 5
            return f * (2 * z + w)
        cot = cmath.cos(math.pi * z) / cmath.sin(math.pi * z)
        return f * (2 * z + 1 / z - math.pi * cot)
    # sparse: d/dz sum (1/(z^2-r^2) + 1/r^2) = sum -2z/(z^2-r^2)^2
    acc = 0j
    for r in _sparse_radii_for(model, abs(z)):
        acc += -2 * z / (z * z - r * r) ** 2
    return acc


def _poly_deriv(coeffs):
    return tuple(k * c for k, c in enumerate(coeffs))[1:] or (0j,)


# ---------------------------------------------------------------------------
# vectorized paths (coverage grids, Newton multistart)
# ---------------------------------------------------------------------------

def eval_many(model: FunctionModel, zs: np.ndarray) -> np.ndarray:
    """Vectorized f(z) without pole guards; non-finite entries mark overflow."""
    zs = np.asarray(zs, dtype=complex)
    with np.errstate(all="ignore"):
        if model.family == EXP:
            return np.exp(zs)
        if model.family == RATIONAL:
            n = np.polynomial.polynomial.polyval(zs, np.asarray(model.num, dtype=complex))
            d = np.polynomial.polynomial.polyval(zs, np.asarray(model.den, dtype=complex))
            return n / d
        if model.family == ENTIRE_OVER_SIN:
            out = np.pi * zs * np.exp(zs * zs) / np.sin(np.pi * zs)
            return np.where(zs == 0, 1.0 + 0j, out)
        acc = np.zeros_like(zs)
        z2 = zs * zs
        for r in _sparse_radii_for(model, float(np.max(np.abs(zs)))):
            acc += z2 / (r * r * (z2 - r * r))
        return acc


def derivative_many(model: FunctionModel, zs: np.ndarray) -> np.ndarray:
    zs = np.asarray(zs, dtype=complex)
    with np.errstate(all="ignore"):
        if model.family == EXP:
            return np.exp(zs)
        if model.family == RATIONAL:
            num = np.asarray(model.num, dtype=complex)
            den = np.asarray(model.den, dtype=complex)
            dnum = np.polynomial.polynomial.polyder(num) if len(num) > 1 else np.zeros(1, complex)
            dden = np.polynomial.polynomial.polyder(den) if len(den) > 1 else np.zeros(1, complex)
            n = np.polynomial.polynomial.polyval(zs, num)
            d = np.polynomial.polynomial.polyval(zs, den)
            dn = np.polynomial.polynomial.polyval(zs, dnum)
            dd = np.polynomial.polynomial.polyval(zs, dden)
            return (dn * d - n * dd) / (d * d)
        if model.family == ENTIRE_OVER_SIN:
            f = eval_many(model, zs)
            w = 2 * zs + 1 / zs - np.pi * np.cos(np.pi * zs) / np.sin(np.pi * zs)
            small = np.abs(zs) < 0.1
            series = (np.pi ** 2 / 3) * zs + (np.pi ** 4 / 45) * zs ** 3
            w = np.where(small, 2 * zs + series, w)
            return f * w
        acc = np.zeros_like(zs)
        for r in _sparse_radii_for(model, float(np.max(np.abs(zs)))):
            acc += -2 * zs / (zs * zs - r * r) ** 2
        return acc
