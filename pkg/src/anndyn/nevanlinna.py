"""Growth gauges of a meromorphic function: the circle average m(r), the
integrated pole count N(r), their sum T(r), the maximum modulus, iterates of
exp T, and a tabulated growth report.

Definitions
-----------
    m(r) = (1/2pi) \\int_0^{2pi} log^+ |f(r e^{i t})| dt
    N(r) = sum over poles 0<|p|<=r of mult * log(r/|p|)  +  n(0) log r
    T(r) = m(r) + N(r)

T-hat iterates feed the covering chain: That_0(r) = r and
That_{n+1}(r) = exp(T(That_n(r))); they leave float range at n = 2, so the
iteration is carried in level-index form and switches from quadrature to a
fitted power law T ~ a r^q past the numeric radius threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import AsymptoticUnavailableError, PoleOnCircleError
from .funcmodel import (ENTIRE_OVER_SIN, EXP, SPARSE_POLES, FunctionModel,
                        LogPolar, log_eval, nearest_pole_modulus, poles_within)
from .logscale import ExtLog
from .quadrature import integrate_circle

#: radius beyond which T is extrapolated from the fitted power law instead of
#: integrated numerically
NUMERIC_RADIUS_MAX = 1e12

#: relative fit residual beyond which extrapolation is refused
FIT_RESIDUAL_MAX = 0.05

_NUDGE = 1e-6
_NEAR = 1e-9


def nudged_radius(model: FunctionModel, r: float) -> tuple[float, bool]:
    """Move r off any pole modulus within relative distance 1e-9.

    The radius is scaled by (1 +- 1e-6), away from the offending modulus
    (outward on a tie).  Returns (radius, whether a nudge happened).
    """
    near = nearest_pole_modulus(model, r)
    if near is None or abs(near - r) > _NEAR * r:
        return r, False
    direction = 1.0 if r >= near else -1.0
    return r * (1.0 + direction * _NUDGE), True


def _counting_exact(model: FunctionModel, r: float) -> float:
    if model.family == EXP:
        return 0.0
    if model.family == ENTIRE_OVER_SIN:
        n = int(math.floor(r + 1e-12))
        if n == 0:
            return 0.0
        # 2 * sum_{k<=n} log(r/k) = 2 (n log r - log n!)
        return 2.0 * (n * math.log(r) - math.lgamma(n + 1))
    if model.family == SPARSE_POLES:
        return 2.0 * sum(math.log(r / s) for s in model.radii_up_to(r))
    total = 0.0
    for p in poles_within(model, r):
        if abs(p.location) == 0.0:
            total += p.multiplicity * math.log(r)
        else:
            total += p.multiplicity * math.log(r / abs(p.location))
    return total


@dataclass
class ProximityDetail:
    value: float
    radius_used: float
    nudged: bool
    nodes: int


def proximity_detail(model: FunctionModel, r: float, tol_rel: float = 1e-8) -> ProximityDetail:
    if r <= 0:
        raise ValueError("radius must be positive")
    rr, nudged = nudged_radius(model, r)
    lr = math.log(rr)

    def integrand(theta: float) -> float:
        lm = log_eval(model, LogPolar(lr, theta)).value.logmod
        return lm if lm > 0.0 else 0.0

    res = integrate_circle(integrand, tol_rel=tol_rel)
    return ProximityDetail(res.value / (2 * math.pi), rr, nudged, res.nodes)


def proximity(model: FunctionModel, r: float) -> float:
    """m(r, f): circle average of log^+ |f|, by adaptive quadrature of the
    log-scale evaluator (absolute error ~1e-8 * max(1, m))."""
    return proximity_detail(model, r).value


def counting(model: FunctionModel, r: float) -> float:
    """N(r, f) in closed form from the exact pole set."""
    if r <= 0:
        raise ValueError("radius must be positive")
    rr, _ = nudged_radius(model, r)
    return _counting_exact(model, rr)


def characteristic(model: FunctionModel, r: float) -> float:
    """T(r, f) = m(r, f) + N(r, f), both taken at the same (nudged) radius."""
    rr, _ = nudged_radius(model, r)
    return proximity_detail(model, rr).value + _counting_exact(model, rr)


# ---------------------------------------------------------------------------
# maximum modulus
# ---------------------------------------------------------------------------

def circle_log_max(model: FunctionModel, r: float,
                   samples: int = 4096) -> tuple[float, float]:
    """(log max |f|, argmax angle) on |z| = r: uniform sampling followed by
    golden-section refinement around the best local maxima."""
    lr = math.log(r)

    def g(theta: float) -> float:
        return log_eval(model, LogPolar(lr, theta)).value.logmod

    vals = [g(2 * math.pi * i / samples) for i in range(samples)]
    # indices of the three best circular local maxima
    order = sorted(range(samples), key=lambda i: vals[i], reverse=True)
    peaks = []
    for i in order:
        if len(peaks) == 3:
            break
        if vals[i] >= vals[(i - 1) % samples] and vals[i] >= vals[(i + 1) % samples]:
            if all(min((i - j) % samples, (j - i) % samples) > 2 for j in peaks):
                peaks.append(i)
    if not peaks:
        peaks = [order[0]]

    h = 2 * math.pi / samples
    invphi = (math.sqrt(5.0) - 1) / 2
    best_val, best_arg = -math.inf, 0.0
    for i in peaks:
        a = 2 * math.pi * i / samples - h
        b = a + 2 * h
        x1 = b - invphi * (b - a)
        x2 = a + invphi * (b - a)
        f1, f2 = g(x1), g(x2)
        for _ in range(60):
            if f1 < f2:
                a, x1, f1 = x1, x2, f2
                x2 = a + invphi * (b - a)
                f2 = g(x2)
            else:
                b, x2, f2 = x2, x1, f1
                x1 = b - invphi * (b - a)
                f1 = g(x1)
        val, arg = max((f1, x1), (f2, x2))
        if val > best_val:
            best_val, best_arg = val, arg
    return best_val, best_arg


def max_modulus(model: FunctionModel, r: float) -> float:
    """log M(r, f) on a pole-free circle (log-scale output)."""
    near = nearest_pole_modulus(model, r)
    if near is not None and abs(near - r) <= _NEAR * r:
        raise PoleOnCircleError(f"pole modulus {near} sits on |z| = {r}")
    return circle_log_max(model, r)[0]


# ---------------------------------------------------------------------------
# fitted large-r growth law
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GrowthFit:
    """Power laws T ~ a r^q and N ~ b r^p fitted on the top numeric decade."""

    a: float
    q: float
    b: float
    p: float
    residual: float
    r_window: tuple[float, float]

    def t_of(self, rho: ExtLog) -> ExtLog:
        if rho.level == 0 and rho.mantissa == 0:
            return rho
        return rho.pow_float(self.q).times_float(self.a)

    def n_of(self, rho: ExtLog) -> ExtLog:
        if self.b == 0.0:
            return ExtLog.from_float(0.0)
        return rho.pow_float(self.p).times_float(self.b)


@lru_cache(maxsize=32)
def fit_growth(model: FunctionModel, r_top: float = NUMERIC_RADIUS_MAX,
               points: int = 8) -> GrowthFit:
    """Least-squares fit of log T against log r over [r_top/10, r_top]."""
    rs = [r_top / 10 * (10 ** (i / (points - 1))) for i in range(points)]
    ts = [characteristic(model, r) for r in rs]
    ns = [counting(model, r) for r in rs]
    lx = [math.log(r) for r in rs]
    ly = [math.log(t) for t in ts]
    q, la = _linfit(lx, ly)
    resid = max(abs(ly[i] - (la + q * lx[i])) for i in range(points))
    if all(n == 0.0 for n in ns):
        b = p = 0.0
    else:
        lyn = [math.log(max(n, 1e-300)) for n in ns]
        p, lb = _linfit(lx, lyn)
        b = math.exp(lb)
        resid = max(resid, max(abs(lyn[i] - (lb + p * lx[i])) for i in range(points)))
    return GrowthFit(math.exp(la), q, b, p, resid, (rs[0], rs[-1]))


def _linfit(xs, ys):
    n = len(xs)
    mx = sum(xs) / n
    my = sum(ys) / n
    sxx = sum((x - mx) ** 2 for x in xs)
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    slope = sxy / sxx
    return slope, my - slope * mx


def characteristic_ext(model: FunctionModel, rho: ExtLog,
                       fit_top: float = NUMERIC_RADIUS_MAX) -> tuple[ExtLog, str]:
    """T at a level-index radius: quadrature while the radius is numeric,
    the fitted power law beyond.  Returns (value, mode)."""
    if rho <= ExtLog.from_float(fit_top):
        return ExtLog.from_float(characteristic(model, rho.to_float())), "NUMERIC"
    fit = fit_growth(model, fit_top)
    if fit.residual > FIT_RESIDUAL_MAX:
        raise AsymptoticUnavailableError(
            f"growth fit residual {fit.residual:.3g} exceeds {FIT_RESIDUAL_MAX}")
    return fit.t_of(rho), "ASYMPTOTIC"


def characteristic_iterate(model: FunctionModel, r: float, n: int) -> ExtLog:
    """That_n(r): the n-th iterate of exp(T(.)) started at r (n = 0 gives r)."""
    if r <= 0:
        raise ValueError("radius must be positive")
    if n < 0:
        raise ValueError("iterate count must be nonnegative")
    cur = ExtLog.from_float(r)
    for _ in range(n):
        t, _mode = characteristic_ext(model, cur)
        cur = t.exp()
    return cur


# ---------------------------------------------------------------------------
# growth report
# ---------------------------------------------------------------------------

@dataclass
class GrowthReport:
    r_grid: list[float]
    m: list[float]
    N: list[float]
    T: list[float]
    logM: list[float | None]
    growth_ratio: list[float]
    doubling_margin: list[float]
    hayman_ok: list[bool | None]
    phi_hat: list[float] = field(default_factory=list)
    K: float = 2.0
    nudged: list[bool] = field(default_factory=list)

    def rows(self):
        for i, r in enumerate(self.r_grid):
            yield (r, self.m[i], self.N[i], self.T[i], self.logM[i],
                   self.growth_ratio[i], self.doubling_margin[i], self.hayman_ok[i])


def growth_report(model: FunctionModel, r_grid, K: float = 2.0) -> GrowthReport:
    """Tabulate m, N, T, log M over an increasing radius grid together with
    the growth-condition ratio T/(N log r), the doubling margin
    T(Kr) - (1 + log K/log r) T(r), and the sandwich check
    T(r) <= log M(r) <= ((R+r)/(R-r)) T(R) at R = 2r.

    Circles through pole moduli are nudged off by a relative 1e-6 (recorded).
    """
    r_grid = [float(r) for r in r_grid]
    if any(b <= a for a, b in zip(r_grid, r_grid[1:])):
        raise ValueError("r_grid must be strictly increasing")
    if K <= 1:
        raise ValueError("K must exceed 1")
    ms, Ns, Ts, logMs, ratios, margins, hay, nudged = [], [], [], [], [], [], [], []
    for r in r_grid:
        rr, was_nudged = nudged_radius(model, r)
        det = proximity_detail(model, rr)
        m = det.value
        N = _counting_exact(model, rr)
        T = m + N
        ms.append(m)
        Ns.append(N)
        Ts.append(T)
        nudged.append(was_nudged)
        ratios.append(T / (N * math.log(rr)) if N > 0 else math.inf)
        margins.append(characteristic(model, K * rr)
                       - (1 + math.log(K) / math.log(rr)) * T)
        R2, _ = nudged_radius(model, 2 * rr)
        lM = circle_log_max(model, rr)[0]
        logMs.append(lM)
        TR = characteristic(model, R2)
        hay.append(T <= lM + 1e-6 and lM <= ((R2 + rr) / (R2 - rr)) * TR + 1e-6)
    return GrowthReport(r_grid, ms, Ns, Ts, logMs, ratios, margins, hay,
                        phi_hat=list(ratios), K=K, nudged=nudged)
