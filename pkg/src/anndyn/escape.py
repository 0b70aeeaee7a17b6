"""Constructive covering chains and the fast-escaping point search.

A covering step at scale rho (with d > 1, C >= d^3) certifies the two
margins that force f(A(rho, d^3 rho)) to contain A(r', d^3 r') with
r' = exp(T(rho)):

    margin1 = T(d^2 rho) - N(d^2 rho) - T(d rho) - log(1 + 2 (1+2C)^delta e^{kappa delta})
    margin2 = T(d rho)   - N(d rho)   - T(rho)   - log(2C)

where delta is the hyperbolic distance, inside A(rho, d^3 rho), between the
circle maximizers of log|f| on |z| = d^2 rho and |z| = d rho.  When the
annulus contains a pole the covering is instead verified directly by the
argument-principle certifier (the pole forces every large value).  Chaining
steps yields radii r_k >= That_k(r), and pulling a deep target back through
the chain produces a point whose whole forward orbit dominates the That
iterates.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .covering import coverage_certificate, kappa
from .errors import AsymptoticUnavailableError, OverflowRangeError, PoleError, PullbackError
from .funcmodel import (ENTIRE_OVER_SIN, EXP, FunctionModel, LogEval,
                        has_pole_in_annulus, log_eval)
from .hyperbolic import Annulus, annulus_distance
from .logscale import FLOAT_LOG_MAX, ExtLog, LogPolar
from .nevanlinna import (NUMERIC_RADIUS_MAX, characteristic, circle_log_max,
                         counting, fit_growth, nudged_radius,
                         FIT_RESIDUAL_MAX)

MODE_NUMERIC = "NUMERIC"
MODE_ASYMPTOTIC = "ASYMPTOTIC"


def _distance_band_upper(d: float) -> float:
    return 2 * math.sqrt(3.0) * math.pi / 9.0 \
        + 2 * math.sqrt(3.0) * math.pi ** 2 / (9.0 * math.log(d))


def _log1p_exp(s: float) -> float:
    """log(1 + e^s), stable for large s."""
    if s > 36:
        return s + math.log1p(math.exp(-s))
    return math.log1p(math.exp(s))


@dataclass
class StepCertificate:
    rho: ExtLog
    d: float
    C: float
    z1: LogPolar | None
    z2: LogPolar | None
    delta: float
    margin1: float
    margin2: float
    pole_case: bool
    pole_case_verified: bool | None
    r_next: ExtLog
    mode: str
    note: str = ""

    @property
    def passing(self) -> bool:
        if self.pole_case:
            return bool(self.pole_case_verified)
        return self.margin1 >= 0.0 and self.margin2 >= 0.0


def step_hypothesis(model: FunctionModel, rho: ExtLog, d: float, C: float) -> StepCertificate:
    """Evaluate one covering step at scale rho.

    Numeric scales locate the actual circle maximizers (whose log moduli
    dominate m = T - N automatically) and use their true hyperbolic distance;
    past the numeric threshold T and N come from the fitted power law and
    delta falls back to the conservative distance-band upper bound.
    A NONPASSING certificate is a result, not an error.
    """
    if not (d > 1.0 and C >= d ** 3 - 1e-12):
        raise ValueError("need d > 1 and C >= d^3")
    if not isinstance(rho, ExtLog):
        rho = ExtLog.from_float(float(rho))
    numeric = rho <= ExtLog.from_float(NUMERIC_RADIUS_MAX)
    log2c = math.log(2.0 * C)
    if numeric:
        r = rho.to_float()
        t0 = characteristic(model, r)
        r1, _ = nudged_radius(model, d * r)
        r2, _ = nudged_radius(model, d * d * r)
        t1, n1 = characteristic(model, r1), counting(model, r1)
        t2, n2 = characteristic(model, r2), counting(model, r2)
        _, th2 = circle_log_max(model, r2)
        _, th1 = circle_log_max(model, r1)
        z1 = LogPolar(math.log(r2), th2)
        z2 = LogPolar(math.log(r1), th1)
        A = Annulus(r, d ** 3 * r)
        delta = annulus_distance(A, cmath.rect(r2, th2), cmath.rect(r1, th1))
        logterm = _log1p_exp(math.log(2.0) + delta * (math.log(1 + 2 * C) + kappa()))
        margin1 = (t2 - n2) - t1 - logterm
        margin2 = (t1 - n1) - t0 - log2c
        pole_case = has_pole_in_annulus(model, r, d ** 3 * r)
        verified = None
        note = ""
        if pole_case:
            if t0 <= FLOAT_LOG_MAX - math.log(d) * 3 - 1:
                lo = math.exp(t0)
                cert = coverage_certificate(model, A, Annulus(lo, d ** 3 * lo), grid=(8, 16))
                verified = cert.verified
            else:
                verified = False
                note = "UNVERIFIED-HYPOTHESIS: pole-case target beyond numeric range"
        r_next = ExtLog.from_log(t0)
        return StepCertificate(rho, d, C, z1, z2, delta, margin1, margin2,
                               pole_case, verified, r_next, MODE_NUMERIC, note)

    # asymptotic: fitted growth laws, conservative delta
    fit = fit_growth(model)
    if fit.residual > FIT_RESIDUAL_MAX:
        raise AsymptoticUnavailableError(
            f"fit residual {fit.residual:.3g} too large for extrapolation")
    delta = _distance_band_upper(d)
    logterm = _log1p_exp(math.log(2.0) + delta * (math.log(1 + 2 * C) + kappa()))
    t0 = fit.t_of(rho)
    t1 = fit.t_of(rho.times_float(d))
    t2 = fit.t_of(rho.times_float(d * d))
    n1 = fit.n_of(rho.times_float(d))
    n2 = fit.n_of(rho.times_float(d * d))
    margin1 = _ext_margin(t2, n2, t1, logterm)
    margin2 = _ext_margin(t1, n1, t0, log2c)
    pole_case = False
    note = ""
    if model.family != EXP:
        rf = rho.to_float()
        if math.isfinite(rf):
            pole_case = has_pole_in_annulus(model, rf, d ** 3 * rf)
        if pole_case or not math.isfinite(rf):
            note = "UNVERIFIED-HYPOTHESIS: pole-case covering not checkable in asymptotic mode"
    r_next = t0.exp()
    return StepCertificate(rho, d, C, None, None, delta, margin1, margin2,
                           pole_case, False if pole_case else None, r_next,
                           MODE_ASYMPTOTIC, note)


def _ext_add(a: ExtLog, b: ExtLog) -> ExtLog:
    if a < b:
        a, b = b, a
    if a.level == 0:
        return ExtLog.from_float(a.mantissa + b.to_float())
    if a.level == 1:
        if b.level == 1:
            return ExtLog.from_log(a.mantissa + math.log1p(math.exp(b.mantissa - a.mantissa)))
        return a.add_float(b.to_float())
    return a  # level >= 2 absorbs anything smaller


def _ext_margin(lhs: ExtLog, *subtracted) -> float:
    """lhs - sum(subtracted) as a float, or +-inf when out of float range."""
    vals = [x.to_float() if isinstance(x, ExtLog) else float(x) for x in subtracted]
    lf = lhs.to_float()
    if math.isfinite(lf) and all(math.isfinite(v) for v in vals):
        return lf - sum(vals)
    rhs = ExtLog.from_float(0.0)
    for x in subtracted:
        rhs = _ext_add(rhs, x if isinstance(x, ExtLog) else ExtLog.from_float(max(float(x), 0.0)))
    return math.inf if lhs >= rhs else -math.inf


@dataclass
class CoveringChainCertificate:
    steps: list[StepCertificate]
    start_r: float
    epsilon: float
    depth: int
    all_passing: bool
    radii_increasing: bool = True
    truncated: str = ""


def chain_build(model: FunctionModel, r: float, epsilon: float, depth: int) -> CoveringChainCertificate:
    """Iterate step_hypothesis with d = (1+epsilon)^{1/3} and C = d^3,
    feeding each step's r_next into the next step's scale."""
    if epsilon <= 0 or depth < 1:
        raise ValueError("need epsilon > 0 and depth >= 1")
    d = (1.0 + epsilon) ** (1.0 / 3.0)
    C = 1.0 + epsilon
    steps: list[StepCertificate] = []
    rho = ExtLog.from_float(float(r))
    truncated = ""
    for _ in range(depth):
        try:
            cert = step_hypothesis(model, rho, d, C)
        except AsymptoticUnavailableError as exc:
            truncated = str(exc)
            break
        steps.append(cert)
        rho = cert.r_next
    increasing = all(s.r_next > s.rho for s in steps)
    all_passing = bool(steps) and len(steps) == depth \
        and all(s.passing for s in steps) and increasing
    return CoveringChainCertificate(steps, float(r), float(epsilon), depth,
                                    all_passing, increasing, truncated)


def margin_scan(model: FunctionModel, radii, epsilon: float) -> list[tuple[float, float, float]]:
    """(r, margin1, margin2) along a radius grid; used to locate the first
    scale where both step margins turn nonnegative."""
    d = (1.0 + epsilon) ** (1.0 / 3.0)
    C = 1.0 + epsilon
    out = []
    for r in radii:
        cert = step_hypothesis(model, ExtLog.from_float(float(r)), d, C)
        out.append((float(r), cert.margin1, cert.margin2))
    return out


# ---------------------------------------------------------------------------
# orbits in log scale
# ---------------------------------------------------------------------------

@dataclass
class OrbitEntry:
    k: int
    logpolar: LogPolar | None
    magnitude: ExtLog
    logmod_err: float
    arg_ok: bool


@dataclass
class OrbitLog:
    entries: list[OrbitEntry]
    truncated: str = ""


def orbit_log(model: FunctionModel, z0: complex, n: int) -> OrbitLog:
    """Forward orbit of z0 for n steps in log scale.

    Once the next log modulus would leave float range the orbit continues
    magnitude-only, which is exact on the positive real axis of e^z (the
    invariant ray whose magnitudes iterate as exp); elsewhere it stops with
    the truncation reason recorded, since arguments at that scale are
    meaningless.
    """
    z0 = complex(z0)
    p = LogPolar.from_complex(z0)
    entries = [OrbitEntry(0, p, ExtLog.from_log(p.logmod), 0.0, True)]
    truncated = ""
    for k in range(1, n + 1):
        cur = entries[-1]
        if cur.logpolar is not None:
            try:
                le: LogEval = log_eval(model, cur.logpolar)
            except OverflowRangeError:
                le = None
            except PoleError as exc:
                raise PoleError(f"orbit hit a pole at step {k}: {exc}") from exc
            if le is not None:
                amp = _logmod_amplification(model, cur.logpolar)
                err = le.logmod_err + amp * cur.logmod_err
                entries.append(OrbitEntry(k, le.value,
                                          ExtLog.from_log(le.value.logmod),
                                          err, cur.arg_ok and le.arg_ok))
                continue
        # magnitude-only continuation on the invariant positive real axis
        if model.family == EXP and cur.arg_ok and _on_positive_axis(cur):
            entries.append(OrbitEntry(k, None, cur.magnitude.exp(),
                                      cur.logmod_err, True))
            continue
        truncated = "ARG_UNRELIABLE: magnitudes beyond this point are not certified"
        break
    return OrbitLog(entries, truncated)


def _on_positive_axis(entry: OrbitEntry) -> bool:
    return entry.logpolar is None or entry.logpolar.arg == 0.0


def _logmod_amplification(model: FunctionModel, p: LogPolar) -> float:
    """Bound on |d log|f| / d log|z|| used for orbit error propagation."""
    if model.family == EXP:
        return math.exp(min(p.logmod, 700.0))
    if model.family == ENTIRE_OVER_SIN:
        return 3.0 * math.exp(min(2 * p.logmod, 700.0)) + 10.0
    return 16.0


# ---------------------------------------------------------------------------
# Newton pullback and the point search
# ---------------------------------------------------------------------------

def _annulus_grid(a: float, b: float, n_rad: int, n_ang: int,
                  midpoint: bool = False) -> np.ndarray:
    """Row-major log-radial x angular grid over [a, b] (closed radially)."""
    if midpoint:
        radii = a * (b / a) ** ((np.arange(n_rad) + 0.5) / n_rad)
        angles = (np.arange(n_ang) + 0.5) * (2 * np.pi / n_ang)
    else:
        radii = np.geomspace(a, b, n_rad)
        angles = np.arange(n_ang) * (2 * np.pi / n_ang)
    rr, aa = np.meshgrid(radii, angles, indexing="ij")
    return (rr * np.exp(1j * aa)).ravel()


def newton_preimage(model: FunctionModel, w: complex, annulus: Annulus,
                    grid: tuple[int, int] = (32, 64), iters: int = 60,
                    tol_rel: float = 1e-9) -> complex:
    """First Newton root of f(z) = w inside the annulus, multistarted from a
    row-major log-radial x angular grid (deterministic retry order)."""
    from .funcmodel import derivative_many, eval_many
    starts = _annulus_grid(annulus.inner, annulus.outer, *grid)
    z = starts.copy()
    with np.errstate(all="ignore"):
        for _ in range(iters):
            fz = eval_many(model, z)
            dz = derivative_many(model, z)
            step = (fz - w) / dz
            bad = ~np.isfinite(step)
            step[bad] = 0
            z = z - step
        fz = eval_many(model, z)
        ok = np.abs(fz - w) <= tol_rel * max(abs(w), 1e-300)
        az = np.abs(z)
        inside = (az >= annulus.inner * (1 - 1e-9)) & (az <= annulus.outer * (1 + 1e-9))
        ok &= inside & np.isfinite(az)
    idx = np.flatnonzero(ok)
    if len(idx) == 0:
        raise PullbackError(
            f"no Newton root of f(z) = {w} inside [{annulus.inner}, {annulus.outer}]",
            {"w": w, "starts": len(starts)})
    return complex(z[idx[0]])


@dataclass
class EremenkoResult:
    z0: complex
    verified_through: int
    orbit: OrbitLog
    chain: CoveringChainCertificate
    source: str
    that: list[ExtLog] = field(default_factory=list)
    pullback_failures: int = 0
    candidates_tried: int = 0


def eremenko_search(model: FunctionModel, r: float, epsilon: float, n_max: int,
                    grid: tuple[int, int] = (32, 64),
                    target_grid_shape: tuple[int, int] = (4, 8)) -> EremenkoResult:
    """Search the closed annulus [r, (1+epsilon) r] for a point whose forward
    magnitudes dominate the That iterates of r through n_max steps.

    Candidates come first from preimage pullback along the covering chain
    (targets scan the deepest numeric chain annulus in deterministic row-major
    order), then from the multistart grid itself; every candidate is verified
    forward with certified log-modulus lower bounds under level-index
    comparison, and the first fully verified point wins.  The chain need not
    be PASSING for the search to run; its status is recorded in the result.
    """
    from .nevanlinna import characteristic_iterate
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    depth = max(n_max, 1)
    chain = chain_build(model, r, epsilon, depth)
    that = [characteristic_iterate(model, r, k) for k in range(n_max + 1)]
    d3 = 1.0 + epsilon

    radii: list[float] = [float(r)]
    for s in chain.steps:
        radii.append(s.r_next.to_float())

    def verify(z0: complex) -> tuple[int, OrbitLog]:
        try:
            orb = orbit_log(model, z0, n_max)
        except PoleError:
            return -1, OrbitLog([], "POLE_HIT")
        good = 0
        for k in range(1, n_max + 1):
            if k >= len(orb.entries):
                break
            e = orb.entries[k]
            lower = e.magnitude if e.logmod_err == 0.0 else \
                _magnitude_lower(e.magnitude, e.logmod_err)
            if lower >= that[k]:
                good = k
            else:
                break
        return good, orb

    best: tuple[int, complex, OrbitLog, str] | None = None
    tried = 0
    failures = 0

    # deepest chain annulus still in numeric range, capped at n_max
    m = 0
    for k in range(1, min(n_max, len(radii) - 1) + 1):
        if radii[k] <= NUMERIC_RADIUS_MAX and math.isfinite(radii[k]):
            m = k
    targets = _annulus_grid(radii[m], d3 * radii[m], *target_grid_shape) if m >= 0 else []

    for w in targets:
        z = complex(w)
        ok = True
        for k in range(m - 1, -1, -1):
            ann = Annulus(radii[k], d3 * radii[k])
            try:
                z = newton_preimage(model, z, ann, grid=grid)
            except PullbackError:
                failures += 1
                ok = False
                break
        if not ok:
            continue
        tried += 1
        good, orb = verify(z)
        if good == n_max:
            return EremenkoResult(z, good, orb, chain, "pullback", that, failures, tried)
        if best is None or good > best[0]:
            best = (good, z, orb, "pullback")

    for z in _annulus_grid(r, d3 * r, *grid):
        tried += 1
        good, orb = verify(complex(z))
        if good == n_max:
            return EremenkoResult(complex(z), good, orb, chain, "grid", that, failures, tried)
        if best is None or good > best[0]:
            best = (good, complex(z), orb, "grid")

    if best is None:
        raise PullbackError("no candidate produced a verifiable orbit",
                            {"failures": failures})
    good, z, orb, src = best
    return EremenkoResult(z, good, orb, chain, src, that, failures, tried)


def _magnitude_lower(mag: ExtLog, err: float) -> ExtLog:
    """Certified lower bound on a magnitude known to log-error err."""
    if mag.level == 0:
        return ExtLog.from_float(mag.mantissa * math.exp(-min(err, 700.0)))
    if mag.level == 1:
        return ExtLog.from_log(mag.mantissa - err)
    if mag.level == 2 and err < 1e280:
        # value = exp(x), x = exp(mantissa); lower log by err
        x = ExtLog.from_log(mag.mantissa).add_float(-err)
        return x.exp()
    return mag
