"""Covering constants and an argument-principle verifier that an analytic
image contains a prescribed annulus.

The constant kappa = Gamma(1/4)^4 / (4 pi^2) controls how much larger |f|
must be at one point than another (relative to their hyperbolic distance)
before the image is forced to contain an annulus of definite modulus.  The
function h below trades the covered outer radius c against the radius ratio
t for maps of the unit disk with f(0) = 0 and M(s, f) >= 1:

    h(x, t) = exp(-kappa + log((1-x)/x)/delta)
              - t exp(kappa - log((1-x)/x)/delta) - 1 - t,
    delta = log((1+s)/(1-s)).

Coverage of a target annulus is certified pointwise: for every grid point w
the boundary winding of f - w is integrated, pole contributions are added,
and the certificate records each count.
"""

from __future__ import annotations

import math
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .funcmodel import FunctionModel, derivative_many, eval_many, poles_within
from .hyperbolic import Annulus
from .report import worker_count

# Gamma(1/4) to 25 significant digits; obtainable from
# Gamma(1/4)^2 = (2 pi)^{3/2} / AGM(sqrt 2, 1).
GAMMA_QUARTER = 3.625609908221908311930685


def kappa() -> float:
    """Gamma(1/4)^4 / (4 pi^2) ~ 4.376879."""
    g2 = GAMMA_QUARTER * GAMMA_QUARTER
    return g2 * g2 / (4.0 * math.pi * math.pi)


def bohr_h(s: float, x: float, t: float) -> float:
    """The trade-off function h(x, t) at hyperbolic reach delta = log((1+s)/(1-s))."""
    if not (0 < s < 1 and 0 < x < 1 and t > 1):
        raise ValueError("need s in (0,1), x in (0,1), t > 1")
    delta = math.log((1 + s) / (1 - s))
    ratio = math.log((1 - x) / x) / delta
    return math.exp(-kappa() + ratio) - t * math.exp(kappa() - ratio) - 1.0 - t


def bohr_constants(s: float, t: float, tol: float = 1e-12) -> float:
    """Largest admissible covered radius c: the unique root of h(s, . , t).

    h is strictly decreasing in x (the inner exponential decreases in x and h
    increases in it), so bisection applies; every x below the root has h >= 0.
    """
    lo, hi = 1e-15, 1.0 - 1e-15
    if bohr_h(s, lo, t) < 0:
        raise ValueError("no root: h already negative at x -> 0")
    if bohr_h(s, hi, t) > 0:
        raise ValueError("no root: h still positive at x -> 1")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if bohr_h(s, mid, t) >= 0:
            lo = mid
        else:
            hi = mid
    # secant polish: h' ~ 1/(x delta) is steep at small roots, so the
    # bisection interval alone can leave |h| above 1e-9
    x = 0.5 * (lo + hi)
    for _ in range(3):
        hx = bohr_h(s, x, t)
        hlo = bohr_h(s, lo, t)
        if hx == hlo:
            break
        step = hx * (x - lo) / (hx - hlo)
        nxt = x - step
        if not 0 < nxt < 1:
            break
        lo, x = x, nxt
    return x


def bohr_cmax(s: float) -> float:
    """Upper limit of the covered radius as t -> 1+:
    [1 + exp(log((1+sqrt2) e^kappa) log((1+s)/(1-s)))]^{-1}."""
    if not 0 < s < 1:
        raise ValueError("need s in (0,1)")
    expo = math.log((1 + math.sqrt(2.0)) * math.exp(kappa())) * math.log((1 + s) / (1 - s))
    return 1.0 / (1.0 + math.exp(expo))


def hayman_c(s: float) -> float:
    """Sharp covered-circle radius (1-s)^2/(4s), for reference only; the
    annulus version proved here does not attain it."""
    return (1 - s) ** 2 / (4 * s)


# ---------------------------------------------------------------------------
# coverage certificates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DiskDomain:
    radius: float
    center: complex = 0j


@dataclass
class TargetPoint:
    w: complex
    count: int | None
    residual: float
    skipped: bool


@dataclass
class CoverageCertificate:
    """Per-grid-point preimage counts of f - w over the domain boundary.

    ``verified`` means every evaluated target point has count >= 1;
    ``invalid`` is set when some winding integral strays more than 0.1 from
    an integer, in which case the certificate proves nothing.
    """

    domain: object
    target: Annulus
    grid: tuple[int, int]
    points: list[TargetPoint] = field(default_factory=list)
    verified: bool = False
    invalid: bool = False
    max_residual: float = 0.0
    skipped: int = 0

    def counts(self) -> list[int | None]:
        return [p.count for p in self.points]


_N_START = 1 << 10
_N_MAX = 1 << 18
_MOVE_TOL = 1e-3
_RESIDUAL_MAX = 0.1
_SKIP_REL = 1e-9


def _boundary_circles(domain) -> list[tuple[complex, float, int]]:
    if isinstance(domain, DiskDomain):
        return [(domain.center, domain.radius, +1)]
    if isinstance(domain, Annulus):
        return [(domain.center, domain.outer, +1), (domain.center, domain.inner, -1)]
    raise TypeError("domain must be a DiskDomain or Annulus")


def _enclosed_pole_count(model: FunctionModel, domain) -> int:
    if isinstance(domain, DiskDomain):
        lo, hi, c = -1.0, domain.radius, domain.center  # lo < 0: center included
    else:
        lo, hi, c = domain.inner, domain.outer, domain.center
    total = 0
    for p in poles_within(model, abs(c) + hi * (1 + 1e-12)):
        if lo < abs(p.location - c) < hi:
            total += p.multiplicity
    return total


class _Circle:
    """Boundary samples of f and f' on one circle.

    The cache only ever grows by doubling, and each winding computation walks
    its own refinement ladder through nested stride views of the cache, so a
    point's result never depends on which points were processed before it
    (or concurrently).
    """

    def __init__(self, model, center, radius, orientation):
        self.model = model
        self.center = center
        self.radius = radius
        self.orient = orientation
        self.lock = threading.Lock()
        self._data = (np.empty(0, dtype=complex),) * 3  # (z, f, df), swapped atomically
        self._grow_to(_N_START)

    def _grow_to(self, n):
        with self.lock:
            z0, f0, df0 = self._data
            if len(z0) >= n:
                return
            t = np.arange(n) * (2 * np.pi / n)
            z = self.center + self.radius * np.exp(1j * t)
            step = n // len(z0) if len(z0) else 0
            keep = (np.arange(n) % step == 0) if step else np.zeros(n, dtype=bool)
            zn = z[~keep]
            fn = eval_many(self.model, zn)
            dfn = derivative_many(self.model, zn)
            f = np.empty(n, dtype=complex)
            df = np.empty(n, dtype=complex)
            if keep.any():
                f[keep] = f0
                df[keep] = df0
            f[~keep] = fn
            df[~keep] = dfn
            self._data = (z, f, df)

    def _level(self, n):
        if len(self._data[0]) < n:
            self._grow_to(n)
        z, f, df = self._data  # single read: arrays are replaced, never mutated
        stride = len(z) // n
        return z[::stride], f[::stride], df[::stride]

    def winding(self, w: complex) -> tuple[complex, bool]:
        """(1/2 pi i) * integral of f'/(f-w) dz, trapezoid with doubling.

        Returns (value, too_close) where too_close flags a boundary sample
        within the relative skip distance of w.
        """
        prev = None
        n = _N_START
        while True:
            z, f, df = self._level(n)
            diff = f - w
            if np.min(np.abs(diff)) < _SKIP_REL * abs(w):
                return 0j, True
            val = self.orient * np.sum(df / diff * (z - self.center)) / n
            if prev is not None and abs(val - prev) < _MOVE_TOL:
                return val, False
            if n >= _N_MAX:
                return val, False
            prev = val
            n *= 2


def target_grid(target: Annulus, grid: tuple[int, int]) -> list[complex]:
    """Log-radial x angular midpoint grid strictly inside the target.

    Midpoint sampling keeps grid points off symmetry axes of typical test
    maps, where boundary images can pass arbitrarily close.
    """
    n_rad, n_ang = grid
    ratio = target.outer / target.inner
    pts = []
    for i in range(n_rad):
        rho = target.inner * ratio ** ((i + 0.5) / n_rad)
        for j in range(n_ang):
            phi = (j + 0.5) * 2 * math.pi / n_ang
            pts.append(target.center + rho * complex(math.cos(phi), math.sin(phi)))
    return pts


def coverage_certificate(model: FunctionModel, domain, target: Annulus,
                         grid: tuple[int, int] = (16, 32)) -> CoverageCertificate:
    """Certify that f(domain) covers the target annulus.

    For each target point w the boundary winding of f - w is computed
    (outer circle positively, inner negatively oriented) and the number of
    enclosed poles is added; by the argument principle the sum counts the
    zeros of f - w in the domain.  A point whose sampled boundary values come
    within 1e-9 |w| is skipped and recorded rather than integrated.
    """
    cert = CoverageCertificate(domain=domain, target=target, grid=tuple(grid))
    circles = [_Circle(model, c, r, o) for c, r, o in _boundary_circles(domain)]
    pole_count = _enclosed_pole_count(model, domain)

    def probe(w: complex):
        total = 0j
        for circ in circles:
            val, too_close = circ.winding(w)
            if too_close:
                return None
            total += val
        return total

    points = target_grid(target, grid)
    workers = min(worker_count(), len(points))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            windings = list(pool.map(probe, points))
    else:
        windings = [probe(w) for w in points]

    all_ok = True
    for w, total in zip(points, windings):
        if total is None:
            cert.points.append(TargetPoint(w, None, math.nan, True))
            cert.skipped += 1
            continue
        nearest = round(total.real)
        residual = abs(total - nearest)
        cert.max_residual = max(cert.max_residual, residual)
        if residual > _RESIDUAL_MAX:
            cert.invalid = True
            cert.points.append(TargetPoint(w, None, residual, False))
            all_ok = False
            continue
        count = int(nearest) + pole_count
        cert.points.append(TargetPoint(w, count, residual, False))
        if count < 1:
            all_ok = False
    cert.verified = all_ok and not cert.invalid
    return cert
