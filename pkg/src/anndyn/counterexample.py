"""The sparse-pole family whose huge annuli map straight into the unit disk.

With radii r_1 < r_2 < ... satisfying r_n > n, r_{n+1} > 16 r_n^2 and
sum 1/r_n^2 < 2/7, the function f(z) = sum z^2/(r_n^2 (z^2 - r_n^2)) keeps
|f| < 1 on the unit disk (so the disk sits in an invariant Fatou component)
and maps each annulus A(2 r_N, 4 r_N^2) into that disk.  Sampled orbits
therefore enter the disk after one application of f and never leave: the
annuli contain no escaping points.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .errors import ConstraintViolation
from .funcmodel import (FunctionModel, check_sparse_radii, eval_with_bound,
                        sparse_tail_bound)

_DEFAULT_GRID = (16, 32)


@dataclass(frozen=True)
class SparseRadii:
    """A validated pole-radius sequence with its generation parameters."""

    radii: tuple[float, ...]
    r1: float
    factor: float
    count: int

    def model(self) -> FunctionModel:
        return FunctionModel.make_sparse_poles(self.r1, self.factor, self.count)

    def inverse_square_sum(self) -> float:
        """sum 1/r_n^2 over the full sequence (stored terms + tail bound)."""
        return sum(1.0 / (r * r) for r in self.radii) \
            + sparse_tail_bound(self.radii[-1], self.factor)


def sequence_generate(r1: float, factor: float, count: int) -> SparseRadii:
    """Generate radii by r_{n+1} = factor * r_n^2 and validate the three
    constraints; rejects with the first failing one."""
    if count < 1:
        raise ConstraintViolation("count >= 1", f"count={count}")
    radii = [float(r1)]
    for _ in range(count - 1):
        radii.append(factor * radii[-1] ** 2)
    bad = check_sparse_radii(radii, factor)
    if bad is not None:
        raise ConstraintViolation(bad)
    if not factor > 16:
        raise ConstraintViolation("factor > 16", f"factor={factor}")
    return SparseRadii(tuple(radii), float(r1), float(factor), int(count))


@dataclass
class DiskCheck:
    bound: float
    sampled_max: float
    passed: bool


def invariant_disk_check(seq: SparseRadii, samples: int = 1000, seed: int = 0) -> DiskCheck:
    """Bound |f| on the unit disk by sum 1/(r_n^2 (r_n^2 - 1)) plus the tail,
    and confirm the bound on sampled points."""
    bound = sum(1.0 / (r * r * (r * r - 1.0)) for r in seq.radii)
    nxt = seq.factor * seq.radii[-1] ** 2
    bound += 2.0 / (nxt * nxt * (nxt * nxt - 1.0))  # continuation tail, ratio < 1/2
    model = seq.model()
    rng = random.Random(seed)
    worst = 0.0
    for _ in range(samples):
        rho = math.sqrt(rng.random())
        phi = rng.random() * 2 * math.pi
        z = complex(rho * math.cos(phi), rho * math.sin(phi))
        val, tail = eval_with_bound(model, z)
        worst = max(worst, abs(val) + tail)
    return DiskCheck(bound, worst, bound < 1.0 and worst <= bound)


@dataclass
class GapCheck:
    """Certificate that f maps A(2 r_N, 4 r_N^2) into the unit disk."""

    N: int
    inner: float
    outer: float
    sup_sampled: float
    proof_bound: float
    passed: bool
    statement_annulus: tuple[float, float] = (0.0, 0.0)
    statement_matches_proof_annulus: bool = False


def annulus_gap_check(seq: SparseRadii, N: int,
                      grid: tuple[int, int] = _DEFAULT_GRID) -> GapCheck:
    """Reproduce the three-part estimate

        |f| < sum 1/r_n^2  +  N/(3 r_N^2)  +  (4/3) sum_{n>N} 1/r_n^2

    with the sequence's own numbers, and sample |f| over a log-radial x
    angular grid on the annulus (each sample carries its evaluation tail
    bound, so the sampled supremum is itself certified)."""
    if not 1 <= N <= seq.count:
        raise ValueError(f"N must be in [1, {seq.count}]")
    rN = seq.radii[N - 1]
    inner, outer = 2.0 * rN, 4.0 * rN * rN
    part1 = seq.inverse_square_sum()
    part2 = N / (3.0 * rN * rN)
    tail_after_N = sum(1.0 / (r * r) for r in seq.radii[N:]) \
        + sparse_tail_bound(seq.radii[-1], seq.factor)
    part3 = (4.0 / 3.0) * tail_after_N
    proof_bound = part1 + part2 + part3

    model = seq.model()
    n_rad, n_ang = grid
    sup = 0.0
    ratio = outer / inner
    for i in range(n_rad):
        rho = inner * ratio ** ((i + 0.5) / n_rad)
        for j in range(n_ang):
            phi = (j + 0.5) * 2 * math.pi / n_ang
            z = complex(rho * math.cos(phi), rho * math.sin(phi))
            val, tail = eval_with_bound(model, z)
            sup = max(sup, abs(val) + tail)
    # the claimed annulus A(r_N, r_N^2) is not a subset of the proved one
    # (its inner edge lies below 2 r_N); record the mismatch, do not resolve it
    stmt = (rN, rN * rN)
    contained = stmt[0] >= inner and stmt[1] <= outer
    return GapCheck(N, inner, outer, sup, proof_bound,
                    sup < 1.0 and proof_bound <= 1.0, stmt, contained)


@dataclass
class EscapeDisjointReport:
    N: int
    samples: int
    n_iter: int
    entered_disk: int
    stayed_in_disk: bool
    max_first_modulus: float
    max_tail_modulus: float
    gap: GapCheck
    disk: DiskCheck
    passed: bool
    orbit_tail_max: list[float] = field(default_factory=list)


def escape_disjoint_report(seq: SparseRadii, N: int, n_iter: int = 20,
                           samples: int = 256, seed: int = 0,
                           grid: tuple[int, int] = _DEFAULT_GRID) -> EscapeDisjointReport:
    """Desk-scale witness that sampled points of A(2 r_N, 4 r_N^2) are not
    escaping: one application of f lands in the unit disk and n_iter further
    iterations stay there.  Requires the gap and invariant-disk checks to pass.
    """
    gap = annulus_gap_check(seq, N, grid)
    disk = invariant_disk_check(seq, seed=seed)
    if not (gap.passed and disk.passed):
        return EscapeDisjointReport(N, samples, n_iter, 0, False, math.inf,
                                    math.inf, gap, disk, False)
    model = seq.model()
    rng = random.Random(seed)
    entered = 0
    max_first = 0.0
    max_tail = 0.0
    tail_track: list[float] = [0.0] * max(n_iter, 0)
    for _ in range(samples):
        lr = math.log(gap.inner) + rng.random() * math.log(gap.outer / gap.inner)
        phi = rng.random() * 2 * math.pi
        z = complex(math.exp(lr) * math.cos(phi), math.exp(lr) * math.sin(phi))
        w, tail = eval_with_bound(model, z)
        first = abs(w) + tail
        max_first = max(max_first, first)
        if first < 1.0:
            entered += 1
        for i in range(n_iter):
            w, tail = eval_with_bound(model, w)
            cur = abs(w) + tail
            tail_track[i] = max(tail_track[i], cur)
            max_tail = max(max_tail, cur)
    stayed = max_tail < 1.0 if n_iter > 0 else True
    ok = entered == samples and stayed
    return EscapeDisjointReport(N, samples, n_iter, entered, stayed,
                                max_first, max_tail, gap, disk, ok, tail_track)
