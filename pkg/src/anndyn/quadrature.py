"""Adaptive Simpson quadrature over a circle parameter interval.

The proximity integrand log^+|f| has kinks where |f| crosses 1 and steep
bumps near poles close to the circle, so the rule is adaptive: an initial
uniform pass localizes structure, then panels are split until each meets its
share of the absolute tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import QuadratureError

INITIAL_PANELS = 256
MAX_NODES = 1 << 20


@dataclass
class QuadResult:
    value: float
    nodes: int
    max_depth: int


def adaptive_simpson(f, a: float, b: float, tol_abs: float,
                     initial_panels: int = INITIAL_PANELS,
                     max_nodes: int = MAX_NODES) -> QuadResult:
    """Integrate f over [a, b] to absolute accuracy ~tol_abs."""
    n = initial_panels
    h = (b - a) / n
    nodes = 0

    def ev(x):
        nonlocal nodes
        nodes += 1
        return f(x)

    # panel stack entries: (a, fa, fm, fb, h, S, depth)
    stack = []
    xs = [a + i * h for i in range(n + 1)]
    fs = [ev(x) for x in xs]
    for i in range(n):
        am, bm = xs[i], xs[i + 1]
        fm = ev(0.5 * (am + bm))
        s = (h / 6.0) * (fs[i] + 4.0 * fm + fs[i + 1])
        stack.append((am, fs[i], fm, fs[i + 1], h, s, 0))

    total = 0.0
    max_depth = 0
    while stack:
        x0, fa, fm, fb, hh, s, depth = stack.pop()
        if nodes > max_nodes:
            raise QuadratureError(
                f"adaptive refinement exceeded {max_nodes} nodes")
        xl = x0 + 0.25 * hh
        xr = x0 + 0.75 * hh
        fl = ev(xl)
        fr = ev(xr)
        sl = (hh / 12.0) * (fa + 4.0 * fl + fm)
        sr = (hh / 12.0) * (fm + 4.0 * fr + fb)
        err = (sl + sr - s) / 15.0
        local_tol = tol_abs * hh / (b - a)
        if abs(err) <= max(local_tol, 1e-300) or depth >= 48:
            total += sl + sr + err
            max_depth = max(max_depth, depth)
        else:
            stack.append((x0, fa, fl, fm, 0.5 * hh, sl, depth + 1))
            stack.append((x0 + 0.5 * hh, fm, fr, fb, 0.5 * hh, sr, depth + 1))
    return QuadResult(total, nodes, max_depth)


def integrate_circle(f, tol_rel: float = 1e-8,
                     initial_panels: int = INITIAL_PANELS,
                     max_nodes: int = MAX_NODES) -> QuadResult:
    """Integrate f(theta) over [0, 2pi) with absolute error about
    tol_rel * max(1, |integral|)."""
    rough = 0.0
    n0 = initial_panels
    for i in range(n0):
        rough += f((i + 0.5) * 2 * math.pi / n0)
    rough *= 2 * math.pi / n0
    tol_abs = 0.5 * tol_rel * max(1.0, abs(rough))
    return adaptive_simpson(f, 0.0, 2 * math.pi, tol_abs,
                            initial_panels=initial_panels, max_nodes=max_nodes)
