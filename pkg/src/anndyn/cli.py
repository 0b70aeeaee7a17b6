"""Command-line entry point tying the toolkit into reproducible,
file-emitting verification runs.

Subcommands: ``nevanlinna`` (growth table), ``hypdist`` (distance band
batch), ``bohr`` (covering constants with the closed-form identity check),
``cover`` (coverage certificate), ``chain`` (covering chain), ``eremenko``
(point search), ``sparse`` (sparse-pole family checks).

Exit codes: 0 all checks pass, 2 some check failed, 1 usage/config error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import random
import sys

from . import counterexample as cx
from . import covering, escape, hyperbolic, nevanlinna
from .errors import AnndynError
from .funcmodel import model_from_json, model_to_json
from .report import sanitize, write_csv, write_json_report


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(1)


def _load_model(spec: str):
    if spec.lstrip().startswith("{"):
        return model_from_json(spec)
    with open(spec) as fh:
        return model_from_json(json.load(fh))


def _float_list(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def build_parser() -> _Parser:
    p = _Parser(prog="anndyn",
                description="numerical verification runs for meromorphic growth, "
                            "hyperbolic annuli, covering constants, and escape chains")
    p.add_argument("--out", default="reports", help="output directory")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized sampling")
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("nevanlinna", help="growth report over a radius grid")
    q.add_argument("--function", required=True, help="model JSON (path or literal)")
    q.add_argument("--grid", required=True, help="comma-separated radii")
    q.add_argument("--K", type=float, default=2.0)

    q = sub.add_parser("hypdist", help="distance band checks")
    q.add_argument("--d", default="1.5,2,4", help="comma-separated d values")
    q.add_argument("--r", default="1,10,1000", help="comma-separated radii")
    q.add_argument("--pairs", type=int, default=25, help="random angle pairs per (d, r)")

    q = sub.add_parser("bohr", help="covering constants table")
    q.add_argument("--s", default="0.5", help="comma-separated s values")
    q.add_argument("--t", default="2.4", help="comma-separated t values")

    q = sub.add_parser("cover", help="coverage certificate")
    q.add_argument("--function", required=True)
    q.add_argument("--domain", required=True,
                   help='{"type":"disk","radius":1} or {"type":"annulus","inner":..,"outer":..}')
    q.add_argument("--target", required=True, help='{"inner":..,"outer":..}')
    q.add_argument("--grid", default="16x32")

    q = sub.add_parser("chain", help="covering chain certificate")
    q.add_argument("--function", required=True)
    q.add_argument("--r", type=float, required=True)
    q.add_argument("--epsilon", type=float, required=True)
    q.add_argument("--depth", type=int, required=True)

    q = sub.add_parser("eremenko", help="escaping point search")
    q.add_argument("--function", required=True)
    q.add_argument("--r", type=float, required=True)
    q.add_argument("--epsilon", type=float, required=True)
    q.add_argument("--n", type=int, required=True)

    q = sub.add_parser("sparse", help="sparse-pole family checks")
    q.add_argument("--r1", type=float, default=8.0)
    q.add_argument("--factor", type=float, default=17.0)
    q.add_argument("--count", type=int, default=3)
    q.add_argument("--N", type=int, default=1)
    q.add_argument("--iters", type=int, default=20)
    q.add_argument("--samples", type=int, default=256)
    q.add_argument("--dump-grid", action="store_true",
                   help="write annulus samples (re, im, |f|) as CSV")
    return p


def _config(args, extra=None):
    # the output directory is environment, not configuration: reports must be
    # byte-identical across runs regardless of where they land
    cfg = {k: v for k, v in vars(args).items() if k not in ("command", "out")}
    cfg["command"] = args.command
    if extra:
        cfg.update(extra)
    return cfg


def _finish(args, name: str, payload: dict, passed: bool, failures: list[str]) -> int:
    payload = {"config": sanitize(_config(args)), "passed": passed,
               "failures": failures, **payload}
    path = os.path.join(args.out, f"{name}.report.json")
    write_json_report(path, payload)
    status = "PASS" if passed else "FAIL"
    print(f"[{status}] {name} -> {path}")
    for f in failures:
        print(f"  violated: {f}")
    return 0 if passed else 2


def _cmd_nevanlinna(args) -> int:
    model = _load_model(args.function)
    grid = _float_list(args.grid)
    rep = nevanlinna.growth_report(model, grid, K=args.K)
    write_csv(os.path.join(args.out, "nevanlinna.grid.csv"),
              ["r", "m", "N", "T", "logM", "growth_ratio", "doubling_margin", "hayman_ok"],
              rep.rows())
    failures = []
    for i, r in enumerate(rep.r_grid):
        if rep.hayman_ok[i] is False:
            failures.append(f"growth sandwich T <= logM <= ((R+r)/(R-r)) T(R) at r={r}")
        if rep.doubling_margin[i] < 0:
            failures.append(f"doubling margin T(Kr) >= (1 + logK/logr) T(r) at r={r}")
    payload = {"model": model_to_json(model), "report": sanitize(rep)}
    return _finish(args, "nevanlinna", payload, not failures, failures)


def _cmd_hypdist(args) -> int:
    rng = random.Random(args.seed)
    pairs = [(rng.uniform(-math.pi, math.pi), rng.uniform(-math.pi, math.pi))
             for _ in range(args.pairs)]
    checks = hyperbolic.distance_band_batch(_float_list(args.d), _float_list(args.r), pairs)
    write_csv(os.path.join(args.out, "hypdist.grid.csv"),
              ["d", "r", "theta1", "theta2", "distance", "lower", "upper", "pass"],
              [(c.d, c.r, c.theta1, c.theta2, c.distance, c.lower, c.upper, c.passed)
               for c in checks])
    failures = [f"distance band pi/3 <= d_A <= 2*sqrt(3)*pi/9 (1 + pi/log d) at d={c.d} r={c.r}"
                for c in checks if not c.passed]
    return _finish(args, "hypdist", {"checks": sanitize(checks)}, not failures, failures)


def _cmd_bohr(args) -> int:
    rows = []
    failures = []
    for s in _float_list(args.s):
        for t in _float_list(args.t):
            c = covering.bohr_constants(s, t)
            resid = covering.bohr_h(s, c, t)
            rows.append({"s": s, "t": t, "c": c, "h_residual": resid,
                         "cmax": covering.bohr_cmax(s),
                         "hayman_reference": covering.hayman_c(s)})
            # bisection stops at 1e-12 in x; h' is O(1/c), so allow 1e-8
            if abs(resid) > 1e-8:
                failures.append(f"root residual h(c, t) = 0 at s={s} t={t}")
    # closed-form identity at s = 1/2: c = [1 + (4 e^kappa)^{log 3}]^{-1}
    k = covering.kappa()
    c_closed = 1.0 / (1.0 + (4.0 * math.exp(k)) ** math.log(3.0))
    inner = math.exp(-k + math.log((1 - c_closed) / c_closed) / math.log(3.0))
    identity_residual = abs(inner - 4.0)
    if identity_residual > 1e-9:
        failures.append("closed-form identity exp(-kappa + log((1-c)/c)/log 3) = 4")
    payload = {"kappa": k, "table": rows,
               "closed_form_c_half": c_closed,
               "identity_residual": identity_residual}
    for row in rows:
        print(f"  s={row['s']} t={row['t']}: c = {row['c']:.6e}  "
              f"(cmax {row['cmax']:.6e}, h residual {row['h_residual']:.2e})")
    return _finish(args, "bohr", payload, not failures, failures)


def _cmd_cover(args) -> int:
    model = _load_model(args.function)
    dom = json.loads(args.domain)
    if dom.get("type", "disk") == "disk":
        domain = covering.DiskDomain(float(dom["radius"]))
    else:
        domain = hyperbolic.Annulus(float(dom["inner"]), float(dom["outer"]))
    tgt = json.loads(args.target)
    target = hyperbolic.Annulus(float(tgt["inner"]), float(tgt["outer"]))
    nr, na = args.grid.lower().split("x")
    cert = covering.coverage_certificate(model, domain, target, (int(nr), int(na)))
    failures = []
    if cert.invalid:
        failures.append("winding integral within 0.1 of an integer")
    elif not cert.verified:
        failures.append("image covers target annulus (some count < 1)")
    payload = {"model": model_to_json(model), "certificate": sanitize(cert)}
    return _finish(args, "cover", payload, cert.verified, failures)


def _cmd_chain(args) -> int:
    model = _load_model(args.function)
    cert = escape.chain_build(model, args.r, args.epsilon, args.depth)
    failures = []
    for i, s in enumerate(cert.steps):
        if not s.passing:
            if s.margin1 < 0:
                failures.append(f"step {i}: T(d^2 r)-N >= T(dr) + log(1+2(1+2C)^delta e^(kappa delta))")
            if s.margin2 < 0:
                failures.append(f"step {i}: T(dr)-N >= T(r) + log(2C)")
            if s.pole_case and not s.pole_case_verified:
                failures.append(f"step {i}: pole-case covering of A(exp T, d^3 exp T)")
    if cert.truncated:
        failures.append(f"chain truncated: {cert.truncated}")
    if not cert.radii_increasing:
        failures.append("chain radii strictly increasing")
    payload = {"model": model_to_json(model), "chain": sanitize(cert)}
    return _finish(args, "chain", payload, cert.all_passing, failures)


def _cmd_eremenko(args) -> int:
    model = _load_model(args.function)
    res = escape.eremenko_search(model, args.r, args.epsilon, args.n)
    ok = res.verified_through >= args.n
    failures = [] if ok else [
        f"forward magnitudes |f^k(z0)| >= That_k(r) verified only through k={res.verified_through}"]
    payload = {"model": model_to_json(model), "result": sanitize(res)}
    return _finish(args, "eremenko", payload, ok, failures)


def _cmd_sparse(args) -> int:
    seq = cx.sequence_generate(args.r1, args.factor, args.count)
    disk = cx.invariant_disk_check(seq, seed=args.seed)
    gap = cx.annulus_gap_check(seq, args.N)
    rep = cx.escape_disjoint_report(seq, args.N, args.iters, args.samples, seed=args.seed)
    failures = []
    if not disk.passed:
        failures.append("invariant disk bound sum 1/(r_n^2 (r_n^2 - 1)) < 1")
    if not gap.passed:
        failures.append("annulus image bound sum + N/(3 r_N^2) + (4/3) tail < 1")
    if not rep.passed:
        failures.append("sampled orbits enter and remain in the unit disk")
    if args.dump_grid:
        model = seq.model()
        from .funcmodel import eval_with_bound
        rows = []
        n_rad, n_ang = 16, 32
        ratio = gap.outer / gap.inner
        for i in range(n_rad):
            rho = gap.inner * ratio ** ((i + 0.5) / n_rad)
            for j in range(n_ang):
                phi = (j + 0.5) * 2 * math.pi / n_ang
                z = complex(rho * math.cos(phi), rho * math.sin(phi))
                val, _ = eval_with_bound(model, z)
                rows.append((z.real, z.imag, abs(val)))
        write_csv(os.path.join(args.out, "sparse.grid.csv"), ["re", "im", "abs_f"], rows)
    payload = {"sequence": sanitize(seq), "disk": sanitize(disk),
               "gap": sanitize(gap), "orbits": sanitize(rep)}
    return _finish(args, "sparse", payload, not failures, failures)


_HANDLERS = {
    "nevanlinna": _cmd_nevanlinna,
    "hypdist": _cmd_hypdist,
    "bohr": _cmd_bohr,
    "cover": _cmd_cover,
    "chain": _cmd_chain,
    "eremenko": _cmd_eremenko,
    "sparse": _cmd_sparse,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _HANDLERS[args.command](args)
    except (AnndynError, ValueError, OSError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
