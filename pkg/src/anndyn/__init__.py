"""Desk-scale numerical verification of growth, hyperbolic geometry, and
annulus-covering properties of meromorphic function orbits."""

from .counterexample import (SparseRadii, annulus_gap_check,
                             escape_disjoint_report, invariant_disk_check,
                             sequence_generate)
from .covering import (CoverageCertificate, DiskDomain, bohr_cmax,
                       bohr_constants, bohr_h, coverage_certificate, hayman_c,
                       kappa)
from .escape import (CoveringChainCertificate, EremenkoResult, StepCertificate,
                     chain_build, eremenko_search, margin_scan, orbit_log,
                     step_hypothesis)
from .funcmodel import (FunctionModel, LogEval, PoleRecord, derivative_eval,
                        eval_at, eval_with_bound, log_eval, model_from_json,
                        model_to_json, poles_within)
from .hyperbolic import (Annulus, DistanceBand, annulus_density,
                         annulus_distance, distance_band_batch,
                         distance_band_check)
from .logscale import ExtLog, LogPolar
from .nevanlinna import (GrowthFit, GrowthReport, characteristic,
                         characteristic_iterate, counting, fit_growth,
                         growth_report, max_modulus, proximity)

__version__ = "0.1.0"

__all__ = [
    "Annulus", "CoverageCertificate", "CoveringChainCertificate",
    "DiskDomain", "DistanceBand", "EremenkoResult", "ExtLog", "FunctionModel",
    "GrowthFit", "GrowthReport", "LogEval", "LogPolar", "PoleRecord",
    "SparseRadii", "StepCertificate", "annulus_density", "annulus_distance",
    "annulus_gap_check", "bohr_cmax", "bohr_constants", "bohr_h",
    "chain_build", "characteristic", "characteristic_iterate", "counting",
    "coverage_certificate", "derivative_eval", "distance_band_batch",
    "distance_band_check", "eremenko_search", "escape_disjoint_report",
    "eval_at", "eval_with_bound", "fit_growth", "growth_report", "hayman_c",
    "invariant_disk_check", "kappa", "log_eval", "margin_scan",
    "max_modulus", "model_from_json", "model_to_json", "orbit_log",
    "poles_within", "proximity", "sequence_generate", "step_hypothesis",
]
