"""Mittag-Leffler series solutions of the fractional hinged plate."""

import json

from ._fracplate import (
    Domain,
    DomainError,
    EigenMode,
    PreconditionError,
    SpectralSolution,
    eigenmodes,
    filtered_identity_relative,
    gagliardo_seminorm,
    gamma,
    graded_grid,
    mittag_leffler,
    ml_eval,
    ml_series_oracle,
    mode_ode_residual,
    rl_integral,
    solve,
    static_identity_relative,
    trace_energy,
    u1_sweep_ratios,
)
from . import _fracplate


def direct_inequality_probe(domain, alpha, horizon, family, schedule, seed=42, nodes=1025):
    """Report of the direct inequality probe as a dict."""
    text = _fracplate._direct_inequality_probe(domain, alpha, horizon, family, list(schedule), seed, nodes)
    return json.loads(text)


def acceptance_bundle(seed=42):
    return json.loads(_fracplate._acceptance_bundle(seed))


__all__ = [
    "Domain",
    "DomainError",
    "EigenMode",
    "PreconditionError",
    "SpectralSolution",
    "acceptance_bundle",
    "direct_inequality_probe",
    "eigenmodes",
    "filtered_identity_relative",
    "gagliardo_seminorm",
    "gamma",
    "graded_grid",
    "mittag_leffler",
    "ml_eval",
    "ml_series_oracle",
    "mode_ode_residual",
    "rl_integral",
    "solve",
    "static_identity_relative",
    "trace_energy",
    "u1_sweep_ratios",
]
