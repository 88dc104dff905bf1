"""Theta functions, canonical maps of theta divisors and exact minor identities."""

import json

from ._thetalab import (
    ThetalabError,
    base_points,
    canonical_image,
    canonical_sections,
    chordal_distance,
    identity_ledger,
    legendre_parameter,
    legendre_x,
    numerical_invariants,
    rank_ratio,
    sample_surface_point,
    theta,
    theta_jet,
)
from ._thetalab import run as _run

__all__ = [
    "ThetalabError",
    "base_points",
    "canonical_image",
    "canonical_sections",
    "chordal_distance",
    "identity_ledger",
    "legendre_parameter",
    "legendre_x",
    "numerical_invariants",
    "rank_ratio",
    "run",
    "sample_surface_point",
    "theta",
    "theta_jet",
]


def run(config=None, **overrides):
    """Run verifier suites; returns the report as a dict.

    ``config`` is a dict in the JSON config format; keyword arguments override its fields.
    """
    cfg = dict(config or {})
    cfg.update(overrides)
    return json.loads(_run(json.dumps(cfg)))
