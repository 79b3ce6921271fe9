"""Numerical thresholds, collected in one place.

The mathematics is exact; every number here is an implementation choice.
"""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    orth: float = 1e-10            # orthonormality and frame relations (absolute, unit inputs)
    assoc: float = 1e-9            # psi residual and closure residual for associative planes
    g2_membership: float = 1e-9    # relative to |X|
    rank: float = 1e-8             # sigma counts as nonzero above rank * sigma_max
    marginal: float = 1e-10        # [marginal, rank] * sigma_max is reported as ambiguous
    eigen_cluster: float = 1e-11   # eigenvalues of -X^2 within this * |X|^2 share an eigenspace
    rotation: float = 1e-10        # |X45| above this * |X| triggers the in-plane rotation
    tie: float = 1e-9              # ties in the eigenvector selection rule
    shared_angle: float = 1e-7     # principal angles below this are shared directions
    marginal_angle: float = 1e-5   # angles in [shared_angle, marginal_angle) are ambiguous
    equal_plane_angle: float = 1e-8


DEFAULT = Tolerances()
