"""Numerical tolerances used for input admission and branch decisions.

All identities implemented by this library are exact in exact arithmetic;
tolerances exist only to admit floating-point inputs and to keep integer
counts stable at exact branch boundaries.
"""

from __future__ import annotations

import os
from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    norm: float = 1e-9  # unit-norm admission for axes and quaternions
    orth: float = 1e-9  # orthogonality admission for frame axes
    angle: float = 1e-9  # degenerate-angle branch thresholds
    parallel: float = 1e-9  # |m.n| < 1 - parallel admission for axis pairs
    ceil: float = 1e-9  # snap window around integers in ceiling counts
    recon: float = 1e-9  # reconstruction residual bound for decompositions

    @classmethod
    def from_env(cls, env_var: str = "BIAXIAL_TOL") -> "Tolerances":
        """Build tolerances, letting the environment override every field."""
        raw = os.environ.get(env_var)
        if raw is None:
            return cls()
        value = float(raw)
        return cls(norm=value, orth=value, angle=value, parallel=value,
                   ceil=value, recon=value)


DEFAULT_TOL = Tolerances()
