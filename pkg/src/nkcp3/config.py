"""Tolerance tiers shared by every check in the package."""

from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass

DEFAULT_SEED = 20240611


@dataclass(frozen=True)
class Tolerances:
    algebraic: float = 1e-12
    first_order: float = 1e-9
    second_order: float = 1e-8
    classify: float = 1e-6

    def override(self, **tiers: float) -> "Tolerances":
        unknown = set(tiers) - {f.name for f in dataclasses.fields(self)}
        if unknown:
            raise KeyError(f"unknown tolerance tier(s): {', '.join(sorted(unknown))}")
        return dataclasses.replace(self, **tiers)


TOL = Tolerances()


def seed() -> int:
    """RNG seed for the random-sample checks (env var ``NKCP3_SEED``)."""
    return int(os.environ.get("NKCP3_SEED", DEFAULT_SEED))
