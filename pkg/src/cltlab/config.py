"""Run configuration: block factor validation and process-wide caps."""

from __future__ import annotations

import math
from dataclasses import dataclass

SQRT3 = math.sqrt(3.0)


class ConfigError(ValueError):
    """Invalid run configuration (bad block factor, window, etc.)."""


class StabilizationCapError(RuntimeError):
    """The offset digits failed to cover the requested window below the level cap.

    This has probability roughly (2/L)**cap per replicate; hitting it in
    practice means something is wrong with the digit stream.
    """


def validate_block_factor(L: int) -> int:
    """Check that the block factor L is even and at least 6."""
    L = int(L)
    if L < 6 or L % 2 != 0:
        raise ConfigError(f"block factor must be even and >= 6, got {L}")
    return L


def block_factor_for_order(N: int) -> int:
    """Smallest usable block factor for independence order N.

    Any N distinct coordinates of the output process are independent
    provided L - 1 >= N, so this returns the smallest even L >= max(6, N+1).
    """
    N = int(N)
    if N < 2:
        raise ConfigError(f"independence order must be >= 2, got {N}")
    L = max(6, N + 1)
    if L % 2 != 0:
        L += 1
    return L


@dataclass(frozen=True)
class ProcessConfig:
    """Validated-once parameters shared by the samplers.

    L: block factor (even, >= 6).
    max_depth: cap on the recursive measure depth (memory guard; a level-n
        sample has L**n coordinates).
    level_cap: hard cap on the stabilization level of window sampling.
    enumeration_cap: largest L for which the sign space is enumerated
        exactly (2**(L-1) atoms).
    """

    L: int = 6
    max_depth: int = 8
    level_cap: int = 64
    enumeration_cap: int = 16

    def __post_init__(self):
        validate_block_factor(self.L)
        if self.max_depth < 1:
            raise ConfigError(f"max_depth must be >= 1, got {self.max_depth}")
        if self.level_cap < 1:
            raise ConfigError(f"level_cap must be >= 1, got {self.level_cap}")


DEFAULT_CONFIG = ProcessConfig()
