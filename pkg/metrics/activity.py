"""Switching activity of the pipeline registers."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np


def hamming(previous: int, current: int) -> int:
    return (previous ^ current).bit_count()


def switching_factor(toggles: int, latch_bits: int, cycles: int) -> float:
    """Toggles per latch bit per cycle; zero before the first cycle."""
    if cycles == 0:
        return 0.0
    if latch_bits <= 0:
        raise ValueError(f"latch width must be positive, got {latch_bits}")
    return toggles / (latch_bits * cycles)


@dataclass
class ActivityCounters:
    """Per-latch toggle totals over a run."""

    latch_names: tuple[str, ...]
    bits_per_latch: int
    toggles: np.ndarray = field(init=False)
    cycles: int = 0
    gated_cycles: int = 0

    def __post_init__(self) -> None:
        self.toggles = np.zeros(len(self.latch_names), dtype=np.int64)

    @property
    def total_toggles(self) -> int:
        return int(self.toggles.sum())

    @property
    def total_bits(self) -> int:
        return self.bits_per_latch * len(self.latch_names)

    @property
    def e_sw(self) -> float:
        return switching_factor(self.total_toggles, self.total_bits, self.cycles)

    def as_dict(self) -> dict[str, int]:
        return {name: int(count) for name, count in zip(self.latch_names, self.toggles)}


def record_cycle(
    counters: ActivityCounters,
    previous: Sequence[int],
    current: Sequence[int],
    gated: Sequence[bool] | None = None,
) -> int:
    """Add one cycle of Hamming distances; a gated latch is not clocked and adds nothing.

    Returns the number of toggles recorded for this cycle.
    """
    if len(previous) != len(counters.latch_names) or len(current) != len(previous):
        raise ValueError(
            f"expected {len(counters.latch_names)} latch values, "
            f"got {len(previous)} and {len(current)}"
        )
    held = gated if gated is not None else [False] * len(previous)
    distances = np.array(
        [0 if hold else hamming(old, new) for old, new, hold in zip(previous, current, held)],
        dtype=np.int64,
    )
    counters.toggles += distances
    counters.cycles += 1
    if any(held):
        counters.gated_cycles += 1
    return int(distances.sum())
