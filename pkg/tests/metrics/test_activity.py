"""Unit tests for metrics/activity.py."""

from __future__ import annotations

import pytest

from metrics.activity import ActivityCounters, hamming, record_cycle, switching_factor


@pytest.fixture
def counters() -> ActivityCounters:
    return ActivityCounters(("A", "B"), bits_per_latch=8)


def test_hamming_counts_differing_bits():
    assert hamming(0b1010, 0b0101) == 4
    assert hamming(0xFF, 0xFF) == 0


def test_record_cycle_sums_per_latch(counters):
    assert record_cycle(counters, [0, 0], [0b111, 0b1]) == 4
    assert record_cycle(counters, [0b111, 0b1], [0b110, 0b1]) == 1
    assert counters.as_dict() == {"A": 4, "B": 1}
    assert counters.cycles == 2
    assert counters.total_toggles == 5


def test_record_cycle_gated_latch_adds_nothing(counters):
    assert record_cycle(counters, [0, 0], [0xFF, 0xFF], gated=[True, False]) == 8
    assert counters.as_dict() == {"A": 0, "B": 8}
    assert counters.gated_cycles == 1


def test_record_cycle_rejects_wrong_width(counters):
    with pytest.raises(ValueError, match="expected 2 latch values"):
        record_cycle(counters, [0], [0])


def test_e_sw_normalises_by_bits_and_cycles(counters):
    record_cycle(counters, [0, 0], [0xFF, 0])
    record_cycle(counters, [0xFF, 0], [0xFF, 0])
    assert counters.total_bits == 16
    assert counters.e_sw == pytest.approx(8 / (16 * 2))


def test_e_sw_is_zero_before_any_cycle(counters):
    assert counters.e_sw == 0.0


def test_switching_factor_normalises_toggles():
    assert switching_factor(toggles=60, latch_bits=30, cycles=4) == pytest.approx(0.5)


def test_switching_factor_is_zero_without_cycles():
    assert switching_factor(toggles=0, latch_bits=30, cycles=0) == 0.0


def test_switching_factor_rejects_zero_width():
    with pytest.raises(ValueError, match="latch width must be positive"):
        switching_factor(toggles=1, latch_bits=0, cycles=1)
