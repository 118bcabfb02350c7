"""Unit tests for scripts/throughput_table.py."""

from __future__ import annotations

import sys

from metrics.tables import cipher_performance_rows
from scripts.throughput_table import HEADERS, main, render


def test_render_has_header_and_one_row_per_cipher():
    text = render(cipher_performance_rows())
    lines = text.splitlines()
    assert "Throughput (Mbit/s)" in lines[0]
    assert len(lines) == 2 + 3
    assert lines[2].lstrip("| ").startswith("DES")


def test_render_accepts_other_formats():
    text = render(cipher_performance_rows(), table_format="plain")
    assert "|" not in text
    assert "664" in text


def test_headers_cover_every_row_key():
    assert set(HEADERS) == set(cipher_performance_rows()[0])


def test_main_prints_table(monkeypatch, capsys):
    monkeypatch.setattr(sys, "argv", ["throughput_table.py", "--e-sw", "0.1", "--format", "simple"])
    main()
    out = capsys.readouterr().out
    assert "AES" in out
    assert "560" in out
