"""Shared registry for acceptance verdict lines.

The acceptance tests record one human-readable PASS/FAIL line each;
conftest prints them in a terminal-summary section so the verdicts
survive pytest's output capture.
"""

from __future__ import annotations

LINES: list[str] = []


def record(line: str) -> None:
    LINES.append(line)
