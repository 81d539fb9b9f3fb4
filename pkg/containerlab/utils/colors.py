"""
Terminal color helpers for the text report.
"""

from __future__ import annotations

import os
import re
import sys


class Colors:
    """ANSI color codes for terminal output."""

    RESET = "\033[0m"
    BOLD = "\033[1m"

    RED = "\033[0;31m"
    GREEN = "\033[0;32m"
    CYAN = "\033[0;36m"


def supports_color() -> bool:
    """
    Check if the terminal supports color output.

    NO_COLOR disables and FORCE_COLOR enables unconditionally; otherwise
    stdout must be a non-dumb tty.
    """
    if os.environ.get("NO_COLOR"):
        return False
    if os.environ.get("FORCE_COLOR"):
        return True
    if not hasattr(sys.stdout, "isatty") or not sys.stdout.isatty():
        return False
    return os.environ.get("TERM", "") != "dumb"


def colorize(text: str, color: str, bold: bool = False, enabled: bool | None = None) -> str:
    """
    Apply color to text.

    Args:
        text: Text to colorize
        color: Color code from Colors class
        bold: Whether to make text bold
        enabled: Force colors on or off; None asks the terminal

    Returns:
        Colorized text or plain text if colors are off
    """
    if enabled is None:
        enabled = supports_color()
    if not enabled:
        return text
    if bold:
        return f"{Colors.BOLD}{color}{text}{Colors.RESET}"
    return f"{color}{text}{Colors.RESET}"


def strip_colors(text: str) -> str:
    """Remove ANSI color codes from text."""
    ansi_escape = re.compile(r"\x1B(?:[@-Z\\-_]|\[[0-?]*[ -/]*[@-~])")
    return ansi_escape.sub("", text)


def verdict(passed: bool, enabled: bool | None = None) -> str:
    """PASS in green or FAIL in red."""
    if passed:
        return colorize("PASS", Colors.GREEN, bold=True, enabled=enabled)
    return colorize("FAIL", Colors.RED, bold=True, enabled=enabled)
