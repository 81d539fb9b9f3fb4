"""
Utility modules for containerlab.
"""

from containerlab.utils.colors import Colors, colorize, strip_colors, verdict
from containerlab.utils.formatting import format_count, format_duration, format_real

__all__ = [
    "format_count",
    "format_duration",
    "format_real",
    "Colors",
    "colorize",
    "strip_colors",
    "verdict",
]
