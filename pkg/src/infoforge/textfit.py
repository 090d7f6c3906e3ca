"""Deterministic text measurement, wrapping, and fitting.

Widths come from an embedded per-character advance table (classic
Helvetica-style metrics in em fractions), so a fitted font size is a pure
function of the string and the box on every platform. Fitting bisects the
font size over half-point steps: wrapping is greedy by words, and the
largest size whose wrapped block fits the box wins.
"""

from __future__ import annotations

import warnings

from .errors import ContentOverflowWarning

LINE_HEIGHT = 1.2
MIN_FONT_PT = 6.0
ELLIPSIS = "…"

# Advance widths in em fractions for printable ASCII (Helvetica metrics).
CHAR_WIDTHS = {
    " ": 0.278, "!": 0.278, '"': 0.355, "#": 0.556, "$": 0.556, "%": 0.889,
    "&": 0.667, "'": 0.191, "(": 0.333, ")": 0.333, "*": 0.389, "+": 0.584,
    ",": 0.278, "-": 0.333, ".": 0.278, "/": 0.278,
    "0": 0.556, "1": 0.556, "2": 0.556, "3": 0.556, "4": 0.556, "5": 0.556,
    "6": 0.556, "7": 0.556, "8": 0.556, "9": 0.556,
    ":": 0.278, ";": 0.278, "<": 0.584, "=": 0.584, ">": 0.584, "?": 0.556,
    "@": 1.015,
    "A": 0.667, "B": 0.667, "C": 0.722, "D": 0.722, "E": 0.667, "F": 0.611,
    "G": 0.778, "H": 0.722, "I": 0.278, "J": 0.5, "K": 0.667, "L": 0.556,
    "M": 0.833, "N": 0.722, "O": 0.778, "P": 0.667, "Q": 0.778, "R": 0.722,
    "S": 0.667, "T": 0.611, "U": 0.722, "V": 0.667, "W": 0.944, "X": 0.667,
    "Y": 0.667, "Z": 0.611,
    "[": 0.278, "\\": 0.278, "]": 0.278, "^": 0.469, "_": 0.556, "`": 0.333,
    "a": 0.556, "b": 0.556, "c": 0.5, "d": 0.556, "e": 0.556, "f": 0.278,
    "g": 0.556, "h": 0.556, "i": 0.222, "j": 0.222, "k": 0.5, "l": 0.222,
    "m": 0.833, "n": 0.556, "o": 0.556, "p": 0.556, "q": 0.556, "r": 0.333,
    "s": 0.5, "t": 0.278, "u": 0.556, "v": 0.5, "w": 0.722, "x": 0.5,
    "y": 0.5, "z": 0.5,
    "{": 0.334, "|": 0.26, "}": 0.334, "~": 0.584, ELLIPSIS: 1.0,
}
DEFAULT_CHAR_WIDTH = 0.6


def text_width(text: str, font_size: float) -> float:
    return font_size * sum(CHAR_WIDTHS.get(ch, DEFAULT_CHAR_WIDTH) for ch in text)


def wrap_text(text: str, font_size: float, max_width: float) -> list[str]:
    """Greedy word wrap; a word wider than the box gets a line to itself."""
    lines: list[str] = []
    current = ""
    for word in text.split():
        candidate = word if not current else f"{current} {word}"
        if text_width(candidate, font_size) <= max_width or not current:
            current = candidate
        else:
            lines.append(current)
            current = word
    if current:
        lines.append(current)
    return lines or [""]


def block_fits(text: str, font_size: float, w: float, h: float) -> bool:
    lines = wrap_text(text, font_size, w)
    if any(text_width(line, font_size) > w for line in lines):
        return False
    return len(lines) * font_size * LINE_HEIGHT <= h


def fit_text(
    text: str,
    w: float,
    h: float,
    min_font: float = MIN_FONT_PT,
    max_font: float | None = None,
) -> tuple[float, list[str], bool]:
    """(font size, wrapped lines, fitted) for the largest size that fits.

    When even ``min_font`` overflows, the text is truncated with an ellipsis
    at ``min_font`` and a ContentOverflowWarning is emitted; fitted=False.
    """
    if max_font is None:
        max_font = max(min_font, h / LINE_HEIGHT)
    # half-point candidates, ascending; block_fits is monotone in size
    steps = max(1, int((max_font - min_font) / 0.5) + 1)
    sizes = [min_font + 0.5 * i for i in range(steps) if min_font + 0.5 * i <= max_font]
    if not sizes:
        sizes = [min_font]
    lo, hi = 0, len(sizes) - 1
    best = -1
    while lo <= hi:
        mid = (lo + hi) // 2
        if block_fits(text, sizes[mid], w, h):
            best = mid
            lo = mid + 1
        else:
            hi = mid - 1
    if best >= 0:
        size = sizes[best]
        return size, wrap_text(text, size, w), True

    # does not fit at all: truncate at min size
    shortened = text
    while shortened and not block_fits(shortened + ELLIPSIS, min_font, w, h):
        shortened = shortened[:-1].rstrip()
    truncated = (shortened + ELLIPSIS) if shortened else ELLIPSIS
    warnings.warn(
        f"text truncated to fit {w:.0f}x{h:.0f} box at {min_font}pt",
        ContentOverflowWarning,
        stacklevel=2,
    )
    return min_font, wrap_text(truncated, min_font, w), False
