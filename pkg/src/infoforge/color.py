"""Color math for palette selection: WCAG relative luminance and contrast."""

from __future__ import annotations

import warnings

from .assets import Palette
from .errors import NoAccessiblePaletteWarning

MIN_SERIES_CONTRAST = 3.0


def _channel(v: float) -> float:
    return v / 12.92 if v <= 0.03928 else ((v + 0.055) / 1.055) ** 2.4


def parse_hex(color: str) -> tuple[float, float, float]:
    c = color.lstrip("#")
    return int(c[0:2], 16) / 255.0, int(c[2:4], 16) / 255.0, int(c[4:6], 16) / 255.0


def to_hex(r: float, g: float, b: float) -> str:
    return "#{:02x}{:02x}{:02x}".format(
        round(max(0.0, min(1.0, r)) * 255),
        round(max(0.0, min(1.0, g)) * 255),
        round(max(0.0, min(1.0, b)) * 255),
    )


def relative_luminance(color: str) -> float:
    r, g, b = (_channel(v) for v in parse_hex(color))
    return 0.2126 * r + 0.7152 * g + 0.0722 * b


def contrast_ratio(a: str, b: str) -> float:
    la, lb = relative_luminance(a), relative_luminance(b)
    lighter, darker = max(la, lb), min(la, lb)
    return (lighter + 0.05) / (darker + 0.05)


def tint(color: str, amount: float) -> str:
    """Mix toward white; amount 0 keeps the color, 1 gives white."""
    r, g, b = parse_hex(color)
    return to_hex(r + (1 - r) * amount, g + (1 - g) * amount, b + (1 - b) * amount)


def palette_score(palette: Palette, background: str) -> float:
    """Weakest series-vs-background contrast; the series is only as readable
    as its worst color."""
    return min(contrast_ratio(c, background) for c in palette.series)


def rank_palettes(palettes, background: str) -> list[tuple[str, float]]:
    scored = [(p.id, palette_score(p, background)) for p in palettes]
    scored.sort(key=lambda pair: (-pair[1], pair[0]))
    return scored


def select_palette(palettes, background: str, min_contrast: float = MIN_SERIES_CONTRAST) -> tuple[Palette, bool]:
    """Best palette for the background; (palette, accessible).

    Palettes whose weakest series contrast falls under ``min_contrast`` are
    excluded; if none remain, the best available is returned with
    accessible=False and a NoAccessiblePaletteWarning.
    """
    if not palettes:
        raise ValueError("no palettes available")
    by_id = {p.id: p for p in palettes}
    ranked = rank_palettes(palettes, background)
    accessible = [(pid, s) for pid, s in ranked if s >= min_contrast]
    if accessible:
        return by_id[accessible[0][0]], True
    warnings.warn(
        f"no palette reaches contrast {min_contrast} on {background}; using best available",
        NoAccessiblePaletteWarning,
        stacklevel=2,
    )
    return by_id[ranked[0][0]], False
