import pytest

from infoforge.assets import Palette, load_corpus
from infoforge.color import (
    contrast_ratio,
    palette_score,
    rank_palettes,
    relative_luminance,
    select_palette,
    tint,
)
from infoforge.errors import NoAccessiblePaletteWarning


def test_luminance_endpoints():
    assert relative_luminance("#000000") == pytest.approx(0.0)
    assert relative_luminance("#ffffff") == pytest.approx(1.0)


def test_contrast_black_white():
    assert contrast_ratio("#000000", "#ffffff") == pytest.approx(21.0)
    assert contrast_ratio("#ffffff", "#000000") == pytest.approx(21.0)


def test_contrast_self_is_one():
    assert contrast_ratio("#336699", "#336699") == pytest.approx(1.0)


def test_tint_moves_toward_white():
    assert tint("#000000", 1.0) == "#ffffff"
    assert relative_luminance(tint("#204060", 0.5)) > relative_luminance("#204060")


def test_dark_series_beats_pastel_on_white(corpus_root):
    store = load_corpus(corpus_root)
    ranked = dict(rank_palettes(store.palettes, "#ffffff"))
    assert ranked["pal-ink"] > ranked["pal-pastel"]
    chosen, accessible = select_palette(store.palettes, "#ffffff")
    assert accessible
    assert palette_score(chosen, "#ffffff") >= 3.0


def test_palette_matching_background_excluded():
    same = Palette(id="p-flat", background="#888888", series=("#888888",) * 6, text_color="#000000")
    strong = Palette(id="p-strong", background="#ffffff", series=("#111111",) * 6, text_color="#000000")
    chosen, accessible = select_palette([same, strong], "#888888")
    assert chosen.id == "p-strong"
    assert accessible


def test_all_inaccessible_falls_back_with_warning():
    weak_a = Palette(id="a", background="#ffffff", series=("#eeeeee",) * 6, text_color="#000000")
    weak_b = Palette(id="b", background="#ffffff", series=("#dddddd",) * 6, text_color="#000000")
    with pytest.warns(NoAccessiblePaletteWarning):
        chosen, accessible = select_palette([weak_a, weak_b], "#ffffff")
    assert not accessible
    assert chosen.id == "b"  # darker gray scores higher


def test_tie_breaks_on_lower_id():
    twin_a = Palette(id="aa", background="#ffffff", series=("#222222",) * 6, text_color="#000000")
    twin_b = Palette(id="bb", background="#ffffff", series=("#222222",) * 6, text_color="#000000")
    chosen, _ = select_palette([twin_b, twin_a], "#ffffff")
    assert chosen.id == "aa"


def test_dark_background_prefers_light_series(corpus_root):
    store = load_corpus(corpus_root)
    chosen, accessible = select_palette(store.palettes, "#14181d")
    assert accessible
    assert relative_luminance(chosen.series[0]) > 0.3
