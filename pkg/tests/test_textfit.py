import pytest

from infoforge.errors import ContentOverflowWarning
from infoforge.textfit import ELLIPSIS, LINE_HEIGHT, fit_text, text_width, wrap_text


def test_width_monotone_in_length():
    assert text_width("hello", 10) < text_width("hello world", 10)


def test_wrap_respects_width():
    size = 10.0
    lines = wrap_text("the quick brown fox jumps over the lazy dog", size, 120)
    assert len(lines) > 1
    for line in lines:
        assert text_width(line, size) <= 120


def test_wrap_single_long_word_gets_own_line():
    lines = wrap_text("a extraordinarily-long-compound-word b", 12, 60)
    assert any("extraordinarily" in line for line in lines)


def test_fit_larger_box_larger_font():
    small, _, _ = fit_text("some words to place", 80, 40)
    large, _, _ = fit_text("some words to place", 300, 120)
    assert large > small


def test_fit_longer_text_smaller_font():
    short, _, ok_short = fit_text("tiny note " * 5, 168, 120)
    long, _, ok_long = fit_text("tiny note " * 50, 168, 120)
    assert ok_short and ok_long
    assert long < short


def test_fit_block_height_within_box():
    for text in ("one", "one two three four five six seven eight nine ten " * 4):
        size, lines, fitted = fit_text(text, 150, 90)
        assert fitted
        assert len(lines) * size * LINE_HEIGHT <= 90 + 1e-9


def test_fit_overflow_truncates_with_ellipsis():
    with pytest.warns(ContentOverflowWarning):
        size, lines, fitted = fit_text("x" * 4000, 40, 10)
    assert not fitted
    assert size == 6.0
    assert lines[-1].endswith(ELLIPSIS)


def test_fit_deterministic():
    a = fit_text("deterministic output please", 140, 60)
    b = fit_text("deterministic output please", 140, 60)
    assert a == b
