import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from infoforge.content import (
    ComponentSignature,
    ContentSpec,
    VgContent,
    parse_markdown,
    serialize_markdown,
    signature_of,
    union_signature,
    validate_markdown,
    validate_spec,
)
from infoforge.errors import EmptySpec, MalformedItem, OversizeField

TRIP = "# Trip\n- title: Day 1\n  text: Arrive\n- title: Day 2\n  text: Hike\n"


def test_parse_trip():
    spec = parse_markdown(TRIP)
    assert spec.infographic_title == "Trip"
    assert [i.title for i in spec.items] == ["Day 1", "Day 2"]
    assert [i.text for i in spec.items] == ["Arrive", "Hike"]


def test_parse_label_text_item():
    spec = parse_markdown("- label: 75%\n  text: adoption\n")
    assert len(spec.items) == 1
    sig = signature_of(spec.items[0])
    assert (sig.has_title, sig.has_text, sig.has_label, sig.has_image) == (False, True, True, False)


def test_parse_four_text_items_no_heading():
    src = "\n".join(f"- text: step number {i}" for i in range(1, 5)) + "\n"
    spec = parse_markdown(src)
    assert spec.infographic_title is None
    assert len(spec.items) == 4
    for item in spec.items:
        assert signature_of(item).as_dict() == {"title": False, "text": True, "label": False, "image": False}


def test_bare_first_line_is_title():
    spec = parse_markdown("- Day 1\n  text: Arrive\n")
    assert spec.items[0].title == "Day 1"


def test_item_order_preserved():
    src = "- title: c\n- title: a\n- title: b\n"
    assert [i.title for i in parse_markdown(src).items] == ["c", "a", "b"]


def test_unknown_key_is_error_with_line():
    with pytest.raises(MalformedItem) as exc:
        parse_markdown("- title: ok\n  nope: broken\n")
    assert exc.value.details["line"] == 2


def test_empty_source_is_empty_spec():
    with pytest.raises(EmptySpec):
        parse_markdown("# just a title\n")


def test_oversize_field():
    with pytest.raises(OversizeField):
        parse_markdown(f"- title: {'x' * 121}\n")
    with pytest.raises(OversizeField):
        parse_markdown(f"- text: {'x' * 2001}\n")


def test_duplicate_key_rejected():
    with pytest.raises(MalformedItem):
        parse_markdown("- title: a\n  title: b\n")


def test_text_outside_item_rejected():
    with pytest.raises(MalformedItem):
        parse_markdown("stray line\n- title: a\n")


def test_colon_in_value_kept():
    spec = parse_markdown("- text: Arrive at 10: breakfast\n")
    assert spec.items[0].text == "Arrive at 10: breakfast"


def test_image_key_maps_to_image_ref():
    spec = parse_markdown("- text: x\n  image: pics/a.png\n")
    assert spec.items[0].image_ref == "pics/a.png"


# -- signatures -----------------------------------------------------------------

def test_signature_title_only():
    sig = signature_of(VgContent(title="A"))
    assert sig.as_dict() == {"title": True, "text": False, "label": False, "image": False}


def test_signature_all_fields():
    sig = signature_of(VgContent(title="t", text="x", label="l", image_ref="a.png"))
    assert all(sig.as_dict().values())


def test_signature_text_image():
    sig = signature_of(VgContent(text="x", image_ref="a.png"))
    assert sig.as_dict() == {"title": False, "text": True, "label": False, "image": True}


def test_signature_superset():
    full = ComponentSignature(True, True, True, True)
    small = ComponentSignature(False, True, False, False)
    assert full.is_superset_of(small)
    assert not small.is_superset_of(full)


def test_union_signature():
    items = [VgContent(title="a"), VgContent(label="b")]
    assert union_signature(items).as_dict() == {"title": True, "text": False, "label": True, "image": False}


def test_vgcontent_needs_a_field():
    with pytest.raises(ValueError):
        VgContent()


# -- validation -------------------------------------------------------------------

def test_validate_clean_spec():
    spec = parse_markdown("- title: a\n- title: b\n- title: c\n")
    assert validate_spec(spec, asset_resolver=lambda ref: True) == []


def test_validate_dead_image_is_warning():
    spec = parse_markdown("- text: x\n  image: gone.png\n")
    issues = validate_spec(spec, asset_resolver=lambda ref: False)
    assert len(issues) == 1
    assert issues[0].severity == "warning"
    assert issues[0].item_index == 0


def test_validate_markdown_reports_empty_spec():
    spec, issues = validate_markdown("")
    assert spec is None
    assert issues[0].severity == "error"
    assert "EMPTY_SPEC" in issues[0].message


# -- round trip ---------------------------------------------------------------------

short_text = st.text(
    alphabet=st.characters(whitelist_categories=("L", "N"), whitelist_characters=" "),
    min_size=1,
    max_size=40,
).map(lambda s: s.strip()).filter(lambda s: s)

vg_contents = st.builds(
    lambda t, x, l, use: VgContent(
        title=t if use[0] else None,
        text=x if use[1] else None,
        label=l if use[2] else None,
        image_ref="img/a.png" if use[3] else None,
    ),
    short_text,
    short_text,
    short_text,
    st.tuples(st.booleans(), st.booleans(), st.booleans(), st.booleans()).filter(any),
)


@given(st.lists(vg_contents, min_size=1, max_size=8), st.one_of(st.none(), short_text))
@settings(max_examples=120, deadline=None)
def test_serialize_parse_round_trip(items, title):
    spec = ContentSpec(items=tuple(items), infographic_title=title)
    assert parse_markdown(serialize_markdown(spec)) == spec


@given(st.integers(min_value=1, max_value=12))
def test_item_count_matches_bullets(n):
    src = "\n".join(f"- label: {i}" for i in range(n))
    assert len(parse_markdown(src).items) == n


def test_parse_deterministic():
    assert parse_markdown(TRIP) == parse_markdown(TRIP)
