"""Markdown content specification: the input that separates content from design.

The grammar is deliberately small. One optional ``#`` heading names the
infographic; every top-level list item describes one visual group via keyed
sub-lines::

    # Trip
    - title: Day 1
      text: Arrive and settle in
      label: 06/01
      image: photos/day1.png
    - Day 2 is a bare first line, treated as a title

Unknown keys are hard errors so typos surface early. Parsing is pure and
deterministic.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import EmptySpec, MalformedItem, OversizeField

TITLE_MAX = 120
LABEL_MAX = 120
TEXT_MAX = 2000
MAX_ITEMS = 32

_KEYS = ("title", "text", "label", "image")
_BULLET_RE = re.compile(r"^[-*+]\s+(.*)$")
_KEYED_RE = re.compile(r"^(\w+):\s*(.*)$")


@dataclass(frozen=True)
class VgContent:
    """Content carried by one visual group. At least one field is set."""

    title: str | None = None
    text: str | None = None
    label: str | None = None
    image_ref: str | None = None

    def __post_init__(self):
        if self.title is None and self.text is None and self.label is None and self.image_ref is None:
            raise ValueError("a visual group needs at least one content field")
        for name, value, cap in (("title", self.title, TITLE_MAX), ("label", self.label, LABEL_MAX), ("text", self.text, TEXT_MAX)):
            if value is not None and len(value) > cap:
                raise OversizeField(f"{name} exceeds {cap} characters ({len(value)})", field=name)


@dataclass(frozen=True)
class ComponentSignature:
    has_title: bool
    has_text: bool
    has_label: bool
    has_image: bool

    def is_superset_of(self, other: "ComponentSignature") -> bool:
        return (
            (self.has_title or not other.has_title)
            and (self.has_text or not other.has_text)
            and (self.has_label or not other.has_label)
            and (self.has_image or not other.has_image)
        )

    def union(self, other: "ComponentSignature") -> "ComponentSignature":
        return ComponentSignature(
            self.has_title or other.has_title,
            self.has_text or other.has_text,
            self.has_label or other.has_label,
            self.has_image or other.has_image,
        )

    def as_dict(self) -> dict[str, bool]:
        return {
            "title": self.has_title,
            "text": self.has_text,
            "label": self.has_label,
            "image": self.has_image,
        }


@dataclass(frozen=True)
class ContentSpec:
    items: tuple[VgContent, ...]
    infographic_title: str | None = None

    def __post_init__(self):
        if not (1 <= len(self.items) <= MAX_ITEMS):
            raise ValueError(f"need 1..{MAX_ITEMS} items, got {len(self.items)}")


@dataclass(frozen=True)
class Issue:
    severity: str  # "error" | "warning"
    item_index: int | None
    message: str

    def as_dict(self) -> dict:
        return {"severity": self.severity, "item_index": self.item_index, "message": self.message}


def signature_of(item: VgContent) -> ComponentSignature:
    return ComponentSignature(
        has_title=item.title is not None,
        has_text=item.text is not None,
        has_label=item.label is not None,
        has_image=item.image_ref is not None,
    )


def union_signature(items) -> ComponentSignature:
    sig = ComponentSignature(False, False, False, False)
    for item in items:
        sig = sig.union(signature_of(item))
    return sig


def _finish_item(fields: dict[str, str], line_no: int) -> VgContent:
    if not fields:
        raise MalformedItem(f"line {line_no}: empty list item", line=line_no)
    return VgContent(
        title=fields.get("title"),
        text=fields.get("text"),
        label=fields.get("label"),
        image_ref=fields.get("image"),
    )


def parse_markdown(source: str) -> ContentSpec:
    """Parse markdown text into a ContentSpec; raises on malformed input."""
    title: str | None = None
    items: list[VgContent] = []
    fields: dict[str, str] | None = None
    item_start = 0

    def assign(key: str, value: str, line_no: int):
        assert fields is not None
        if key not in _KEYS:
            raise MalformedItem(f"line {line_no}: unknown key {key!r}", line=line_no, key=key)
        if key in fields:
            raise MalformedItem(f"line {line_no}: duplicate key {key!r}", line=line_no, key=key)
        if not value:
            raise MalformedItem(f"line {line_no}: empty value for {key!r}", line=line_no, key=key)
        fields[key] = value

    for line_no, raw in enumerate(source.splitlines(), start=1):
        line = raw.rstrip()
        stripped = line.strip()
        if not stripped:
            continue
        if line.startswith("#") and not line.startswith("##"):
            if fields is not None:
                raise MalformedItem(f"line {line_no}: heading inside a list item", line=line_no)
            if title is not None:
                raise MalformedItem(f"line {line_no}: more than one title heading", line=line_no)
            title = line.lstrip("#").strip()
            continue
        bullet = _BULLET_RE.match(stripped)
        if bullet and not line.startswith((" ", "\t")):
            if fields is not None:
                items.append(_finish_item(fields, item_start))
            fields = {}
            item_start = line_no
            first = bullet.group(1).strip()
            if first:
                keyed = _KEYED_RE.match(first)
                if keyed and keyed.group(1).lower() in _KEYS:
                    assign(keyed.group(1).lower(), keyed.group(2).strip(), line_no)
                else:
                    # Bare first line doubles as the title.
                    assign("title", first, line_no)
            continue
        if fields is None:
            raise MalformedItem(f"line {line_no}: text outside any list item", line=line_no)
        keyed = _KEYED_RE.match(stripped)
        if not keyed:
            raise MalformedItem(f"line {line_no}: expected 'key: value'", line=line_no)
        assign(keyed.group(1).lower(), keyed.group(2).strip(), line_no)

    if fields is not None:
        items.append(_finish_item(fields, item_start))
    if not items:
        raise EmptySpec("no list items found")
    if len(items) > MAX_ITEMS:
        raise MalformedItem(f"too many items ({len(items)} > {MAX_ITEMS})")
    return ContentSpec(items=tuple(items), infographic_title=title)


def serialize_markdown(spec: ContentSpec) -> str:
    """Canonical markdown for a spec; parse(serialize(s)) == s."""
    lines: list[str] = []
    if spec.infographic_title is not None:
        lines.append(f"# {spec.infographic_title}")
        lines.append("")
    for item in spec.items:
        pairs = [
            ("title", item.title),
            ("text", item.text),
            ("label", item.label),
            ("image", item.image_ref),
        ]
        present = [(k, v) for k, v in pairs if v is not None]
        first_key, first_val = present[0]
        lines.append(f"- {first_key}: {first_val}")
        for k, v in present[1:]:
            lines.append(f"  {k}: {v}")
    return "\n".join(lines) + "\n"


def validate_spec(spec: ContentSpec, asset_resolver=None) -> list[Issue]:
    """Non-raising checks; unresolvable images are warnings, not errors.

    ``asset_resolver`` is a callable ref -> bool (True when resolvable);
    None skips image checks entirely.
    """
    issues: list[Issue] = []
    if asset_resolver is not None:
        for i, item in enumerate(spec.items):
            if item.image_ref is not None and not asset_resolver(item.image_ref):
                issues.append(Issue("warning", i, f"image {item.image_ref!r} not resolvable; placeholder glyph will be used"))
    return issues


def validate_markdown(source: str, asset_resolver=None) -> tuple[ContentSpec | None, list[Issue]]:
    """Parse plus validate without raising; parse failures become error issues.

    This is the live-feedback path: editors call it on every keystroke and
    render the issue list inline.
    """
    from .errors import InfoforgeError

    try:
        spec = parse_markdown(source)
    except InfoforgeError as exc:
        return None, [Issue("error", exc.details.get("line"), f"{exc.code}: {exc}")]
    return spec, validate_spec(spec, asset_resolver)
