"""Exception and warning types shared across the package.

Exceptions carry a short machine-readable ``code`` so the HTTP layer and the
CLI can map failures to status codes without string matching. Warnings mark
degradations that do not abort a render (skipped connection segments,
truncated text, inaccessible palettes).
"""


class InfoforgeError(Exception):
    code = "INTERNAL"

    def __init__(self, message: str = "", **details):
        super().__init__(message or self.code)
        self.details = details


# -- content spec ------------------------------------------------------------

class EmptySpec(InfoforgeError):
    code = "EMPTY_SPEC"


class MalformedItem(InfoforgeError):
    code = "MALFORMED_ITEM"


class OversizeField(InfoforgeError):
    code = "OVERSIZE_FIELD"


# -- geometry ----------------------------------------------------------------

class StrokeTooShort(InfoforgeError):
    code = "STROKE_TOO_SHORT"


# -- asset corpus ------------------------------------------------------------

class MissingManifest(InfoforgeError):
    code = "MISSING_MANIFEST"


class CorruptAsset(InfoforgeError):
    code = "CORRUPT_ASSET"

    def __init__(self, file: str, reason: str):
        super().__init__(f"{file}: {reason}", file=file, reason=reason)


class VersionMismatch(InfoforgeError):
    code = "VERSION_MISMATCH"


# -- index building ----------------------------------------------------------

class TooFewSamples(InfoforgeError):
    code = "TOO_FEW_SAMPLES"


# -- recommendation ----------------------------------------------------------

class NoCandidates(InfoforgeError):
    code = "NO_CANDIDATES"


class NoDesignsForStyle(InfoforgeError):
    code = "NO_DESIGNS_FOR_STYLE"


# -- composition -------------------------------------------------------------

class Unplaceable(InfoforgeError):
    code = "UNPLACEABLE"


class PivotRequired(InfoforgeError):
    code = "PIVOT_REQUIRED"


# -- service / storage -------------------------------------------------------

class NotFound(InfoforgeError):
    code = "NOT_FOUND"


class SelectionIncomplete(InfoforgeError):
    code = "SELECTION_INCOMPLETE"


class StorageFull(InfoforgeError):
    code = "STORAGE_FULL"


# -- warnings ----------------------------------------------------------------

class InfoforgeWarning(UserWarning):
    """Base class for non-fatal degradations."""


class ZeroLengthSegmentWarning(InfoforgeWarning):
    """A connection segment between coincident points was skipped."""


class ContentOverflowWarning(InfoforgeWarning):
    """Text did not fit its placeholder at minimum font size and was truncated."""


class NoAccessiblePaletteWarning(InfoforgeWarning):
    """No palette met the contrast floor; best available was used instead."""
