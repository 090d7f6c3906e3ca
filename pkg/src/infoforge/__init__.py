"""infoforge: infographic synthesis from markdown content and design assets.

Pipeline: rank flow layouts for the content, rank visual-group designs and
connection styles for the chosen layout, then assemble the final SVG. Usable
as a library, a CLI (``infoforge``), an HTTP service, and through the studio
front end.
"""

__version__ = "0.1.0"

from .content import ContentSpec, VgContent, parse_markdown  # noqa: F401
from .geometry import BBox, Canvas  # noqa: F401
