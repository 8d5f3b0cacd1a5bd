"""Text backends for vernacular documents."""

from __future__ import annotations

from typing import Optional

from ..document import VernacularDocument, serialize
from ..layout import LayoutConfig
from .common import RenderedArtifact, UnsupportedDocument
from .coq import export_coq
from .isar import export_isar
from .natural import export_natural

TARGETS = ("isar", "coq", "tex", "html", "txt", "xml")
EXTENSIONS = {"isar": ".thy", "coq": ".v", "tex": ".tex", "html": ".html", "txt": ".txt",
              "xml": ".xml"}


def export(doc: VernacularDocument, target: str, layout: Optional[LayoutConfig] = None,
           name: str = "") -> RenderedArtifact:
    """Render ``doc`` for one of :data:`TARGETS`."""
    if target == "isar":
        return export_isar(doc, name)
    if target == "coq":
        return export_coq(doc)
    if target == "tex":
        return export_natural(doc, layout, "latex")
    if target == "html":
        return export_natural(doc, layout, "html")
    if target == "txt":
        return export_natural(doc, layout, "plain")
    if target == "xml":
        return RenderedArtifact(serialize(doc))
    raise ValueError(f"unknown export target {target!r}; choose from {', '.join(TARGETS)}")


__all__ = ["TARGETS", "EXTENSIONS", "RenderedArtifact", "UnsupportedDocument", "export",
           "export_coq", "export_isar", "export_natural"]
