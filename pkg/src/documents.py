"""Cone documents: the JSON input format of the command line.

A document is one JSON object

    {"rank": 2, "rays": [[0, 1], [2, -1]], "name": "wedge-rp3"}

with exactly one of "normals" or "rays", an optional "winding" (whole plane
in rank 2 only) and an optional "name". A file may hold a single document or
an array of them. Problems are reported against the line they occur on.
"""

import json
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional

from .classify import MomentInput
from .cone import Cone, cone_from_normals, cone_from_rays
from .errors import DocumentError
from .lattice import LatticeVector

logger = logging.getLogger(__name__)

DOCUMENT_FIELDS = ("rank", "normals", "rays", "winding", "name")


@dataclass
class ConeDocument:
    """One parsed cone description.

    `source` and `line` locate the document for diagnostics and take no part
    in equality.
    """

    rank: int
    normals: Optional[List[List[int]]] = None
    rays: Optional[List[List[int]]] = None
    winding: Optional[int] = None
    name: Optional[str] = None
    source: str = field(default="<input>", compare=False, repr=False)
    line: Optional[int] = field(default=None, compare=False, repr=False)

    @property
    def label(self) -> str:
        if self.name:
            return self.name
        if self.line is not None:
            return f"{self.source}:{self.line}"
        return self.source

    def vectors(self) -> List[LatticeVector]:
        """The listed normals or rays, as given."""
        rows = self.normals if self.normals is not None else self.rays
        return [LatticeVector(tuple(row)) for row in rows]

    def to_cone(self) -> Cone:
        if self.normals is not None:
            return cone_from_normals(self.rank, self.vectors())
        return cone_from_rays(self.rank, self.vectors())

    def to_moment_input(self) -> MomentInput:
        return MomentInput(rank=self.rank, cone=self.to_cone(), winding=self.winding)

    def error(self, message: str) -> DocumentError:
        """A DocumentError anchored at this document."""
        return DocumentError(message, self.source, self.line)

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"rank": self.rank}
        if self.normals is not None:
            data["normals"] = self.normals
        if self.rays is not None:
            data["rays"] = self.rays
        if self.winding is not None:
            data["winding"] = self.winding
        if self.name is not None:
            data["name"] = self.name
        return data


# =============================================================================
# Parsing
# =============================================================================


def _skip_whitespace(text: str, pos: int) -> int:
    while pos < len(text) and text[pos] in " \t\r\n":
        pos += 1
    return pos


def _line_at(text: str, offset: int) -> int:
    return text.count("\n", 0, offset) + 1


def _array_element_offsets(text: str, start: int) -> List[int]:
    """Offsets of the elements of the (already validated) JSON array at `start`."""
    decoder = json.JSONDecoder()
    pos = _skip_whitespace(text, start + 1)
    offsets: List[int] = []
    if text[pos] == "]":
        return offsets
    while True:
        offsets.append(pos)
        _, pos = decoder.raw_decode(text, pos)
        pos = _skip_whitespace(text, pos)
        if text[pos] != ",":
            return offsets
        pos = _skip_whitespace(text, pos + 1)


def _is_int(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def _parse_vectors(value: Any, rank: int, key: str, fail: Callable[[str, str], DocumentError]) -> List[List[int]]:
    if not isinstance(value, list):
        raise fail(key, f"'{key}' must be a list of integer vectors")
    vectors = []
    for index, row in enumerate(value):
        if not isinstance(row, list) or not all(_is_int(x) for x in row):
            raise fail(key, f"'{key}'[{index}] is not a list of integers")
        if len(row) != rank:
            raise fail(key, f"'{key}'[{index}] has length {len(row)}, expected rank {rank}")
        vectors.append(list(row))
    return vectors


def _document_from_mapping(data: Any, text: str, start: int, end: int, source: str) -> ConeDocument:
    doc_line = _line_at(text, start)

    def fail(key: Optional[str], message: str) -> DocumentError:
        line = doc_line
        if key is not None:
            found = text.find(f'"{key}"', start, end)
            if found >= 0:
                line = _line_at(text, found)
        return DocumentError(message, source, line)

    if not isinstance(data, dict):
        raise fail(None, "expected a cone document (a JSON object)")
    for key in data:
        if key not in DOCUMENT_FIELDS:
            raise fail(key, f"unknown field '{key}'")

    if "rank" not in data:
        raise fail(None, "missing field 'rank'")
    rank = data["rank"]
    if not _is_int(rank) or rank < 1:
        raise fail("rank", f"'rank' must be a positive integer, got {rank!r}")

    has_normals = "normals" in data
    has_rays = "rays" in data
    if has_normals == has_rays:
        key = "rays" if has_rays else None
        raise fail(key, "exactly one of 'normals' or 'rays' is required")
    normals = _parse_vectors(data["normals"], rank, "normals", fail) if has_normals else None
    rays = _parse_vectors(data["rays"], rank, "rays", fail) if has_rays else None

    winding = data.get("winding")
    if winding is not None and (not _is_int(winding) or winding < 1):
        raise fail("winding", f"'winding' must be an integer >= 1, got {winding!r}")

    name = data.get("name")
    if name is not None and not isinstance(name, str):
        raise fail("name", "'name' must be a string")

    return ConeDocument(
        rank=rank, normals=normals, rays=rays, winding=winding, name=name, source=source, line=doc_line
    )


def parse_documents(text: str, source: str = "<input>") -> List[ConeDocument]:
    """Parse one document or an array of documents.

    Raises:
        DocumentError: On malformed JSON or an invalid document, with the
            offending line
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentError(e.msg, source, e.lineno)

    start = _skip_whitespace(text, 0)
    if isinstance(data, list):
        offsets = _array_element_offsets(text, start)
        bounds = offsets[1:] + [len(text)]
        documents = [
            _document_from_mapping(item, text, begin, end, source)
            for item, begin, end in zip(data, offsets, bounds)
        ]
    else:
        documents = [_document_from_mapping(data, text, start, len(text), source)]

    if not documents:
        raise DocumentError("no cone documents found", source, _line_at(text, start))
    logger.debug(f"Parsed {len(documents)} document(s) from {source}")
    return documents


def _dump_document(document: ConeDocument, indent: str = "") -> str:
    items = [f'{indent}  "{key}": {json.dumps(value)}' for key, value in document.to_dict().items()]
    return f"{indent}{{\n" + ",\n".join(items) + f"\n{indent}}}"


def serialize_documents(documents: List[ConeDocument]) -> str:
    """JSON text for one document, or an array for several; vectors stay on one line."""
    if len(documents) == 1:
        return _dump_document(documents[0]) + "\n"
    body = ",\n".join(_dump_document(document, "  ") for document in documents)
    return "[\n" + body + "\n]\n"
