"""Catalog of named cones."""

import logging
from pathlib import Path
from typing import Dict, List, Optional

from .documents import ConeDocument, parse_documents, serialize_documents
from .errors import DocumentError

logger = logging.getLogger(__name__)


def _orthant(rank: int) -> ConeDocument:
    normals = [[int(i == j) for j in range(rank)] for i in range(rank)]
    return ConeDocument(rank=rank, normals=normals, name=f"orthant{rank}")


def _full_space(rank: int) -> ConeDocument:
    return ConeDocument(rank=rank, normals=[], name=f"full{rank}")


def _builtin_entries() -> List[ConeDocument]:
    entries = [_orthant(rank) for rank in range(2, 7)]
    entries += [
        # Co-sphere bundle of S^2, i.e. RP^3
        ConeDocument(rank=2, rays=[[0, 1], [2, -1]], name="wedge-rp3"),
        ConeDocument(rank=2, rays=[[1, 0], [1, 3]], name="wedge-l31"),
        # Edge weights mu and -mu
        ConeDocument(rank=2, normals=[[1, 0]], name="s2xs1"),
        ConeDocument(rank=3, normals=[[1, 0, 0], [-1, 0, 2]], name="nongood-pair"),
        ConeDocument(rank=3, rays=[[1, 0, 1], [-1, 0, 1], [0, 1, 1], [0, -1, 1]], name="cone-over-square"),
    ]
    entries += [_full_space(rank) for rank in range(2, 5)]
    for entry in entries:
        entry.source = "<builtin>"
    return entries


BUILTIN_CATALOG: Dict[str, ConeDocument] = {entry.name: entry for entry in _builtin_entries()}


class ConeCatalog:
    """Built-in named cones, optionally overridden by a directory of documents."""

    def __init__(self, catalog_dir: Optional[str] = None):
        """Initialize catalog.

        Args:
            catalog_dir: Directory of *.json cone documents; entries there
                replace built-in entries of the same name
        """
        self.catalog_dir = Path(catalog_dir) if catalog_dir else None
        self._entries: Dict[str, ConeDocument] = dict(BUILTIN_CATALOG)
        if self.catalog_dir is not None:
            self._entries.update(self._load_directory())

    def _load_directory(self) -> Dict[str, ConeDocument]:
        """Load every document found in the catalog directory.

        Unnamed documents take the file stem as their name. Unreadable files
        are logged and skipped.

        Returns:
            Mapping of entry name to document
        """
        loaded: Dict[str, ConeDocument] = {}
        if not self.catalog_dir.is_dir():
            logger.warning(f"Catalog directory not found: {self.catalog_dir}")
            return loaded

        for path in sorted(self.catalog_dir.glob("*.json")):
            try:
                documents = parse_documents(path.read_text(encoding="utf-8"), source=str(path))
            except (OSError, DocumentError) as e:
                logger.error(f"Skipping catalog file {path}: {e}")
                continue
            for document in documents:
                if document.name is None:
                    document.name = path.stem
                if document.name in loaded:
                    logger.warning(f"Duplicate catalog entry '{document.name}' in {path}, keeping the first")
                    continue
                loaded[document.name] = document

        overridden = sorted(set(loaded) & set(BUILTIN_CATALOG))
        logger.info(f"Loaded {len(loaded)} catalog entries from {self.catalog_dir}")
        if overridden:
            logger.info(f"Catalog directory overrides built-in entries: {', '.join(overridden)}")
        return loaded

    def names(self) -> List[str]:
        return sorted(self._entries)

    def entries(self) -> List[ConeDocument]:
        return [self._entries[name] for name in self.names()]

    def get(self, name: str) -> ConeDocument:
        """Look up an entry by name.

        Raises:
            DocumentError: If there is no such entry
        """
        if name not in self._entries:
            raise DocumentError(f"unknown catalog entry '{name}'", source="catalog")
        return self._entries[name]

    def export(self, target_dir: str) -> List[Path]:
        """Write every entry to `<target_dir>/<name>.json`.

        Returns:
            Paths written, in name order
        """
        target = Path(target_dir)
        target.mkdir(parents=True, exist_ok=True)
        written = []
        for document in self.entries():
            path = target / f"{document.name}.json"
            path.write_text(serialize_documents([document]), encoding="utf-8")
            written.append(path)
        logger.info(f"Exported {len(written)} catalog entries to {target}")
        return written
