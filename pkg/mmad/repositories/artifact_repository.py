"""
Artifact repository module for run outputs.
This provides an abstraction layer over the output directory: atomic writes,
a checksum inventory and rollback of a failed run.
"""
import hashlib
import logging
import os
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, List, Union

from mmad.core.errors import MMADError
from mmad.schemas.schemas import OutputRecord

logger = logging.getLogger(__name__)


class ArtifactRepository:
    """
    Writes files below ``root``; every write is recorded with its checksum.
    """
    def __init__(self, root: Union[str, Path]):
        self.root = Path(root)
        self.records: List[OutputRecord] = []

    def path_for(self, name: str) -> Path:
        return self.root / name

    def write_bytes(self, name: str, content: bytes) -> OutputRecord:
        """
        Write to a temporary sibling and rename it into place.
        """
        path = self.path_for(name)
        temporary = path.with_name(f".{path.name}.tmp")
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            temporary.write_bytes(content)
            os.replace(temporary, path)
        except OSError as e:
            logger.error(f"Error writing {path}: {str(e)}")
            if temporary.exists():
                temporary.unlink()
            raise MMADError(f"cannot write {path}: {e.strerror}") from e

        record = OutputRecord(path=str(path), sha256=hashlib.sha256(content).hexdigest(), bytes=len(content))
        self.records = [r for r in self.records if r.path != record.path] + [record]
        logger.debug(f"Wrote {path} ({len(content)} bytes)")
        return record

    def write_text(self, name: str, content: str) -> OutputRecord:
        return self.write_bytes(name, content.encode("utf-8"))

    def delete(self, path: Union[str, Path]) -> bool:
        """
        Delete a written file and drop it from the inventory.
        """
        path = Path(path)
        self.records = [r for r in self.records if Path(r.path) != path]
        if path.exists():
            path.unlink()
            return True
        return False

    @contextmanager
    def transaction(self) -> Iterator["ArtifactRepository"]:
        """
        Remove every file written inside the block if the block raises.
        """
        written_before = len(self.records)
        try:
            yield self
        except Exception as e:
            partial = self.records[written_before:]
            logger.error(f"Run failed, removing {len(partial)} partial outputs: {str(e)}")
            for record in partial:
                self.delete(record.path)
            raise
