"""
Repository for the lattice corpus directory
Separates file access from the invariant suites that run on each lattice
"""
from pathlib import Path
from typing import List, Optional, Tuple, Union
import logging

from workbench.core.exceptions import WorkbenchException
from workbench.core.file_processor import FileProcessor, file_processor
from workbench.models.structures import Lattice
from workbench.utils.config import settings

logger = logging.getLogger(__name__)


class CorpusRepository:
    """
    Repository for lattice files in a corpus directory
    Files are visited in sorted name order so runs are reproducible
    """

    def __init__(self, directory: Union[str, Path, None] = None, processor: Optional[FileProcessor] = None):
        self.directory = Path(directory or settings.CORPUS_DIR)
        self.processor = processor or file_processor

    def list_files(self) -> List[Path]:
        """Lattice files in the directory; a missing directory is an error"""
        if not self.directory.is_dir():
            raise WorkbenchException(f"Corpus directory not found: {self.directory}")
        return sorted(p for p in self.directory.iterdir() if p.is_file() and p.suffix.lower() == ".json")

    def get_by_path(self, path: Union[str, Path], max_n: Optional[int] = None) -> Lattice:
        return self.processor.load_lattice(path, max_n)

    def get_all(self, max_n: Optional[int] = None) -> List[Tuple[Path, Lattice]]:
        """Every loadable lattice; unreadable files are logged and skipped"""
        loaded = []
        for path in self.list_files():
            try:
                loaded.append((path, self.get_by_path(path, max_n)))
            except WorkbenchException as e:
                logger.warning(f"Skipping {path.name}: {str(e)}")
        return loaded

    def count_all(self) -> int:
        return len(self.list_files())
