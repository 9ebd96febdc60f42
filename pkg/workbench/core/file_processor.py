"""
File processor for lattice, frame, algebra and target files
Handles reading, schema validation and conversion into domain structures
"""
from pathlib import Path
from typing import List, Optional, Union
import json
import logging

from pydantic import BaseModel, TypeAdapter, ValidationError

from workbench.core.boolean_monoid import algebra_from_dump
from workbench.core.exceptions import WorkbenchException
from workbench.core.kr_frame import frame_from_file
from workbench.core.lattice_core import validate_lattice
from workbench.models.schemas import AlgebraDump, FrameFile, LatticeFile
from workbench.models.structures import BooleanMonoid, Lattice, TernaryFrame
from workbench.utils.config import settings

logger = logging.getLogger(__name__)


class FileProcessorException(WorkbenchException):
    """Custom exception for file processing errors"""
    pass


class TargetsFile(BaseModel):
    """Explicit epi target class: inline lattices and/or paths relative to the file"""
    lattices: List[LatticeFile] = []
    paths: List[str] = []


class FileProcessor:
    """
    Service for loading workbench input files
    Every file is JSON validated against a pydantic schema before use.
    """

    def __init__(self):
        self.allowed_extensions = [".json"]

    def validate_file(self, file_path: Union[str, Path]) -> Path:
        """Validate that the path exists and has a supported extension"""
        path = Path(file_path)
        if not path.is_file():
            raise FileProcessorException(f"File not found: {path}")
        if path.suffix.lower() not in self.allowed_extensions:
            raise FileProcessorException(
                f"Invalid file type {path.suffix!r}. Allowed: {', '.join(self.allowed_extensions)}"
            )
        return path

    def _read_model(self, file_path: Union[str, Path], model):
        path = self.validate_file(file_path)
        try:
            return TypeAdapter(model).validate_json(path.read_bytes())
        except ValidationError as e:
            logger.error(f"Schema error in {path}: {e.error_count()} problem(s)")
            raise FileProcessorException(f"Invalid {getattr(model, '__name__', 'input')} in {path}: {e}")
        except (OSError, json.JSONDecodeError) as e:
            logger.error(f"Error reading {path}: {str(e)}")
            raise FileProcessorException(f"Failed to read {path}: {str(e)}")

    def read_lattice_file(self, file_path: Union[str, Path]) -> LatticeFile:
        return self._read_model(file_path, LatticeFile)

    def build_lattice(self, data: LatticeFile, max_n: Optional[int] = None) -> Lattice:
        return validate_lattice(
            data.covers,
            n=data.n,
            name=data.name,
            labels=data.labels or (),
            max_n=max_n or settings.MAX_N,
        )

    def load_lattice(self, file_path: Union[str, Path], max_n: Optional[int] = None) -> Lattice:
        """
        Read and validate a lattice file

        Raises:
            FileProcessorException: unreadable or schema-invalid file
            NotALattice, NoBounds, CycleInCovers, TooLarge: invalid structure
        """
        data = self.read_lattice_file(file_path)
        lattice = self.build_lattice(data, max_n)
        logger.info(f"Loaded lattice {lattice.name} ({lattice.n} elements) from {file_path}")
        return lattice

    def load_frame(self, file_path: Union[str, Path]) -> TernaryFrame:
        data = self._read_model(file_path, FrameFile)
        frame = frame_from_file(data)
        logger.info(f"Loaded frame {frame.name} ({frame.n} points, {len(data.triples)} triples)")
        return frame

    def load_algebra(self, file_path: Union[str, Path]) -> BooleanMonoid:
        data = self._read_model(file_path, AlgebraDump)
        return algebra_from_dump(data)

    def load_targets(self, file_path: Union[str, Path], max_n: Optional[int] = None) -> List[Lattice]:
        """
        Read a target class: {"lattices": [...], "paths": [...]} or a bare list of lattices
        Paths are resolved against the directory of the targets file.
        """
        path = self.validate_file(file_path)
        try:
            raw = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError) as e:
            logger.error(f"Error reading targets {path}: {str(e)}")
            raise FileProcessorException(f"Failed to read {path}: {str(e)}")
        if isinstance(raw, list):
            raw = {"lattices": raw}
        try:
            targets = TargetsFile.model_validate(raw)
        except ValidationError as e:
            raise FileProcessorException(f"Invalid targets file {path}: {e}")

        lattices = [self.build_lattice(data, max_n) for data in targets.lattices]
        for ref in targets.paths:
            lattices.append(self.load_lattice(path.parent / ref, max_n))
        logger.info(f"Loaded {len(lattices)} target lattice(s) from {path}")
        return lattices


# Create file processor instance
file_processor = FileProcessor()
