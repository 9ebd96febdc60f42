"""
Pydantic schemas for input files, reports and verdicts
Every machine-readable artifact of the workbench round-trips through these models
"""
from pydantic import BaseModel, Field, field_validator, model_validator, ConfigDict
from typing import Optional, List, Dict, Any
from enum import Enum


class OutputFormat(str, Enum):
    """Report format options"""
    TEXT = "text"
    JSON = "json"


class Command(str, Enum):
    CHECK_MODULAR = "check-modular"
    BUILD_FRAME = "build-frame"
    BUILD_CM = "build-cm"
    CHECK_AXIOMS = "check-axioms"
    E_LATTICE = "e-lattice"
    VERIFY_MADDUX = "verify-maddux"
    EMBED = "embed"
    BUILD_UV = "build-uv"
    EPI_TEST = "epi-test"
    PIPELINE = "pipeline"
    CORPUS = "corpus"


# ---------------------------------------------------------------------------
# Input files
# ---------------------------------------------------------------------------

class LatticeFile(BaseModel):
    """Lattice input file: covers [i, j] mean i is covered by j"""
    name: str = "L"
    n: int = Field(..., ge=1)
    covers: List[List[int]] = Field(default_factory=list)
    labels: Optional[List[str]] = None

    @field_validator("covers")
    @classmethod
    def validate_covers(cls, v):
        for pair in v:
            if len(pair) != 2:
                raise ValueError(f"Cover {pair} must have exactly two entries")
        return v

    @model_validator(mode="after")
    def validate_indices(self):
        for i, j in self.covers:
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValueError(f"Cover [{i}, {j}] out of range for n={self.n}")
        if self.labels is not None and len(self.labels) != self.n:
            raise ValueError("labels must list one name per element")
        return self

    model_config = ConfigDict(json_schema_extra={
        "example": {"name": "M3", "n": 5, "covers": [[0, 1], [0, 2], [0, 3], [1, 4], [2, 4], [3, 4]]}
    })


class FrameFile(BaseModel):
    """Ternary frame file"""
    name: str = "F"
    n: int = Field(..., ge=1)
    zero: int = 0
    triples: List[List[int]] = Field(default_factory=list)

    @model_validator(mode="after")
    def validate_triples(self):
        if not 0 <= self.zero < self.n:
            raise ValueError(f"zero={self.zero} out of range")
        for t in self.triples:
            if len(t) != 3 or not all(0 <= v < self.n for v in t):
                raise ValueError(f"Triple {t} malformed or out of range")
        return self


class AlgebraDump(BaseModel):
    """Atom structure of a finite atomic relation algebra"""
    name: str = "A"
    atoms: int = Field(..., ge=1)
    identity: List[int]
    fusion: List[List[List[int]]]
    converse: Optional[List[int]] = None

    @model_validator(mode="after")
    def validate_shape(self):
        m = self.atoms
        if len(self.fusion) != m or any(len(row) != m for row in self.fusion):
            raise ValueError(f"fusion must be a {m}x{m} table of atom lists")
        cells = [a for row in self.fusion for cell in row for a in cell]
        for a in cells + self.identity + (self.converse or []):
            if not 0 <= a < m:
                raise ValueError(f"atom index {a} out of range")
        if self.converse is not None and len(self.converse) != m:
            raise ValueError("converse must list one image per atom")
        return self


class LatticeDump(BaseModel):
    """Lattice with explicit tables, self-contained for replay"""
    name: str
    n: int
    join: List[List[int]]
    meet: List[List[int]]
    bottom: int
    top: int
    labels: List[str] = Field(default_factory=list)


# ---------------------------------------------------------------------------
# Axiom reports
# ---------------------------------------------------------------------------

class AxiomVerdict(BaseModel):
    """One axiom: verdict, first counterexample and the checking method"""
    number: int
    name: str
    passed: bool
    method: str
    counterexample: Optional[List[int]] = None


class FrameAxiomReport(BaseModel):
    frame: str
    n: int
    axioms: List[AxiomVerdict]

    @property
    def all_passed(self) -> bool:
        return all(a.passed for a in self.axioms)

    def axiom(self, number: int) -> AxiomVerdict:
        return next(a for a in self.axioms if a.number == number)


class AxiomReport(BaseModel):
    """Relation algebra axioms 1-10 plus dense / symmetric / abelian flags"""
    algebra: str
    atoms: int
    element_level_gate: int
    axioms: List[AxiomVerdict]
    dense: bool
    symmetric: bool
    abelian: bool
    frame_checked: bool = True

    @property
    def all_passed(self) -> bool:
        return all(a.passed for a in self.axioms)

    def axiom(self, number: int) -> AxiomVerdict:
        return next(a for a in self.axioms if a.number == number)


class AtomMapReport(BaseModel):
    """Verdicts for the three atom-extension conditions"""
    condition_1: bool
    condition_2: bool
    condition_3_left_to_right: bool
    condition_3_right_to_left: bool
    failures: List[str] = Field(default_factory=list)

    @property
    def condition_3(self) -> bool:
        return self.condition_3_left_to_right and self.condition_3_right_to_left

    @property
    def all_passed(self) -> bool:
        return self.condition_1 and self.condition_2 and self.condition_3


class EmbeddingReport(BaseModel):
    """Embedding of Cm(K) into Cm(L), self-contained for replay"""
    lattice: LatticeDump
    sublattice: List[int]
    atom_images: List[int]
    min_cover: List[int]
    conditions: AtomMapReport
    extension_method: str
    injective: bool
    commutes: bool
    proof_identity_instances: int
    perturbations_checked: int = 0


# ---------------------------------------------------------------------------
# Epimorphism verdicts
# ---------------------------------------------------------------------------

class StructureKind(str, Enum):
    LATTICE = "lattice"
    RELATION_ALGEBRA = "relation_algebra"


class EpiOutcome(str, Enum):
    NOT_EPIC = "NotEpic"
    EPIC_RELATIVE = "EpicRelativeToTargets"


class EpiWitness(BaseModel):
    """
    Two homomorphisms agreeing on the subobject but not everywhere
    f[i] and g[i] are the images of domain[i].
    """
    target: str
    domain: List[int]
    subobject: List[int]
    f: List[int]
    g: List[int]
    source_lattice: Optional[LatticeDump] = None
    target_lattice: Optional[LatticeDump] = None
    source_algebra: Optional[AlgebraDump] = None
    target_algebra: Optional[AlgebraDump] = None


class TargetCertificate(BaseModel):
    target: str
    hom_count: int
    pairs_examined: int


class EpiCertificate(BaseModel):
    targets_examined: List[TargetCertificate] = Field(default_factory=list)
    relative: bool = True
    note: str = ""


class EpiVerdict(BaseModel):
    kind: StructureKind
    outcome: EpiOutcome
    witness: Optional[EpiWitness] = None
    certificate: EpiCertificate

    @property
    def is_epic(self) -> bool:
        return self.outcome == EpiOutcome.EPIC_RELATIVE


# ---------------------------------------------------------------------------
# Pipeline, corpus and run configuration
# ---------------------------------------------------------------------------

class StageResult(BaseModel):
    stage: str
    theorem: str
    passed: bool
    lines: List[str] = Field(default_factory=list)


class PipelineReport(BaseModel):
    lattice: str
    sublattice: List[int]
    stages: List[StageResult] = Field(default_factory=list)
    aborted_at: Optional[str] = None
    conclusion: str = ""

    @property
    def succeeded(self) -> bool:
        return self.aborted_at is None


class CellStatus(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    SKIP = "skip"
    ERROR = "error"


class CorpusRow(BaseModel):
    lattice: str
    path: str
    size: Optional[int] = None
    cells: Dict[str, CellStatus] = Field(default_factory=dict)
    error: Optional[str] = None


class CorpusSummary(BaseModel):
    directory: str
    rows: List[CorpusRow] = Field(default_factory=list)
    processing_time: Optional[float] = None
    invariant_failures: int = 0

    model_config = ConfigDict(json_schema_extra={
        "example": {
            "directory": "./data/corpus",
            "rows": [{"lattice": "N5", "path": "n5.json", "size": 5,
                      "cells": {"modular": "fail", "pasch": "fail", "pasch_iff_modular": "pass"}}],
            "invariant_failures": 0,
        }
    })


class InputKind(str, Enum):
    LATTICE = "lattice"
    FRAME = "frame"
    ALGEBRA = "algebra"


class RunConfig(BaseModel):
    """Resolved command-line configuration"""
    command: Command
    input_paths: List[str] = Field(default_factory=list)
    max_n: int = Field(16, ge=1)
    max_exhaustive: int = Field(7, ge=1)
    output_format: OutputFormat = OutputFormat.TEXT
    dot_path: Optional[str] = None
    targets_path: Optional[str] = None
    output_path: Optional[str] = None
    sublattice: Optional[List[int]] = None
    run_epi: bool = False
    waive_frame_check: bool = False
    perturb: bool = False
    input_kind: InputKind = InputKind.LATTICE

    @field_validator("sublattice", mode="before")
    @classmethod
    def parse_sublattice(cls, v: Any):
        """Accept '0,2,3' as well as a list"""
        if isinstance(v, str):
            parts = [p.strip() for p in v.split(",") if p.strip()]
            if not parts:
                raise ValueError("sublattice must list at least one element")
            return [int(p) for p in parts]
        return v


# ---------------------------------------------------------------------------
# Command reports
# ---------------------------------------------------------------------------

class ModularityReport(BaseModel):
    lattice: str
    n: int
    modular: bool
    witness: Optional[List[int]] = None


class MadduxReport(BaseModel):
    """Ideals of L, identical as sets to the reflexive equivalence elements of Cm(L)"""
    lattice: str
    holds: bool
    ideals: List[List[int]]


class SubalgebraReport(BaseModel):
    lattice: str
    sublattice: List[int]
    u_atoms: List[List[int]]
    v_atoms: List[List[int]]
    u_size: int
    v_size: int

    @property
    def proper(self) -> bool:
        return self.u_size < self.v_size


class EpiTestReport(BaseModel):
    """Lattice-level and relation-algebra-level verdicts for one (L, K)"""
    lattice: str
    sublattice: List[int]
    lattice_verdict: EpiVerdict
    algebra_verdict: EpiVerdict
