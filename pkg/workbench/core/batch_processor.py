"""
Corpus batch processor
Runs every invariant suite on every lattice file of a corpus directory.
Files are processed in batches; files within a batch run in worker threads,
the suites for one file run sequentially.
"""
import asyncio
from datetime import datetime
from pathlib import Path
from typing import Callable, Dict, List, Optional
import logging

from workbench.core.boolean_monoid import (
    check_ra_axioms, e_lattice, fuse_direct, lattice_complex_algebra, verify_maddux,
)
from workbench.core.exceptions import WorkbenchException
from workbench.core.kr_frame import check_frame_axioms, check_pasch, frame_from_lattice
from workbench.core.lattice_core import (
    complete_sublattices, is_modular, satisfies_dual_identities,
)
from workbench.core.morphisms import build_UV, embedding_report
from workbench.models.schemas import CellStatus, CorpusRow, CorpusSummary
from workbench.models.structures import Lattice
from workbench.repositories import CorpusRepository
from workbench.utils.config import settings

logger = logging.getLogger(__name__)

# Rows that report a mathematical verdict rather than an invariant
VERDICT_SUITES = ("modular", "pasch")

FUSION_ORACLE_MAX = 4
ALL_SUBLATTICES_MAX = 5


class CorpusRunner:
    """
    Batch runner for the invariant suites
    Features:
    - Processes CORPUS_BATCH_SIZE files per batch
    - Per-file failures become error rows; the run continues
    - Verdict rows (modular, pasch) may fail without counting as failures
    """

    def __init__(
        self,
        repository: Optional[CorpusRepository] = None,
        max_n: Optional[int] = None,
        max_exhaustive: Optional[int] = None,
    ):
        self.repository = repository or CorpusRepository()
        self.batch_size = settings.CORPUS_BATCH_SIZE
        self.max_n = max_n or settings.MAX_N
        self.max_exhaustive = max_exhaustive or settings.MAX_EXHAUSTIVE

    # ------------------------------------------------------------------
    # Suites
    # ------------------------------------------------------------------

    def _suites(self, L: Lattice) -> Dict[str, Callable[[], Optional[bool]]]:
        """Each suite returns True / False, or None when it does not apply"""
        modular, _ = is_modular(L)

        def only_modular(check):
            return (lambda: check()) if modular else (lambda: None)

        def fusion_oracle():
            if L.n > FUSION_ORACLE_MAX:
                return None
            F = frame_from_lattice(L)
            A = lattice_complex_algebra(L)
            return all(A.fuse(x, y) == fuse_direct(F, x, y) for x in range(A.size) for y in range(A.size))

        def ra_axioms():
            report = check_ra_axioms(lattice_complex_algebra(L), self.max_exhaustive, self.max_n)
            return report.all_passed and report.dense and report.symmetric and report.abelian

        def e_lattice_size():
            E, elements = e_lattice(lattice_complex_algebra(L), max_n=self.max_n)
            return len(elements) == L.n

        def sublattices():
            if L.n <= ALL_SUBLATTICES_MAX:
                return complete_sublattices(L)
            return sorted({(1 << L.bottom) | (1 << L.top), L.carrier})

        def embedding():
            for K in sublattices():
                report = embedding_report(L, K, self.max_exhaustive)
                if not (report.conditions.all_passed and report.commutes):
                    return False
            return True

        def properness():
            for K in sublattices():
                U, V = build_UV(L, K)
                if (len(U) < len(V)) != (K != L.carrier):
                    return False
            return True

        return {
            "modular": lambda: modular,
            "pasch": lambda: check_pasch(frame_from_lattice(L)).passed,
            "pasch_iff_modular": lambda: check_pasch(frame_from_lattice(L)).passed == modular,
            "dual_identities": lambda: satisfies_dual_identities(L)[0] == modular,
            "frame_axioms": only_modular(lambda: check_frame_axioms(frame_from_lattice(L)).all_passed),
            "ra_axioms": only_modular(ra_axioms),
            "fusion_oracle": only_modular(fusion_oracle),
            "e_lattice": only_modular(e_lattice_size),
            "maddux": only_modular(lambda: verify_maddux(L)[0]),
            "embedding": only_modular(embedding),
            "properness": only_modular(properness),
        }

    def check_file(self, path: Path) -> CorpusRow:
        """Run all suites on one file; never raises"""
        try:
            L = self.repository.get_by_path(path, self.max_n)
        except WorkbenchException as e:
            logger.error(f"Error loading {path.name}: {str(e)}")
            return CorpusRow(lattice=path.stem, path=str(path), error=str(e))

        row = CorpusRow(lattice=L.name, path=str(path), size=L.n)
        for suite, check in self._suites(L).items():
            try:
                outcome = check()
            except WorkbenchException as e:
                logger.error(f"{L.name}: suite {suite} raised {type(e).__name__}: {str(e)}")
                row.cells[suite] = CellStatus.ERROR
                continue
            if outcome is None:
                row.cells[suite] = CellStatus.SKIP
            else:
                row.cells[suite] = CellStatus.PASS if outcome else CellStatus.FAIL
        logger.debug(f"{L.name}: {dict((k, v.value) for k, v in row.cells.items())}")
        return row

    @staticmethod
    def count_failures(rows: List[CorpusRow]) -> int:
        failures = 0
        for row in rows:
            if row.error:
                failures += 1
                continue
            failures += sum(
                1 for suite, status in row.cells.items()
                if suite not in VERDICT_SUITES and status in (CellStatus.FAIL, CellStatus.ERROR)
            )
        return failures

    # ------------------------------------------------------------------
    # Batches
    # ------------------------------------------------------------------

    async def process_batch(self, paths: List[Path]) -> List[CorpusRow]:
        return list(await asyncio.gather(*(asyncio.to_thread(self.check_file, p) for p in paths)))

    async def run(self) -> CorpusSummary:
        start_time = datetime.now()
        paths = self.repository.list_files()
        logger.info(f"Starting corpus run on {len(paths)} file(s) in {self.repository.directory}")

        rows: List[CorpusRow] = []
        for i in range(0, len(paths), self.batch_size):
            batch = paths[i:i + self.batch_size]
            logger.info(f"Batch {i // self.batch_size + 1}: {', '.join(p.name for p in batch)}")
            rows.extend(await self.process_batch(batch))

        summary = CorpusSummary(
            directory=str(self.repository.directory),
            rows=rows,
            processing_time=(datetime.now() - start_time).total_seconds(),
            invariant_failures=self.count_failures(rows),
        )

        logger.info(f"{'=' * 60}")
        logger.info("CORPUS RUN COMPLETE")
        logger.info(f"Files: {len(rows)}")
        logger.info(f"Invariant failures: {summary.invariant_failures}")
        logger.info(f"Processing time: {summary.processing_time:.2f}s")
        logger.info(f"{'=' * 60}")
        return summary
