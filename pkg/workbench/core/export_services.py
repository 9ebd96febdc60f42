"""
Export services for text, JSON and DOT reports
Renders verdicts and reports for the terminal or writes them under EXPORT_DIR
"""
from datetime import datetime
from pathlib import Path
from typing import Dict, List, Optional, Sequence
import logging
import os

import pandas as pd
from pydantic import BaseModel

from workbench.core.lattice_core import bitfmt, cover_pairs
from workbench.models.schemas import (
    AxiomReport, CorpusSummary, EmbeddingReport, EpiVerdict, FrameAxiomReport, PipelineReport,
)
from workbench.models.structures import BooleanMonoid, Lattice, Subalgebra
from workbench.utils.bitset import ElemSet, fmt
from workbench.utils.config import settings

logger = logging.getLogger(__name__)


class ExportService:
    """Service for rendering workbench reports"""

    def __init__(self, export_dir: Optional[str] = None):
        self.export_dir = export_dir or settings.EXPORT_DIR

    def generate_filename(self, stem: str, extension: str) -> str:
        """Generate unique filename for export"""
        Path(self.export_dir).mkdir(parents=True, exist_ok=True)
        timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
        return os.path.join(self.export_dir, f"{stem}_{timestamp}.{extension}")

    def write(self, content: str, output_path: Optional[str] = None, stem: str = "report",
              extension: str = "txt") -> str:
        """Write content to output_path, or to a timestamped file under EXPORT_DIR"""
        path = output_path or self.generate_filename(stem, extension)
        try:
            Path(path).parent.mkdir(parents=True, exist_ok=True)
            Path(path).write_text(content if content.endswith("\n") else content + "\n")
        except OSError as e:
            logger.error(f"Error writing report {path}: {str(e)}")
            raise
        logger.info(f"Report written: {path}")
        return path

    @staticmethod
    def to_json(model: BaseModel) -> str:
        return model.model_dump_json(indent=2)

    # ------------------------------------------------------------------
    # Lattices and frames
    # ------------------------------------------------------------------

    def render_lattice(self, L: Lattice) -> List[str]:
        covers = ", ".join(f"{L.labels[a]}<{L.labels[b]}" for a, b in cover_pairs(L))
        return [
            f"Lattice {L.name}: {L.n} elements",
            f"  bottom={L.labels[L.bottom]} top={L.labels[L.top]}",
            f"  covers: {covers or '(none)'}",
        ]

    def render_modularity(self, L: Lattice, modular: bool, witness) -> str:
        lines = self.render_lattice(L)
        if modular:
            lines.append("Modular law x <= z => x v (y ^ z) = (x v y) ^ z: holds")
        else:
            x, y, z = witness
            lines.append("Modular law x <= z => x v (y ^ z) = (x v y) ^ z: FAILS")
            lines.append(
                f"  witness x={L.labels[x]}, y={L.labels[y]}, z={L.labels[z]}: "
                f"x v (y ^ z) = {L.labels[L.j(x, L.m(y, z))]}, (x v y) ^ z = {L.labels[L.m(L.j(x, y), z)]}"
            )
        return "\n".join(lines)

    def render_frame_report(self, report: FrameAxiomReport, triples: int = 0) -> str:
        lines = [f"Frame {report.frame}: {report.n} points, {triples} triples"]
        for axiom in report.axioms:
            status = "pass" if axiom.passed else f"FAIL at {axiom.counterexample}"
            lines.append(f"  axiom {axiom.number} ({axiom.name}): {status}")
        lines.append(f"KR frame: {'yes' if report.all_passed else 'no'}")
        return "\n".join(lines)

    def hasse_dot(self, L: Lattice) -> str:
        """Hasse diagram as DOT, edges drawn upward"""
        lines = [f'digraph "{L.name}" {{', "  rankdir=BT;", "  node [shape=circle];"]
        for a in L.elements:
            lines.append(f'  n{a} [label="{L.labels[a]}"];')
        for a, b in cover_pairs(L):
            lines.append(f"  n{a} -> n{b};")
        lines.append("}")
        return "\n".join(lines)

    # ------------------------------------------------------------------
    # Algebras
    # ------------------------------------------------------------------

    def render_algebra(self, A: BooleanMonoid) -> str:
        lines = [
            f"Algebra {A.name}: {A.atoms} atoms, {A.size} elements",
            f"  t = {fmt(A.identity, A.labels)}",
        ]
        if not A.frame_checked:
            lines.append("  WARNING: frame axioms failed (check waived)")
        lines.append("  atom fusion:")
        for a in range(A.atoms):
            cells = "  ".join(fmt(A.fusion_atoms[a][b], A.labels) for b in range(A.atoms))
            lines.append(f"    {A.labels[a]}: {cells}")
        return "\n".join(lines)

    def render_axiom_report(self, report: AxiomReport) -> str:
        lines = [f"Relation algebra axioms for {report.algebra} ({report.atoms} atoms, "
                 f"element-level gate {report.element_level_gate})"]
        for axiom in report.axioms:
            status = "pass" if axiom.passed else f"FAIL at {axiom.counterexample}"
            lines.append(f"  {axiom.number:>2}. {axiom.name:<34} {status:<10} [{axiom.method}]")
        lines.append(f"  dense: {report.dense}  symmetric: {report.symmetric}  abelian: {report.abelian}")
        if not report.frame_checked:
            lines.append("  built from a frame that failed its axioms (waived)")
        boolean_monoid = report.all_passed and report.dense and report.symmetric
        lines.append(f"Boolean monoid: {'yes' if boolean_monoid else 'no'}")
        return "\n".join(lines)

    def render_e_lattice(self, A: BooleanMonoid, E: Lattice, elements: Sequence[ElemSet]) -> str:
        lines = [f"E({A.name}): {len(elements)} reflexive equivalence elements"]
        for x in elements:
            lines.append(f"  {fmt(x, A.labels)}")
        lines.extend(self.render_lattice(E)[1:])
        return "\n".join(lines)

    def render_maddux(self, L: Lattice, principal: Dict[int, ElemSet]) -> str:
        lines = [f"E(Cm {L.name}) = Id {L.name}: {len(principal)} ideals, identical as sets"]
        for a, ideal in principal.items():
            lines.append(f"  ({L.labels[a]}] = {bitfmt(L, ideal)}")
        lines.append("  J o K = J v K and J n K = J ^ K on all pairs")
        return "\n".join(lines)

    # ------------------------------------------------------------------
    # Morphisms
    # ------------------------------------------------------------------

    def render_embedding(self, L: Lattice, report: EmbeddingReport) -> str:
        K = report.sublattice
        lines = [f"Embedding Cm(K) -> Cm({L.name}) for K = {{{','.join(L.labels[k] for k in K)}}}"]
        for a, image in zip(K, report.atom_images):
            lines.append(f"  phi({{{L.labels[a]}}}) = {bitfmt(L, image)}")
        cond = report.conditions
        lines.append(f"  condition 1 (partition of 1): {cond.condition_1}")
        lines.append(f"  condition 2 (identity): {cond.condition_2}")
        lines.append(f"  condition 3 (fusion image) left-to-right: {cond.condition_3_left_to_right}, "
                     f"right-to-left: {cond.condition_3_right_to_left}")
        lines.append(f"  extension: injective={report.injective} [{report.extension_method}]")
        lines.append(f"  phi o I_K = I_L: {report.commutes}")
        lines.append(f"  proof identities checked: {report.proof_identity_instances} instance(s)")
        if report.perturbations_checked:
            lines.append(f"  uniqueness: {report.perturbations_checked} perturbation(s) all rejected")
        return "\n".join(lines)

    def render_uv(self, L: Lattice, K: ElemSet, U: Subalgebra, V: Subalgebra) -> str:
        A = U.ambient
        lines = [
            f"Subalgebras of {A.name} for K = {bitfmt(L, K)}",
            f"  U: {len(U)} elements, atoms {', '.join(fmt(a, A.labels) for a in U.atoms)}",
            f"  V: {len(V)} elements, atoms {', '.join(fmt(a, A.labels) for a in V.atoms)}",
            f"  U <= V: {U.issubset(V)}",
        ]
        lines.append("U ⊊ V: yes" if len(U) < len(V) else "U = V")
        return "\n".join(lines)

    def render_epi(self, verdict: EpiVerdict) -> str:
        lines = [f"Bounded epi test ({verdict.kind.value}): {verdict.outcome.value}"]
        for cert in verdict.certificate.targets_examined:
            lines.append(f"  target {cert.target}: {cert.hom_count} hom(s), {cert.pairs_examined} pair(s)")
        if verdict.witness is not None:
            w = verdict.witness
            lines.append(f"  witness into {w.target}:")
            lines.append(f"    f = {w.f}")
            lines.append(f"    g = {w.g}")
        if verdict.certificate.note:
            lines.append(f"  note: {verdict.certificate.note}")
        return "\n".join(lines)

    # ------------------------------------------------------------------
    # Pipeline and corpus
    # ------------------------------------------------------------------

    def render_pipeline(self, report: PipelineReport) -> str:
        lines = [f"=== Pipeline for {report.lattice}, K = {report.sublattice} ==="]
        for stage in report.stages:
            lines.append("")
            lines.append(f"[{stage.stage}] {stage.theorem}: {'ok' if stage.passed else 'FAILED'}")
            lines.extend(f"  {line}" for line in stage.lines)
        lines.append("")
        if report.aborted_at:
            lines.append(f"Aborted at stage: {report.aborted_at}")
        if report.conclusion:
            lines.append(report.conclusion)
        return "\n".join(lines)

    def corpus_frame(self, summary: CorpusSummary) -> pd.DataFrame:
        records = []
        for row in summary.rows:
            record = {"lattice": row.lattice, "size": row.size}
            record.update({suite: status.value for suite, status in row.cells.items()})
            if row.error:
                record["error"] = row.error
            records.append(record)
        return pd.DataFrame.from_records(records)

    def render_corpus(self, summary: CorpusSummary) -> str:
        df = self.corpus_frame(summary)
        if df.empty:
            table = "(no lattice files)"
        else:
            table = df.fillna("").to_string(index=False)
        footer = f"{len(summary.rows)} file(s), {summary.invariant_failures} invariant failure(s)"
        if summary.processing_time is not None:
            footer += f", {summary.processing_time:.2f}s"
        return f"Corpus {summary.directory}\n{table}\n{footer}"


# Create export service instance
export_service = ExportService()
