"""
Staged theorem pipeline
validate -> modular -> frame -> cm -> axioms -> E/Id -> phi -> commutation
-> U, V -> properness -> (optional) bounded epi test
The first failing stage aborts the run and is named in the report.
"""
from typing import Callable, List, Optional, Sequence
import logging

from workbench.core.boolean_monoid import check_ra_axioms, lattice_complex_algebra, verify_maddux
from workbench.core.exceptions import WorkbenchException
from workbench.core.kr_frame import check_frame_axioms, frame_from_lattice
from workbench.core.lattice_core import bitfmt, cover_pairs, is_epic_sublattice_bounded, is_modular
from workbench.core.morphisms import (
    build_UV, check_atom_map_conditions, complex_algebra_targets, extend_atom_map, image_contains, is_epic_subalgebra_bounded,
    phi_construction, principal_ideals_outside_image, verify_embedding_commutes, verify_proof_identities,
)
from workbench.models.schemas import PipelineReport, StageResult
from workbench.models.structures import Lattice
from workbench.utils.bitset import ElemSet, fmt, to_indices
from workbench.utils.config import settings

logger = logging.getLogger(__name__)


class StageFailed(WorkbenchException):
    """A stage check returned a negative verdict"""
    pass


class TheoremPipeline:
    """Runs the construction chain on one (L, K) pair"""

    def __init__(self, max_exhaustive: Optional[int] = None):
        self.max_exhaustive = max_exhaustive or settings.MAX_EXHAUSTIVE

    def _stage(self, report: PipelineReport, stage: str, theorem: str, body: Callable[[List[str]], None]) -> bool:
        lines: List[str] = []
        try:
            body(lines)
        except WorkbenchException as e:
            logger.error(f"Stage {stage} failed: {str(e)}")
            lines.append(str(e))
            report.stages.append(StageResult(stage=stage, theorem=theorem, passed=False, lines=lines))
            report.aborted_at = stage
            return False
        report.stages.append(StageResult(stage=stage, theorem=theorem, passed=True, lines=lines))
        logger.info(f"Stage {stage} passed")
        return True

    def run(
        self,
        L: Lattice,
        K: ElemSet,
        run_epi: bool = False,
        lattice_targets: Sequence[Lattice] = (),
    ) -> PipelineReport:
        report = PipelineReport(lattice=L.name, sublattice=to_indices(K))
        state = {}

        def validate(lines):
            lines.append(f"{L.n} elements, bottom={L.labels[L.bottom]}, top={L.labels[L.top]}")
            lines.append(f"{len(cover_pairs(L))} cover pair(s)")

        def modular(lines):
            ok, witness = is_modular(L)
            state["modular"] = ok
            if ok:
                lines.append("modular law holds on all triples")
            else:
                x, y, z = witness
                lines.append(f"modular law fails at x={L.labels[x]}, y={L.labels[y]}, z={L.labels[z]}")

        def frame(lines):
            F = frame_from_lattice(L)
            result = check_frame_axioms(F)
            state["frame"] = F
            lines.append(f"{len(F.triples())} triples")
            for axiom in result.axioms:
                lines.append(f"axiom {axiom.number} ({axiom.name}): {'pass' if axiom.passed else 'FAIL'}")
            if not result.all_passed:
                pasch = result.axiom(4)
                raise StageFailed(
                    f"Pasch's Postulate fails at {pasch.counterexample}: the frame of a non-modular lattice is not KR"
                )

        def cm(lines):
            A = lattice_complex_algebra(L)
            state["algebra"] = A
            lines.append(f"{A.name}: {A.atoms} atoms, {A.size} elements, t = {fmt(A.identity, A.labels)}")

        def axioms(lines):
            result = check_ra_axioms(state["algebra"], max_exhaustive=self.max_exhaustive)
            for axiom in result.axioms:
                lines.append(f"axiom {axiom.number}: {'pass' if axiom.passed else 'FAIL'} [{axiom.method}]")
            lines.append(f"dense={result.dense} symmetric={result.symmetric} abelian={result.abelian}")
            if not (result.all_passed and result.dense and result.symmetric):
                raise StageFailed("complex algebra is not a Boolean monoid")

        def maddux(lines):
            _, identification = verify_maddux(L)
            lines.append(f"E(Cm {L.name}) = Id {L.name}: {len(identification.principal)} ideals")

        def phi(lines):
            atom_map = phi_construction(L, K)
            conditions = check_atom_map_conditions(atom_map)
            extension = extend_atom_map(atom_map, self.max_exhaustive)
            state["phi"], state["phi_ext"] = atom_map, extension
            for a, image in zip(atom_map.source_elements, atom_map.images):
                lines.append(f"phi({{{L.labels[a]}}}) = {bitfmt(L, image)}")
            lines.append(f"conditions 1-3: {conditions.all_passed}")
            lines.append(f"extension: {extension.verification}")

        def commutation(lines):
            verify_embedding_commutes(state["phi_ext"], K, L)
            instances = verify_proof_identities(L, state["phi"])
            lines.append("phi((a]_K) = (a]_L for every a in K")
            lines.append(f"proof identities: {instances} instance(s)")

        def uv(lines):
            U, V = build_UV(L, K)
            state["U"], state["V"] = U, V
            lines.append(f"|U| = {len(U)}, |V| = {len(V)}, U <= V")

        def properness(lines):
            U, V = state["U"], state["V"]
            if not image_contains(state["phi_ext"], U.elements):
                raise StageFailed("U is not inside the image of the embedding")
            outside = principal_ideals_outside_image(L, K, state["phi_ext"])
            if outside:
                lines.append(f"principal ideals outside the image: {', '.join(L.labels[x] for x in outside)}")
            lines.append(f"U is {'a proper' if len(U) < len(V) else 'not a proper'} subalgebra of V")

        def epi(lines):
            targets = list(lattice_targets) or [L]
            lattice_verdict = is_epic_sublattice_bounded(L, K, targets)
            lines.append(f"lattice level: {lattice_verdict.outcome.value} "
                         f"({len(lattice_verdict.certificate.targets_examined)} target(s))")
            ra_verdict = is_epic_subalgebra_bounded(state["U"], state["V"], complex_algebra_targets(targets))
            lines.append(f"relation algebra level: {ra_verdict.outcome.value} "
                         f"({len(ra_verdict.certificate.targets_examined)} target(s))")
            lines.append("verdicts are relative to the listed targets")

        stages = [
            ("validate", "finite bounded lattice", validate),
            ("modular", "modular law", modular),
            ("frame", "KR frame axioms, Pasch iff modular", frame),
            ("cm", "complex algebra", cm),
            ("axioms", "Cm(F) is a Boolean monoid", axioms),
            ("maddux", "E(Cm L) = Id L", maddux),
            ("phi", "atom-extension conditions and unique complete embedding", phi),
            ("commutation", "phi o I_K = I_L", commutation),
            ("uv", "U generated by K', V generated by L'", uv),
            ("properness", "U is a proper subalgebra when K is proper", properness),
        ]
        if run_epi:
            stages.append(("epi", "bounded epicness", epi))

        for stage, theorem, body in stages:
            if not self._stage(report, stage, theorem, body):
                return report

        U, V = state["U"], state["V"]
        report.conclusion = "U ⊊ V: yes" if len(U) < len(V) else "U = V"
        return report
