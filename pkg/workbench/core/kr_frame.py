"""
Ternary frames built from lattices and the four KR-frame axioms
"""
from itertools import permutations
from typing import Iterable, Sequence
import logging

import numpy as np

from workbench.core.lattice_core import is_modular
from workbench.models.schemas import AxiomVerdict, FrameAxiomReport, FrameFile
from workbench.models.structures import Lattice, TernaryFrame

logger = logging.getLogger(__name__)


def frame_from_lattice(L: Lattice) -> TernaryFrame:
    """R = {(a, b, c) : a v b = a v c = b v c}, zero = bottom"""
    J = L.join
    ab = J[:, :, None]
    ac = J[:, None, :]
    bc = J[None, :, :]
    R = (ab == ac) & (ac == bc)
    return TernaryFrame(n=L.n, R=np.ascontiguousarray(R), zero=L.bottom, name=f"F({L.name})")


def frame_from_triples(n: int, zero: int, triples: Iterable[Sequence[int]], name: str = "F") -> TernaryFrame:
    R = np.zeros((n, n, n), dtype=bool)
    for a, b, c in triples:
        R[a, b, c] = True
    return TernaryFrame(n=n, R=R, zero=zero, name=name)


def frame_from_file(data: FrameFile) -> TernaryFrame:
    return frame_from_triples(data.n, data.zero, data.triples, name=data.name)


def _first(mask: np.ndarray):
    return [int(v) for v in np.argwhere(mask)[0]]


def check_identity_axiom(F: TernaryFrame) -> AxiomVerdict:
    """R0ab iff a = b"""
    bad = F.R[F.zero] != np.eye(F.n, dtype=bool)
    return AxiomVerdict(number=1, name="R0ab iff a = b", passed=not bad.any(), method="exhaustive",
                        counterexample=_first(bad) if bad.any() else None)


def check_reflexivity_axiom(F: TernaryFrame) -> AxiomVerdict:
    r = np.arange(F.n)
    bad = ~F.R[r, r, r]
    return AxiomVerdict(number=2, name="Raaa", passed=not bad.any(), method="exhaustive",
                        counterexample=[int(np.flatnonzero(bad)[0])] * 3 if bad.any() else None)


def check_total_symmetry(F: TernaryFrame) -> AxiomVerdict:
    """R closed under all six permutations of its triples"""
    for perm in permutations(range(3)):
        bad = F.R & ~F.R.transpose(perm)
        if bad.any():
            return AxiomVerdict(number=3, name="total symmetry", passed=False, method="exhaustive",
                                counterexample=_first(bad))
    return AxiomVerdict(number=3, name="total symmetry", passed=True, method="exhaustive")


def check_pasch(F: TernaryFrame) -> AxiomVerdict:
    """
    Rabc and Rcde imply some f with Radf and Rfbe
    Vectorised over all (a, b, c, d, e); counterexample is [a, b, c, d, e].
    """
    Ri = F.R.astype(np.int64)
    exists = np.einsum("adf,fbe->abde", Ri, Ri) > 0
    premise = np.einsum("abc,cde->abcde", Ri, Ri) > 0
    bad = premise & ~exists[:, :, None, :, :]
    return AxiomVerdict(number=4, name="Pasch's Postulate", passed=not bad.any(), method="exhaustive",
                        counterexample=_first(bad) if bad.any() else None)


def check_frame_axioms(F: TernaryFrame) -> FrameAxiomReport:
    """Per-axiom verdicts for axioms 1-4 with the first counterexample of each"""
    report = FrameAxiomReport(
        frame=F.name,
        n=F.n,
        axioms=[
            check_identity_axiom(F),
            check_reflexivity_axiom(F),
            check_total_symmetry(F),
            check_pasch(F),
        ],
    )
    failed = [a.number for a in report.axioms if not a.passed]
    if failed:
        logger.info(f"Frame {F.name}: axioms {failed} fail")
    return report


def pasch_iff_modular(L: Lattice) -> bool:
    """Agreement of the modularity test with Pasch on frame_from_lattice(L)"""
    modular, _ = is_modular(L)
    pasch = check_pasch(frame_from_lattice(L)).passed
    if modular != pasch:
        logger.error(f"{L.name}: modular={modular} but Pasch={pasch}")
    return modular == pasch
