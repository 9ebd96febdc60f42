"""
Complex algebras of ternary frames as finite atomic relation algebras
Relation-algebra axiom verification, reflexive equivalence elements,
the E(A) lattice and generated subalgebras.
"""
from collections import deque
from dataclasses import dataclass
from itertools import product as cartesian
from typing import Dict, Iterable, List, Optional, Sequence, Tuple
import logging

import numpy as np

from workbench.core.exceptions import ClosureFailure, FrameInvalid, MismatchFound, NotAbelian, NotModular, TooLarge
from workbench.core.kr_frame import check_frame_axioms, frame_from_lattice
from workbench.core.lattice_core import ideals, is_modular, lattice_from_order
from workbench.models.schemas import AlgebraDump, AxiomReport, AxiomVerdict
from workbench.models.structures import BooleanMonoid, Lattice, Subalgebra, TernaryFrame
from workbench.utils.bitset import ElemSet, fmt, from_indices, is_subset, submasks_ascending, to_indices
from workbench.utils.config import settings

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------

def cm(
    F: TernaryFrame,
    waive: bool = False,
    name: Optional[str] = None,
    labels: Sequence[str] = (),
) -> BooleanMonoid:
    """
    Complex algebra of a frame: fusion_atoms[a][b] = {c : Rabc}, t = {zero}

    Raises:
        FrameInvalid: the frame fails an axiom and the caller did not waive
    """
    report = check_frame_axioms(F)
    if not report.all_passed and not waive:
        failed = [a.name for a in report.axioms if not a.passed]
        raise FrameInvalid(f"{F.name} is not a KR frame: {', '.join(failed)} fails", witness=report)
    if not report.all_passed:
        logger.warning(f"Building Cm({F.name}) from an invalid frame (waived)")

    fusion_atoms = tuple(
        tuple(from_indices(int(c) for c in np.flatnonzero(F.R[a, b])) for b in range(F.n))
        for a in range(F.n)
    )
    return BooleanMonoid(
        atoms=F.n,
        fusion_atoms=fusion_atoms,
        identity=1 << F.zero,
        converse_atoms=tuple(range(F.n)),
        name=name or f"Cm({F.name})",
        frame_checked=report.all_passed,
        labels=tuple(labels),
    )


def lattice_complex_algebra(L: Lattice, waive: bool = False) -> BooleanMonoid:
    """cm(frame_from_lattice(L)) with atoms labelled by the elements of L"""
    return cm(frame_from_lattice(L), waive=waive, name=f"Cm({L.name})", labels=L.labels)


def algebra_dump(A: BooleanMonoid) -> AlgebraDump:
    return AlgebraDump(
        name=A.name,
        atoms=A.atoms,
        identity=to_indices(A.identity),
        fusion=[[to_indices(cell) for cell in row] for row in A.fusion_atoms],
        converse=list(A.converse_atoms),
    )


def algebra_from_dump(dump: AlgebraDump) -> BooleanMonoid:
    converse = dump.converse if dump.converse is not None else list(range(dump.atoms))
    return BooleanMonoid(
        atoms=dump.atoms,
        fusion_atoms=tuple(tuple(from_indices(cell) for cell in row) for row in dump.fusion),
        identity=from_indices(dump.identity),
        converse_atoms=tuple(converse),
        name=dump.name,
    )


def fuse_direct(F: TernaryFrame, X: ElemSet, Y: ElemSet) -> ElemSet:
    """{c : Rabc for some a in X, b in Y}, straight from the frame"""
    xs, ys = to_indices(X), to_indices(Y)
    if not xs or not ys:
        return 0
    hits = F.R[np.ix_(xs, ys)].any(axis=(0, 1))
    return from_indices(int(c) for c in np.flatnonzero(hits))


# ---------------------------------------------------------------------------
# Element-level tables (size gated)
# ---------------------------------------------------------------------------

def fusion_table(A: BooleanMonoid, max_exhaustive: Optional[int] = None) -> np.ndarray:
    """
    Full 2^m x 2^m fusion table, built by doubling over atoms
    Only available when m is within the element-level gate.
    """
    gate = max_exhaustive or settings.MAX_EXHAUSTIVE
    if A.atoms > gate:
        raise TooLarge(f"{A.name}: {A.atoms} atoms exceeds element-level gate {gate}")
    m, size = A.atoms, A.size
    by_atom = np.zeros((m, size), dtype=np.int64)
    for a in range(m):
        row = by_atom[a]
        for b in range(m):
            row[1 << b: 2 << b] = row[0: 1 << b] | A.fusion_atoms[a][b]
    table = np.zeros((size, size), dtype=np.int64)
    for a in range(m):
        table[1 << a: 2 << a, :] = table[0: 1 << a, :] | by_atom[a][None, :]
    return table


def converse_table(A: BooleanMonoid) -> np.ndarray:
    conv = np.zeros(A.size, dtype=np.int64)
    for a in range(A.atoms):
        conv[1 << a: 2 << a] = conv[0: 1 << a] | (1 << A.converse_atoms[a])
    return conv


# ---------------------------------------------------------------------------
# Axioms
# ---------------------------------------------------------------------------

AXIOM_NAMES = {
    1: "a v b = b v a",
    2: "a v (b v c) = (a v b) v c",
    3: "-(-a v b) v -(-a v -b) = a",
    4: "a o (b o c) = (a o b) o c",
    5: "a o t = a",
    6: "a~~ = a",
    7: "(a o b)~ = b~ o a~",
    8: "(a v b) o c = (a o c) v (b o c)",
    9: "(a v b)~ = a~ v b~",
    10: "(a~ o -(a o b)) v -b = -b",
}


def _verdict(number: int, bad: np.ndarray, grids: Sequence[np.ndarray], method: str) -> AxiomVerdict:
    if bad.any():
        idx = tuple(np.argwhere(bad)[0])
        example = [int(g[idx]) for g in grids]
        return AxiomVerdict(number=number, name=AXIOM_NAMES[number], passed=False, method=method,
                            counterexample=example)
    return AxiomVerdict(number=number, name=AXIOM_NAMES[number], passed=True, method=method)


def _element_level_axioms(A: BooleanMonoid, max_exhaustive: int) -> List[AxiomVerdict]:
    method = "element-level"
    F = fusion_table(A, max_exhaustive)
    conv = converse_table(A)
    top = A.top
    E = np.arange(A.size, dtype=np.int64)
    comp = top ^ E
    X, Y = np.meshgrid(E, E, indexing="ij")
    X3, Y3, Z3 = np.meshgrid(E, E, E, indexing="ij")
    t = A.identity
    return [
        _verdict(1, (X | Y) != (Y | X), (X, Y), method),
        _verdict(2, (X3 | (Y3 | Z3)) != ((X3 | Y3) | Z3), (X3, Y3, Z3), method),
        _verdict(3, (comp[comp[X] | Y] | comp[comp[X] | comp[Y]]) != X, (X, Y), method),
        _verdict(4, F[X3, F[Y3, Z3]] != F[F[X3, Y3], Z3], (X3, Y3, Z3), method),
        _verdict(5, F[E, t] != E, (E,), method),
        _verdict(6, conv[conv] != E, (E,), method),
        _verdict(7, conv[F[X, Y]] != F[conv[Y], conv[X]], (X, Y), method),
        _verdict(8, F[X3 | Y3, Z3] != (F[X3, Z3] | F[Y3, Z3]), (X3, Y3, Z3), method),
        _verdict(9, conv[X | Y] != (conv[X] | conv[Y]), (X, Y), method),
        _verdict(10, (F[conv[X], comp[F[X, Y]]] | comp[Y]) != comp[Y], (X, Y), method),
    ]


def check_cycle_law(A: BooleanMonoid) -> Optional[Tuple[int, int, int]]:
    """
    Atom-level form of axiom 10: c <= a o b iff b <= a~ o c
    Returns the first violating atom triple, or None.
    """
    m = A.atoms
    for a, b, c in cartesian(range(m), repeat=3):
        forward = (A.fusion_atoms[a][b] >> c) & 1
        backward = (A.fusion_atoms[A.converse_atoms[a]][c] >> b) & 1
        if forward != backward:
            return a, b, c
    return None


def _atom_level_axioms(A: BooleanMonoid) -> List[AxiomVerdict]:
    m, t, fa, ca = A.atoms, A.identity, A.fusion_atoms, A.converse_atoms

    def first(pred, arity):
        for combo in cartesian(range(m), repeat=arity):
            if not pred(*combo):
                return [1 << v for v in combo]
        return None

    structural = "structural (Boolean operations are set operations)"
    results = [
        AxiomVerdict(number=n, name=AXIOM_NAMES[n], passed=True, method=structural) for n in (1, 2, 3)
    ]
    checks = {
        4: (lambda a, b, c: A.fuse(1 << a, fa[b][c]) == A.fuse(fa[a][b], 1 << c), 3),
        5: (lambda a: A.fuse(1 << a, t) == 1 << a, 1),
        6: (lambda a: ca[ca[a]] == a, 1),
        7: (lambda a, b: A.converse(fa[a][b]) == fa[ca[b]][ca[a]], 2),
    }
    for number, (pred, arity) in checks.items():
        example = first(pred, arity)
        results.append(AxiomVerdict(number=number, name=AXIOM_NAMES[number], passed=example is None,
                                    method="atom-level", counterexample=example))
    additive = "structural (fusion and converse are defined additively)"
    results.append(AxiomVerdict(number=8, name=AXIOM_NAMES[8], passed=True, method=additive))
    results.append(AxiomVerdict(number=9, name=AXIOM_NAMES[9], passed=True, method=additive))
    violation = check_cycle_law(A)
    results.append(AxiomVerdict(
        number=10, name=AXIOM_NAMES[10], passed=violation is None, method="atom-level (cycle law)",
        counterexample=[1 << v for v in violation] if violation else None,
    ))
    return results


def check_ra_axioms(
    A: BooleanMonoid,
    max_exhaustive: Optional[int] = None,
    max_n: Optional[int] = None,
) -> AxiomReport:
    """
    Verify relation-algebra axioms 1-10

    Algebras with at most `max_exhaustive` atoms are checked over all
    elements; larger ones at atom level, which suffices because fusion and
    converse are additive. The report names the method used per axiom.
    """
    gate = max_exhaustive or settings.MAX_EXHAUSTIVE
    max_n = max_n or settings.MAX_N
    if A.atoms > max_n:
        raise TooLarge(f"{A.name}: {A.atoms} atoms exceeds the size gate {max_n}")

    if A.atoms <= gate:
        axioms = _element_level_axioms(A, gate)
    else:
        logger.info(f"{A.name}: {A.atoms} atoms above gate {gate}, checking at atom level")
        axioms = _atom_level_axioms(A)

    return AxiomReport(
        algebra=A.name,
        atoms=A.atoms,
        element_level_gate=gate,
        axioms=axioms,
        dense=is_dense(A),
        symmetric=is_symmetric(A),
        abelian=is_abelian(A),
        frame_checked=A.frame_checked,
    )


def is_dense(A: BooleanMonoid) -> bool:
    """a <= a o a, at atom level (sufficient by additivity)"""
    return all((A.fusion_atoms[a][a] >> a) & 1 for a in range(A.atoms))


def is_symmetric(A: BooleanMonoid) -> bool:
    return all(A.converse_atoms[a] == a for a in range(A.atoms))


def is_abelian(A: BooleanMonoid) -> bool:
    fa = A.fusion_atoms
    return all(fa[a][b] == fa[b][a] for a in range(A.atoms) for b in range(a + 1, A.atoms))


# ---------------------------------------------------------------------------
# Reflexive equivalence elements
# ---------------------------------------------------------------------------

def is_equivalence_element(A: BooleanMonoid, x: ElemSet) -> bool:
    return is_subset(A.identity, x) and A.converse(x) == x and is_subset(A.fuse(x, x), x)


def equivalence_elements(
    A: BooleanMonoid,
    max_n: Optional[int] = None,
    restrict_to: Optional[Iterable[ElemSet]] = None,
) -> List[ElemSet]:
    """
    All reflexive equivalence elements, ascending
    Only supersets of the identity are scanned; `restrict_to` limits the
    scan to a given family (e.g. the elements of a subalgebra).
    """
    max_n = max_n or settings.MAX_N
    if A.atoms > max_n:
        raise TooLarge(f"{A.name}: {A.atoms} atoms exceeds the size gate {max_n}")
    t = A.identity
    if restrict_to is None:
        candidates = [t | s for s in submasks_ascending(A.top & ~t)]
    else:
        candidates = sorted(x for x in set(restrict_to) if is_subset(t, x))
    return [x for x in candidates if A.converse(x) == x and is_subset(A.fuse(x, x), x)]


def e_lattice(
    A: BooleanMonoid,
    restrict_to: Optional[Iterable[ElemSet]] = None,
    max_n: Optional[int] = None,
) -> Tuple[Lattice, List[ElemSet]]:
    """
    Lattice of reflexive equivalence elements: join is fusion, meet is intersection

    Returns:
        (lattice, elements) where lattice element i is elements[i]

    Raises:
        NotAbelian; TooLarge above max_n atoms; ClosureFailure when the set
        is not closed, fusion is not the inclusion join, or the result is not
        a bounded modular lattice
    """
    if not is_abelian(A):
        raise NotAbelian(f"{A.name} is not abelian")
    elements = equivalence_elements(A, max_n=max_n, restrict_to=restrict_to)
    index = {x: i for i, x in enumerate(elements)}
    n = len(elements)
    join = np.empty((n, n), dtype=np.int64)
    meet = np.empty((n, n), dtype=np.int64)
    for i, x in enumerate(elements):
        for j, y in enumerate(elements):
            fused, common = A.fuse(x, y), x & y
            if fused not in index or common not in index:
                raise ClosureFailure(f"E({A.name}) not closed at ({fmt(x)}, {fmt(y)})", witness=(x, y))
            join[i, j] = index[fused]
            meet[i, j] = index[common]

    leq = np.array([[is_subset(x, y) for y in elements] for x in elements], dtype=bool)
    labels = [fmt(x, A.labels) for x in elements]
    L = lattice_from_order(leq, name=f"E({A.name})", labels=labels, sets=elements)
    if not ((L.join == join).all() and (L.meet == meet).all()):
        raise ClosureFailure(f"E({A.name}): fusion/meet are not the join/meet of inclusion")
    if elements[L.bottom] != A.identity or elements[L.top] != A.top:
        raise ClosureFailure(f"E({A.name}): bounds are not t and 1")
    modular, witness = is_modular(L)
    if not modular:
        raise ClosureFailure(f"E({A.name}) is not modular", witness=witness)
    return L, elements


@dataclass(frozen=True)
class MadduxIdentification:
    """Id L and E(Cm L) as literally the same family of subsets"""
    ideal_lattice: Lattice
    algebra: BooleanMonoid
    principal: Dict[int, ElemSet]


def verify_maddux(L: Lattice) -> Tuple[bool, MadduxIdentification]:
    """
    Check E(Cm(L)) = Id L as sets, with J o K = J v K and J n K = J ^ K

    Raises:
        NotModular; MismatchFound when the identification breaks
    """
    modular, witness = is_modular(L)
    if not modular:
        raise NotModular(f"{L.name} is not modular", witness=witness)
    A = lattice_complex_algebra(L)
    eq_elements = equivalence_elements(A)
    id_lattice = ideals(L)
    family = id_lattice.sets
    if set(eq_elements) != set(family):
        extra = sorted(set(eq_elements) ^ set(family))
        raise MismatchFound(f"E(Cm {L.name}) differs from Id {L.name}", witness=extra)

    for i, J in enumerate(family):
        for k, K in enumerate(family):
            if A.fuse(J, K) != family[id_lattice.j(i, k)]:
                raise MismatchFound(f"J o K differs from J v K at ({fmt(J)}, {fmt(K)})", witness=(J, K))
            if J & K != family[id_lattice.m(i, k)]:
                raise MismatchFound(f"J n K differs from J ^ K at ({fmt(J)}, {fmt(K)})", witness=(J, K))

    logger.info(f"Maddux identification holds for {L.name}: {len(family)} ideals")
    principal = {a: L.downset(a) for a in range(L.n)}
    return True, MadduxIdentification(ideal_lattice=id_lattice, algebra=A, principal=principal)


# ---------------------------------------------------------------------------
# Subalgebras
# ---------------------------------------------------------------------------

def _refine(blocks: List[ElemSet], x: ElemSet) -> List[ElemSet]:
    refined = []
    for block in blocks:
        inside, outside = block & x, block & ~x
        if inside:
            refined.append(inside)
        if outside:
            refined.append(outside)
    return refined


def _is_union_of(blocks: Sequence[ElemSet], x: ElemSet) -> bool:
    return all(block & x in (0, block) for block in blocks)


def subalgebra_generated(A: BooleanMonoid, gens: Sequence[ElemSet]) -> Subalgebra:
    """
    Smallest subset containing gens and t closed under union, complement,
    fusion and converse

    Worklist of generator values deduplicated by bit-vector; each value
    refines the atom partition of the Boolean subalgebra, and fusions and
    converses of the current atoms that are not yet unions of atoms are fed
    back until nothing new appears.
    """
    seen = set()
    worklist = deque([A.identity, *gens])
    blocks = [A.top]
    while True:
        while worklist:
            x = worklist.popleft()
            if x in seen:
                continue
            seen.add(x)
            blocks = _refine(blocks, x)
        for b in blocks:
            c = A.converse(b)
            if not _is_union_of(blocks, c):
                worklist.append(c)
        for b1 in blocks:
            for b2 in blocks:
                f = A.fuse(b1, b2)
                if not _is_union_of(blocks, f):
                    worklist.append(f)
        if not worklist:
            break

    atoms = sorted(blocks)
    elements = sorted(
        sum(atom for i, atom in enumerate(atoms) if (mask >> i) & 1)
        for mask in range(1 << len(atoms))
    )
    logger.debug(f"Subalgebra of {A.name} generated by {len(gens)} element(s): {len(elements)} elements")
    return Subalgebra(ambient=A, elements=tuple(elements), atoms=tuple(atoms), generators=tuple(gens))
