"""
Maps between complex algebras
Atom-map extension, the embedding Cm(K) -> Cm(L) for a complete sublattice
K of a modular L, the U <= V subalgebra pair, RA homomorphism enumeration
and bounded epicness testing.
"""
from functools import reduce
from typing import Dict, Iterator, List, Optional, Sequence, Tuple
import logging

import numpy as np

from workbench.core.boolean_monoid import (
    algebra_dump, algebra_from_dump, e_lattice, fusion_table, is_abelian, lattice_complex_algebra,
    subalgebra_generated,
)
from workbench.core.exceptions import (
    ClosureFailure, ConditionsFailed, MismatchFound, NotAbelian, NotCompleteSublattice, NotModular,
)
from workbench.core.lattice_core import (
    bitfmt, compose, induced_sublattice, is_complete_sublattice, is_lattice_hom, is_modular,
    lattice_dump, lattice_from_dump, replay_lattice_witness,
)
from workbench.models.schemas import (
    AtomMapReport, EmbeddingReport, EpiCertificate, EpiOutcome, EpiVerdict, EpiWitness,
    StructureKind, TargetCertificate,
)
from workbench.models.structures import AtomMap, BooleanMonoid, Lattice, LatticeHom, RAHom, Subalgebra
from workbench.utils.bitset import ElemSet, from_indices, is_subset, iter_bits, submasks_ascending, to_indices
from workbench.utils.config import settings

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Atom maps
# ---------------------------------------------------------------------------

def check_atom_map_conditions(phi: AtomMap) -> AtomMapReport:
    """
    The three extension conditions for an atom map
    1. images nonzero, pairwise disjoint, joining to the target top
    2. target identity = join of images of atoms below the source identity
    3. phi(u) o phi(v) = join of phi(w) over atoms w <= u o v, both inclusions
    """
    S, T, images = phi.source, phi.target, phi.images
    failures: List[str] = []

    cond1 = True
    union = 0
    for u, image in enumerate(images):
        if image == 0:
            cond1 = False
            failures.append(f"condition 1: image of atom {u} is empty")
        if union & image:
            cond1 = False
            failures.append(f"condition 1: image of atom {u} overlaps an earlier image")
        union |= image
    if union != T.top:
        cond1 = False
        failures.append("condition 1: images do not join to the top")

    identity_image = reduce(lambda acc, u: acc | images[u], iter_bits(S.identity), 0)
    cond2 = identity_image == T.identity
    if not cond2:
        failures.append("condition 2: identity is not the join of the images below t")

    left_to_right = right_to_left = True
    for u in range(S.atoms):
        for v in range(S.atoms):
            lhs = T.fuse(images[u], images[v])
            rhs = reduce(lambda acc, w: acc | images[w], iter_bits(S.fusion_atoms[u][v]), 0)
            if not is_subset(lhs, rhs):
                left_to_right = False
                failures.append(f"condition 3: phi({u}) o phi({v}) not below the image of {u} o {v}")
            if not is_subset(rhs, lhs):
                right_to_left = False
                failures.append(f"condition 3: image of {u} o {v} not below phi({u}) o phi({v})")

    return AtomMapReport(
        condition_1=cond1,
        condition_2=cond2,
        condition_3_left_to_right=left_to_right,
        condition_3_right_to_left=right_to_left,
        failures=failures,
    )


def identity_atom_map(A: BooleanMonoid) -> AtomMap:
    return AtomMap(source=A, target=A, images=tuple(1 << a for a in range(A.atoms)))


def extend_atom_map(phi: AtomMap, max_exhaustive: Optional[int] = None) -> RAHom:
    """
    Extend an atom map to all elements by phi(r) = join of phi(u) over atoms u <= r

    Under the element-level gate injectivity and preservation of every
    operation are verified on all elements and pairs; above it the atom-level
    conditions already imply them and the verification says so.

    Raises:
        ConditionsFailed: one of the three conditions fails
        MismatchFound: the extension is not an embedding
    """
    report = check_atom_map_conditions(phi)
    if not report.all_passed:
        raise ConditionsFailed(f"atom map fails: {'; '.join(report.failures[:3])}", witness=report)

    gate = max_exhaustive or settings.MAX_EXHAUSTIVE
    S, T = phi.source, phi.target
    hom = RAHom(source=Subalgebra.full(S), target=T, images=phi.images)
    if S.atoms > gate:
        for u in range(S.atoms):
            if T.converse(phi.images[u]) != phi.images[S.converse_atoms[u]]:
                raise MismatchFound(f"extension does not preserve converse at atom {u}")
        return RAHom(hom.source, T, hom.images, verification="atom-level (conditions 1-3 and converse on atoms)")

    h = np.array(hom.table(), dtype=np.int64)
    if len(np.unique(h)) != S.size:
        raise MismatchFound("extension is not injective")
    elements = np.arange(S.size, dtype=np.int64)
    X, Y = np.meshgrid(elements, elements, indexing="ij")
    if not (h[X | Y] == (h[X] | h[Y])).all():
        raise MismatchFound("extension does not preserve joins")
    if not (h[S.top ^ elements] == (T.top ^ h)).all():
        raise MismatchFound("extension does not preserve complements")
    if int(h[S.identity]) != T.identity:
        raise MismatchFound("extension does not preserve t")
    for x in range(S.size):
        if h[S.converse(x)] != T.converse(int(h[x])):
            raise MismatchFound(f"extension does not preserve converse at {x}")
    fused = fusion_table(S, gate)
    for x in range(S.size):
        for y in range(S.size):
            if h[fused[x, y]] != T.fuse(int(h[x]), int(h[y])):
                raise MismatchFound(f"extension does not preserve fusion at ({x}, {y})", witness=(x, y))
    logger.debug(f"Extension {S.name} -> {T.name} verified on {S.size} elements")
    return RAHom(hom.source, T, hom.images, verification="element-level (injective, all operations on all pairs)")


# ---------------------------------------------------------------------------
# The embedding Cm(K) -> Cm(L)
# ---------------------------------------------------------------------------

def _require_embedding_input(L: Lattice, K: ElemSet) -> None:
    modular, witness = is_modular(L)
    if not modular:
        raise NotModular(f"{L.name} is not modular", witness=witness)
    if not is_complete_sublattice(L, K):
        raise NotCompleteSublattice(f"{bitfmt(L, K)} is not a complete sublattice of {L.name}")


def phi_construction(L: Lattice, K: ElemSet) -> AtomMap:
    """
    Atom map Cm(K) -> Cm(L): atom a goes to (a]_L minus the union of (b]_L
    over b in K with b < a

    The min-cover function x -> meet of F_x = {b in K : x <= b} is attached;
    its least element is asserted to lie in F_x and its fibres to be exactly
    the atom images.
    """
    _require_embedding_input(L, K)
    LK, ks = induced_sublattice(L, K, name=f"{L.name}{bitfmt(L, K)}")
    source = lattice_complex_algebra(LK)
    target = lattice_complex_algebra(L)

    images = []
    for a in ks:
        below = reduce(lambda acc, b: acc | L.downset(b), (b for b in ks if b != a and L.le(b, a)), 0)
        images.append(L.downset(a) & ~below)

    min_cover = []
    for x in range(L.n):
        F_x = [b for b in ks if L.le(x, b)]
        least = reduce(L.m, F_x)
        if least not in F_x:
            raise ClosureFailure(f"meet of F_{L.labels[x]} is not in K", witness=x)
        min_cover.append(least)

    for a, image in zip(ks, images):
        fibre = from_indices(x for x in range(L.n) if min_cover[x] == a)
        if fibre != image:
            raise MismatchFound(f"image of {L.labels[a]} differs from the fibre of the min-cover map")

    logger.info(f"Constructed atom map {source.name} -> {target.name}")
    return AtomMap(
        source=source,
        target=target,
        images=tuple(images),
        source_elements=ks,
        min_cover=tuple(min_cover),
    )


def verify_proof_identities(L: Lattice, phi: AtomMap) -> int:
    """
    For every Rabc in K and z in phi(c), with x = (b v z) ^ a and
    y = (a v z) ^ b: Rxyz holds in L and min F_x = a, min F_y = b

    Returns the number of instances checked.
    """
    ks, S, cover = phi.source_elements, phi.source, phi.min_cover
    instances = 0
    for i, a in enumerate(ks):
        for j, b in enumerate(ks):
            for k in iter_bits(S.fusion_atoms[i][j]):
                for z in iter_bits(phi.images[k]):
                    x = L.m(L.j(b, z), a)
                    y = L.m(L.j(a, z), b)
                    if not (L.j(x, y) == L.j(x, z) == L.j(y, z)):
                        raise MismatchFound(f"R(x, y, z) fails for x={x}, y={y}, z={z}", witness=(a, b, ks[k], z))
                    if cover[x] != a or cover[y] != b:
                        raise MismatchFound(f"min-cover mismatch at x={x}, y={y}", witness=(a, b, ks[k], z))
                    instances += 1
    return instances


def verify_embedding_commutes(phi_ext: RAHom, K: ElemSet, L: Lattice) -> bool:
    """phi((a]_K) = (a]_L for every a in K"""
    ks = to_indices(K)
    for a in ks:
        principal_in_k = from_indices(i for i, b in enumerate(ks) if L.le(b, a))
        if phi_ext(principal_in_k) != L.downset(a):
            raise MismatchFound(f"phi((a]_K) != (a]_L at a={L.labels[a]}", witness=a)
    return True


def check_uniqueness_by_perturbation(phi: AtomMap, max_exhaustive: Optional[int] = None) -> int:
    """
    Every single-atom change of a passing atom map fails a condition or
    changes the extension. Returns the number of perturbations tried.
    """
    gate = max_exhaustive or settings.MAX_EXHAUSTIVE
    T = phi.target
    base = RAHom(Subalgebra.full(phi.source), T, phi.images).table()
    tried = 0
    for u, image in enumerate(phi.images):
        if T.atoms <= gate:
            alternatives = [X for X in range(T.size) if X != image]
        else:
            alternatives = [image ^ (1 << b) for b in range(T.atoms)]
        for alternative in alternatives:
            perturbed = phi.with_image(u, alternative)
            tried += 1
            if not check_atom_map_conditions(perturbed).all_passed:
                continue
            if RAHom(Subalgebra.full(phi.source), T, perturbed.images).table() == base:
                raise MismatchFound(f"perturbing atom {u} leaves the extension unchanged", witness=(u, alternative))
    return tried


def embedding_report(
    L: Lattice,
    K: ElemSet,
    max_exhaustive: Optional[int] = None,
    perturb: bool = False,
) -> EmbeddingReport:
    phi = phi_construction(L, K)
    conditions = check_atom_map_conditions(phi)
    phi_ext = extend_atom_map(phi, max_exhaustive)
    commutes = verify_embedding_commutes(phi_ext, K, L)
    instances = verify_proof_identities(L, phi)
    perturbations = check_uniqueness_by_perturbation(phi, max_exhaustive) if perturb else 0
    return EmbeddingReport(
        lattice=lattice_dump(L),
        sublattice=list(phi.source_elements),
        atom_images=list(phi.images),
        min_cover=list(phi.min_cover),
        conditions=conditions,
        extension_method=phi_ext.verification or "",
        injective=True,
        commutes=commutes,
        proof_identity_instances=instances,
        perturbations_checked=perturbations,
    )


def replay_embedding_report(report: EmbeddingReport) -> bool:
    """Re-check a serialized embedding from its stored tables alone"""
    L = lattice_from_dump(report.lattice)
    K = from_indices(report.sublattice)
    if not is_complete_sublattice(L, K):
        return False
    LK, ks = induced_sublattice(L, K)
    for x, least in enumerate(report.min_cover):
        F_x = [b for b in ks if L.le(x, b)]
        if least not in F_x or not all(L.le(least, b) for b in F_x):
            return False
    phi = AtomMap(
        source=lattice_complex_algebra(LK),
        target=lattice_complex_algebra(L),
        images=tuple(report.atom_images),
        source_elements=ks,
        min_cover=tuple(report.min_cover),
    )
    if not check_atom_map_conditions(phi).all_passed:
        return False
    phi_ext = RAHom(Subalgebra.full(phi.source), phi.target, phi.images)
    try:
        return verify_embedding_commutes(phi_ext, K, L)
    except MismatchFound:
        return False


# ---------------------------------------------------------------------------
# U <= V
# ---------------------------------------------------------------------------

def build_UV(L: Lattice, K: ElemSet) -> Tuple[Subalgebra, Subalgebra]:
    """
    U generated by {(a]_L : a in K}, V by {(x]_L : x in L}, inside Cm(L)

    Raises:
        ClosureFailure: U is not inside V, or U = V although K is proper
    """
    _require_embedding_input(L, K)
    A = lattice_complex_algebra(L)
    U = subalgebra_generated(A, [L.downset(a) for a in iter_bits(K)])
    V = subalgebra_generated(A, [L.downset(x) for x in L.elements])
    if not U.issubset(V):
        raise ClosureFailure(f"U is not contained in V for {bitfmt(L, K)}")
    if K != L.carrier and len(U) == len(V):
        raise ClosureFailure(f"U = V although {bitfmt(L, K)} is a proper sublattice of {L.name}")
    logger.info(f"{L.name}, K={bitfmt(L, K)}: |U|={len(U)}, |V|={len(V)}")
    return U, V


def image_contains(phi_ext: RAHom, elements: Sequence[ElemSet]) -> bool:
    image = set(phi_ext.table())
    return all(x in image for x in elements)


def principal_ideals_outside_image(L: Lattice, K: ElemSet, phi_ext: RAHom) -> List[int]:
    """
    Elements x whose principal ideal (x]_L is not in the image of the embedding
    Nonempty exactly when K is proper: (x] in the image forces x in K.
    """
    image = set(phi_ext.table())
    outside = [x for x in L.elements if L.downset(x) not in image]
    if bool(outside) != (K != L.carrier):
        raise MismatchFound(f"principal ideals outside the image: {outside} for K={bitfmt(L, K)}")
    return outside


# ---------------------------------------------------------------------------
# RA homomorphisms
# ---------------------------------------------------------------------------

Constraint = Tuple[ElemSet, ElemSet]


def _atom_support(V: Subalgebra, x: ElemSet) -> ElemSet:
    """Indices of the V-atoms below x, as a bitmask"""
    return from_indices(r for r, atom in enumerate(V.atoms) if is_subset(atom, x))


def _respects(constraint: Constraint, r: int, image: ElemSet) -> bool:
    target, support = constraint
    if (support >> r) & 1:
        return is_subset(image, target)
    return image & target == 0


def enumerate_ra_homs(
    V: Subalgebra,
    W: BooleanMonoid,
    fixed: Optional[Dict[ElemSet, ElemSet]] = None,
) -> Iterator[RAHom]:
    """
    Yield every homomorphism V -> W extending `fixed`

    A hom is determined by the images of V's atoms, which partition the top
    of W. Atoms are assigned in order, candidates are submasks of what is
    still free in ascending order, and the last atom takes the remainder.
    Each known value h(x) = T prunes atom r by: r below x implies
    img[r] <= T, otherwise img[r] disjoint from T. The identity and `fixed`
    give such constraints up front; converse and fusion add them as soon as
    their arguments are assigned.
    """
    A = V.ambient
    k = len(V.atoms)
    atom_index = {atom: r for r, atom in enumerate(V.atoms)}
    converse_index = [atom_index[A.converse(atom)] for atom in V.atoms]
    fusion_support = [[_atom_support(V, A.fuse(p, q)) for q in V.atoms] for p in V.atoms]

    static: List[Constraint] = [(W.identity, _atom_support(V, A.identity))]
    for x, y in (fixed or {}).items():
        static.append((y, _atom_support(V, x)))

    images = [0] * k
    active: List[Constraint] = list(static)

    def consistent(new: Sequence[Constraint], upto: int) -> bool:
        return all(_respects(c, r, images[r]) for c in new for r in range(upto + 1))

    def rec(r: int, free: ElemSet) -> Iterator[RAHom]:
        if r == k:
            yield RAHom(source=V, target=W, images=tuple(images), verification="enumerated")
            return
        candidates = [free] if r == k - 1 else submasks_ascending(free)
        for image in candidates:
            images[r] = image
            if not all(_respects(c, r, image) for c in active):
                continue
            new: List[Constraint] = []
            if converse_index[r] <= r:
                new.append((W.converse(image), 1 << converse_index[r]))
                if converse_index[r] < r:
                    new.append((W.converse(images[converse_index[r]]), 1 << r))
            for j in range(r + 1):
                new.append((W.fuse(image, images[j]), fusion_support[r][j]))
                if j < r:
                    new.append((W.fuse(images[j], image), fusion_support[j][r]))
            if not consistent(new, r):
                continue
            active.extend(new)
            yield from rec(r + 1, free & ~image)
            del active[len(active) - len(new):]
        images[r] = 0

    if k == 0:
        return
    yield from rec(0, W.top)


def is_epic_subalgebra_bounded(
    U: Subalgebra,
    V: Subalgebra,
    targets: Sequence[BooleanMonoid],
) -> EpiVerdict:
    """
    Bounded epicness of U in V relative to an explicit list of targets

    All homs V -> W are grouped by their restriction to U (determined by the
    images of U's atoms); two distinct homs in one group form the witness.
    """
    if not U.issubset(V):
        raise ValueError("U must be a subalgebra of V")
    certificates = []
    for W in targets:
        homs = list(enumerate_ra_homs(V, W))
        groups: Dict[Tuple[ElemSet, ...], List[RAHom]] = {}
        for h in homs:
            groups.setdefault(tuple(h(u) for u in U.atoms), []).append(h)
        pairs = 0
        for group in groups.values():
            pairs += len(group) * len(group)
            if len(group) > 1:
                f, g = group[0], group[1]
                logger.info(f"U not epic in V: distinguished by homs into {W.name}")
                certificates.append(TargetCertificate(target=W.name, hom_count=len(homs), pairs_examined=pairs))
                witness = EpiWitness(
                    target=W.name,
                    domain=list(V.elements),
                    subobject=list(U.elements),
                    f=list(f.table()),
                    g=list(g.table()),
                    source_algebra=algebra_dump(V.ambient),
                    target_algebra=algebra_dump(W),
                )
                return EpiVerdict(
                    kind=StructureKind.RELATION_ALGEBRA,
                    outcome=EpiOutcome.NOT_EPIC,
                    witness=witness,
                    certificate=EpiCertificate(targets_examined=certificates, note="stopped at first witness"),
                )
        logger.debug(f"{W.name}: {len(homs)} homs, no distinguishing pair")
        certificates.append(TargetCertificate(target=W.name, hom_count=len(homs), pairs_examined=pairs))

    note = "zero targets examined" if not targets else f"epic relative to {len(targets)} target(s) only"
    return EpiVerdict(
        kind=StructureKind.RELATION_ALGEBRA,
        outcome=EpiOutcome.EPIC_RELATIVE,
        certificate=EpiCertificate(targets_examined=certificates, note=note),
    )


def _is_ra_hom_table(A: BooleanMonoid, W: BooleanMonoid, table: Dict[ElemSet, ElemSet]) -> bool:
    if table.get(A.identity) != W.identity or table.get(A.top) != W.top:
        return False
    for x, fx in table.items():
        if table.get(A.top ^ x) != W.top ^ fx or table.get(A.converse(x)) != W.converse(fx):
            return False
        for y, fy in table.items():
            if table.get(x | y) != fx | fy or table.get(A.fuse(x, y)) != W.fuse(fx, fy):
                return False
    return True


def replay_ra_witness(witness: EpiWitness) -> bool:
    """Re-check an RA witness from its embedded atom structures alone"""
    A = algebra_from_dump(witness.source_algebra)
    W = algebra_from_dump(witness.target_algebra)
    f = dict(zip(witness.domain, witness.f))
    g = dict(zip(witness.domain, witness.g))
    if not (_is_ra_hom_table(A, W, f) and _is_ra_hom_table(A, W, g)):
        return False
    agree = all(f[u] == g[u] for u in witness.subobject)
    return agree and f != g


def replay_epi_verdict(verdict: EpiVerdict) -> bool:
    """NotEpic verdicts replay their witness; relative verdicts have nothing to replay"""
    if verdict.outcome == EpiOutcome.EPIC_RELATIVE:
        return verdict.witness is None and verdict.certificate.relative
    if verdict.witness is None:
        return False
    if verdict.kind == StructureKind.LATTICE:
        return replay_lattice_witness(verdict.witness)
    return replay_ra_witness(verdict.witness)


# ---------------------------------------------------------------------------
# Restriction to equivalence elements
# ---------------------------------------------------------------------------

def restrict_to_equivalence_lattice(f: RAHom) -> LatticeHom:
    """
    f on reflexive equivalence elements, as a lattice hom E(span) -> E(target)

    Raises:
        NotAbelian; MismatchFound when the restriction is not a lattice hom
    """
    A, W = f.source.ambient, f.target
    if not is_abelian(A) or not is_abelian(W):
        raise NotAbelian(f"{A.name} or {W.name} is not abelian")
    source_lattice, source_elements = e_lattice(A, restrict_to=f.source.elements)
    target_lattice, target_elements = e_lattice(W)
    index = {x: i for i, x in enumerate(target_elements)}
    mapping = []
    for x in source_elements:
        y = f(x)
        if y not in index:
            raise MismatchFound("image of equivalence element is not an equivalence element", witness=x)
        mapping.append(index[y])
    bounded = mapping[source_lattice.bottom] == target_lattice.bottom and mapping[source_lattice.top] == target_lattice.top
    h = LatticeHom(source_lattice, target_lattice, tuple(mapping), preserves_bounds=bounded)
    if not is_lattice_hom(h):
        raise MismatchFound("restriction does not preserve join and meet")
    return h


def transfer_ra_witness(f: RAHom, g: RAHom, K: ElemSet, L: Lattice) -> Tuple[LatticeHom, LatticeHom]:
    """
    Restrict an RA distinguishing pair on (U, V) to lattice homs L -> E(W)
    The results agree on K and differ somewhere on L.
    """
    hf = restrict_to_equivalence_lattice(f)
    hg = restrict_to_equivalence_lattice(g)
    E_V = hf.source
    position = {x: i for i, x in enumerate(E_V.sets)}
    try:
        identification = LatticeHom(L, E_V, tuple(position[L.downset(x)] for x in L.elements), preserves_bounds=True)
    except KeyError:
        raise MismatchFound(f"principal ideals of {L.name} are not all equivalence elements of V")
    lf = compose(identification, hf)
    lg = compose(identification, hg)
    if any(lf(a) != lg(a) for a in iter_bits(K)):
        raise MismatchFound("restricted homs disagree on K")
    if lf.mapping == lg.mapping:
        raise MismatchFound("restricted homs coincide on all of L")
    return lf, lg


def complex_algebra_targets(lattices: Sequence[Lattice]) -> List[BooleanMonoid]:
    """cm(frame(W)) for each modular target lattice W"""
    return [lattice_complex_algebra(W) for W in lattices if is_modular(W)[0]]


def default_lattice_targets(lattices: Sequence[Lattice], max_size: Optional[int] = None) -> List[Lattice]:
    max_size = max_size or settings.TARGET_MAX_SIZE
    return [W for W in lattices if W.n <= max_size and is_modular(W)[0]]
