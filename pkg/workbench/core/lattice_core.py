"""
Finite bounded lattices
Validation from cover relations, modularity, sublattices, ideals,
lattice homomorphism enumeration and bounded epicness testing.
"""
from collections import deque
from typing import Dict, Iterator, List, Optional, Sequence, Tuple
import itertools
import logging

import networkx as nx
import numpy as np

from workbench.core.exceptions import (
    ClosureFailure, CycleInCovers, MismatchFound, NoBounds, NotALattice, TooLarge,
)
from workbench.models.schemas import (
    EpiCertificate, EpiOutcome, EpiVerdict, EpiWitness, LatticeDump,
    StructureKind, TargetCertificate,
)
from workbench.models.structures import Ideal, Lattice, LatticeHom
from workbench.utils.bitset import ElemSet, from_indices, is_subset, iter_bits, popcount, submasks_ascending, to_indices
from workbench.utils.config import settings

logger = logging.getLogger(__name__)

Triple = Tuple[int, int, int]


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------

def lattice_from_order(
    leq: np.ndarray,
    name: str = "L",
    labels: Sequence[str] = (),
    sets: Sequence[ElemSet] = (),
) -> Lattice:
    """
    Build a Lattice from a partial order matrix
    Computes join/meet by exhaustive lub/glb scan and verifies the lattice laws.
    """
    leq = np.asarray(leq, dtype=bool)
    n = leq.shape[0]

    if not leq.diagonal().all():
        raise NotALattice(f"{name}: order is not reflexive")
    if (leq & leq.T & ~np.eye(n, dtype=bool)).any():
        a, b = np.argwhere(leq & leq.T & ~np.eye(n, dtype=bool))[0]
        raise NotALattice(f"{name}: order is not antisymmetric", witness=(int(a), int(b)))
    composed = (leq.astype(np.int64) @ leq.astype(np.int64)) > 0
    if (composed & ~leq).any():
        raise NotALattice(f"{name}: order is not transitive")

    bottoms = [x for x in range(n) if leq[x, :].all()]
    tops = [x for x in range(n) if leq[:, x].all()]
    if not bottoms or not tops:
        raise NoBounds(f"{name}: no global {'minimum' if not bottoms else 'maximum'}")

    join = np.empty((n, n), dtype=np.int64)
    meet = np.empty((n, n), dtype=np.int64)
    for a in range(n):
        for b in range(a, n):
            uppers = np.flatnonzero(leq[a] & leq[b])
            least = [u for u in uppers if leq[u, uppers].all()]
            lowers = np.flatnonzero(leq[:, a] & leq[:, b])
            greatest = [v for v in lowers if leq[lowers, v].all()]
            if len(least) != 1 or len(greatest) != 1:
                raise NotALattice(f"{name}: pair ({a}, {b}) lacks a unique lub/glb", witness=(a, b))
            join[a, b] = join[b, a] = least[0]
            meet[a, b] = meet[b, a] = greatest[0]

    lattice = Lattice(
        n=n, leq=leq.copy(), join=join, meet=meet,
        bottom=bottoms[0], top=tops[0], name=name,
        labels=tuple(labels), sets=tuple(sets),
    )
    _verify_lattice_laws(lattice)
    return lattice


def _verify_lattice_laws(L: Lattice) -> None:
    """Commutativity, associativity, idempotence, absorption and bounds, exhaustively"""
    J, M, n = L.join, L.meet, L.n
    r = np.arange(n)
    if not ((J == J.T).all() and (M == M.T).all()):
        raise NotALattice(f"{L.name}: join/meet not commutative")
    if not ((J[r, r] == r).all() and (M[r, r] == r).all()):
        raise NotALattice(f"{L.name}: join/meet not idempotent")
    X, Y, Z = np.meshgrid(r, r, r, indexing="ij")
    if not ((J[J[X, Y], Z] == J[X, J[Y, Z]]).all() and (M[M[X, Y], Z] == M[X, M[Y, Z]]).all()):
        raise NotALattice(f"{L.name}: join/meet not associative")
    A, B = np.meshgrid(r, r, indexing="ij")
    if not ((J[A, M[A, B]] == A).all() and (M[A, J[A, B]] == A).all()):
        raise NotALattice(f"{L.name}: absorption fails")
    if not (L.leq[L.bottom, :].all() and L.leq[:, L.top].all()):
        raise NoBounds(f"{L.name}: bounds are not global")


def validate_lattice(
    covers: Sequence[Sequence[int]],
    n: Optional[int] = None,
    name: str = "L",
    labels: Optional[Sequence[str]] = None,
    max_n: Optional[int] = None,
) -> Lattice:
    """
    Validate a cover relation and return the Lattice it generates

    Args:
        covers: pairs [i, j] meaning i is covered by j
        n: element count (inferred from covers when omitted)
        max_n: size gate, defaults to settings.MAX_N

    Raises:
        CycleInCovers, NoBounds, NotALattice, TooLarge
    """
    max_n = max_n or settings.MAX_N
    if n is None:
        n = 1 + max((v for pair in covers for v in pair), default=0)
    if n < 1:
        raise NotALattice(f"{name}: a lattice needs at least one element")
    if n > max_n:
        raise TooLarge(f"{name}: {n} elements exceeds the size gate {max_n}")

    graph = nx.DiGraph()
    graph.add_nodes_from(range(n))
    for i, j in covers:
        if not (0 <= i < n and 0 <= j < n):
            raise NotALattice(f"{name}: cover [{i}, {j}] out of range")
        graph.add_edge(int(i), int(j))

    if not nx.is_directed_acyclic_graph(graph):
        cycle = nx.find_cycle(graph)
        raise CycleInCovers(f"{name}: covers contain a cycle {cycle}", witness=cycle)

    closure = nx.transitive_closure_dag(graph)
    leq = np.eye(n, dtype=bool)
    for a, b in closure.edges:
        leq[a, b] = True

    lattice = lattice_from_order(leq, name=name, labels=labels or ())
    logger.debug(f"Validated lattice {name} with {n} elements")
    return lattice


def lattice_from_sets(sets: Sequence[ElemSet], name: str = "L", labels: Sequence[str] = ()) -> Lattice:
    """Lattice of a family of sets ordered by inclusion"""
    n = len(sets)
    leq = np.array([[is_subset(sets[i], sets[j]) for j in range(n)] for i in range(n)], dtype=bool)
    return lattice_from_order(leq, name=name, labels=labels, sets=sets)


def lattice_from_dump(dump: LatticeDump) -> Lattice:
    """Rebuild a lattice from its tables; a <= b iff meet(a, b) = a"""
    meet = np.array(dump.meet, dtype=np.int64)
    n = dump.n
    leq = meet == np.arange(n)[:, None]
    return lattice_from_order(leq, name=dump.name, labels=dump.labels)


def lattice_dump(L: Lattice) -> LatticeDump:
    return LatticeDump(
        name=L.name, n=L.n,
        join=L.join.tolist(), meet=L.meet.tolist(),
        bottom=L.bottom, top=L.top, labels=list(L.labels),
    )


def chain(length: int, name: Optional[str] = None) -> Lattice:
    """Chain 0 < 1 < ... < length-1"""
    return validate_lattice([[i, i + 1] for i in range(length - 1)], n=length, name=name or f"C{length}")


def product(L1: Lattice, L2: Lattice, name: Optional[str] = None) -> Lattice:
    """Direct product; element (i, j) has index i * |L2| + j"""
    leq = np.kron(L1.leq.astype(np.int64), L2.leq.astype(np.int64)) > 0
    labels = [f"({a},{b})" for a in L1.labels for b in L2.labels]
    return lattice_from_order(leq, name=name or f"{L1.name}x{L2.name}", labels=labels)


def cover_pairs(L: Lattice) -> List[Tuple[int, int]]:
    """Hasse diagram edges (a, b) with a covered by b"""
    graph = nx.DiGraph()
    graph.add_nodes_from(range(L.n))
    graph.add_edges_from((int(a), int(b)) for a, b in np.argwhere(L.leq) if a != b)
    return sorted(nx.transitive_reduction(graph).edges)


# ---------------------------------------------------------------------------
# Identities
# ---------------------------------------------------------------------------

def _triples(n: int):
    r = np.arange(n)
    return np.meshgrid(r, r, r, indexing="ij")


def is_modular(L: Lattice) -> Tuple[bool, Optional[Triple]]:
    """
    Check x <= z  =>  x v (y ^ z) = (x v y) ^ z over all triples

    Returns:
        (True, None) or (False, first violating (x, y, z))
    """
    J, M = L.join, L.meet
    X, Y, Z = _triples(L.n)
    bad = L.leq[X, Z] & (J[X, M[Y, Z]] != M[J[X, Y], Z])
    if bad.any():
        x, y, z = (int(v) for v in np.argwhere(bad)[0])
        return False, (x, y, z)
    return True, None


def satisfies_dual_identities(L: Lattice) -> Tuple[bool, Optional[Triple]]:
    """
    (x ^ y) v (x ^ z) = x ^ (y v (x ^ z)) and its dual, over all triples
    Independent oracle for is_modular.
    """
    J, M = L.join, L.meet
    X, Y, Z = _triples(L.n)
    first = J[M[X, Y], M[X, Z]] != M[X, J[Y, M[X, Z]]]
    second = M[J[X, Y], J[X, Z]] != J[X, M[Y, J[X, Z]]]
    bad = first | second
    if bad.any():
        x, y, z = (int(v) for v in np.argwhere(bad)[0])
        return False, (x, y, z)
    return True, None


def is_distributive(L: Lattice) -> bool:
    J, M = L.join, L.meet
    X, Y, Z = _triples(L.n)
    return bool((M[X, J[Y, Z]] == J[M[X, Y], M[X, Z]]).all())


# ---------------------------------------------------------------------------
# Sublattices
# ---------------------------------------------------------------------------

def sublattice_closure(L: Lattice, seed: ElemSet) -> ElemSet:
    """Smallest subset containing seed that is closed under join and meet"""
    if seed == 0:
        raise ValueError("seed must be nonempty")
    members = set(iter_bits(seed))
    worklist = deque(sorted(members))
    while worklist:
        x = worklist.popleft()
        for y in list(members):
            for z in (L.j(x, y), L.m(x, y)):
                if z not in members:
                    members.add(z)
                    worklist.append(z)
    return from_indices(members)


def _closed(L: Lattice, K: ElemSet) -> bool:
    ks = to_indices(K)
    for a, b in itertools.combinations_with_replacement(ks, 2):
        if not (K >> L.j(a, b)) & 1 or not (K >> L.m(a, b)) & 1:
            return False
    return True


def is_complete_sublattice(L: Lattice, K: ElemSet) -> bool:
    """
    Finite rendering of closure under arbitrary meets and joins:
    pairwise closure plus bottom and top (the empty meet and join)
    """
    if K == 0:
        return False
    if not (K >> L.bottom) & 1 or not (K >> L.top) & 1:
        return False
    return _closed(L, K)


def complete_sublattices(L: Lattice) -> List[ElemSet]:
    """Every complete sublattice of L, ascending by bit-vector"""
    bounds = (1 << L.bottom) | (1 << L.top)
    inner = L.carrier & ~bounds
    return [s | bounds for s in submasks_ascending(inner) if _closed(L, s | bounds)]


def induced_sublattice(L: Lattice, K: ElemSet, name: Optional[str] = None) -> Tuple[Lattice, Tuple[int, ...]]:
    """
    K as a lattice in its own right
    Element i of the result is the i-th smallest index of K in L.
    """
    ks = tuple(to_indices(K))
    if not _closed(L, K):
        raise ClosureFailure(f"{bitfmt(L, K)} is not a sublattice of {L.name}")
    leq = L.leq[np.ix_(ks, ks)]
    labels = [L.labels[k] for k in ks]
    return lattice_from_order(leq, name=name or f"{L.name}|K", labels=labels), ks


def bitfmt(L: Lattice, bits: ElemSet) -> str:
    return "{" + ",".join(L.labels[i] for i in iter_bits(bits)) + "}"


# ---------------------------------------------------------------------------
# Ideals
# ---------------------------------------------------------------------------

def is_ideal(L: Lattice, bits: ElemSet) -> bool:
    if bits == 0:
        return False
    members = to_indices(bits)
    for a in members:
        if not is_subset(L.downset(a), bits):
            return False
    return all((bits >> L.j(a, b)) & 1 for a, b in itertools.combinations(members, 2))


def principal_ideal(L: Lattice, a: int) -> Ideal:
    """(a] = {b : b <= a}"""
    return Ideal(members=L.downset(a), width=L.n)


def enumerate_ideals(L: Lattice) -> List[ElemSet]:
    """
    All ideals of L, ascending by bit-vector
    Down-sets are enumerated by backtracking along a linear extension and
    then filtered for join closure.
    """
    strict_below = [L.downset(x) & ~(1 << x) for x in range(L.n)]
    order = sorted(range(L.n), key=lambda x: (popcount(strict_below[x]), x))
    found = []

    def rec(i: int, current: ElemSet):
        if i == len(order):
            if current and is_ideal(L, current):
                found.append(current)
            return
        x = order[i]
        rec(i + 1, current)
        if is_subset(strict_below[x], current):
            rec(i + 1, current | (1 << x))

    rec(0, 0)
    return sorted(found)


def ideals(L: Lattice) -> Lattice:
    """
    Lattice of all ideals ordered by inclusion
    For finite L every ideal is principal; the isomorphism a -> (a] is asserted.
    """
    family = enumerate_ideals(L)
    labels = [f"({L.labels[_generator(L, J)]}]" for J in family]
    result = lattice_from_sets(family, name=f"Id {L.name}", labels=labels)

    index = {J: i for i, J in enumerate(family)}
    iso = [index.get(L.downset(a)) for a in range(L.n)]
    if None in iso or len(set(iso)) != L.n or len(family) != L.n:
        raise MismatchFound(f"Id {L.name} is not isomorphic to {L.name} via principal ideals")
    for a in range(L.n):
        for b in range(L.n):
            if result.j(iso[a], iso[b]) != iso[L.j(a, b)] or result.m(iso[a], iso[b]) != iso[L.m(a, b)]:
                raise MismatchFound(f"principal ideal map fails to preserve ({a}, {b})", witness=(a, b))
    return result


def _generator(L: Lattice, J: ElemSet) -> int:
    """Join of all members of a finite ideal"""
    g = L.bottom
    for a in iter_bits(J):
        g = L.j(g, a)
    return g


# ---------------------------------------------------------------------------
# Homomorphisms
# ---------------------------------------------------------------------------

def enumerate_lattice_homs(L1: Lattice, L2: Lattice, require_bounds: bool = False) -> Iterator[LatticeHom]:
    """
    Yield every join- and meet-preserving map L1 -> L2

    Elements are assigned in ascending index order; each join/meet
    constraint is checked as soon as all three of its elements are assigned.
    """
    J1, M1, J2, M2 = L1.join, L1.meet, L2.join, L2.meet
    buckets: List[List[Tuple[int, int, int, np.ndarray]]] = [[] for _ in range(L1.n)]
    for p in range(L1.n):
        for q in range(p, L1.n):
            for table1, table2 in ((J1, J2), (M1, M2)):
                r = int(table1[p, q])
                buckets[max(p, q, r)].append((p, q, r, table2))

    def candidates(i: int) -> List[int]:
        options = set(range(L2.n))
        if require_bounds and i == L1.bottom:
            options &= {L2.bottom}
        if require_bounds and i == L1.top:
            options &= {L2.top}
        return sorted(options)

    image = [-1] * L1.n

    def rec(i: int) -> Iterator[LatticeHom]:
        if i == L1.n:
            bounded = image[L1.bottom] == L2.bottom and image[L1.top] == L2.top
            yield LatticeHom(L1, L2, tuple(image), preserves_bounds=bounded)
            return
        for v in candidates(i):
            image[i] = v
            if all(table2[image[p], image[q]] == image[r] for p, q, r, table2 in buckets[i]):
                yield from rec(i + 1)
        image[i] = -1

    yield from rec(0)


def is_lattice_hom(h: LatticeHom) -> bool:
    f = np.array(h.mapping)
    L1, L2 = h.source, h.target
    return bool((f[L1.join] == L2.join[f[:, None], f[None, :]]).all()
                and (f[L1.meet] == L2.meet[f[:, None], f[None, :]]).all())


def is_isomorphism(h: LatticeHom) -> bool:
    return h.is_bijective and is_lattice_hom(h)


def automorphisms(L: Lattice) -> List[LatticeHom]:
    """Bijective endomorphisms; closed under compose"""
    return [h for h in enumerate_lattice_homs(L, L, require_bounds=True) if h.is_bijective]


def compose(first: LatticeHom, second: LatticeHom) -> LatticeHom:
    """second after first"""
    mapping = tuple(second.mapping[v] for v in first.mapping)
    return LatticeHom(first.source, second.target, mapping,
                      preserves_bounds=first.preserves_bounds and second.preserves_bounds)


def is_epic_sublattice_bounded(
    L: Lattice,
    K: ElemSet,
    targets: Sequence[Lattice],
    require_bounds: bool = True,
) -> EpiVerdict:
    """
    Bounded epicness of K in L relative to an explicit list of targets

    For each target W all homs L -> W are grouped by their restriction to K;
    two distinct homs in one group form a NotEpic witness. When the identity
    is in that group it is reported as f.
    """
    ks = to_indices(K)
    identity = tuple(range(L.n))
    certificates = []
    for W in targets:
        homs = list(enumerate_lattice_homs(L, W, require_bounds=require_bounds))
        groups: Dict[Tuple[int, ...], List[LatticeHom]] = {}
        for h in homs:
            groups.setdefault(tuple(h.mapping[k] for k in ks), []).append(h)
        pairs = 0
        for group in groups.values():
            pairs += len(group) * len(group)
            if len(group) > 1:
                group.sort(key=lambda h: h.mapping != identity)
                f, g = group[0], group[1]
                logger.info(f"{bitfmt(L, K)} not epic in {L.name}: distinguished by homs into {W.name}")
                certificates.append(TargetCertificate(target=W.name, hom_count=len(homs), pairs_examined=pairs))
                witness = EpiWitness(
                    target=W.name,
                    domain=list(range(L.n)),
                    subobject=ks,
                    f=list(f.mapping),
                    g=list(g.mapping),
                    source_lattice=lattice_dump(L),
                    target_lattice=lattice_dump(W),
                )
                return EpiVerdict(
                    kind=StructureKind.LATTICE,
                    outcome=EpiOutcome.NOT_EPIC,
                    witness=witness,
                    certificate=EpiCertificate(targets_examined=certificates, note="stopped at first witness"),
                )
        certificates.append(TargetCertificate(target=W.name, hom_count=len(homs), pairs_examined=pairs))

    note = "no targets examined" if not targets else f"epic relative to {len(targets)} target(s) only"
    return EpiVerdict(
        kind=StructureKind.LATTICE,
        outcome=EpiOutcome.EPIC_RELATIVE,
        certificate=EpiCertificate(targets_examined=certificates, note=note),
    )


def replay_lattice_witness(witness: EpiWitness) -> bool:
    """Re-check a lattice witness from its embedded tables alone"""
    L = lattice_from_dump(witness.source_lattice)
    W = lattice_from_dump(witness.target_lattice)
    f = LatticeHom(L, W, tuple(witness.f))
    g = LatticeHom(L, W, tuple(witness.g))
    if not (is_lattice_hom(f) and is_lattice_hom(g)):
        return False
    agree = all(f(k) == g(k) for k in witness.subobject)
    return agree and f.mapping != g.mapping
