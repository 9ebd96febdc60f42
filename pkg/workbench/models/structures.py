"""
Immutable domain structures
Lattices, ternary frames, complex algebras and the maps between them.
Tables are numpy arrays frozen on construction so values can be shared freely.
"""
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from workbench.utils.bitset import ElemSet, from_indices, full, iter_bits


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Lattice:
    """
    Finite bounded lattice with explicit order, join and meet tables
    `sets` is filled when the carrier is a family of ElemSets (ideals, E(A))
    """
    n: int
    leq: np.ndarray
    join: np.ndarray
    meet: np.ndarray
    bottom: int
    top: int
    name: str = "L"
    labels: Tuple[str, ...] = ()
    sets: Tuple[ElemSet, ...] = ()

    def __post_init__(self):
        _freeze(self.leq)
        _freeze(self.join)
        _freeze(self.meet)
        if not self.labels:
            object.__setattr__(self, "labels", tuple(str(i) for i in range(self.n)))

    @property
    def elements(self) -> range:
        return range(self.n)

    @property
    def carrier(self) -> ElemSet:
        return full(self.n)

    def le(self, a: int, b: int) -> bool:
        return bool(self.leq[a, b])

    def j(self, a: int, b: int) -> int:
        return int(self.join[a, b])

    def m(self, a: int, b: int) -> int:
        return int(self.meet[a, b])

    def downset(self, a: int) -> ElemSet:
        """(a] as an ElemSet"""
        return from_indices(int(i) for i in np.flatnonzero(self.leq[:, a]))

    def __repr__(self):
        return f"<Lattice(name={self.name}, n={self.n})>"


@dataclass(frozen=True)
class Ideal:
    """Nonempty, downward closed, join closed subset of a lattice"""
    members: ElemSet
    width: int


@dataclass(frozen=True)
class LatticeHom:
    source: Lattice
    target: Lattice
    mapping: Tuple[int, ...]
    preserves_bounds: bool = False

    def __call__(self, a: int) -> int:
        return self.mapping[a]

    @property
    def is_bijective(self) -> bool:
        return self.source.n == self.target.n and len(set(self.mapping)) == self.source.n


@dataclass(frozen=True, eq=False)
class TernaryFrame:
    """
    Carrier {0..n-1}, ternary relation R and distinguished element zero
    R is a boolean (n, n, n) array; its flat view is the packed triple set
    indexed by a*n*n + b*n + c.
    """
    n: int
    R: np.ndarray
    zero: int
    name: str = "F"

    def __post_init__(self):
        _freeze(self.R)

    @property
    def packed(self) -> np.ndarray:
        return self.R.reshape(-1)

    def holds(self, a: int, b: int, c: int) -> bool:
        return bool(self.packed[a * self.n * self.n + b * self.n + c])

    def triples(self):
        return [tuple(int(v) for v in t) for t in np.argwhere(self.R)]


@dataclass(frozen=True, eq=False)
class BooleanMonoid:
    """
    Finite atomic relation algebra given by its atom structure
    Elements are ElemSets over the atoms; fusion is extended additively.
    """
    atoms: int
    fusion_atoms: Tuple[Tuple[ElemSet, ...], ...]
    identity: ElemSet
    converse_atoms: Tuple[int, ...]
    name: str = "A"
    frame_checked: bool = True
    labels: Tuple[str, ...] = ()

    def __post_init__(self):
        if not self.labels:
            object.__setattr__(self, "labels", tuple(str(i) for i in range(self.atoms)))

    @property
    def top(self) -> ElemSet:
        return full(self.atoms)

    @property
    def size(self) -> int:
        return 1 << self.atoms

    def fuse(self, x: ElemSet, y: ElemSet) -> ElemSet:
        """x ∘ y as the union of atom-level fusion sets"""
        result = 0
        ys = list(iter_bits(y))
        for a in iter_bits(x):
            row = self.fusion_atoms[a]
            for b in ys:
                result |= row[b]
        return result

    def converse(self, x: ElemSet) -> ElemSet:
        result = 0
        for a in iter_bits(x):
            result |= 1 << self.converse_atoms[a]
        return result

    def complement(self, x: ElemSet) -> ElemSet:
        return self.top & ~x

    def __repr__(self):
        return f"<BooleanMonoid(name={self.name}, atoms={self.atoms})>"


@dataclass(frozen=True, eq=False)
class Subalgebra:
    """
    Subuniverse of a BooleanMonoid
    `atoms` are the minimal nonzero elements; every element is a union of them.
    """
    ambient: BooleanMonoid
    elements: Tuple[ElemSet, ...]
    atoms: Tuple[ElemSet, ...]
    generators: Tuple[ElemSet, ...] = ()

    @classmethod
    def full(cls, algebra: BooleanMonoid) -> "Subalgebra":
        return cls(
            ambient=algebra,
            elements=tuple(range(algebra.size)),
            atoms=tuple(1 << a for a in range(algebra.atoms)),
        )

    def __contains__(self, x: ElemSet) -> bool:
        return x in self._members

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def _members(self) -> frozenset:
        cached = self.__dict__.get("_member_cache")
        if cached is None:
            cached = frozenset(self.elements)
            object.__setattr__(self, "_member_cache", cached)
        return cached

    def issubset(self, other: "Subalgebra") -> bool:
        return all(x in other for x in self.elements)


@dataclass(frozen=True, eq=False)
class AtomMap:
    """
    Map from the atoms of `source` to elements of `target`
    For the embedding construction, `source_elements[i]` is the lattice
    element behind atom i and `min_cover[x]` is the least K-element above x.
    """
    source: BooleanMonoid
    target: BooleanMonoid
    images: Tuple[ElemSet, ...]
    source_elements: Tuple[int, ...] = ()
    min_cover: Tuple[int, ...] = ()

    def with_image(self, atom: int, image: ElemSet) -> "AtomMap":
        images = list(self.images)
        images[atom] = image
        return AtomMap(self.source, self.target, tuple(images), self.source_elements, self.min_cover)


@dataclass(frozen=True, eq=False)
class RAHom:
    """
    Relation algebra homomorphism in atom-determined compact form
    images[i] is the image of source.atoms[i]
    """
    source: Subalgebra
    target: BooleanMonoid
    images: Tuple[ElemSet, ...]
    verification: Optional[str] = None

    def __call__(self, x: ElemSet) -> ElemSet:
        result = 0
        for atom, image in zip(self.source.atoms, self.images):
            if atom & x == atom:
                result |= image
        return result

    def table(self) -> Tuple[ElemSet, ...]:
        """Image of every source element, in source.elements order"""
        return tuple(self(x) for x in self.source.elements)

    def same_as(self, other: "RAHom") -> bool:
        return self.source.atoms == other.source.atoms and self.images == other.images
