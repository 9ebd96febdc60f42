"""
Bit-vector helpers for ElemSet

An ElemSet is a plain int whose bit i is set when element i of the carrier
is a member. Width is carried by the owning structure.
"""
from typing import Iterable, Iterator, List

ElemSet = int


def from_indices(indices: Iterable[int]) -> ElemSet:
    bits = 0
    for i in indices:
        bits |= 1 << i
    return bits


def to_indices(bits: ElemSet) -> List[int]:
    return list(iter_bits(bits))


def iter_bits(bits: ElemSet) -> Iterator[int]:
    """Yield member indices in ascending order"""
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


def full(width: int) -> ElemSet:
    return (1 << width) - 1


def popcount(bits: ElemSet) -> int:
    return bin(bits).count("1")


def is_subset(a: ElemSet, b: ElemSet) -> bool:
    return a & ~b == 0


def submasks_ascending(mask: ElemSet) -> List[ElemSet]:
    """All submasks of mask (including 0 and mask) in ascending order"""
    subs = []
    s = mask
    while True:
        subs.append(s)
        if s == 0:
            break
        s = (s - 1) & mask
    subs.reverse()
    return subs


def fmt(bits: ElemSet, labels=None) -> str:
    """Render as {a,b,c} using labels when given"""
    names = [labels[i] if labels else str(i) for i in iter_bits(bits)]
    return "{" + ",".join(names) + "}"
