"""Sorted-list algebra shared by every typing system in this package.

An L-type is a strictly ascending, duplicate-free tuple over an ordered index
domain: plain naturals, or resource indices (depth, branch path).  The algebra
consists of the partial merge, the partial decrement, the total increment, and
filters by three basic predicates on the natural component.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Tuple, Union


class TypeFailure(Exception):
    """A typing rule could not be applied."""


class MergeConflict(TypeFailure):
    """Both operand lists contain the same index.

    Carries the smallest conflicting index so messages are deterministic.
    """

    def __init__(self, index):
        self.index = index
        super().__init__(f"lists share index {index_text(index)}")


class DecrementZero(TypeFailure):
    """Decrement hit an index whose natural component is already 0."""

    def __init__(self, index=None):
        self.index = index
        super().__init__("cannot decrement a list containing a 0-level index")


@dataclass(frozen=True, slots=True)
class RIndex:
    """Resource index: a de Bruijn depth plus a 0/1 branch path ('' is empty)."""

    depth: int
    path: str = ""

    def __post_init__(self):
        if self.depth < 0:
            raise ValueError("depth must be a natural number")
        if self.path.strip("01"):
            raise ValueError("path must consist of 0/1 only")

    def key(self) -> Tuple[int, str]:
        return (self.depth, self.path)

    def __lt__(self, other: "RIndex") -> bool:
        return self.key() < other.key()

    def __str__(self) -> str:
        return f"{self.depth}_{self.path}" if self.path else str(self.depth)


Ix = Union[int, RIndex]
LType = Tuple[Ix, ...]


def compare_rindex(a: RIndex, b: RIndex) -> int:
    """Total order on resource indices: -1, 0, or 1.

    Lexicographic on (depth, path), where paths order by: empty before
    nonempty, 0 before 1 at the first differing bit, prefix before extension.
    That is exactly Python's string order on 0/1 strings.
    """
    if a.key() < b.key():
        return -1
    if a.key() > b.key():
        return 1
    return 0


def _key(ix: Ix):
    return ix.key() if isinstance(ix, RIndex) else ix


def level(ix: Ix) -> int:
    """Natural component of an index: the value itself, or the depth."""
    return ix.depth if isinstance(ix, RIndex) else ix


def is_ltype(l: Iterable[Ix]) -> bool:
    """True iff the sequence is strictly ascending under the domain order."""
    elems = tuple(l)
    return all(_key(a) < _key(b) for a, b in zip(elems, elems[1:]))


def merge(l1: LType, l2: LType) -> LType:
    """Sorted union of two disjoint L-types.

    Raises MergeConflict on the smallest shared index; merging two sorted
    lists front to front meets the smallest conflict first.
    """
    out = []
    i = j = 0
    while i < len(l1) and j < len(l2):
        a, b = l1[i], l2[j]
        ka, kb = _key(a), _key(b)
        if ka == kb:
            raise MergeConflict(a)
        if ka < kb:
            out.append(a)
            i += 1
        else:
            out.append(b)
            j += 1
    out.extend(l1[i:])
    out.extend(l2[j:])
    return tuple(out)


def _shift(ix: Ix, by: int) -> Ix:
    if isinstance(ix, RIndex):
        return RIndex(ix.depth + by, ix.path)
    return ix + by


def decrement(l: LType) -> LType:
    """Lower every natural component by 1; undefined on 0-level indices."""
    for ix in l:
        if level(ix) == 0:
            raise DecrementZero(ix)
    return tuple(_shift(ix, -1) for ix in l)


def increment(l: LType, times: int = 1) -> LType:
    """Raise every natural component by `times`; the identity at 0."""
    if times < 0:
        raise ValueError("times must be a natural number")
    if times == 0:
        return tuple(l)
    return tuple(_shift(ix, times) for ix in l)


@dataclass(frozen=True, slots=True)
class LessThan:
    i: int

    def __call__(self, k: int) -> bool:
        return k < self.i

    def __str__(self) -> str:
        return f"<{self.i}"


@dataclass(frozen=True, slots=True)
class GreaterThan:
    i: int

    def __call__(self, k: int) -> bool:
        return k > self.i

    def __str__(self) -> str:
        return f">{self.i}"


@dataclass(frozen=True, slots=True)
class AtLeast:
    i: int

    def __call__(self, k: int) -> bool:
        return k >= self.i

    def __str__(self) -> str:
        return f">={self.i}"


BasicPredicate = Union[LessThan, GreaterThan, AtLeast]


def filter_ltype(p: BasicPredicate, l: LType) -> LType:
    """Keep the indices whose natural component satisfies p, in order."""
    return tuple(ix for ix in l if p(level(ix)))


def index_text(ix: Ix) -> str:
    """One index in L-type display form: naturals bare, resource as (n,path)."""
    if isinstance(ix, RIndex):
        return f"({ix.depth},{ix.path or 'e'})"
    return str(ix)


def ltype_text(l: LType) -> str:
    """Canonical display: "[0,2,5]" or "[(0,01),(1,e)]"."""
    return "[" + ",".join(index_text(ix) for ix in l) + "]"


@dataclass(frozen=True, slots=True)
class Derivation:
    """One node of a typing derivation: rule name, subject, resulting L-type."""

    rule: str
    term: object
    ltype: LType
    children: Tuple["Derivation", ...] = ()

    def lines(self, printer, indent: int = 0):
        yield "  " * indent + f"{self.rule} : {printer(self.term)} : {ltype_text(self.ltype)}"
        for child in self.children:
            yield from child.lines(printer, indent + 1)


@dataclass(frozen=True, slots=True)
class Typing:
    """A term together with its inferred L-type and full derivation."""

    term: object
    ltype: LType
    derivation: Derivation
