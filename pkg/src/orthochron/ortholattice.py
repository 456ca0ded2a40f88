"""Bi-orthogonally closed process sets over a causal structure, and the
finite ortholattice they form.

The orthocomplement of a set is the intersection of the causality
neighborhoods of its members (the empty intersection being the full process
set).  Every orthocomplement is itself closed, so the closed sets are
exactly the intersection closure of the neighborhoods together with the
full set: a Moore family, enumerated by a pairwise-intersection worklist.

Meet is set intersection; join is the orthocomplement of the meet of the
orthocomplements, equivalently the least closed superset of the union.
Elements are kept in canonical order: by cardinality, then lexicographically
by sorted member ordinals.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

from .causal_core import CausalStructure, _bit_indices

__all__ = [
    "DEFAULT_CAP",
    "CapExceededError",
    "LawCheck",
    "LAWS",
    "OrthoLattice",
    "ortho",
    "ortho_mask",
    "close",
    "is_closed",
    "enumerate_closed",
    "format_members",
]

DEFAULT_CAP = 1_000_000

LAWS = ("ortholattice-axioms", "de-morgan", "distributivity", "orthomodularity")


class CapExceededError(RuntimeError):
    """Closed-set enumeration grew past the configured cap."""

    def __init__(self, cap: int, count: int):
        super().__init__(
            f"closed-set enumeration exceeded cap {cap} (reached {count} elements)"
        )
        self.cap = cap
        self.count = count


def ortho_mask(cs: CausalStructure, mask: int) -> int:
    """Orthocomplement at the bitmask level."""
    out = cs.full_mask
    rest = mask
    while rest:
        low = rest & -rest
        out &= cs.causality_masks[low.bit_length() - 1]
        rest ^= low
    return out


def ortho(cs: CausalStructure, members: Iterable[str]) -> frozenset[str]:
    """Processes causally related to every member of the given set."""
    return cs.names_of(ortho_mask(cs, cs.mask_of(members)))


def close(cs: CausalStructure, members: Iterable[str]) -> frozenset[str]:
    """Least bi-orthogonally closed superset (double orthocomplement)."""
    return cs.names_of(ortho_mask(cs, ortho_mask(cs, cs.mask_of(members))))


def is_closed(cs: CausalStructure, members: Iterable[str]) -> bool:
    mask = cs.mask_of(members)
    return ortho_mask(cs, ortho_mask(cs, mask)) == mask


def _canonical_key(mask: int):
    return (mask.bit_count(), tuple(_bit_indices(mask)))


def enumerate_closed(cs: CausalStructure, cap: int = DEFAULT_CAP) -> OrthoLattice:
    """Enumerate every closed set as a Moore family.

    Seeds the worklist with the full set and all neighborhoods, then closes
    under pairwise intersection.  Raises CapExceededError as soon as the
    family exceeds ``cap`` elements.
    """
    if cap <= 0:
        raise ValueError("cap must be positive")
    family = {cs.full_mask}
    family.update(cs.causality_masks)
    if len(family) > cap:
        raise CapExceededError(cap, len(family))
    frontier = list(family)
    while frontier:
        a = frontier.pop()
        for b in list(family):
            c = a & b
            if c not in family:
                family.add(c)
                frontier.append(c)
                if len(family) > cap:
                    raise CapExceededError(cap, len(family))
    masks = tuple(sorted(family, key=_canonical_key))
    position = {m: i for i, m in enumerate(masks)}
    complement = tuple(position[ortho_mask(cs, m)] for m in masks)
    return OrthoLattice(cs, masks, complement)


def format_members(names: Iterable[str]) -> str:
    return "{" + ", ".join(names) + "}"


@dataclass(frozen=True)
class LawCheck:
    """Outcome of one law check; counterexample elements are in the scan's
    variable order, detail holds the evaluated sides."""

    law: str
    holds: bool
    counterexample: tuple[frozenset[str], ...] | None = None
    detail: str = ""


@dataclass(frozen=True)
class OrthoLattice:
    """All closed sets of a causal structure, in canonical order."""

    structure: CausalStructure
    masks: tuple[int, ...]
    complement: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.masks)

    @cached_property
    def _position(self) -> dict[int, int]:
        return {m: i for i, m in enumerate(self.masks)}

    @cached_property
    def elements(self) -> tuple[frozenset[str], ...]:
        return tuple(self.structure.names_of(m) for m in self.masks)

    @property
    def bottom(self) -> frozenset[str]:
        return self.elements[0]

    @property
    def top(self) -> frozenset[str]:
        return self.elements[-1]

    @cached_property
    def downset_masks(self) -> tuple[int, ...]:
        """For each element, the bitmask over element indices of all elements
        included in it (itself included)."""
        down = []
        for i, m in enumerate(self.masks):
            d = 0
            # canonical order is cardinality-major, so subsets sit at or below i
            for j in range(i + 1):
                mj = self.masks[j]
                if mj & m == mj:
                    d |= 1 << j
            down.append(d)
        return tuple(down)

    def index_of(self, members: Iterable[str]) -> int:
        mask = self.structure.mask_of(members)
        try:
            return self._position[mask]
        except KeyError:
            raise ValueError(
                f"{format_members(self.structure.sorted_names_of(mask))} "
                "is not a closed set of this lattice"
            ) from None

    def complement_of(self, members: Iterable[str]) -> frozenset[str]:
        return self.elements[self.complement[self.index_of(members)]]

    def meet(self, a: Iterable[str], b: Iterable[str]) -> frozenset[str]:
        return self.elements[self._meet_index(self.index_of(a), self.index_of(b))]

    def join(self, a: Iterable[str], b: Iterable[str]) -> frozenset[str]:
        return self.elements[self._join_index(self.index_of(a), self.index_of(b))]

    def _meet_index(self, i: int, j: int) -> int:
        return self._position[self.masks[i] & self.masks[j]]

    def _join_index(self, i: int, j: int) -> int:
        return self.complement[self._meet_index(self.complement[i], self.complement[j])]

    def hasse_edges(self) -> list[tuple[int, int]]:
        """Cover pairs (lower index, upper index) of inclusion, ascending."""
        edges = []
        down = self.downset_masks
        for b in range(len(self.masks)):
            strict = down[b] & ~(1 << b)
            shadowed = 0
            for c in _bit_indices(strict):
                shadowed |= down[c] & ~(1 << c)
            for a in _bit_indices(strict & ~shadowed):
                edges.append((a, b))
        edges.sort()
        return edges

    def _fmt(self, index: int) -> str:
        return format_members(self.structure.sorted_names_of(self.masks[index]))

    def check_laws(self, law: str) -> LawCheck:
        """Exhaustively check one law over the whole lattice.

        Counterexamples are the first found scanning element tuples in
        lexicographic canonical-index order, which keeps them stable.
        """
        if law == "ortholattice-axioms":
            return self._check_axioms()
        if law == "de-morgan":
            return self._check_de_morgan()
        if law == "distributivity":
            return self._check_distributivity()
        if law == "orthomodularity":
            return self._check_orthomodularity()
        raise ValueError(f"unknown law {law!r}; expected one of {', '.join(LAWS)}")

    def _check_axioms(self) -> LawCheck:
        law = "ortholattice-axioms"
        n = len(self.masks)
        comp = self.complement
        down = self.downset_masks
        if self.masks[0] != 0 or self.masks[-1] != self.structure.full_mask:
            return LawCheck(law, False, (), "bottom or top missing")
        for i in range(n):
            if comp[comp[i]] != i:
                return LawCheck(
                    law,
                    False,
                    (self.elements[i],),
                    f"complement not involutive at a = {self._fmt(i)}",
                )
            if self.masks[i] & self.masks[comp[i]] != 0:
                return LawCheck(
                    law, False, (self.elements[i],), f"a & ~a != {{}} at a = {self._fmt(i)}"
                )
            if self._join_index(i, comp[i]) != n - 1:
                return LawCheck(
                    law, False, (self.elements[i],), f"a | ~a != top at a = {self._fmt(i)}"
                )
        for i in range(n):
            for j in range(n):
                forward = bool(down[j] >> i & 1)
                mirrored = bool(down[comp[i]] >> comp[j] & 1)
                if forward != mirrored:
                    return LawCheck(
                        law,
                        False,
                        (self.elements[i], self.elements[j]),
                        f"inclusion not antitone under complement at "
                        f"a = {self._fmt(i)}, b = {self._fmt(j)}",
                    )
        return LawCheck(law, True)

    def _check_de_morgan(self) -> LawCheck:
        law = "de-morgan"
        n = len(self.masks)
        comp = self.complement
        for i in range(n):
            for j in range(n):
                if comp[self._join_index(i, j)] != self._meet_index(comp[i], comp[j]):
                    return LawCheck(
                        law,
                        False,
                        (self.elements[i], self.elements[j]),
                        f"~(a | b) != ~a & ~b at a = {self._fmt(i)}, b = {self._fmt(j)}",
                    )
                if comp[self._meet_index(i, j)] != self._join_index(comp[i], comp[j]):
                    return LawCheck(
                        law,
                        False,
                        (self.elements[i], self.elements[j]),
                        f"~(a & b) != ~a | ~b at a = {self._fmt(i)}, b = {self._fmt(j)}",
                    )
        return LawCheck(law, True)

    def _check_distributivity(self) -> LawCheck:
        law = "distributivity"
        n = len(self.masks)
        masks = self.masks
        for i in range(n):
            for j in range(n):
                join_mask = masks[self._join_index(i, j)]
                for k in range(n):
                    lhs = join_mask & masks[k]
                    rhs_index = self._join_index(
                        self._meet_index(i, k), self._meet_index(j, k)
                    )
                    if lhs != masks[rhs_index]:
                        lhs_names = format_members(self.structure.sorted_names_of(lhs))
                        return LawCheck(
                            law,
                            False,
                            (self.elements[i], self.elements[j], self.elements[k]),
                            f"(a | b) & c = {lhs_names} but "
                            f"(a & c) | (b & c) = {self._fmt(rhs_index)}",
                        )
        return LawCheck(law, True)

    def _check_orthomodularity(self) -> LawCheck:
        law = "orthomodularity"
        n = len(self.masks)
        comp = self.complement
        down = self.downset_masks
        for i in range(n):
            for j in range(n):
                if not down[j] >> i & 1:
                    continue
                rhs = self._join_index(i, self._meet_index(comp[i], j))
                if rhs != j:
                    return LawCheck(
                        law,
                        False,
                        (self.elements[i], self.elements[j]),
                        f"a <= b but a | (~a & b) = {self._fmt(rhs)} != b "
                        f"at a = {self._fmt(i)}, b = {self._fmt(j)}",
                    )
        return LawCheck(law, True)

    def to_json_dict(self) -> dict:
        return {
            "elements": [self.structure.sorted_names_of(m) for m in self.masks],
            "complement": list(self.complement),
            "hasse": [list(edge) for edge in self.hasse_edges()],
        }

    def to_dot(self) -> str:
        lines = ["digraph ortholattice {", "  rankdir=BT;"]
        for i, mask in enumerate(self.masks):
            label = format_members(self.structure.sorted_names_of(mask))
            lines.append(f'  n{i} [label="{label}"];')
        for a, b in self.hasse_edges():
            lines.append(f"  n{a} -> n{b};")
        lines.append("}")
        return "\n".join(lines) + "\n"
