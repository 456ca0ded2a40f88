"""Causal structure of a trace: the happened-before strict partial order
(same-site succession, messages, transitivity) and the symmetric causality
relation it induces.

Process sets are handled as integer bitmasks indexed by process ordinal,
i.e. the position in (site index, position) order.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

from .trace_model import ProcessId, Trace


class CycleError(ValueError):
    """The order/message edges of a trace admit a causal cycle."""

    def __init__(self, edges: list[tuple[str, str]]):
        chain = " -> ".join([a for a, _ in edges] + [edges[0][0]])
        super().__init__(f"causal cycle: {chain}")
        self.edges = edges


@dataclass(frozen=True)
class CausalStructure:
    """Bitmask rows of happened-before and of the symmetric causality
    relation, plus name/ordinal bookkeeping."""

    processes: tuple[ProcessId, ...]
    before_masks: tuple[int, ...]
    causality_masks: tuple[int, ...]

    @cached_property
    def names(self) -> tuple[str, ...]:
        return tuple(p.name for p in self.processes)

    @cached_property
    def _ordinals(self) -> dict[str, int]:
        return {p.name: i for i, p in enumerate(self.processes)}

    @property
    def size(self) -> int:
        return len(self.processes)

    @property
    def full_mask(self) -> int:
        return (1 << len(self.processes)) - 1

    def ordinal(self, name: str) -> int:
        return self._ordinals[name]

    def mask_of(self, members: Iterable[str]) -> int:
        mask = 0
        for name in members:
            mask |= 1 << self._ordinals[name]
        return mask

    def names_of(self, mask: int) -> frozenset[str]:
        return frozenset(self.names[i] for i in _bit_indices(mask))

    def sorted_names_of(self, mask: int) -> list[str]:
        return [self.names[i] for i in _bit_indices(mask)]

    def happened_before(self, p: str, q: str) -> bool:
        return bool(self.before_masks[self.ordinal(p)] >> self.ordinal(q) & 1)

    def causally_related(self, p: str, q: str) -> bool:
        """Happened-before in either direction; irreflexive and symmetric."""
        return bool(self.causality_masks[self.ordinal(p)] >> self.ordinal(q) & 1)

    def neighborhood(self, p: str) -> frozenset[str]:
        """All processes causally related to p."""
        return self.names_of(self.causality_masks[self.ordinal(p)])

    def temporally_contains(self, covers: Iterable[str], r: str) -> bool:
        """True when every process causally related to all of ``covers`` is
        causally related to ``r``; rejects an empty cover set."""
        cover_list = list(covers)
        if not cover_list:
            raise ValueError("covers must be non-empty")
        premise = self.full_mask
        for q in cover_list:
            premise &= self.causality_masks[self.ordinal(q)]
        return premise & ~self.causality_masks[self.ordinal(r)] == 0


def _bit_indices(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _topological_order(n: int, direct: list[list[int]]) -> list[int]:
    indegree = [0] * n
    for succs in direct:
        for j in succs:
            indegree[j] += 1
    order = [i for i in range(n) if indegree[i] == 0]
    cursor = 0
    while cursor < len(order):
        for j in direct[order[cursor]]:
            indegree[j] -= 1
            if indegree[j] == 0:
                order.append(j)
        cursor += 1
    return order


def _find_cycle(
    processes: tuple[ProcessId, ...], direct: list[list[int]], leftover: set[int]
) -> list[tuple[str, str]]:
    # every leftover node keeps an unprocessed predecessor, so walking
    # predecessors inside the leftover set must revisit a node
    preds: dict[int, list[int]] = {i: [] for i in leftover}
    for a in leftover:
        for b in direct[a]:
            if b in leftover:
                preds[b].append(a)
    node = min(leftover)
    path = [node]
    position = {node: 0}
    while True:
        node = min(preds[node])
        if node in position:
            tail = path[position[node] :]
            nodes = [tail[0]] + tail[1:][::-1]
            closed = nodes + [nodes[0]]
            return [
                (processes[a].name, processes[b].name)
                for a, b in zip(closed, closed[1:])
            ]
        position[node] = len(path)
        path.append(node)


def happened_before(trace: Trace) -> CausalStructure:
    """Build the happened-before order of a trace, or raise CycleError with
    one cycle's edge list if the relation is not acyclic."""
    procs = trace.processes
    n = len(procs)
    index = {p.name: i for i, p in enumerate(procs)}
    if len(index) != n:
        raise ValueError("duplicate process names")
    direct: list[list[int]] = [[] for _ in range(n)]
    for site in trace.sites:
        for a, b in zip(site.processes, site.processes[1:]):
            direct[index[a.name]].append(index[b.name])
    for message in trace.messages:
        direct[index[message.sender.name]].append(index[message.receiver.name])

    order = _topological_order(n, direct)
    if len(order) < n:
        leftover = set(range(n)) - set(order)
        raise CycleError(_find_cycle(procs, direct, leftover))

    reach = [0] * n
    for i in reversed(order):
        acc = 0
        for j in direct[i]:
            acc |= (1 << j) | reach[j]
        reach[i] = acc
    causality = list(reach)
    for i in range(n):
        for j in _bit_indices(reach[i]):
            causality[j] |= 1 << i
    return CausalStructure(procs, tuple(reach), tuple(causality))
