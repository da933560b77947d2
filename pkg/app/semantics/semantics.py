"""
Token game: enabledness, firing, firing sequences and bounded exploration.

Search order is deterministic everywhere: successors are expanded in
lexicographic transition-id order.
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

from app.config import ORACLE_NODE_BUDGET, STATE_CAP, WITNESS_NODE_BUDGET
from app.models.exceptions import (ExplosionCap, InvalidSequence, NotEnabled, NotEnabledAt,
                                   UnknownTransition)
from app.models.net import FiringSequence, MarkedPetriNet, Marking, NodeId, PetriNet

logger = logging.getLogger(__name__)

Edge = Tuple[Marking, NodeId, Marking]


def _check_transition(net: PetriNet, t: NodeId) -> None:
    if t not in net.transitions:
        raise UnknownTransition(t)


def _enabled(net: PetriNet, tokens: Mapping[NodeId, int], t: NodeId) -> bool:
    return all(tokens.get(p, 0) >= net.weight(p, t) for p in net.pre(t))


def _fire(net: PetriNet, tokens: Mapping[NodeId, int], t: NodeId) -> Dict[NodeId, int]:
    result = dict(tokens)
    for p in net.pre(t):
        result[p] = result.get(p, 0) - net.weight(p, t)
        assert result[p] >= 0, f"firing {t} drove {p} negative"
    for p in net.post(t):
        result[p] = result.get(p, 0) + net.weight(t, p)
    return result


def _increases(net: PetriNet, t: NodeId, q: FrozenSet[NodeId]) -> bool:
    """True iff firing t strictly raises the token count of some place in q"""
    return any(net.weight(t, p) > net.weight(p, t) for p in net.post(t) if p in q)


def _sorted_transitions(net: PetriNet) -> List[NodeId]:
    return sorted(net.transitions)


def can_fire(net: PetriNet, tokens: Mapping[NodeId, int], t: NodeId) -> bool:
    """Enabledness on a plain token mapping, without id checks"""
    return _enabled(net, tokens, t)


def fire_tokens(net: PetriNet, tokens: Mapping[NodeId, int], t: NodeId) -> Dict[NodeId, int]:
    """Successor token mapping; t must be enabled"""
    return _fire(net, tokens, t)


def raised_places(net: PetriNet, t: NodeId, q: Iterable[NodeId]) -> List[NodeId]:
    """Places of q whose token count strictly grows when t fires, sorted"""
    q = frozenset(q)
    return sorted(p for p in net.post(t) if p in q and net.weight(t, p) > net.weight(p, t))


def is_enabled(s: MarkedPetriNet, t: NodeId) -> bool:
    """Every input place of t holds at least the arc weight"""
    _check_transition(s.net, t)
    return _enabled(s.net, s.marking, t)


def enabled_transitions(s: MarkedPetriNet) -> List[NodeId]:
    return [t for t in _sorted_transitions(s.net) if _enabled(s.net, s.marking, t)]


def fire(s: MarkedPetriNet, t: NodeId) -> Marking:
    """
    Fire t at the marking of s.

    Raises:
        UnknownTransition: t is not a transition of the net
        NotEnabled: t is not enabled
    """
    _check_transition(s.net, t)
    if not _enabled(s.net, s.marking, t):
        raise NotEnabled(t)
    return Marking(_fire(s.net, s.marking, t))


def fire_sequence(s: MarkedPetriNet, seq: Sequence[NodeId]) -> List[Marking]:
    """Markings M1..Mn reached by firing seq from the marking of s"""
    markings = []
    tokens: Mapping[NodeId, int] = s.marking
    for index, t in enumerate(seq):
        _check_transition(s.net, t)
        if not _enabled(s.net, tokens, t):
            raise NotEnabledAt(index, t)
        tokens = _fire(s.net, tokens, t)
        markings.append(Marking(tokens))
    return markings


def is_increasing(s: MarkedPetriNet, seq: Sequence[NodeId], q: Iterable[NodeId]) -> bool:
    """
    True iff seq is non-empty, fireable, and its last step strictly increases
    some place of q.

    Raises:
        InvalidSequence: seq is not fireable from s
    """
    try:
        markings = fire_sequence(s, seq)
    except NotEnabledAt as e:
        raise InvalidSequence(e.index, e.transition) from e
    if not markings:
        return False
    before = markings[-2] if len(markings) > 1 else s.marking
    return any(markings[-1][p] > before[p] for p in q)


def find_increasing_sequences(s: MarkedPetriNet, q: Iterable[NodeId], max_len: int,
                              node_budget: int = ORACLE_NODE_BUDGET) -> List[FiringSequence]:
    """
    Exhaustively enumerate every increasing firing sequence of length <= max_len.

    The firing tree is walked depth-first with children in lexicographic order,
    so the result is sorted the same way.

    Args:
        s: Marked net
        q: Criterion places
        max_len: Maximum sequence length
        node_budget: Maximum number of firing-tree nodes to visit

    Returns:
        List of sequences (tuples of transition ids)

    Raises:
        ExplosionCap: The tree has more than node_budget nodes within max_len
    """
    if max_len < 0:
        raise ValueError("max_len must be non-negative")
    net, q = s.net, frozenset(q)
    transitions = _sorted_transitions(net)
    found: List[FiringSequence] = []
    visited = 0

    def walk(tokens: Mapping[NodeId, int], prefix: Tuple[NodeId, ...]) -> None:
        nonlocal visited
        if len(prefix) == max_len:
            return
        for t in transitions:
            if not _enabled(net, tokens, t):
                continue
            visited += 1
            if visited > node_budget:
                logger.error(f"Enumeration on {net.name or '<net>'} exceeded {node_budget} nodes")
                raise ExplosionCap(node_budget)
            seq = prefix + (t,)
            if _increases(net, t, q):
                found.append(seq)
            walk(_fire(net, tokens, t), seq)

    walk(s.marking, ())
    logger.debug(f"Enumerated {visited} firing-tree nodes, {len(found)} increasing sequences")
    return found


def first_increasing_sequence(s: MarkedPetriNet, q: Iterable[NodeId], max_len: int,
                              node_budget: int = WITNESS_NODE_BUDGET) -> Optional[FiringSequence]:
    """
    First increasing sequence of length <= max_len in depth-first lexicographic
    order, or None. Markings already known to lead nowhere within the remaining
    length are not re-explored.

    Raises:
        ExplosionCap: More than node_budget firing-tree nodes were needed
    """
    net, q = s.net, frozenset(q)
    if not q:
        return None
    transitions = _sorted_transitions(net)
    dead_ends: Dict[Marking, int] = {}
    visited = 0

    def walk(tokens: Dict[NodeId, int], prefix: Tuple[NodeId, ...]) -> Optional[FiringSequence]:
        nonlocal visited
        remaining = max_len - len(prefix)
        if remaining == 0:
            return None
        key = Marking(tokens)
        if dead_ends.get(key, -1) >= remaining:
            return None
        for t in transitions:
            if not _enabled(net, tokens, t):
                continue
            visited += 1
            if visited > node_budget:
                raise ExplosionCap(node_budget)
            seq = prefix + (t,)
            if _increases(net, t, q):
                return seq
            hit = walk(_fire(net, tokens, t), seq)
            if hit is not None:
                return hit
        dead_ends[key] = max(dead_ends.get(key, -1), remaining)
        return None

    return walk(dict(s.marking), ())


def project_subsequence(seq: Sequence[NodeId], r: Iterable[NodeId]) -> FiringSequence:
    """Keep exactly the firings of transitions in r, in order"""
    r = frozenset(r)
    return tuple(t for t in seq if t in r)


@dataclass(frozen=True, eq=False)
class ReachGraph:
    """
    Explored part of the reachability graph.

    complete is False when the state cap stopped the exploration; then only the
    markings in `expanded` have all their outgoing edges recorded.
    """

    states: FrozenSet[Marking]
    edges: FrozenSet[Edge]
    initial: Marking
    complete: bool
    expanded: FrozenSet[Marking] = frozenset()
    parent: Mapping[Marking, Optional[Tuple[Marking, NodeId]]] = field(default_factory=dict)

    @cached_property
    def _adjacency(self) -> Dict[Marking, List[Tuple[NodeId, Marking]]]:
        adjacency: Dict[Marking, List[Tuple[NodeId, Marking]]] = {m: [] for m in self.states}
        for m1, t, m2 in self.edges:
            adjacency[m1].append((t, m2))
        for successors in adjacency.values():
            successors.sort(key=lambda e: e[0])
        return adjacency

    def successors(self, marking: Marking) -> List[Tuple[NodeId, Marking]]:
        return self._adjacency.get(marking, [])

    def path_to(self, marking: Marking) -> List[NodeId]:
        """Transitions along the breadth-first tree from the initial marking"""
        path = []
        step = self.parent.get(marking)
        while step is not None:
            previous, t = step
            path.append(t)
            step = self.parent.get(previous)
        return list(reversed(path))


def reachability_graph(s: MarkedPetriNet, state_cap: int = STATE_CAP) -> ReachGraph:
    """
    Breadth-first exploration of the reachable markings.

    Args:
        s: Marked net
        state_cap: Maximum number of markings to store

    Returns:
        ReachGraph: complete=False when more than state_cap markings exist
    """
    net = s.net
    transitions = _sorted_transitions(net)
    initial = Marking(s.marking.nonzero())
    states = {initial}
    parent: Dict[Marking, Optional[Tuple[Marking, NodeId]]] = {initial: None}
    edges = set()
    expanded = set()
    queue = deque([initial])
    complete = True

    while queue and complete:
        current = queue.popleft()
        successors = []
        for t in transitions:
            if not _enabled(net, current, t):
                continue
            nxt = Marking({p: n for p, n in _fire(net, current, t).items() if n})
            if nxt not in states:
                if len(states) >= state_cap:
                    complete = False
                    break
                states.add(nxt)
                parent[nxt] = (current, t)
                queue.append(nxt)
            successors.append((current, t, nxt))
        if complete:
            edges.update(successors)
            expanded.add(current)

    if not complete:
        logger.info(f"Reachability graph of {net.name or '<net>'} stopped at {state_cap} states")
    return ReachGraph(frozenset(states), frozenset(edges), initial, complete,
                      frozenset(expanded), parent)
