"""
Maximal dynamic slicing.

A backward closure collects every place and transition that can move tokens
towards the criterion; a forward closure from the initially marked part of
that backward slice then keeps only what the initial marking can actually
reach.
"""

import heapq
import logging
import time
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Mapping, Set, Tuple

from app.models.net import (Algorithm, MarkedPetriNet, NodeId, NodeSet, PetriNet,
                            SliceResult, SlicingCriterion)
from app.models.exceptions import UnknownPlace
from app.slicing.common import build_result, check_criterion

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BackwardSlice:
    """
    Places and transitions collected by the backward pass; the flow is the
    original one restricted to them. Every transition's preset is included.
    """

    p_b: NodeSet
    t_b: NodeSet
    transitions_visited: int = 0

    @property
    def nodes(self) -> NodeSet:
        return self.p_b | self.t_b


@dataclass(frozen=True)
class ForwardClosure:
    places: NodeSet
    transitions: NodeSet
    transitions_visited: int = 0

    @property
    def nodes(self) -> NodeSet:
        return self.places | self.transitions


def backward_slice(net: PetriNet, q: Iterable[NodeId]) -> BackwardSlice:
    """
    Least set containing q and closed under p -> •p and t -> •t.

    The worklist takes the lexicographically smallest place first and never
    expands a place twice.

    Raises:
        UnknownPlace: q names a place the net does not have
    """
    q = frozenset(q)
    for place in sorted(q):
        if place not in net.places:
            raise UnknownPlace(place)

    places: Set[NodeId] = set(q)
    transitions: Set[NodeId] = set()
    done: Set[NodeId] = set()
    worklist = sorted(q)
    heapq.heapify(worklist)

    while worklist:
        p = heapq.heappop(worklist)
        if p in done:
            continue
        done.add(p)
        for t in sorted(net.pre(p)):
            if t in transitions:
                continue
            transitions.add(t)
            for input_place in net.pre(t):
                places.add(input_place)
                if input_place not in done:
                    heapq.heappush(worklist, input_place)
        logger.debug(f"backward: expanded {p}, {len(transitions)} transitions so far")

    return BackwardSlice(frozenset(places), frozenset(transitions), len(transitions))


def forward_fixpoint(net: PetriNet, p_scope: NodeSet, t_scope: NodeSet,
                     m0: Mapping[NodeId, int]) -> ForwardClosure:
    """
    Forward closure inside the subnet induced by (p_scope, t_scope).

    Starts from the marked places of the scope and the scope transitions enabled
    at m0, then repeatedly adds the outputs of the current transitions and every
    unprocessed transition whose (scope) preset is fully covered. When nothing is
    enabled at m0 the result is just the marked places.
    """
    marked = {p for p in p_scope if m0.get(p, 0) > 0}
    presets: Dict[NodeId, FrozenSet[NodeId]] = {t: net.pre(t) & p_scope for t in t_scope}
    enabled = {t for t in t_scope
               if all(m0.get(p, 0) >= net.weight(p, t) for p in presets[t])}

    consumers: Dict[NodeId, Set[NodeId]] = {}
    for t, pre in presets.items():
        for p in pre:
            consumers.setdefault(p, set()).add(t)
    missing = {t: len(pre - marked) for t, pre in presets.items()}
    ready = {t for t, n in missing.items() if n == 0} - enabled

    places = set(marked)
    processed: Set[NodeId] = set()
    current = enabled
    while current:
        processed |= current
        for t in sorted(current):
            for p in net.post(t):
                if p not in p_scope or p in places:
                    continue
                places.add(p)
                for consumer in consumers.get(p, ()):
                    missing[consumer] -= 1
                    if missing[consumer] == 0:
                        ready.add(consumer)
        current = ready - processed
        ready = set()

    return ForwardClosure(frozenset(places), frozenset(processed), len(processed))


def forward_slice(b: BackwardSlice, net: PetriNet,
                  m0: Mapping[NodeId, int]) -> Tuple[NodeSet, NodeSet]:
    """Forward closure of a backward slice from the initial marking"""
    closure = forward_fixpoint(net, b.p_b, b.t_b, m0)
    return closure.places, closure.transitions


def maximal_nodes(s: MarkedPetriNet, q: Iterable[NodeId]) -> NodeSet:
    """Nodes of the maximal dynamic slice, without result metadata"""
    backward = backward_slice(s.net, q)
    return forward_fixpoint(s.net, backward.p_b, backward.t_b, s.marking).nodes


def slice_maximal(s: MarkedPetriNet, q: Iterable[NodeId]) -> SliceResult:
    """
    Maximal dynamic slice of s with respect to the criterion places q.

    Args:
        s: Marked net; its marking is the criterion's initial marking
        q: Criterion places

    Returns:
        SliceResult: The forward slice with its metadata

    Raises:
        UnknownPlace: q names a place the net does not have
    """
    started = time.perf_counter()
    criterion: SlicingCriterion = check_criterion(s, q)
    backward = backward_slice(s.net, criterion.q)
    closure = forward_fixpoint(s.net, backward.p_b, backward.t_b, s.marking)
    visited = backward.transitions_visited + closure.transitions_visited
    assert visited <= 2 * len(s.net.transitions), "transition processed more than twice"
    assert closure.places <= backward.p_b and closure.transitions <= backward.t_b
    return build_result(s, criterion, Algorithm.MAXIMAL, closure.nodes, started,
                        transitions_visited=visited)
