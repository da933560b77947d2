"""
Comparison slicers reconstructed from their published prose descriptions.

Both static slicers ignore the initial marking. The single-path slicer works on
the structural dependency graph and keeps one path that the initial marking can
use to put a token on a criterion place.
"""

import logging
import time
from dataclasses import dataclass
from typing import Iterable, List, Set

import networkx as nx

from app.config import MAX_CANDIDATES, MAX_EXPANSIONS, WITNESS_DEPTH, WITNESS_NODE_BUDGET
from app.models.exceptions import ExplosionCap
from app.models.net import (Algorithm, MarkedPetriNet, Marking, NodeId, NodeSet, PetriNet,
                            SliceResult, restrict_marking, subnet)
from app.semantics import first_increasing_sequence
from app.slicing.common import build_result, check_criterion
from app.slicing.maximal import maximal_nodes
from app.slicing.minimal import minimal_candidates, select_smallest, smallest_witness_slice

logger = logging.getLogger(__name__)


def is_reading(net: PetriNet, p: NodeId, t: NodeId) -> bool:
    """t reads p: arcs in both directions with equal weight"""
    forward, backward = net.weight(p, t), net.weight(t, p)
    return forward > 0 and forward == backward


def is_non_reading(net: PetriNet, p: NodeId, t: NodeId) -> bool:
    """t is connected to p and firing it changes the marking of p"""
    return (net.weight(p, t) > 0 or net.weight(t, p) > 0) and not is_reading(net, p, t)


def _static_marking(s) -> MarkedPetriNet:
    if isinstance(s, MarkedPetriNet):
        return s
    return MarkedPetriNet(s, Marking())


def slice_rakow_ctl(net, q: Iterable[NodeId]) -> SliceResult:
    """
    Static slice collecting every transition that changes the marking of a kept
    place, together with all of its input places.

    Args:
        net: PetriNet, or MarkedPetriNet whose marking is carried along unused
        q: Criterion places
    """
    started = time.perf_counter()
    s = _static_marking(net)
    criterion = check_criterion(s, q)
    places: Set[NodeId] = set(criterion.q)
    transitions: Set[NodeId] = set()
    pending = sorted(places)

    while pending:
        p = pending.pop()
        for t in sorted(s.net.pre(p) | s.net.post(p)):
            if t in transitions or not is_non_reading(s.net, p, t):
                continue
            transitions.add(t)
            for input_place in s.net.pre(t):
                if input_place not in places:
                    places.add(input_place)
                    pending.append(input_place)

    return build_result(s, criterion, Algorithm.RAKOW_CTL, places | transitions, started)


def slice_rakow_safety(net, q: Iterable[NodeId]) -> SliceResult:
    """
    Static slice collecting the non-reading neighbours of the criterion, then
    every transition that could increase the tokens of a kept place, each with
    all of its input places.
    """
    started = time.perf_counter()
    s = _static_marking(net)
    criterion = check_criterion(s, q)
    places: Set[NodeId] = set(criterion.q)
    transitions: Set[NodeId] = set()

    def add_transition(t: NodeId, pending: List[NodeId]) -> None:
        transitions.add(t)
        for input_place in s.net.pre(t):
            if input_place not in places:
                places.add(input_place)
                pending.append(input_place)

    pending: List[NodeId] = []
    for p in sorted(criterion.q):
        for t in sorted(s.net.pre(p) | s.net.post(p)):
            if t not in transitions and is_non_reading(s.net, p, t):
                add_transition(t, pending)
    # Places added by the seed step are scanned for producers too
    pending = sorted(places)
    while pending:
        p = pending.pop()
        for t in sorted(s.net.pre(p)):
            if t not in transitions and s.net.weight(t, p) > s.net.weight(p, t):
                add_transition(t, pending)

    return build_result(s, criterion, Algorithm.RAKOW_SAFETY, places | transitions, started)


@dataclass(frozen=True, eq=False)
class Sdg:
    """
    Structural dependency graph: an edge x -> y means x depends on y, that is
    y is in the preset of x.
    """

    graph: nx.DiGraph

    @property
    def nodes(self) -> NodeSet:
        return frozenset(self.graph.nodes)

    @property
    def deps(self) -> frozenset:
        return frozenset(self.graph.edges)

    def dependencies(self, node: NodeId) -> NodeSet:
        """Everything node transitively depends on, node included"""
        return frozenset(nx.descendants(self.graph, node)) | {node}


def build_sdg(net: PetriNet) -> Sdg:
    graph = nx.DiGraph()
    graph.add_nodes_from(sorted(net.nodes))
    graph.add_edges_from((arc.target, arc.source) for arc in sorted(net.arcs))
    return Sdg(graph)


def _can_increase_somewhere(s: MarkedPetriNet, q: NodeSet, depth: int, node_budget: int,
                            warnings: List[str]) -> bool:
    try:
        return first_increasing_sequence(s, q, depth, node_budget) is not None
    except ExplosionCap:
        warnings.append(f"witness search exceeded {node_budget} nodes; "
                        f"assuming the criterion can increase")
        return True


def slice_yu(s: MarkedPetriNet, q: Iterable[NodeId], witness_depth: int = WITNESS_DEPTH,
             witness_node_budget: int = WITNESS_NODE_BUDGET,
             max_candidates: int = MAX_CANDIDATES,
             max_expansions: int = MAX_EXPANSIONS) -> SliceResult:
    """
    One path along which the initial marking can increase at least one
    criterion place.

    Each criterion place is traced backwards through the structural dependency
    graph; the contributing paths of all places are ranked smallest first, ties
    broken lexicographically, and the first one with an increasing firing
    sequence within witness_depth wins. The winner is shrunk to the transitions,
    input places and raised place of the cheapest increasing sequence inside the
    maximal slice. When no path carries a sequence but the net has one, that
    cheapest set is the slice. A marked place without producers is its own
    trivial path. Otherwise the slice is empty.
    """
    started = time.perf_counter()
    criterion = check_criterion(s, q)
    sdg = build_sdg(s.net)
    warnings: List[str] = []

    paths = []
    for p in sorted(criterion.q):
        scope = sdg.dependencies(p)
        pruned_net = subnet(s.net, scope & s.net.places, scope & s.net.transitions)
        pruned = MarkedPetriNet(pruned_net, restrict_marking(s.marking, pruned_net.places))
        paths.extend(minimal_candidates(pruned, {p}, max_candidates, max_expansions))

    chosen = select_smallest(s, paths, criterion.q, witness_depth, witness_node_budget,
                             warnings)
    maximal = maximal_nodes(s, criterion.q)
    if chosen is not None:
        refined = smallest_witness_slice(s, criterion.q, maximal, len(chosen), witness_depth,
                                         witness_node_budget, warnings)
        chosen = refined if refined is not None else chosen
    elif _can_increase_somewhere(s, criterion.q, witness_depth, witness_node_budget, warnings):
        chosen = smallest_witness_slice(s, criterion.q, maximal, None, witness_depth,
                                        witness_node_budget, warnings)
        if chosen is None:
            warnings.append(f"no increasing firing sequence found within {witness_depth} "
                            f"steps; the slice is empty")
            chosen = frozenset()
    else:
        trivial = sorted(p for p in criterion.q if s.marking[p] > 0 and not s.net.pre(p))
        if trivial:
            warnings.append(f"criterion place {trivial[0]} is marked and has no producers; "
                            f"the slice is the trivial path")
            chosen = frozenset({trivial[0]})
        else:
            warnings.append("the initial marking cannot increase any criterion place; "
                            "the slice is empty")
            chosen = frozenset()

    return build_result(s, criterion, Algorithm.YU, chosen, started, warnings)
