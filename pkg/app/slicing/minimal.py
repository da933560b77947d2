"""
Minimal dynamic slicing.

The backward pass branches on every producer of an unmarked place, so each
candidate is one way of feeding the criterion from the initial marking.
Candidates that cannot start firing are filtered out, each survivor is closed
forwards, and the smallest forward slice that still carries an increasing
firing sequence is chosen. A bounded search over the firing sequences of the
maximal slice then shrinks the choice to the transitions, input places and
raised criterion place of the cheapest increasing sequence.
"""

import logging
import time
from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Tuple

from app.config import MAX_CANDIDATES, MAX_EXPANSIONS, WITNESS_DEPTH, WITNESS_NODE_BUDGET
from app.models.exceptions import BranchBudgetExceeded, ExplosionCap, UnknownPlace
from app.models.net import (Algorithm, MarkedPetriNet, Marking, NodeId, NodeSet, PetriNet,
                            SliceResult, is_ordinary, slice_of)
from app.semantics import can_fire, fire_tokens, first_increasing_sequence, raised_places
from app.slicing.common import build_result, check_criterion
from app.slicing.maximal import forward_fixpoint, maximal_nodes

logger = logging.getLogger(__name__)

CandidateSlice = FrozenSet[NodeId]

_State = Tuple[FrozenSet[NodeId], FrozenSet[NodeId], FrozenSet[NodeId]]


def backward_slices_all(s: MarkedPetriNet, q: Iterable[NodeId],
                        max_candidates: int = MAX_CANDIDATES,
                        max_expansions: int = MAX_EXPANSIONS,
                        expand: Iterable[NodeId] = ()) -> Set[CandidateSlice]:
    """
    Every backward path from the criterion to a marked or sourceless place.

    Works on states (W, W_done, S) with the smallest place of W taken first:
    a marked or sourceless place is added to S and not expanded; any other place
    branches once per producer t, adding {p, t} to S and •t to the worklist.
    Sibling branches are merged by set union and repeated states are pruned.

    Args:
        s: Marked net
        q: Criterion places
        max_candidates: Maximum number of distinct candidates
        max_expansions: Maximum number of states expanded
        expand: Marked places that also branch through their producers, next to
            the branch that stops at them

    Returns:
        Set of candidate node sets (places and transitions mixed)

    Raises:
        UnknownPlace: q names a place the net does not have
        BranchBudgetExceeded: A budget was exhausted
    """
    net, m0 = s.net, s.marking
    q, expand = frozenset(q), frozenset(expand)
    for place in sorted(q):
        if place not in net.places:
            raise UnknownPlace(place)

    candidates: Set[CandidateSlice] = set()
    seen: Set[_State] = set()
    stack: List[_State] = [(q, frozenset(), frozenset())]
    expansions = 0

    while stack:
        state = stack.pop()
        if state in seen:
            continue
        seen.add(state)
        worklist, done, nodes = state

        if not worklist:
            candidates.add(nodes)
            if len(candidates) > max_candidates:
                logger.error(f"Backward branching produced more than {max_candidates} candidates")
                raise BranchBudgetExceeded(max_candidates, "Candidate enumeration")
            continue

        expansions += 1
        if expansions > max_expansions:
            logger.error(f"Backward branching exceeded {max_expansions} expansions")
            raise BranchBudgetExceeded(max_expansions)

        p = min(worklist)
        done_next = done | {p}
        nodes_next = nodes | {p}
        producers = net.pre(p)
        if m0[p] > 0 or not producers:
            stack.append((worklist - done_next, done_next, nodes_next))
            if not producers or p not in expand:
                continue
        # Pushed in reverse so that the smallest producer is explored first
        for t in sorted(producers, reverse=True):
            stack.append(((worklist | net.pre(t)) - done_next, done_next, nodes_next | {t}))

    logger.debug(f"Backward branching: {expansions} expansions, {len(candidates)} candidates")
    return candidates


def filter_slices(s: MarkedPetriNet, cands: Iterable[CandidateSlice]) -> Set[CandidateSlice]:
    """
    Keep the candidates that hold a token or a source transition and have no
    unmarked sourceless place. Presets are taken in the original net.
    """
    net, m0 = s.net, s.marking
    kept = set()
    for cand in cands:
        places = cand & net.places
        transitions = cand & net.transitions
        can_start = any(m0[p] > 0 for p in places) or any(not net.pre(t) for t in transitions)
        starved = any(m0[p] == 0 and not net.pre(p) for p in places)
        if can_start and not starved:
            kept.add(cand)
    return kept


def forward_close(s: MarkedPetriNet, cand: Iterable[NodeId]) -> NodeSet:
    """Forward closure of a candidate inside its induced subnet"""
    cand = frozenset(cand)
    closure = forward_fixpoint(s.net, cand & s.net.places, cand & s.net.transitions, s.marking)
    return closure.nodes


def slice_order(nodes: NodeSet) -> Tuple[int, List[NodeId]]:
    """Smallest first, ties broken by the sorted id list"""
    return len(nodes), sorted(nodes)


def can_increase(net: PetriNet, nodes: NodeSet, q: NodeSet) -> bool:
    """Structural precheck: some kept transition raises some kept criterion place"""
    for p in q & nodes:
        for t in net.pre(p):
            if t in nodes and net.weight(t, p) > net.weight(p, t):
                return True
    return False


def has_witness(s: MarkedPetriNet, nodes: NodeSet, q: NodeSet, depth: int,
                node_budget: int, warnings: List[str]) -> bool:
    """
    True when the slice induced by nodes has an increasing firing sequence for q
    within depth. An exhausted search budget counts as a witness and is reported.
    """
    if not can_increase(s.net, nodes, q):
        return False
    try:
        return first_increasing_sequence(slice_of(s, nodes), q, depth, node_budget) is not None
    except ExplosionCap:
        warnings.append(f"witness search exceeded {node_budget} nodes; "
                        f"candidate accepted unchecked")
        return True


def select_smallest(s: MarkedPetriNet, forward_slices: Iterable[NodeSet], q: NodeSet,
                    depth: int, node_budget: int, warnings: List[str]) -> Optional[NodeSet]:
    """First forward slice, in size-then-lexicographic order, that carries a witness"""
    for nodes in sorted(set(forward_slices), key=slice_order):
        if has_witness(s, nodes, q, depth, node_budget, warnings):
            return nodes
    return None


def minimal_candidates(s: MarkedPetriNet, q: NodeSet, max_candidates: int = MAX_CANDIDATES,
                       max_expansions: int = MAX_EXPANSIONS) -> Set[NodeSet]:
    """
    Backward branching, filtering and forward closure, deduplicated.

    Besides the paths feeding the whole criterion, each criterion place gets its
    own paths, and a marked criterion place is also traced through its producers.
    """
    candidates = backward_slices_all(s, q, max_candidates, max_expansions)
    for p in sorted(q):
        if len(q) > 1 or s.marking[p] > 0:
            candidates |= backward_slices_all(s, {p}, max_candidates, max_expansions,
                                              expand={p})
    filtered = filter_slices(s, candidates)
    logger.debug(f"{len(filtered)} of {len(candidates)} candidates survive filtering")
    return {forward_close(s, cand) for cand in filtered}


def smallest_witness_slice(s: MarkedPetriNet, q: Iterable[NodeId], scope: NodeSet,
                           bound: Optional[int], depth: int, node_budget: int,
                           warnings: List[str]) -> Optional[NodeSet]:
    """
    Smallest node set made of the transitions of an increasing firing sequence,
    their input places and one place of q the last step raises.

    Sequences are fired in the subnet induced by scope, which must hold the whole
    preset of each of its transitions, and are at most depth long. Only sets
    smaller than bound count. An exhausted node budget keeps the best set found
    so far and is reported.

    Returns:
        The node set, or None when nothing smaller than bound exists
    """
    sub = slice_of(s, scope)
    net = sub.net
    q = frozenset(q) & net.places
    transitions = sorted(net.transitions)
    best_size, best_nodes = bound, None
    explored: Dict[Tuple[Marking, NodeSet], int] = {}
    visited = 0

    def improves(nodes: NodeSet) -> bool:
        return best_size is None or len(nodes) < best_size

    def walk(tokens: Dict[NodeId, int], kept: NodeSet, remaining: int) -> None:
        nonlocal best_size, best_nodes, visited
        if remaining == 0 or not improves(kept):
            return
        key = (Marking({p: n for p, n in tokens.items() if n}), kept)
        if explored.get(key, -1) >= remaining:
            return
        explored[key] = remaining
        for t in transitions:
            if not can_fire(net, tokens, t):
                continue
            visited += 1
            if visited > node_budget:
                raise ExplosionCap(node_budget)
            grown = kept | {t} | net.pre(t)
            for p in raised_places(net, t, q):
                found = grown | {p}
                if improves(found):
                    best_size, best_nodes = len(found), found
            walk(fire_tokens(net, tokens, t), grown, remaining - 1)

    try:
        walk(dict(sub.marking.nonzero()), frozenset(), depth)
    except ExplosionCap:
        warnings.append(f"minimal witness search exceeded {node_budget} nodes; "
                        f"the slice may not be minimal")
    logger.debug(f"Witness search visited {visited} firing-tree nodes, best size {best_size}")
    return best_nodes


def slice_minimal(s: MarkedPetriNet, q: Iterable[NodeId], witness_depth: int = WITNESS_DEPTH,
                  witness_node_budget: int = WITNESS_NODE_BUDGET,
                  max_candidates: int = MAX_CANDIDATES,
                  max_expansions: int = MAX_EXPANSIONS) -> SliceResult:
    """
    Minimal dynamic slice of s with respect to the criterion places q.

    Among the forward slices of the filtered candidates, the smallest one that
    carries an increasing firing sequence within witness_depth is chosen; when
    none does but the maximal slice does, the maximal slice is chosen. The choice
    is then shrunk to the smallest set of transitions, input places and raised
    criterion place that some increasing sequence inside the maximal slice needs.
    When nothing in the net can increase the criterion, the smallest forward
    slice (or the empty slice when no candidate survives) is returned with a
    diagnostic.

    Args:
        s: Marked net
        q: Criterion places
        witness_depth: Length bound for the witness search
        witness_node_budget: Node budget for each witness search
        max_candidates: Backward branching candidate budget
        max_expansions: Backward branching expansion budget

    Returns:
        SliceResult

    Raises:
        UnknownPlace: q names a place the net does not have
        BranchBudgetExceeded: Backward branching exhausted its budget
    """
    started = time.perf_counter()
    criterion = check_criterion(s, q)
    warnings: List[str] = []
    if not is_ordinary(s.net):
        warnings.append("minimality not guaranteed: the net is not ordinary")

    forward_slices = minimal_candidates(s, criterion.q, max_candidates, max_expansions)
    chosen = select_smallest(s, forward_slices, criterion.q, witness_depth,
                             witness_node_budget, warnings)
    maximal = maximal_nodes(s, criterion.q)
    fallback = chosen is None and has_witness(s, maximal, criterion.q, witness_depth,
                                              witness_node_budget, warnings)
    if fallback:
        chosen = maximal

    if chosen is not None:
        refined = smallest_witness_slice(s, criterion.q, maximal, len(chosen), witness_depth,
                                         witness_node_budget, warnings)
        if refined is not None:
            logger.debug(f"Witness refinement shrank the slice from {len(chosen)} "
                         f"to {len(refined)} nodes")
            chosen = refined
        elif fallback:
            warnings.append("no candidate path carries an increasing firing sequence; "
                            "falling back to the maximal slice")
    elif forward_slices:
        warnings.append(f"no increasing firing sequence within {witness_depth} steps; "
                        f"returning the smallest forward slice")
        chosen = min(forward_slices, key=slice_order)
    else:
        warnings.append("no candidate slice survives filtering; the slice is empty")
        chosen = frozenset()

    return build_result(s, criterion, Algorithm.MINIMAL, chosen, started, warnings)
