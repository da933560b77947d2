"""Helpers shared by the slicers"""

import logging
import time
from typing import Iterable, Optional, Sequence

from app.models.net import (Algorithm, MarkedPetriNet, NetSizes, NodeId, SliceResult,
                            SlicingCriterion, slice_of)

logger = logging.getLogger(__name__)


def check_criterion(s: MarkedPetriNet, q: Iterable[NodeId]) -> SlicingCriterion:
    """Build the criterion and reject places the net does not have"""
    criterion = SlicingCriterion(s.marking, frozenset(q))
    criterion.check(s.net)
    return criterion


def build_result(s: MarkedPetriNet, criterion: SlicingCriterion, algorithm: Algorithm,
                 nodes: Iterable[NodeId], started: float, warnings: Sequence[str] = (),
                 transitions_visited: Optional[int] = None) -> SliceResult:
    """
    Assemble a SliceResult for the node set a slicer selected.

    Args:
        s: Original marked net
        criterion: The slicing criterion
        algorithm: Algorithm that produced the nodes
        nodes: Places and transitions kept
        started: time.perf_counter() value taken before slicing started
        warnings: Diagnostics to attach to the result
        transitions_visited: Work counter, when the algorithm keeps one
    """
    runtime_ms = (time.perf_counter() - started) * 1000.0
    sliced = slice_of(s, nodes, name=f"{s.net.name}_{algorithm.index}" if s.net.name else "")
    result = SliceResult(
        subnet=sliced,
        algorithm=algorithm,
        criterion=criterion,
        sizes_before=NetSizes.of(s),
        sizes_after=NetSizes.of(sliced),
        runtime_ms=runtime_ms,
        warnings=tuple(warnings),
        transitions_visited=transitions_visited,
    )
    logger.info(f"{algorithm.value} slice of {s.net.name or '<net>'} w.r.t. {sorted(criterion.q)}: "
                f"{result.sizes_before.nodes} -> {result.sizes_after.nodes} nodes "
                f"in {runtime_ms:.2f} ms")
    for warning in warnings:
        logger.warning(f"{algorithm.value}: {warning}")
    return result
