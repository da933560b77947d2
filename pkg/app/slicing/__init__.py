from typing import Callable, Dict, Iterable

from app.models.net import Algorithm, MarkedPetriNet, NodeId, SliceResult
from app.slicing.maximal import (BackwardSlice, backward_slice, forward_fixpoint,
                                 forward_slice, maximal_nodes, slice_maximal)
from app.slicing.minimal import (backward_slices_all, filter_slices, forward_close,
                                 slice_minimal, smallest_witness_slice)
from app.slicing.reference import (Sdg, build_sdg, is_reading, slice_rakow_ctl,
                                   slice_rakow_safety, slice_yu)

Slicer = Callable[[MarkedPetriNet, Iterable[NodeId]], SliceResult]

# Registry in report order (Algorithm.index)
ALGORITHMS: Dict[Algorithm, Slicer] = {
    Algorithm.MINIMAL: slice_minimal,
    Algorithm.MAXIMAL: slice_maximal,
    Algorithm.RAKOW_CTL: slice_rakow_ctl,
    Algorithm.YU: slice_yu,
    Algorithm.RAKOW_SAFETY: slice_rakow_safety,
}


def run_algorithm(algorithm: Algorithm, s: MarkedPetriNet, q: Iterable[NodeId]) -> SliceResult:
    return ALGORITHMS[algorithm](s, q)


__all__ = ['ALGORITHMS', 'BackwardSlice', 'Sdg', 'Slicer', 'backward_slice',
           'backward_slices_all', 'build_sdg', 'filter_slices', 'forward_close',
           'forward_fixpoint', 'forward_slice', 'is_reading', 'maximal_nodes',
           'run_algorithm', 'slice_maximal', 'slice_minimal', 'slice_rakow_ctl',
           'slice_rakow_safety', 'slice_yu', 'smallest_witness_slice']
