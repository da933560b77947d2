"""
Immutable place/transition net model.

Nets, markings and slice results are frozen values: every operation returns
a new object and instances can be shared freely between worker threads.
Identifiers are plain strings compared exactly; canonical output sorts them.
"""

import logging
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from enum import Enum
from functools import cached_property
from types import MappingProxyType
from typing import (Dict, FrozenSet, Iterable, Iterator, Mapping, NamedTuple, Optional,
                    Tuple, Union)

from app.models.exceptions import (BadArcDirection, DanglingArc, DuplicateArc,
                                   NegativeTokens, NotASubset, OverlappingIds,
                                   UnknownNode, UnknownPlace, ZeroWeight)

logger = logging.getLogger(__name__)

NodeId = str
NodeSet = FrozenSet[NodeId]
FiringSequence = Tuple[NodeId, ...]


class Arc(NamedTuple):
    source: NodeId
    target: NodeId
    weight: int = 1


@dataclass(frozen=True)
class PetriNet:
    """
    A place/transition net (P, T, F).

    The flow relation is stored as a set of weighted arcs. Empty nets are legal
    values because slices can be empty; only PNML ingestion rejects them.
    """

    places: NodeSet
    transitions: NodeSet
    arcs: FrozenSet[Arc] = frozenset()
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, 'places', frozenset(self.places))
        object.__setattr__(self, 'transitions', frozenset(self.transitions))
        object.__setattr__(self, 'arcs', frozenset(Arc(*a) for a in self.arcs))
        self._validate()

    def _validate(self) -> None:
        overlap = self.places & self.transitions
        if overlap:
            raise OverlappingIds(overlap)
        seen = set()
        nodes = self.places | self.transitions
        for arc in sorted(self.arcs):
            if arc.source not in nodes or arc.target not in nodes:
                raise DanglingArc(arc.source, arc.target)
            if (arc.source in self.places) == (arc.target in self.places):
                raise BadArcDirection(arc.source, arc.target)
            if not isinstance(arc.weight, int) or arc.weight < 1:
                raise ZeroWeight(arc.source, arc.target, arc.weight)
            if (arc.source, arc.target) in seen:
                raise DuplicateArc(arc.source, arc.target)
            seen.add((arc.source, arc.target))

    @cached_property
    def nodes(self) -> NodeSet:
        return self.places | self.transitions

    @cached_property
    def flow(self) -> Mapping[Tuple[NodeId, NodeId], int]:
        """Read-only mapping (source, target) -> weight"""
        return MappingProxyType({(a.source, a.target): a.weight for a in self.arcs})

    @cached_property
    def _presets(self) -> Dict[NodeId, NodeSet]:
        pre: Dict[NodeId, set] = {n: set() for n in self.nodes}
        for arc in self.arcs:
            pre[arc.target].add(arc.source)
        return {n: frozenset(s) for n, s in pre.items()}

    @cached_property
    def _postsets(self) -> Dict[NodeId, NodeSet]:
        post: Dict[NodeId, set] = {n: set() for n in self.nodes}
        for arc in self.arcs:
            post[arc.source].add(arc.target)
        return {n: frozenset(s) for n, s in post.items()}

    def weight(self, source: NodeId, target: NodeId) -> int:
        """Arc weight, 0 when the arc is absent"""
        return self.flow.get((source, target), 0)

    def pre(self, node: NodeId) -> NodeSet:
        try:
            return self._presets[node]
        except KeyError:
            raise UnknownNode(node) from None

    def post(self, node: NodeId) -> NodeSet:
        try:
            return self._postsets[node]
        except KeyError:
            raise UnknownNode(node) from None

    def sorted_places(self) -> list:
        return sorted(self.places)

    def sorted_transitions(self) -> list:
        return sorted(self.transitions)

    def __repr__(self) -> str:
        return (f"PetriNet(name={self.name!r}, places={self.sorted_places()}, "
                f"transitions={self.sorted_transitions()}, arcs={sorted(self.arcs)})")


class Marking(Mapping):
    """
    Token assignment. Absent places read as 0.

    Places explicitly set to 0 stay in the domain (a restriction keeps them), but
    equality and hashing only look at places carrying tokens.
    """

    __slots__ = ('_tokens', '_hash')

    def __init__(self, tokens: Optional[Mapping[NodeId, int]] = None, **kwargs: int):
        data = dict(tokens or {})
        data.update(kwargs)
        for place, count in data.items():
            if count < 0:
                raise NegativeTokens(place, count)
        self._tokens = data
        self._hash = None

    def __getitem__(self, place: NodeId) -> int:
        return self._tokens.get(place, 0)

    def __contains__(self, place) -> bool:
        return place in self._tokens

    def __iter__(self) -> Iterator[NodeId]:
        return iter(sorted(self._tokens))

    def __len__(self) -> int:
        return len(self._tokens)

    def nonzero(self) -> Dict[NodeId, int]:
        return {p: n for p, n in self._tokens.items() if n > 0}

    def support(self) -> NodeSet:
        """Places carrying at least one token"""
        return frozenset(p for p, n in self._tokens.items() if n > 0)

    def total(self) -> int:
        return sum(self._tokens.values())

    def covers(self, other: 'Marking') -> bool:
        """True iff this marking is pointwise >= other"""
        return all(self[p] >= n for p, n in other.nonzero().items())

    def __eq__(self, other) -> bool:
        if isinstance(other, Marking):
            return self.nonzero() == other.nonzero()
        if isinstance(other, Mapping):
            return self.nonzero() == {p: n for p, n in other.items() if n}
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.nonzero().items()))
        return self._hash

    def __lt__(self, other: 'Marking') -> bool:
        return sorted(self.nonzero().items()) < sorted(other.nonzero().items())

    def __repr__(self) -> str:
        inner = ', '.join(f"{p}: {self._tokens[p]}" for p in sorted(self._tokens))
        return f"Marking({{{inner}}})"


@dataclass(frozen=True)
class MarkedPetriNet:
    net: PetriNet
    marking: Marking = field(default_factory=Marking)

    def __post_init__(self):
        if not isinstance(self.marking, Marking):
            object.__setattr__(self, 'marking', Marking(self.marking))
        for place in self.marking:
            if place not in self.net.places:
                raise UnknownPlace(place)

    @property
    def name(self) -> str:
        return self.net.name

    def at(self, marking: Mapping[NodeId, int]) -> 'MarkedPetriNet':
        """Same net, different marking"""
        return MarkedPetriNet(self.net, Marking(marking))


@dataclass(frozen=True)
class SlicingCriterion:
    m0: Marking
    q: NodeSet

    def __post_init__(self):
        object.__setattr__(self, 'q', frozenset(self.q))

    def check(self, net: PetriNet) -> None:
        for place in sorted(self.q):
            if place not in net.places:
                raise UnknownPlace(place)


class NetSizes(NamedTuple):
    places: int
    transitions: int
    arcs: int
    tokens: int

    @property
    def nodes(self) -> int:
        return self.places + self.transitions

    @classmethod
    def of(cls, s: MarkedPetriNet) -> 'NetSizes':
        return cls(len(s.net.places), len(s.net.transitions), len(s.net.arcs),
                   s.marking.total())

    def as_dict(self) -> Dict[str, int]:
        return self._asdict()


class Algorithm(Enum):
    """Slicing algorithms, numbered in report order"""

    MINIMAL = 'minimal'
    MAXIMAL = 'maximal'
    RAKOW_CTL = 'rakow_ctl'
    YU = 'yu'
    RAKOW_SAFETY = 'rakow_safety'

    @property
    def index(self) -> int:
        return list(Algorithm).index(self) + 1

    @property
    def label(self) -> str:
        return ALGORITHM_LABELS[self]

    @property
    def is_reference(self) -> bool:
        return self in (Algorithm.RAKOW_CTL, Algorithm.YU, Algorithm.RAKOW_SAFETY)

    @classmethod
    def parse(cls, text: str) -> 'Algorithm':
        text = text.strip().lower()
        for algorithm in cls:
            if text in (algorithm.value, str(algorithm.index)):
                return algorithm
        raise ValueError(f"Unknown algorithm: {text}")


ALGORITHM_LABELS = {
    Algorithm.MINIMAL: "Minimal dynamic slice",
    Algorithm.MAXIMAL: "Maximal dynamic slice",
    Algorithm.RAKOW_CTL: "CTL*-x slice (reference, prose-derived)",
    Algorithm.YU: "Single-path dynamic slice (reference, prose-derived)",
    Algorithm.RAKOW_SAFETY: "Safety slice (reference, prose-derived)",
}


def reduction_percent(before: int, after: int) -> float:
    """100 * (before - after) / before rounded half-up to two decimals, 0 when before is 0"""
    if before == 0:
        return 0.0
    value = Decimal(100) * Decimal(before - after) / Decimal(before)
    return float(value.quantize(Decimal('0.01'), rounding=ROUND_HALF_UP))


@dataclass(frozen=True)
class SliceResult:
    subnet: MarkedPetriNet
    algorithm: Algorithm
    criterion: SlicingCriterion
    sizes_before: NetSizes
    sizes_after: NetSizes
    runtime_ms: float = 0.0
    warnings: Tuple[str, ...] = ()
    transitions_visited: Optional[int] = None

    @property
    def nodes(self) -> NodeSet:
        return self.subnet.net.nodes

    @property
    def is_empty(self) -> bool:
        return not self.subnet.net.nodes

    @property
    def reduction_pct(self) -> Dict[str, float]:
        before, after = self.sizes_before, self.sizes_after
        pct = {name: reduction_percent(getattr(before, name), getattr(after, name))
               for name in NetSizes._fields}
        pct['total'] = reduction_percent(before.nodes, after.nodes)
        return pct


# Operations

ArcSpec = Union[Arc, Tuple[NodeId, NodeId], Tuple[NodeId, NodeId, int]]


def make_net(places: Iterable[NodeId], transitions: Iterable[NodeId],
             arcs: Iterable[ArcSpec] = (), name: str = "") -> PetriNet:
    """
    Build and validate a net.

    Args:
        places: Place identifiers
        transitions: Transition identifiers
        arcs: (source, target) or (source, target, weight) triples; weight defaults to 1
        name: Net label

    Returns:
        PetriNet: The validated net

    Raises:
        NetValidationError: On overlapping ids, dangling arcs, wrong direction,
            non-positive weight or the same arc declared twice
    """
    arc_list = [Arc(*a) for a in arcs]
    pairs = [(a.source, a.target) for a in arc_list]
    if len(pairs) != len(set(pairs)):
        duplicate = next(p for p in sorted(pairs) if pairs.count(p) > 1)
        raise DuplicateArc(*duplicate)
    return PetriNet(frozenset(places), frozenset(transitions), frozenset(arc_list), name)


def _lookup(net: PetriNet, node: Union[NodeId, Iterable[NodeId]], index: str) -> NodeSet:
    if isinstance(node, str):
        return getattr(net, index)(node)
    result: set = set()
    for n in node:
        result |= getattr(net, index)(n)
    return frozenset(result)


def preset(net: PetriNet, node: Union[NodeId, Iterable[NodeId]]) -> NodeSet:
    """Input neighbours of a node, or the union over a set of nodes"""
    return _lookup(net, node, 'pre')


def postset(net: PetriNet, node: Union[NodeId, Iterable[NodeId]]) -> NodeSet:
    """Output neighbours of a node, or the union over a set of nodes"""
    return _lookup(net, node, 'post')


def subnet(net: PetriNet, p_sub: Iterable[NodeId], t_sub: Iterable[NodeId],
           name: Optional[str] = None) -> PetriNet:
    """Restrict a net to the given places and transitions, keeping every arc between them"""
    p_sub, t_sub = frozenset(p_sub), frozenset(t_sub)
    missing = (p_sub - net.places) | (t_sub - net.transitions)
    if missing:
        raise NotASubset(missing)
    kept = p_sub | t_sub
    arcs = frozenset(a for a in net.arcs if a.source in kept and a.target in kept)
    return PetriNet(p_sub, t_sub, arcs, net.name if name is None else name)


def restrict_marking(m: Mapping[NodeId, int], q: Iterable[NodeId]) -> Marking:
    """Keep the entries of m for places in q (zero entries included)"""
    q = frozenset(q)
    source = m._tokens if isinstance(m, Marking) else m
    return Marking({p: n for p, n in source.items() if p in q})


def size(net: PetriNet) -> int:
    return len(net.places) + len(net.transitions)


def is_ordinary(net: PetriNet) -> bool:
    return all(a.weight == 1 for a in net.arcs)


def is_subnet(candidate: PetriNet, net: PetriNet) -> bool:
    """True iff candidate is exactly net restricted to candidate's nodes"""
    if not (candidate.places <= net.places and candidate.transitions <= net.transitions):
        return False
    return candidate.arcs == subnet(net, candidate.places, candidate.transitions).arcs


def slice_of(s: MarkedPetriNet, nodes: Iterable[NodeId],
             name: Optional[str] = None) -> MarkedPetriNet:
    """Marked subnet induced by a mixed node set, with the marking restricted to it"""
    nodes = frozenset(nodes)
    net = subnet(s.net, nodes & s.net.places, nodes & s.net.transitions, name)
    return MarkedPetriNet(net, restrict_marking(s.marking, net.places))
