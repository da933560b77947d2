"""
Structural and behavioural property checkers.

Structural checks read P, T and F only and are always decisive. Behavioural
checks explore the reachability graph up to a state cap and answer `unknown`
when the cap is hit before the property is refuted.
"""

import logging
import re
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Iterable, List, NamedTuple, Optional, Union

import networkx as nx

from app.config import DEFAULT_K_BOUND, STATE_CAP
from app.models.exceptions import NotBehavioural, NotStructural, UnknownProperty
from app.models.net import MarkedPetriNet, PetriNet, SliceResult
from app.semantics import ReachGraph, enabled_transitions, reachability_graph

logger = logging.getLogger(__name__)

# Kept by every slice the dynamic slicers produce
PRESERVED_STRUCTURAL = (
    'free_choice', 'restricted_free_choice', 'asymmetric_choice', 'pure', 'homogeneous',
    'plain', 'conflict_free', 'output_nonbranching', 't_net', 's_net',
)
# Not necessarily kept; checked so that losses can be shown
NON_PRESERVED_STRUCTURAL = ('strongly_connected', 'weakly_connected', 'has_isolated_elements')
STRUCTURAL = PRESERVED_STRUCTURAL + NON_PRESERVED_STRUCTURAL

PRESERVED_BEHAVIOURAL = ('bounded', 'k_bounded', 'safe', 'persistent')
BEHAVIOURAL = PRESERVED_BEHAVIOURAL + ('deadlock_free', 'reversible')

# Named in the literature without a definition this tool can check
UNIMPLEMENTED = ('binary_conflict_free', 'behaviourally_conflict_free')

_PROPERTY_PATTERN = re.compile(r'^\s*([a-z_]+)\s*(?:\(\s*(\d+)\s*\))?\s*$')


class Outcome(Enum):
    HOLDS = 'holds'
    FAILS = 'fails'
    UNKNOWN = 'unknown'


@dataclass(frozen=True)
class PropertyId:
    tag: str
    k: Optional[int] = None

    @classmethod
    def parse(cls, text: str) -> 'PropertyId':
        """
        Parse a property name such as "pure", "safe" or "k_bounded(3)".

        Raises:
            UnknownProperty: The name is not a supported tag
        """
        match = _PROPERTY_PATTERN.match(text)
        if match and match.group(1) in UNIMPLEMENTED:
            raise UnknownProperty(f"{match.group(1)} (no checker available)")
        if not match or match.group(1) not in STRUCTURAL + BEHAVIOURAL:
            raise UnknownProperty(text.strip())
        tag, k = match.group(1), match.group(2)
        if tag == 'k_bounded':
            return cls(tag, int(k) if k is not None else DEFAULT_K_BOUND)
        if k is not None:
            raise UnknownProperty(text.strip())
        return cls(tag)

    @property
    def is_structural(self) -> bool:
        return self.tag in STRUCTURAL

    @property
    def is_behavioural(self) -> bool:
        return self.tag in BEHAVIOURAL

    def __str__(self) -> str:
        return f"{self.tag}({self.k})" if self.k is not None else self.tag


@dataclass(frozen=True)
class PropertyVerdict:
    property: PropertyId
    outcome: Outcome
    witness: Any = None

    @property
    def holds(self) -> bool:
        return self.outcome is Outcome.HOLDS

    @property
    def decisive(self) -> bool:
        return self.outcome is not Outcome.UNKNOWN


class PreservationRow(NamedTuple):
    property: PropertyId
    original: PropertyVerdict
    sliced: PropertyVerdict

    @property
    def kept(self) -> bool:
        """The slice holds whenever the original does"""
        return not self.original.holds or self.sliced.holds


def _as_property(prop: Union[PropertyId, str]) -> PropertyId:
    return prop if isinstance(prop, PropertyId) else PropertyId.parse(prop)


# Structural checks: each returns None when the property holds, or a witness

def _free_choice(net: PetriNet):
    transitions = sorted(net.transitions)
    for i, t1 in enumerate(transitions):
        for t2 in transitions[i + 1:]:
            if net.pre(t1) & net.pre(t2) and net.pre(t1) != net.pre(t2):
                return (t1, t2)
    return None


def _restricted_free_choice(net: PetriNet):
    for arc in sorted(net.arcs):
        if arc.source in net.places:
            p, t = arc.source, arc.target
            if net.post(p) != {t} and net.pre(t) != {p}:
                return (p, t)
    return None


def _asymmetric_choice(net: PetriNet):
    places = sorted(net.places)
    for i, p1 in enumerate(places):
        for p2 in places[i + 1:]:
            out1, out2 = net.post(p1), net.post(p2)
            if out1 & out2 and not (out1 <= out2 or out2 <= out1):
                return (p1, p2)
    return None


def _pure(net: PetriNet):
    for arc in sorted(net.arcs):
        if (arc.target, arc.source) in net.flow:
            return (arc.source, arc.target)
    return None


def _homogeneous(net: PetriNet):
    for p in sorted(net.places):
        weights = {net.weight(p, t) for t in net.post(p)}
        if len(weights) > 1:
            return p
    return None


def _plain(net: PetriNet):
    for arc in sorted(net.arcs):
        if arc.weight != 1:
            return (arc.source, arc.target)
    return None


def _conflict_free(net: PetriNet):
    for p in sorted(net.places):
        if len(net.post(p)) > 1 and not net.post(p) <= net.pre(p):
            return p
    return None


def _output_nonbranching(net: PetriNet):
    for p in sorted(net.places):
        if len(net.post(p)) > 1:
            return p
    return None


def _t_net(net: PetriNet):
    for p in sorted(net.places):
        if len(net.pre(p)) > 1 or len(net.post(p)) > 1:
            return p
    return None


def _s_net(net: PetriNet):
    for t in sorted(net.transitions):
        if len(net.pre(t)) > 1 or len(net.post(t)) > 1:
            return t
    return None


def to_digraph(net: PetriNet) -> nx.DiGraph:
    graph = nx.DiGraph()
    graph.add_nodes_from(sorted(net.nodes))
    graph.add_edges_from((arc.source, arc.target) for arc in sorted(net.arcs))
    return graph


def _components_witness(components) -> Optional[List[List[str]]]:
    components = sorted(sorted(c) for c in components)
    return components if len(components) > 1 else None


def _strongly_connected(net: PetriNet):
    return _components_witness(nx.strongly_connected_components(to_digraph(net)))


def _weakly_connected(net: PetriNet):
    return _components_witness(nx.weakly_connected_components(to_digraph(net)))


def _has_isolated_elements(net: PetriNet):
    isolated = sorted(n for n in net.nodes if not net.pre(n) and not net.post(n))
    return None if isolated else "no isolated node"


_STRUCTURAL_CHECKS = {
    'free_choice': _free_choice,
    'restricted_free_choice': _restricted_free_choice,
    'asymmetric_choice': _asymmetric_choice,
    'pure': _pure,
    'homogeneous': _homogeneous,
    'plain': _plain,
    'conflict_free': _conflict_free,
    'output_nonbranching': _output_nonbranching,
    't_net': _t_net,
    's_net': _s_net,
    'strongly_connected': _strongly_connected,
    'weakly_connected': _weakly_connected,
    'has_isolated_elements': _has_isolated_elements,
}


def check_structural(net: Union[PetriNet, MarkedPetriNet],
                     prop: Union[PropertyId, str]) -> PropertyVerdict:
    """
    Evaluate a structural property on P, T and F.

    Raises:
        NotStructural: prop is behavioural
    """
    prop = _as_property(prop)
    if not prop.is_structural:
        raise NotStructural(str(prop))
    if isinstance(net, MarkedPetriNet):
        net = net.net
    witness = _STRUCTURAL_CHECKS[prop.tag](net)
    if witness is None:
        return PropertyVerdict(prop, Outcome.HOLDS)
    return PropertyVerdict(prop, Outcome.FAILS, witness)


# Behavioural checks, each decided on an explored reachability graph

def _undecided(prop: PropertyId, graph: ReachGraph) -> PropertyVerdict:
    if graph.complete:
        return PropertyVerdict(prop, Outcome.HOLDS)
    return PropertyVerdict(prop, Outcome.UNKNOWN)


def _check_k_bounded(s: MarkedPetriNet, prop: PropertyId, graph: ReachGraph,
                     k: int) -> PropertyVerdict:
    for marking in sorted(graph.states):
        for place, tokens in sorted(marking.nonzero().items()):
            if tokens > k:
                return PropertyVerdict(prop, Outcome.FAILS,
                                       {'place': place, 'marking': marking,
                                        'sequence': graph.path_to(marking)})
    return _undecided(prop, graph)


def _check_bounded(s: MarkedPetriNet, prop: PropertyId, graph: ReachGraph) -> PropertyVerdict:
    # A marking strictly covering one of its ancestors can be pumped forever
    for marking in sorted(graph.states):
        step = graph.parent.get(marking)
        while step is not None:
            ancestor, _ = step
            if marking != ancestor and marking.covers(ancestor):
                return PropertyVerdict(prop, Outcome.FAILS,
                                       {'covered': ancestor, 'covering': marking,
                                        'sequence': graph.path_to(marking)})
            step = graph.parent.get(ancestor)
    return _undecided(prop, graph)


def _check_persistent(s: MarkedPetriNet, prop: PropertyId, graph: ReachGraph) -> PropertyVerdict:
    for marking in sorted(graph.expanded):
        successors = graph.successors(marking)
        enabled = {t for t, _ in successors}
        for t1, after in successors:
            still_enabled = set(enabled_transitions(s.at(after)))
            for t2 in sorted(enabled - {t1}):
                if t2 not in still_enabled:
                    return PropertyVerdict(prop, Outcome.FAILS,
                                           {'marking': marking, 'fired': t1, 'disabled': t2})
    return _undecided(prop, graph)


def _check_deadlock_free(s: MarkedPetriNet, prop: PropertyId, graph: ReachGraph) -> PropertyVerdict:
    for marking in sorted(graph.states):
        if not enabled_transitions(s.at(marking)):
            return PropertyVerdict(prop, Outcome.FAILS,
                                   {'marking': marking, 'sequence': graph.path_to(marking)})
    return _undecided(prop, graph)


def _check_reversible(s: MarkedPetriNet, prop: PropertyId, graph: ReachGraph) -> PropertyVerdict:
    if not graph.complete:
        return PropertyVerdict(prop, Outcome.UNKNOWN)
    digraph = nx.DiGraph()
    digraph.add_nodes_from(graph.states)
    digraph.add_edges_from((m1, m2) for m1, _, m2 in graph.edges)
    returning = nx.ancestors(digraph, graph.initial) | {graph.initial}
    stuck = sorted(graph.states - returning)
    if stuck:
        return PropertyVerdict(prop, Outcome.FAILS, {'marking': stuck[0]})
    return PropertyVerdict(prop, Outcome.HOLDS)


def check_behavioural(s: MarkedPetriNet, prop: Union[PropertyId, str],
                      state_cap: int = STATE_CAP,
                      graph: Optional[ReachGraph] = None) -> PropertyVerdict:
    """
    Decide a behavioural property on the explored reachability graph.

    Args:
        s: Marked net
        prop: Behavioural property
        state_cap: Maximum number of markings to explore
        graph: Already explored graph of s, reused when given

    Returns:
        PropertyVerdict: unknown when the cap was hit and no witness refutes the property

    Raises:
        NotBehavioural: prop is structural
    """
    prop = _as_property(prop)
    if not prop.is_behavioural:
        raise NotBehavioural(str(prop))
    if graph is None:
        graph = reachability_graph(s, state_cap)

    if prop.tag == 'k_bounded':
        k = prop.k if prop.k is not None else DEFAULT_K_BOUND
        verdict = _check_k_bounded(s, prop, graph, k)
    elif prop.tag == 'safe':
        verdict = _check_k_bounded(s, prop, graph, 1)
    elif prop.tag == 'bounded':
        verdict = _check_bounded(s, prop, graph)
    elif prop.tag == 'persistent':
        verdict = _check_persistent(s, prop, graph)
    elif prop.tag == 'deadlock_free':
        verdict = _check_deadlock_free(s, prop, graph)
    else:
        verdict = _check_reversible(s, prop, graph)
    logger.debug(f"{prop} on {s.net.name or '<net>'}: {verdict.outcome.value}")
    return verdict


def check_property(s: MarkedPetriNet, prop: Union[PropertyId, str], state_cap: int = STATE_CAP,
                   graph: Optional[ReachGraph] = None) -> PropertyVerdict:
    prop = _as_property(prop)
    if prop.is_structural:
        return check_structural(s.net, prop)
    return check_behavioural(s, prop, state_cap, graph)


def preservation_report(original: MarkedPetriNet, slice: SliceResult,
                        props: Iterable[Union[PropertyId, str]],
                        state_cap: int = STATE_CAP) -> List[PreservationRow]:
    """
    Side-by-side verdicts of each property on the original net and on the slice.

    Each reachability graph is explored at most once.
    """
    props = [_as_property(p) for p in props]
    graphs: Dict[str, Optional[ReachGraph]] = {'original': None, 'sliced': None}

    def graph_of(key: str, s: MarkedPetriNet) -> ReachGraph:
        if graphs[key] is None:
            graphs[key] = reachability_graph(s, state_cap)
        return graphs[key]

    rows = []
    for prop in props:
        if prop.is_structural:
            before = check_structural(original.net, prop)
            after = check_structural(slice.subnet.net, prop)
        else:
            before = check_behavioural(original, prop, state_cap, graph_of('original', original))
            after = check_behavioural(slice.subnet, prop, state_cap,
                                      graph_of('sliced', slice.subnet))
        rows.append(PreservationRow(prop, before, after))
    return rows


__all__ = ['BEHAVIOURAL', 'NON_PRESERVED_STRUCTURAL', 'Outcome', 'PRESERVED_BEHAVIOURAL',
           'PRESERVED_STRUCTURAL', 'PreservationRow', 'PropertyId', 'PropertyVerdict',
           'STRUCTURAL', 'UNIMPLEMENTED', 'check_behavioural', 'check_property',
           'check_structural', 'preservation_report', 'to_digraph']
