"""Graphviz rendering of marked nets"""

import logging
from typing import Iterable, Optional

import pydot

from app.models.net import MarkedPetriNet

logger = logging.getLogger(__name__)


def _quoted(node: str) -> str:
    return '"' + node.replace('"', '\\"') + '"'


def export_dot(s: MarkedPetriNet, highlight: Optional[Iterable[str]] = None) -> str:
    """
    Render a marked net as a DOT digraph.

    Places are circles labelled with their id and token count, transitions are
    boxes, and arcs of weight above one carry their weight as a label.

    Args:
        s: Marked net
        highlight: Nodes drawn filled, typically the nodes of a slice

    Returns:
        str: DOT source
    """
    highlight = frozenset(highlight or ())
    graph = pydot.Dot(_quoted(s.name or 'net'), graph_type='digraph', rankdir='LR')

    def styled(node: str, **attrs) -> pydot.Node:
        if node in highlight:
            attrs.update(style='filled', fillcolor='lightgrey')
        return pydot.Node(_quoted(node), **attrs)

    for place in s.net.sorted_places():
        label = _quoted(f"{place}\\n{s.marking[place]}")
        graph.add_node(styled(place, shape='circle', label=label))
    for transition in s.net.sorted_transitions():
        graph.add_node(styled(transition, shape='box'))
    for arc in sorted(s.net.arcs):
        attrs = {'label': str(arc.weight)} if arc.weight > 1 else {}
        graph.add_edge(pydot.Edge(_quoted(arc.source), _quoted(arc.target), **attrs))

    logger.debug(f"Rendered {s.name!r} as DOT with {len(highlight)} highlighted nodes")
    return graph.to_string()
