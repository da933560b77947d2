"""
PNML reading and canonical writing for place/transition nets.

Only the 2009 P/T grammar is supported. Pages are flattened, graphics are
ignored, and tool-specific or unknown elements are dropped with a warning.
"""

import logging
import os
import xml.etree.ElementTree as ET
from typing import Dict, List, Optional, Set

from app.models.exceptions import EmptyNet, FormatError, MalformedXml, NotAPtNet
from app.models.net import Arc, MarkedPetriNet, Marking, PetriNet, make_net

logger = logging.getLogger(__name__)

PNML_NS = 'http://www.pnml.org/version-2009/grammar/pnml'
PTNET_TYPE = 'http://www.pnml.org/version-2009/grammar/ptnet'

# Skipped without a warning
_SILENT = {'graphics', 'name'}


def _local(tag: str) -> str:
    return tag.rsplit('}', 1)[-1]


def _child(element: ET.Element, name: str) -> Optional[ET.Element]:
    for child in element:
        if _local(child.tag) == name:
            return child
    return None


def _text_value(element: ET.Element, name: str) -> Optional[str]:
    """Text of <name><text>...</text></name> under element, if present"""
    holder = _child(element, name)
    if holder is None:
        return None
    text = _child(holder, 'text')
    if text is None or text.text is None:
        return None
    return text.text.strip()


def _int_value(element: ET.Element, name: str, default: int) -> int:
    value = _text_value(element, name)
    if value is None or value == '':
        return default
    try:
        return int(value)
    except ValueError:
        raise MalformedXml(f"{name} of {element.get('id')} is not an integer: {value!r}") from None


class _PageCollector:
    """Collects nodes and arcs from a net element and all nested pages"""

    def __init__(self):
        self.logger = logging.getLogger(__name__)
        self.places: Dict[str, int] = {}
        self.transitions: List[str] = []
        self.arcs: List[Arc] = []
        self.warned: Set[str] = set()

    def _warn_once(self, tag: str) -> None:
        if tag not in self.warned:
            self.warned.add(tag)
            self.logger.warning(f"Ignoring unsupported PNML element <{tag}>")

    def _require_id(self, element: ET.Element) -> str:
        node_id = element.get('id')
        if not node_id:
            raise MalformedXml(f"<{_local(element.tag)}> without an id attribute")
        return node_id

    def collect(self, container: ET.Element) -> None:
        for element in container:
            tag = _local(element.tag)
            if tag == 'page':
                self.collect(element)
            elif tag == 'place':
                self.places[self._require_id(element)] = _int_value(element, 'initialMarking', 0)
            elif tag == 'transition':
                self.transitions.append(self._require_id(element))
            elif tag == 'arc':
                source, target = element.get('source'), element.get('target')
                if not source or not target:
                    raise MalformedXml(f"Arc {element.get('id')} lacks a source or target")
                self.arcs.append(Arc(source, target, _int_value(element, 'inscription', 1)))
            elif tag not in _SILENT:
                self._warn_once(tag)


def parse_pnml(data: bytes, allow_empty: bool = False) -> MarkedPetriNet:
    """
    Parse a PNML document into a marked net.

    Args:
        data: Document bytes
        allow_empty: Accept a net without places and transitions (written slices
            can be empty)

    Returns:
        MarkedPetriNet: The first net of the document with its initial marking

    Raises:
        MalformedXml: The document is not well-formed or lacks required attributes
        NotAPtNet: The document holds no net or a net of another type
        NetValidationError: The net is not a valid place/transition net
        EmptyNet: The net has no places and no transitions
    """
    try:
        root = ET.fromstring(data)
    except ET.ParseError as e:
        raise MalformedXml(f"Malformed PNML document: {e}") from e

    if _local(root.tag) == 'net':
        nets = [root]
    else:
        nets = [child for child in root if _local(child.tag) == 'net']
    if not nets:
        raise NotAPtNet("Document contains no <net> element")
    if len(nets) > 1:
        logger.warning(f"Document contains {len(nets)} nets, only the first is read")
    net_element = nets[0]

    net_type = net_element.get('type')
    if net_type is None:
        logger.warning("Net has no type attribute, reading it as a P/T net")
    elif net_type.rstrip('/').rsplit('/', 1)[-1].lower() != 'ptnet':
        raise NotAPtNet(f"Unsupported net type: {net_type}")

    name = _text_value(net_element, 'name') or net_element.get('id') or ''
    collector = _PageCollector()
    collector.collect(net_element)
    if not collector.places and not collector.transitions and not allow_empty:
        raise EmptyNet(name)

    net = make_net(collector.places, collector.transitions, collector.arcs, name=name)
    marking = Marking({p: n for p, n in collector.places.items() if n})
    logger.info(f"Parsed net {name!r}: {len(net.places)} places, {len(net.transitions)} "
                f"transitions, {len(net.arcs)} arcs")
    return MarkedPetriNet(net, marking)


def write_pnml(s: MarkedPetriNet) -> bytes:
    """
    Canonical PNML: ids sorted, weight-1 inscriptions and empty markings omitted.
    """
    ET.register_namespace('', PNML_NS)

    def qualified(tag: str) -> str:
        return f"{{{PNML_NS}}}{tag}"

    root = ET.Element(qualified('pnml'))
    net_id = s.net.name or 'net'
    net_element = ET.SubElement(root, qualified('net'), {'id': net_id, 'type': PTNET_TYPE})
    holder = ET.SubElement(net_element, qualified('name'))
    ET.SubElement(holder, qualified('text')).text = net_id
    page = ET.SubElement(net_element, qualified('page'), {'id': 'page0'})

    for place in sorted(s.net.places):
        element = ET.SubElement(page, qualified('place'), {'id': place})
        tokens = s.marking[place]
        if tokens:
            marking = ET.SubElement(element, qualified('initialMarking'))
            ET.SubElement(marking, qualified('text')).text = str(tokens)
    for transition in sorted(s.net.transitions):
        ET.SubElement(page, qualified('transition'), {'id': transition})

    taken = set(s.net.nodes) | {'page0', net_id}
    index = 0
    for arc in sorted(s.net.arcs):
        arc_id = f"a{index}"
        while arc_id in taken:
            index += 1
            arc_id = f"a{index}"
        taken.add(arc_id)
        index += 1
        element = ET.SubElement(page, qualified('arc'),
                                {'id': arc_id, 'source': arc.source, 'target': arc.target})
        if arc.weight != 1:
            inscription = ET.SubElement(element, qualified('inscription'))
            ET.SubElement(inscription, qualified('text')).text = str(arc.weight)

    tree = ET.ElementTree(root)
    ET.indent(tree)
    return ET.tostring(root, encoding='utf-8', xml_declaration=True) + b"\n"


def read_pnml(path: str) -> MarkedPetriNet:
    """
    Parse a PNML file; a net without a name is named after the file stem.

    Raises:
        FormatError: The file cannot be read or does not hold a P/T net
    """
    try:
        with open(path, 'rb') as f:
            data = f.read()
    except OSError as e:
        raise FormatError(f"Cannot read {path}: {e.strerror}") from e
    s = parse_pnml(data)
    if s.name:
        return s
    stem = os.path.splitext(os.path.basename(path))[0]
    net = PetriNet(s.net.places, s.net.transitions, s.net.arcs, stem)
    return MarkedPetriNet(net, s.marking)
