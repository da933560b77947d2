"""Export to the LoLA low-level net format"""

import logging
import re

from app.formats.naming import transliterate
from app.models.net import MarkedPetriNet

logger = logging.getLogger(__name__)

_ILLEGAL = r'[^A-Za-z0-9_.]'
_COMMENT_BRACES = re.compile(r'[{}]')


def export_lola(s: MarkedPetriNet) -> str:
    """
    Render PLACE, MARKING and TRANSITION sections.

    Raises:
        UnsupportedName: Two ids collide after transliteration
    """
    net = s.net
    names = transliterate(net.nodes, _ILLEGAL, 'LoLA')

    def entries(pairs) -> str:
        return ', '.join(f"{names[p]}: {n}" for p, n in pairs)

    title = _COMMENT_BRACES.sub('_', net.name)
    lines = [f"{{ net {title} }}" if title else "{ net }", ""]
    lines.append(f"PLACE {', '.join(names[p] for p in sorted(net.places))};")
    lines.append("")
    marked = sorted(s.marking.nonzero().items())
    lines.append(f"MARKING {entries(marked)};")
    lines.append("")
    for t in sorted(net.transitions):
        consume = sorted((p, net.weight(p, t)) for p in net.pre(t))
        produce = sorted((p, net.weight(t, p)) for p in net.post(t))
        lines.append(f"TRANSITION {names[t]}")
        lines.append(f"  CONSUME {entries(consume)};")
        lines.append(f"  PRODUCE {entries(produce)};")
        lines.append("")
    return "\n".join(lines)
