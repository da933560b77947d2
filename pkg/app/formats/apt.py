"""Export to the APT labelled net format"""

import json
import logging

from app.formats.naming import transliterate
from app.models.net import MarkedPetriNet

logger = logging.getLogger(__name__)

_ILLEGAL = r'[^A-Za-z0-9_]'


def export_apt(s: MarkedPetriNet) -> str:
    """
    Render .name/.type/.places/.transitions/.flows/.initial_marking sections.

    Raises:
        UnsupportedName: Two ids collide after transliteration
    """
    net = s.net
    names = transliterate(net.nodes, _ILLEGAL, 'APT', leading_digit_prefix='_')

    def multiset(pairs) -> str:
        parts = [names[p] if n == 1 else f"{n}*{names[p]}" for p, n in pairs]
        return "{" + ", ".join(parts) + "}"

    lines = [f".name {json.dumps(net.name or 'net')}", ".type LPN", "", ".places"]
    lines.extend(names[p] for p in sorted(net.places))
    lines.extend(["", ".transitions"])
    lines.extend(names[t] for t in sorted(net.transitions))
    lines.extend(["", ".flows"])
    for t in sorted(net.transitions):
        consume = sorted((p, net.weight(p, t)) for p in net.pre(t))
        produce = sorted((p, net.weight(t, p)) for p in net.post(t))
        lines.append(f"{names[t]}: {multiset(consume)} -> {multiset(produce)}")
    lines.extend(["", f".initial_marking {multiset(sorted(s.marking.nonzero().items()))}", ""])
    return "\n".join(lines)
