import re
from typing import Dict, Iterable

from app.models.exceptions import UnsupportedName


def transliterate(ids: Iterable[str], illegal: str, target: str,
                  leading_digit_prefix: str = '') -> Dict[str, str]:
    """
    Map every id to a name legal in a target grammar.

    Characters matching the `illegal` pattern become '_'. Two ids mapping to
    the same name raise UnsupportedName.
    """
    pattern = re.compile(illegal)
    names: Dict[str, str] = {}
    owners: Dict[str, str] = {}
    for node in sorted(ids):
        name = pattern.sub('_', node) or '_'
        if leading_digit_prefix and name[0].isdigit():
            name = leading_digit_prefix + name
        if name in owners:
            raise UnsupportedName(node, target)
        owners[name] = node
        names[node] = name
    return names
