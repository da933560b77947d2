from .apt import export_apt
from .dot import export_dot
from .lola import export_lola
from .pnml import parse_pnml, read_pnml, write_pnml

EXPORTERS = {
    'dot': export_dot,
    'lola': export_lola,
    'apt': export_apt,
}

__all__ = [
    'parse_pnml',
    'read_pnml',
    'write_pnml',
    'export_dot',
    'export_lola',
    'export_apt',
    'EXPORTERS',
]
