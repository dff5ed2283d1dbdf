"""
Catálogo de eventos, paths e ingestão JSONL
"""

from catalog.types import (
    CONVERSION_INDEX,
    CUSTOMER,
    FIRM,
    Event,
    EventCatalog,
    Path,
    RemovalSet,
    truncate_before,
)
from catalog.io import (
    dump_paths,
    load_catalog,
    load_paths,
    parse_path_line,
    path_to_dict,
)

__all__ = [
    'CONVERSION_INDEX',
    'CUSTOMER',
    'FIRM',
    'Event',
    'EventCatalog',
    'Path',
    'RemovalSet',
    'truncate_before',
    'dump_paths',
    'load_catalog',
    'load_paths',
    'parse_path_line',
    'path_to_dict',
]
