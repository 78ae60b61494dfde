from .materialize import (
    DEFAULT_INF,
    DEFAULT_ZERO,
    LookupResult,
    lookup,
    materialize_param,
    materialize_set,
    ParamInstance,
    parse_numeric,
    SetInstance,
    table_stem,
)
from .store import DataStore, load_tables, parse_csv_text, write_table

__all__ = [
    "DEFAULT_INF", "DEFAULT_ZERO", "LookupResult", "lookup",
    "materialize_param", "materialize_set", "ParamInstance", "parse_numeric",
    "SetInstance", "table_stem", "DataStore", "load_tables",
    "parse_csv_text", "write_table",
]
