"""CSV table loading.

Tables are plain lists of row dicts keyed by header names, loaded verbatim
(cell whitespace preserved). A DataStore is immutable after load; what-if
patches produce new stores that share untouched tables.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path

from ..errors import CsvError


@dataclass(frozen=True)
class DataStore:
    tables: dict[str, list[dict[str, str]]]

    def table(self, name: str) -> list[dict[str, str]] | None:
        return self.tables.get(name)

    def with_table(self, name: str, rows: list[dict[str, str]]) -> "DataStore":
        tables = dict(self.tables)
        tables[name] = rows
        return DataStore(tables)


def parse_csv_text(text: str, filename: str) -> list[dict[str, str]]:
    """Parse one CSV document; raises CsvError on ragged rows."""
    if text == "":
        return []
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        return []
    rows = []
    for line_no, record in enumerate(reader, start=2):
        if not record:
            continue
        if len(record) != len(header):
            raise CsvError(filename, line_no,
                           f"expected {len(header)} cells, got {len(record)}")
        rows.append(dict(zip(header, record)))
    return rows


def load_tables(directory: str | Path) -> DataStore:
    """Load every .csv file in a directory; table names are filename stems."""
    directory = Path(directory)
    if not directory.is_dir():
        raise OSError(f"not a directory: {directory}")
    tables = {}
    for path in sorted(directory.glob("*.csv")):
        text = path.read_text(encoding="utf-8")
        tables[path.stem] = parse_csv_text(text, path.name)
    return DataStore(tables)


def write_table(path: str | Path, header: list[str], rows) -> None:
    """Write rows (iterables of cells) under a header, RFC-4180 style with
    Unix newlines so output bytes are platform-independent."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
