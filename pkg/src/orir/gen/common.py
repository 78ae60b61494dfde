"""Shared generation helpers: id formats, geometry, CSV/instance output."""

from __future__ import annotations

import json
import shutil
from pathlib import Path

import numpy as np

from ..build.lpwrite import format_number
from ..data.store import write_table

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "fixtures"


def ps_id(i: int) -> str:
    return f"PS_{i + 1:03d}"


def dc_id(j: int) -> str:
    return f"DC_{j + 1:03d}"


def customer_id(k: int) -> str:
    return f"C_{k + 1:04d}"


def product_id(p: int) -> str:
    return f"P_{p + 1:03d}"


def carrier_id(j: int) -> str:
    return f"C_{j + 1:04d}"


def shipment_id(i: int) -> str:
    return f"S_{i + 1:04d}"


def nearest_links(src: np.ndarray, dst: np.ndarray, fanout: int):
    """Directed links from each src point to its `fanout` nearest dst
    points, plus a fallback link from every uncovered dst to its nearest
    src. Returns a sorted list of (src_index, dst_index)."""
    fanout = min(fanout, dst.shape[0])
    links: set[tuple[int, int]] = set()
    covered = np.zeros(dst.shape[0], dtype=bool)
    for s in range(src.shape[0]):
        d2 = ((dst - src[s]) ** 2).sum(axis=1)
        for t in np.argsort(d2, kind="stable")[:fanout]:
            links.add((s, int(t)))
            covered[t] = True
    for t in np.flatnonzero(~covered):
        d2 = ((src - dst[t]) ** 2).sum(axis=1)
        links.add((int(np.argmin(d2)), int(t)))
    return sorted(links)


def euclidean(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.hypot(a[0] - b[0], a[1] - b[1]))


def fmt(value: float) -> str:
    """Round generated values to 6 decimals so CSVs stay compact and
    regeneration is stable."""
    return format_number(round(float(value), 6))


def write_instance(out_dir: str | Path, tables: dict[str, tuple[list[str], list]],
                   fixture: str, config: dict) -> Path:
    """Lay out <out>/data/*.csv, the matching IR fixture as ir.json, its
    dimension labels, and an echo of the generation config."""
    out = Path(out_dir)
    data_dir = out / "data"
    data_dir.mkdir(parents=True, exist_ok=True)
    for name, (header, rows) in tables.items():
        write_table(data_dir / f"{name}.csv", header, rows)
    shutil.copyfile(FIXTURE_DIR / f"{fixture}.json", out / "ir.json")
    shutil.copyfile(FIXTURE_DIR / f"{fixture}.labels.json",
                    out / "dim_labels.json")
    (out / "gen_config.json").write_text(
        json.dumps(config, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return out
