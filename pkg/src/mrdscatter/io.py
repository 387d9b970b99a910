"""JSON and CSV persistence for experiment output."""

from __future__ import annotations

import csv
import json
from pathlib import Path

CSV_COLUMNS = ["q", "n", "s", "scattered", "norm_classes", "expected"]


def write_json(path, data) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")


def read_json(path):
    return json.loads(Path(path).read_text())


def append_csv_row(path, row: dict) -> None:
    """Append one summary row, writing the header if the file is new."""
    path = Path(path)
    new = not path.exists()
    with path.open("a", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        if new:
            writer.writeheader()
        writer.writerow({k: row.get(k, "") for k in CSV_COLUMNS})
