"""Output emission: atomic CSV/JSON writers and figure rendering.

All files are written atomically (temp file in the target directory, then
rename) so a failed run leaves no partial outputs.  CSV numbers use a
fixed 12-significant-digit format so identical runs produce byte-identical
files.
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

NUM_FMT = "%.12g"


def _atomic_write_bytes(path: Path, data: bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def fmt(value) -> str:
    """Deterministic numeric formatting for CSV cells."""
    if isinstance(value, (int,)) or (hasattr(value, "dtype")
                                     and value.dtype.kind in "iu"):
        return str(int(value))
    if isinstance(value, float) or (hasattr(value, "dtype")):
        return NUM_FMT % float(value)
    return str(value)


def write_csv(path: Path, header: list[str], rows) -> None:
    """RFC-4180-style CSV with a units-carrying header row."""
    buf = io.StringIO()
    writer = csv.writer(buf, quoting=csv.QUOTE_MINIMAL, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    _atomic_write_bytes(Path(path), buf.getvalue().encode())


def write_json(path: Path, payload: dict) -> None:
    data = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    _atomic_write_bytes(Path(path), data.encode())


def save_figure(fig, path: Path) -> None:
    buf = io.BytesIO()
    fig.savefig(buf, format="png", dpi=130, bbox_inches="tight")
    plt.close(fig)
    _atomic_write_bytes(Path(path), buf.getvalue())


def new_figure(**kwargs):
    return plt.subplots(**kwargs)
