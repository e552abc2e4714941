"""Matrix files and analysis reports.

Matrices travel as JSON documents with exact [re, im] number pairs:

    {"n": 2, "entries": [[[0,0],[0,0]],[[2,0],[0,0]]]}
    {"diag": [[1,0],[-1,0]]}

Bare numbers are accepted wherever a pair is expected and read as reals.
Reports are JSON with sorted keys so identical inputs and seeds reproduce
byte-identical documents apart from the wall-time field.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

from .errors import InvalidInput


def _as_complex(v, where: str) -> complex:
    if isinstance(v, (int, float)):
        return complex(v)
    if (isinstance(v, (list, tuple)) and len(v) == 2
            and all(isinstance(t, (int, float)) for t in v)):
        return complex(v[0], v[1])
    raise InvalidInput(f"{where}: expected a number or [re, im] pair, got {v!r}")


def parse_matrix_document(doc, where: str = "matrix") -> np.ndarray:
    if not isinstance(doc, dict):
        raise InvalidInput(f"{where}: top level must be a JSON object")
    if "diag" in doc:
        entries = doc["diag"]
        if not isinstance(entries, list) or not entries:
            raise InvalidInput(f"{where}: 'diag' must be a nonempty array")
        return np.diag([_as_complex(v, where) for v in entries])
    if "entries" not in doc:
        raise InvalidInput(f"{where}: need 'entries' (with 'n') or 'diag'")
    rows = doc["entries"]
    if not isinstance(rows, list) or not rows:
        raise InvalidInput(f"{where}: 'entries' must be a nonempty array")
    n = doc.get("n", len(rows))
    if len(rows) != n or any(not isinstance(r, list) or len(r) != n
                             for r in rows):
        raise InvalidInput(f"{where}: entries must form an {n}x{n} array")
    M = np.empty((n, n), dtype=complex)
    for i, row in enumerate(rows):
        for j, v in enumerate(row):
            M[i, j] = _as_complex(v, f"{where}[{i}][{j}]")
    return M


def load_matrix(path) -> tuple[np.ndarray, dict]:
    """Read a matrix file; returns (matrix, provenance dict with path,
    sha256 and dimension)."""
    p = Path(path)
    try:
        raw = p.read_bytes()
    except OSError as e:
        raise InvalidInput(f"cannot read {p}: {e}") from e
    try:
        doc = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise InvalidInput(f"{p} is not valid JSON: {e}") from e
    M = parse_matrix_document(doc, where=str(p))
    digest = hashlib.sha256(raw).hexdigest()
    return M, {"path": str(p), "sha256": digest, "n": int(M.shape[0])}


def complex_to_json(z: complex) -> list[float]:
    return [float(np.real(z)), float(np.imag(z))]


def vector_to_json(v) -> list[list[float]]:
    return [complex_to_json(z) for z in np.asarray(v, dtype=complex).ravel()]


def vector_from_json(data) -> np.ndarray:
    return np.array([complex(re, im) for re, im in data], dtype=complex)


def dump_report(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, allow_nan=False) + "\n"


def write_report(report: dict, out_path=None) -> str:
    text = dump_report(report)
    if out_path:
        Path(out_path).write_text(text, encoding="utf-8")
    return text


def load_report(path) -> dict:
    p = Path(path)
    try:
        doc = json.loads(p.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise InvalidInput(f"cannot read report {p}: {e}") from e
    if not isinstance(doc, dict):
        raise InvalidInput(f"report {p} must be a JSON object")
    return doc


def reload_input(entry: dict) -> np.ndarray:
    """Re-read a report's input matrix, insisting the file is unchanged."""
    M, prov = load_matrix(entry["path"])
    if prov["sha256"] != entry.get("sha256"):
        raise InvalidInput(
            f"{entry['path']} changed since the report was written "
            "(sha256 mismatch)")
    return M


def write_csv(path, header: str, rows) -> None:
    lines = [header]
    lines.extend(",".join(f"{v:.17g}" if isinstance(v, float) else str(v)
                          for v in row) for row in rows)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
