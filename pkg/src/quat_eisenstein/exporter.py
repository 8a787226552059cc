"""Write and read q-expansions as JSON Lines."""

from __future__ import annotations

import gzip
import io
import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional

import xxhash

from quat_eisenstein.config import ExportConfig
from quat_eisenstein.expansion import QExpansion
from quat_eisenstein.hermitian import HermitianForm

logger = logging.getLogger(__name__)


def coefficient_record(H: HermitianForm, value: Fraction) -> dict[str, Any]:
    """{"H": {...}, "num": "...", "den": "..."}; integers as decimal strings."""
    return {"H": H.to_json(), "num": str(value.numerator), "den": str(value.denominator)}


class ExpansionExporter:
    """Export a q-expansion in canonical key order.

    Output is byte-deterministic for fixed inputs: no timestamps, and gzip headers
    carry neither a file name nor an mtime.
    """

    def __init__(self, config: ExportConfig) -> None:
        self.config = config

    @property
    def output_path(self) -> Path:
        path = Path(self.config.output_path)
        if self.config.compress and not path.name.endswith(".gz"):
            path = path.with_name(path.name + ".gz")
        return path

    def export(self, expansion: QExpansion, meta: Optional[dict[str, Any]] = None) -> Path:
        """Write ``expansion``; returns the output path."""
        path = self.output_path
        path.parent.mkdir(parents=True, exist_ok=True)

        digest = xxhash.xxh64()
        buffer = io.BytesIO()
        count = 0
        for H, value in expansion.items():
            line = (json.dumps(coefficient_record(H, value), ensure_ascii=False) + "\n").encode()
            digest.update(line)
            buffer.write(line)
            count += 1
        payload = buffer.getvalue()

        if self.config.compress:
            with open(path, "wb") as raw, gzip.GzipFile(
                filename="", mode="wb", fileobj=raw, mtime=0
            ) as gz:
                gz.write(payload)
        else:
            path.write_bytes(payload)

        if self.config.write_meta:
            sidecar = {
                "label": expansion.label,
                "trace_bound": expansion.trace_bound,
                "records": count,
                "xxh64": digest.hexdigest(),
                **(meta or {}),
            }
            with open(meta_path(path), "w") as mf:
                json.dump(sidecar, mf, indent=2, sort_keys=True)

        logger.info("Exported %d coefficients to %s", count, path)
        return path


def meta_path(path: Path) -> Path:
    name = path.name
    for suffix in (".gz", ".jsonl"):
        if name.endswith(suffix):
            name = name[: -len(suffix)]
    return path.with_name(name + ".meta.json")


def _open_text(path: Path) -> Any:
    if path.name.endswith(".gz"):
        return gzip.open(path, "rt", encoding="utf-8")
    return open(path, encoding="utf-8")


def read_jsonl(path: str | Path) -> list[dict[str, Any]]:
    path = Path(path)
    with _open_text(path) as f:
        return [json.loads(line) for line in f if line.strip()]


def load_expansion(path: str | Path, label: str = "") -> QExpansion:
    """Rebuild a ``QExpansion`` from a JSONL file; the key set must be complete for its bound."""
    coeffs = {}
    for record in read_jsonl(path):
        H = HermitianForm.from_json(record["H"])
        coeffs[H] = Fraction(int(record["num"]), int(record["den"]))
    bound = max((H.trace for H in coeffs), default=0)
    return QExpansion.from_mapping(coeffs, bound, label or Path(path).name)


def file_digest(path: str | Path) -> str:
    """xxh64 of the uncompressed JSONL bytes."""
    digest = xxhash.xxh64()
    with _open_text(Path(path)) as f:
        for line in f:
            digest.update(line.encode())
    return str(digest.hexdigest())
