"""CSV ingestion against the fixed llent sweep schema."""
from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

REQUIRED_COLUMNS = ("N", "c", "ell", "k", "p_k", "S_A_bits", "S_ub_bits",
                    "E_k", "E_PP", "is_TG", "residual")


class SchemaError(ValueError):
    """The CSV does not conform to the llent output schema."""


@dataclass(frozen=True)
class SweepTable:
    """Parsed rows: numeric arrays, with TG rows flagged and c = nan there."""

    n: np.ndarray
    c: np.ndarray
    k: np.ndarray
    ell: np.ndarray
    p_k: np.ndarray
    s_a_bits: np.ndarray
    s_ub_bits: np.ndarray
    e_k: np.ndarray
    e_pp: np.ndarray
    is_tg: np.ndarray

    def __len__(self) -> int:
        return len(self.n)

    def select(self, mask) -> "SweepTable":
        return SweepTable(*(getattr(self, f)[mask] for f in (
            "n", "c", "k", "ell", "p_k", "s_a_bits", "s_ub_bits",
            "e_k", "e_pp", "is_tg")))

    def particle_numbers(self) -> list:
        return sorted(set(self.n.tolist()))


def load_table(*paths: str) -> SweepTable:
    """Read and concatenate one or more schema-conforming CSV files."""
    rows = []
    for path in paths:
        with open(path, newline="") as fh:
            reader = csv.reader(line for line in fh if not line.startswith("#"))
            try:
                header = next(reader)
            except StopIteration:
                raise SchemaError(f"{path}: empty file, no header row")
            missing = [col for col in REQUIRED_COLUMNS if col not in header]
            if missing:
                raise SchemaError(f"{path}: missing columns {missing}")
            idx = {col: header.index(col) for col in REQUIRED_COLUMNS}
            for line_no, rec in enumerate(reader, start=2):
                if len(rec) < len(header):
                    raise SchemaError(f"{path}:{line_no}: short row")
                rows.append({col: rec[idx[col]] for col in REQUIRED_COLUMNS})
    if not rows:
        raise SchemaError(f"{paths}: no data rows")

    def floats(col, empty=np.nan):
        return np.array([float(r[col]) if r[col] != "" else empty for r in rows])

    try:
        return SweepTable(
            n=floats("N").astype(int),
            c=floats("c"),
            k=floats("k").astype(int),
            ell=floats("ell"),
            p_k=floats("p_k"),
            s_a_bits=floats("S_A_bits"),
            s_ub_bits=floats("S_ub_bits"),
            e_k=floats("E_k"),
            e_pp=floats("E_PP"),
            is_tg=floats("is_TG", empty=0.0).astype(bool),
        )
    except ValueError as exc:
        raise SchemaError(f"non-numeric cell: {exc}") from exc
