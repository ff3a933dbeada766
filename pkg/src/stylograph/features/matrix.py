from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np


@dataclass
class FeatureMatrix:
    """M x F matrix with named columns and doc ids for rows."""

    values: np.ndarray
    row_ids: list[str]
    names: list[str]
    variant: str = ""
    feature_set: str = ""

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 2:
            raise ValueError("feature matrix must be 2-D")
        if self.values.shape != (len(self.row_ids), len(self.names)):
            raise ValueError(
                f"shape {self.values.shape} does not match "
                f"{len(self.row_ids)} rows x {len(self.names)} names"
            )
        if len(set(self.names)) != len(self.names):
            raise ValueError("feature names must be unique")
        if not np.isfinite(self.values).all():
            raise ValueError("feature matrix contains NaN or Inf")

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    def select_columns(self, columns: Sequence[int]) -> "FeatureMatrix":
        cols = list(columns)
        return FeatureMatrix(
            self.values[:, cols], list(self.row_ids), [self.names[c] for c in cols],
            self.variant, self.feature_set,
        )

    def hstack(self, other: "FeatureMatrix") -> "FeatureMatrix":
        if other.row_ids != self.row_ids:
            raise ValueError("row ids differ")
        return FeatureMatrix(
            np.hstack([self.values, other.values]), list(self.row_ids),
            self.names + other.names, self.variant, self.feature_set,
        )

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["doc_id", *self.names])
        for doc_id, row in zip(self.row_ids, self.values):
            writer.writerow([doc_id, *(repr(float(x)) for x in row)])
        return buf.getvalue()

    def layout_dict(self) -> dict:
        return {
            "feature_set": self.feature_set,
            "variant": self.variant,
            "length": len(self.names),
            "names": list(self.names),
        }

    def write(self, csv_path: str | Path, layout_path: str | Path | None = None) -> None:
        Path(csv_path).write_text(self.to_csv(), encoding="utf-8")
        if layout_path is not None:
            Path(layout_path).write_text(
                json.dumps(self.layout_dict(), ensure_ascii=False, indent=1), encoding="utf-8"
            )

    @classmethod
    def read_csv(cls, path: str | Path, variant: str = "", feature_set: str = "") -> "FeatureMatrix":
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
        header, body = rows[0], rows[1:]
        values = np.array([[float(x) for x in r[1:]] for r in body], dtype=np.float64)
        values = values.reshape(len(body), len(header) - 1)
        return cls(values, [r[0] for r in body], header[1:], variant, feature_set)
