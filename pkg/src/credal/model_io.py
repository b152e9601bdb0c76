"""File formats: CSV datasets and label vectors, JSON models and reports.

CSV files carry a header (features f1..fp, labels in a ``y`` column) with
floats rendered by shortest round-trip repr, so read(write(x)) == x exactly.
JSON documents carry a ``schema_version`` and reject unknown keys, so schema
drift fails loudly instead of being silently ignored.
"""

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .belief import CredalPartition, FocalStructure
from .dataset import Dataset
from .engine import ClusterModel, FitConfig, SourceKnowledge

__all__ = [
    "ModelDocument",
    "read_dataset_csv",
    "write_dataset_csv",
    "read_labels_csv",
    "write_labels_csv",
    "read_csv_header",
    "write_model",
    "read_model",
    "write_source_knowledge",
    "read_source_knowledge",
    "write_partition",
    "read_partition",
    "write_grid_report",
    "read_grid_report",
]

SCHEMA_VERSION = 1

_CONFIG_KEYS = (
    "alpha",
    "beta",
    "delta",
    "gamma",
    "lam",
    "epsilon",
    "max_iter",
    "max_cardinality",
    "seed",
    "ridge",
)


@dataclass(frozen=True)
class ModelDocument:
    """Parsed model file: everything needed to reuse a fit, minus the data."""

    schema_version: int
    seed: int
    config: FitConfig
    structure: FocalStructure
    centers: np.ndarray
    barycenters: np.ndarray
    association: np.ndarray | None
    objective_trace: tuple[float, ...]


# ---------------------------------------------------------------------------
# CSV


def _parse_float(cell, line, column):
    try:
        return float(cell)
    except ValueError:
        raise ValueError(
            f"line {line}, column {column!r}: cannot parse {cell!r} as a number"
        ) from None


def _parse_int(cell, line, column):
    try:
        return int(cell)
    except ValueError:
        raise ValueError(
            f"line {line}, column {column!r}: cannot parse {cell!r} as an integer label"
        ) from None


def _read_rows(path):
    with open(path, newline="", encoding="utf-8") as handle:
        rows = list(csv.reader(handle))
    if not rows:
        raise ValueError(f"{path}: empty file, expected a header row")
    header = rows[0]
    if len(set(header)) != len(header):
        raise ValueError(f"{path}: duplicate column names in header")
    for i, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise ValueError(
                f"{path}: line {i} has {len(row)} cells, header has {len(header)}"
            )
    return header, rows[1:]


def read_csv_header(path) -> list[str]:
    """Just the column names of a CSV file."""
    header, _ = _read_rows(path)
    return header


def read_dataset_csv(path, label_column: str | None = None) -> Dataset:
    """Load a dataset; ``label_column`` (if given) is split off as labels."""
    header, rows = _read_rows(path)
    if label_column is not None and label_column not in header:
        raise ValueError(f"{path}: no column named {label_column!r} in header")
    if not rows:
        raise ValueError(f"{path}: no data rows")
    label_idx = None if label_column is None else header.index(label_column)
    feature_cols = [i for i in range(len(header)) if i != label_idx]
    if not feature_cols:
        raise ValueError(f"{path}: no feature columns besides the label column")
    features = np.empty((len(rows), len(feature_cols)))
    labels = None if label_idx is None else np.empty(len(rows), dtype=np.int64)
    for r, row in enumerate(rows):
        line = r + 2
        for out_col, i in enumerate(feature_cols):
            features[r, out_col] = _parse_float(row[i], line, header[i])
        if label_idx is not None:
            labels[r] = _parse_int(row[label_idx], line, header[label_idx])
    return Dataset(features=features, labels=labels, name=Path(path).stem)


def write_dataset_csv(path, data: Dataset) -> None:
    """Write features as f1..fp plus a trailing y column when labeled."""
    header = [f"f{i + 1}" for i in range(data.p)]
    if data.labels is not None:
        header.append("y")
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for i in range(data.n):
            row = [repr(float(v)) for v in data.features[i]]
            if data.labels is not None:
                row.append(str(int(data.labels[i])))
            writer.writerow(row)


def read_labels_csv(path, column: str | None = None) -> np.ndarray:
    """Load one integer label column: ``column``, else ``y``, else the only one."""
    header, rows = _read_rows(path)
    if column is None:
        if "y" in header:
            column = "y"
        elif len(header) == 1:
            column = header[0]
        else:
            raise ValueError(
                f"{path}: multiple columns and none named 'y'; pass the label column"
            )
    if column not in header:
        raise ValueError(f"{path}: no column named {column!r} in header")
    if not rows:
        raise ValueError(f"{path}: no data rows")
    idx = header.index(column)
    return np.array(
        [_parse_int(row[idx], r + 2, column) for r, row in enumerate(rows)],
        dtype=np.int64,
    )


def write_labels_csv(path, labels, column: str = "y") -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow([column])
        for value in np.asarray(labels):
            writer.writerow([str(int(value))])


# ---------------------------------------------------------------------------
# JSON helpers


def _array_block(arr) -> dict:
    arr = np.asarray(arr, dtype=float)
    return {"shape": list(arr.shape), "data": [float(v) for v in arr.ravel()]}


def _read_array_block(block, where):
    _require_keys(block, ("shape", "data"), (), where)
    shape = block["shape"]
    data = block["data"]
    if not (isinstance(shape, list) and all(isinstance(v, int) for v in shape)):
        raise ValueError(f"{where}.shape must be a list of integers")
    if not isinstance(data, list):
        raise ValueError(f"{where}.data must be a list of numbers")
    arr = np.array(data, dtype=float)
    if arr.size != int(np.prod(shape, dtype=np.int64)):
        raise ValueError(f"{where}: shape {shape} does not match {arr.size} values")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{where}: values must be finite")
    return arr.reshape(shape)


def _require_keys(obj, required, optional, where):
    if not isinstance(obj, dict):
        raise ValueError(f"{where} must be a JSON object")
    for key in required:
        if key not in obj:
            raise ValueError(f"{where}: missing key {key!r}")
    for key in obj:
        if key not in required and key not in optional:
            raise ValueError(f"{where}: unknown key {key!r}")


def _check_schema_version(doc, path):
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ValueError(
            f"{path}: unsupported schema_version {version!r} "
            f"(this build reads version {SCHEMA_VERSION})"
        )


def _config_dict(config: FitConfig) -> dict:
    return {key: getattr(config, key) for key in _CONFIG_KEYS}


def _parse_config(obj, where) -> FitConfig:
    _require_keys(obj, _CONFIG_KEYS, (), where)
    try:
        return FitConfig(**obj)
    except TypeError as exc:
        raise ValueError(f"{where}: {exc}") from None


def _structure_dict(structure: FocalStructure) -> dict:
    return {
        "c": structure.c,
        "max_cardinality": structure.max_cardinality,
        "focal_sets": [list(s) for s in structure.focal_sets],
    }


def _parse_structure(obj, where) -> FocalStructure:
    _require_keys(obj, ("c", "max_cardinality", "focal_sets"), (), where)
    sets = obj["focal_sets"]
    if not isinstance(sets, list):
        raise ValueError(f"{where}.focal_sets must be a list of integer lists")
    return FocalStructure(
        c=obj["c"],
        max_cardinality=obj["max_cardinality"],
        focal_sets=tuple(tuple(s) for s in sets),
    )


def _dump(doc, path):
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(doc, handle, indent=2, allow_nan=False)
        handle.write("\n")


def _load(path):
    with open(path, encoding="utf-8") as handle:
        try:
            return json.load(handle)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: not valid JSON ({exc})") from None


# ---------------------------------------------------------------------------
# Model documents


def write_model(model: ClusterModel | ModelDocument, path) -> None:
    if isinstance(model, ClusterModel):
        association = None if model.association is None else model.association.r
        model = ModelDocument(
            schema_version=SCHEMA_VERSION,
            seed=model.config.seed,
            config=model.config,
            structure=model.structure,
            centers=model.centers,
            barycenters=model.barycenters,
            association=association,
            objective_trace=model.objective_trace,
        )
    doc = {
        "schema_version": model.schema_version,
        "seed": model.seed,
        "config": _config_dict(model.config),
        "structure": _structure_dict(model.structure),
        "centers": _array_block(model.centers),
        "barycenters": _array_block(model.barycenters),
    }
    if model.association is not None:
        doc["association"] = _array_block(model.association)
    doc["objective_trace"] = [float(v) for v in model.objective_trace]
    _dump(doc, path)


def read_model(path) -> ModelDocument:
    doc = _load(path)
    _require_keys(
        doc,
        (
            "schema_version",
            "seed",
            "config",
            "structure",
            "centers",
            "barycenters",
            "objective_trace",
        ),
        ("association",),
        str(path),
    )
    _check_schema_version(doc, path)
    config = _parse_config(doc["config"], f"{path}: config")
    structure = _parse_structure(doc["structure"], f"{path}: structure")
    centers = _read_array_block(doc["centers"], f"{path}: centers")
    barycenters = _read_array_block(doc["barycenters"], f"{path}: barycenters")
    if centers.shape[0] != structure.c:
        raise ValueError(f"{path}: centers rows do not match structure.c")
    if barycenters.shape != (structure.n_sets, centers.shape[1]):
        raise ValueError(f"{path}: barycenters shape does not match the structure")
    association = None
    if "association" in doc:
        association = _read_array_block(doc["association"], f"{path}: association")
        if association.shape[1] != structure.n_sets:
            raise ValueError(f"{path}: association columns do not match the structure")
    trace = doc["objective_trace"]
    if not isinstance(trace, list) or not all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in trace
    ):
        raise ValueError(f"{path}: objective_trace must be a list of numbers")
    if not (isinstance(doc["seed"], int) and not isinstance(doc["seed"], bool)):
        raise ValueError(f"{path}: seed must be an integer")
    return ModelDocument(
        schema_version=doc["schema_version"],
        seed=doc["seed"],
        config=config,
        structure=structure,
        centers=centers,
        barycenters=barycenters,
        association=association,
        objective_trace=tuple(float(v) for v in trace),
    )


# ---------------------------------------------------------------------------
# Source knowledge


def write_source_knowledge(knowledge: SourceKnowledge, path) -> None:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "structure": _structure_dict(knowledge.structure),
        "barycenters": _array_block(knowledge.barycenters),
    }
    _dump(doc, path)


def read_source_knowledge(path) -> SourceKnowledge:
    doc = _load(path)
    _require_keys(
        doc, ("schema_version", "structure", "barycenters"), (), str(path)
    )
    _check_schema_version(doc, path)
    structure = _parse_structure(doc["structure"], f"{path}: structure")
    barycenters = _read_array_block(doc["barycenters"], f"{path}: barycenters")
    return SourceKnowledge(barycenters=barycenters, structure=structure)


# ---------------------------------------------------------------------------
# Partitions


def write_partition(
    partition: CredalPartition, structure: FocalStructure, path
) -> None:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "structure": _structure_dict(structure),
        "masses": _array_block(partition.masses),
        "empty_mass": [float(v) for v in partition.empty_mass],
    }
    _dump(doc, path)


def read_partition(path):
    doc = _load(path)
    _require_keys(
        doc, ("schema_version", "structure", "masses", "empty_mass"), (), str(path)
    )
    _check_schema_version(doc, path)
    structure = _parse_structure(doc["structure"], f"{path}: structure")
    masses = _read_array_block(doc["masses"], f"{path}: masses")
    empty = np.asarray(doc["empty_mass"], dtype=float)
    if masses.shape[1] != structure.n_sets:
        raise ValueError(f"{path}: masses columns do not match the structure")
    return CredalPartition(masses=masses, empty_mass=empty), structure


# ---------------------------------------------------------------------------
# Grid-search reports


def write_grid_report(path, *, scorer, seeds, table, best_lam) -> None:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "scorer": scorer,
        "seeds": [int(s) for s in seeds],
        "best_lambda": float(best_lam),
        "scores": [
            {
                "lambda": row["lam"],
                "mean": row["mean"],
                "std": row["std"],
                "per_seed": list(row["per_seed"]),
            }
            for row in table
        ],
    }
    _dump(doc, path)


def read_grid_report(path) -> dict:
    doc = _load(path)
    _require_keys(
        doc,
        ("schema_version", "scorer", "seeds", "best_lambda", "scores"),
        (),
        str(path),
    )
    _check_schema_version(doc, path)
    return doc
