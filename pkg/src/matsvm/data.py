"""Dataset manifests, CSV loading, normalisation and resampling.

A manifest is a flat ``key=value`` text file::

    name=emotions
    task=multilabel
    features_path=features.csv
    labels_path=labels.csv
    has_header=false
    positive_token=1
    negative_token=0

Relative paths resolve against the manifest's directory. Multilabel label
files hold one token column per label. Multiclass files hold a single column
of integer class ids starting at 0.
"""

import csv
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from .exceptions import DataError, ParameterError

MULTICLASS = "multiclass"
MULTILABEL = "multilabel"


def rng_for(seed):
    """Seeded PCG64 generator; portable across platforms and numpy versions."""
    return np.random.Generator(np.random.PCG64(seed))


@dataclass(frozen=True)
class DatasetManifest:
    name: str
    task: str
    features_path: Path
    labels_path: Path
    has_header: bool = False
    positive_token: str = "1"
    negative_token: str = "0"

    def __post_init__(self):
        if self.task not in (MULTICLASS, MULTILABEL):
            raise DataError(f"task must be {MULTICLASS!r} or {MULTILABEL!r}, got {self.task!r}")


@dataclass(frozen=True)
class Dataset:
    x: np.ndarray
    y: np.ndarray
    name: str
    task: str

    @property
    def class_ids(self):
        """Class index per row for multiclass data."""
        return np.argmax(self.y, axis=1)


_BOOL = {"true": True, "1": True, "yes": True, "false": False, "0": False, "no": False}


def read_manifest(path):
    path = Path(path)
    known = {f.name for f in fields(DatasetManifest)}
    values = {}
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read manifest {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep:
            raise DataError(f"{path}:{lineno}: expected key=value")
        if key not in known:
            raise DataError(f"{path}:{lineno}: unknown manifest key {key!r}")
        values[key] = value
    missing = {"name", "task", "features_path", "labels_path"} - values.keys()
    if missing:
        raise DataError(f"{path}: missing keys {sorted(missing)}")
    for key in ("features_path", "labels_path"):
        p = Path(values[key])
        values[key] = p if p.is_absolute() else path.parent / p
    if "has_header" in values:
        flag = values["has_header"].lower()
        if flag not in _BOOL:
            raise DataError(f"{path}: has_header must be true/false, got {values['has_header']!r}")
        values["has_header"] = _BOOL[flag]
    return DatasetManifest(**values)


def _read_rows(path, has_header):
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = [(i, r) for i, r in enumerate(csv.reader(fh), 1) if r]
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    if has_header:
        rows = rows[1:]
    if not rows:
        raise DataError(f"{path}: no data rows")
    width = len(rows[0][1])
    for lineno, row in rows:
        if len(row) != width:
            raise DataError(f"{path}:{lineno}: expected {width} columns, found {len(row)}")
    return rows


def _parse_features(path, has_header):
    rows = _read_rows(path, has_header)
    out = np.empty((len(rows), len(rows[0][1])))
    for r, (lineno, row) in enumerate(rows):
        for col, cell in enumerate(row):
            try:
                out[r, col] = float(cell)
            except ValueError:
                raise DataError(f"{path}:{lineno}: column {col + 1}: non-numeric value {cell!r}") from None
    if not np.isfinite(out).all():
        raise DataError(f"{path}: non-finite feature values")
    return out


def load_dataset(manifest):
    if not isinstance(manifest, DatasetManifest):
        manifest = read_manifest(manifest)
    x = _parse_features(manifest.features_path, manifest.has_header)
    rows = _read_rows(manifest.labels_path, manifest.has_header)
    if len(rows) != x.shape[0]:
        raise DataError(
            f"{manifest.labels_path}: {len(rows)} label rows but {x.shape[0]} feature rows"
        )

    if manifest.task == MULTILABEL:
        tokens = {manifest.positive_token: 1.0, manifest.negative_token: -1.0}
        y = np.empty((len(rows), len(rows[0][1])))
        for r, (lineno, row) in enumerate(rows):
            for col, cell in enumerate(row):
                try:
                    y[r, col] = tokens[cell.strip()]
                except KeyError:
                    raise DataError(
                        f"{manifest.labels_path}:{lineno}: column {col + 1}: unknown label token {cell!r}"
                    ) from None
    else:
        if len(rows[0][1]) != 1:
            raise DataError(f"{manifest.labels_path}: multiclass labels need exactly one column")
        ids = []
        for lineno, row in rows:
            cell = row[0].strip()
            if not cell.isdigit():
                raise DataError(f"{manifest.labels_path}:{lineno}: bad class id {cell!r}")
            ids.append(int(cell))
        y = encode_multiclass(ids, max(ids) + 1)
    return Dataset(x=x, y=y, name=manifest.name, task=manifest.task)


def encode_multiclass(class_ids, m):
    """One-hot +-1 matrix: +1 at each row's class, -1 elsewhere."""
    ids = np.asarray(class_ids)
    if ids.ndim != 1 or not np.issubdtype(ids.dtype, np.integer):
        raise DataError("class ids must be a 1-D sequence of integers")
    bad = (ids < 0) | (ids >= m)
    if bad.any():
        raise DataError(f"class id {ids[bad][0]} outside [0, {m})")
    y = -np.ones((ids.size, m))
    y[np.arange(ids.size), ids] = 1.0
    return y


def normalize_features(x, bounds=None):
    """Scale each column affinely onto [-1, 1].

    ``bounds=(lo, hi)`` reuses column extremes from another sample, e.g. a
    training fold. Constant columns become 0. Values are clipped to [-1, 1]
    so transformed held-out data stays in range.
    """
    x = np.asarray(x, dtype=np.float64)
    lo, hi = (x.min(axis=0), x.max(axis=0)) if bounds is None else bounds
    span = hi - lo
    out = np.zeros_like(x)
    ok = span > 0
    out[:, ok] = 2.0 * (x[:, ok] - lo[ok]) / span[ok] - 1.0
    return np.clip(out, -1.0, 1.0)


def column_bounds(x):
    x = np.asarray(x, dtype=np.float64)
    return x.min(axis=0), x.max(axis=0)


def subsample(n_total, target, seed):
    """Indices of a seeded uniform sample without replacement (sorted)."""
    if target < 1:
        raise ParameterError(f"subsample target must be >= 1, got {target}")
    if n_total <= target:
        return np.arange(n_total)
    return np.sort(rng_for(seed).choice(n_total, size=target, replace=False))


def kfold_split(n, k, seed):
    """Seeded k-fold partition as a list of ``(train, test)`` index arrays."""
    if k < 2 or k > n:
        raise ParameterError(f"need 2 <= k <= n, got k={k}, n={n}")
    perm = rng_for(seed).permutation(n)
    blocks = np.array_split(perm, k)
    folds = []
    for i, test in enumerate(blocks):
        train = np.concatenate([b for j, b in enumerate(blocks) if j != i])
        folds.append((np.sort(train), np.sort(test)))
    return folds
