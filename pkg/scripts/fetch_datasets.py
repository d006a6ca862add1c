"""Rebuild the bundled Emotions and Ecoli CSV files from PyPI archives.

Only PyPI is assumed reachable, so both datasets are recovered from
packages that ship them:

* Emotions (593 x 72 x 6): the pickled train/test dumps inside the
  scikit-multilearn 0.0.1 source distribution.
* Ecoli (336 x 7 x 8): the UCI ordering is reconstructed from the KEEL
  one-vs-rest files ``ecoli1``..``ecoli4`` shipped in ``keel-ds``, and the
  resulting labels are cross-checked against every ``ecoli-*_vs_*`` split
  in the same wheel.

Usage::

    python scripts/fetch_datasets.py [--out data]
"""

import argparse
import bz2
import collections
import io
import json
import pickle
import re
import tarfile
import urllib.request
import zipfile
from pathlib import Path

import numpy as np

PYPI = "https://pypi.org/pypi/{name}/json"

# KEEL numbers the Ecoli classes alphabetically; the UCI file lists them in
# this order with these counts.
ECOLI_CLASSES = ["cp", "im", "imS", "imL", "imU", "om", "omL", "pp"]
ECOLI_SIZES = [143, 77, 2, 2, 35, 20, 5, 52]
EMOTIONS_LABELS = [
    "amazed-suprised", "happy-pleased", "relaxing-calm",
    "quiet-still", "sad-lonely", "angry-aggresive",
]


def _release_file(name, version, packagetype):
    meta = json.load(urllib.request.urlopen(PYPI.format(name=name)))
    for f in meta["releases"][version]:
        if f["packagetype"] == packagetype:
            return urllib.request.urlopen(f["url"]).read()
    raise RuntimeError(f"no {packagetype} for {name}=={version}")


def fetch_emotions():
    blob = _release_file("scikit-multilearn", "0.0.1", "sdist")
    tar = tarfile.open(fileobj=io.BytesIO(blob))
    xs, ys = [], []
    for split in ("train", "test"):
        member = f"scikit-multilearn-0.0.1/skmultilearn/data/emotions-{split}.dump.bz2"
        raw = bz2.decompress(tar.extractfile(member).read())
        d = pickle.loads(raw, encoding="latin1")
        xs.append(np.asarray(d["X"], dtype=float))
        ys.append(np.asarray(d["y"], dtype=int))
    return np.vstack(xs), np.vstack(ys)


def _keel_rows(text):
    rows = []
    for line in text.splitlines():
        if not line.strip() or line.startswith("@"):
            continue
        *x, label = [t.strip() for t in line.split(",")]
        rows.append((x, label))
    return rows


def _canon_unit(v):
    # 0.40 -> "4", 0.07 -> "7": the rescaled KEEL subsets drop trailing zeros
    return str(int(round(float(v) * 100))).rstrip("0") or "0"


def _canon_scaled(v):
    return str(int(round(float(v)))).rstrip("0") or "0"


def fetch_ecoli():
    blob = _release_file("keel-ds", "0.2.5", "bdist_wheel")
    wheel = zipfile.ZipFile(io.BytesIO(blob))
    root = "keel_ds/data/imbalanced/raw/"

    def read(name):
        return _keel_rows(wheel.read(root + name).decode())

    full = read("ecoli1.dat")
    classes = np.repeat(np.arange(8), ECOLI_SIZES)
    if len(full) != len(classes):
        raise RuntimeError("unexpected ecoli1 row count")

    one_vs_rest = {"ecoli1.dat": 1, "ecoli2.dat": 7, "ecoli4.dat": 5}
    for name, cls in one_vs_rest.items():
        rows = read(name)
        if [r[0] for r in rows] != [r[0] for r in full]:
            raise RuntimeError(f"{name} is not in UCI order")
        if any((lab == "positive") != (c == cls) for (_, lab), c in zip(rows, classes)):
            raise RuntimeError(f"{name} disagrees with reconstructed classes")

    checked = 0
    for name in wheel.namelist():
        m = re.search(r"raw/(ecoli-([\d-]+)_vs_([\d-]+)\.dat)$", name)
        if not m:
            continue
        neg = {int(t) for t in m.group(2).split("-")}
        pos = {int(t) for t in m.group(3).split("-")}
        rows = read(m.group(1))
        scaled = float(rows[0][0][0]) > 1.0
        drop_chg = len(rows[0][0]) == 6
        canon = _canon_scaled if scaled else (lambda v: f"{float(v):.2f}")
        got = collections.Counter((tuple(canon(v) for v in x), lab) for x, lab in rows)

        def expected(positive):
            out = collections.Counter()
            for (x, _), c in zip(full, classes):
                if c not in pos | neg:
                    continue
                key = [(_canon_unit(v) if scaled else f"{float(v):.2f}") for v in x]
                if drop_chg:
                    del key[3]
                out[(tuple(key), "positive" if c in positive else "negative")] += 1
            return out

        if got != expected(pos) and got != expected(neg):
            raise RuntimeError(f"{m.group(1)} disagrees with reconstructed classes")
        checked += 1

    x = np.array([[float(v) for v in r[0]] for r in full])
    return x, classes, checked


def _write(directory, name, task, x, labels, fmt_labels):
    directory.mkdir(parents=True, exist_ok=True)
    np.savetxt(directory / "features.csv", x, delimiter=",", fmt="%.10g")
    np.savetxt(directory / "labels.csv", labels, delimiter=",", fmt=fmt_labels)
    (directory / f"{name}.manifest").write_text(
        f"name={name}\n"
        f"task={task}\n"
        "features_path=features.csv\n"
        "labels_path=labels.csv\n"
        "has_header=false\n"
        "positive_token=1\n"
        "negative_token=0\n"
    )


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default=str(Path(__file__).resolve().parents[1] / "data"))
    args = parser.parse_args()
    out = Path(args.out)

    x, y = fetch_emotions()
    _write(out / "emotions", "emotions", "multilabel", x, y, "%d")
    print(f"emotions: {x.shape[0]} x {x.shape[1]} x {y.shape[1]}")

    x, classes, checked = fetch_ecoli()
    _write(out / "ecoli", "ecoli", "multiclass", x, classes, "%d")
    print(f"ecoli: {x.shape[0]} x {x.shape[1]} x {len(ECOLI_CLASSES)} "
          f"(labels verified against {checked} KEEL splits)")


if __name__ == "__main__":
    main()
