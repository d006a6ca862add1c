"""Cross-validated experiment runner and report rendering."""

import csv
import io
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import _backend
from .data import (
    MULTICLASS,
    column_bounds,
    kfold_split,
    load_dataset,
    normalize_features,
    read_manifest,
    subsample,
)
from .exceptions import ConfigError, DataError, DegenerateLabelError, MatSVMError, NumericError
from .kernel import LINEAR, RBF, KernelSpec
from .metrics import METRIC_NAMES, evaluate, exact_match, hamming_loss, macro_f1, micro_f1
from .model import (
    BR,
    LS,
    MATRIX,
    decision_scores,
    fit_br_svm,
    fit_ls_matrix_svm,
    fit_matrix_svm,
    predict_multiclass,
    predict_multilabel,
)
from .solver import SolverOptions

DEFAULT_GAMMA = {MULTICLASS: 0.7, "multilabel": 0.3}
FORMATS = ("csv", "md")
NORMALIZATION = ("global", "fold")

_PRETTY = {
    "fit_seconds": "Time (↓)",
    "exact_match": "ExactMatch (↑)",
    "hamming_loss": "HammingLoss (↓)",
    "macro_f1": "MacroF1 (↑)",
    "micro_f1": "MicroF1 (↑)",
    "avg_precision": "AvgPrecision (↑)",
    "argmax_accuracy": "ArgmaxAccuracy (↑)",
}


@dataclass
class ExperimentConfig:
    manifest: Path
    model: str = MATRIX
    kernel: str = RBF
    gamma: Optional[float] = None
    c: float = 1.0
    folds: int = 10
    seed: int = 0
    subsample: int = 4000
    tol: float = 1e-5
    max_iter: int = 1000
    out: Optional[Path] = None
    format: str = "csv"
    parallel_folds: bool = False
    normalize: str = "global"
    drop_degenerate: bool = False
    shared_gram: bool = False
    warmup: bool = True

    def validate(self):
        if self.model not in (MATRIX, BR, LS):
            raise ConfigError(f"model must be matrix, br or ls, got {self.model!r}")
        if self.kernel not in (LINEAR, RBF):
            raise ConfigError(f"kernel must be linear or rbf, got {self.kernel!r}")
        if self.kernel == LINEAR and self.gamma is not None:
            raise ConfigError("gamma only applies to the rbf kernel")
        if self.gamma is not None and not self.gamma > 0:
            raise ConfigError(f"gamma must be positive, got {self.gamma!r}")
        if self.model == LS and self.kernel != LINEAR:
            raise ConfigError("the least-squares model is linear only")
        if self.folds < 2:
            raise ConfigError(f"folds must be >= 2, got {self.folds}")
        if not self.c > 0:
            raise ConfigError(f"c must be positive, got {self.c!r}")
        if not self.tol > 0 or self.max_iter < 1:
            raise ConfigError("tol must be positive and max_iter >= 1")
        if self.subsample < 1:
            raise ConfigError(f"subsample must be >= 1, got {self.subsample}")
        if self.format not in FORMATS:
            raise ConfigError(f"format must be csv or md, got {self.format!r}")
        if self.normalize not in NORMALIZATION:
            raise ConfigError(f"normalize must be global or fold, got {self.normalize!r}")

    def echo(self):
        d = asdict(self)
        d["manifest"] = str(self.manifest)
        d["out"] = None if self.out is None else str(self.out)
        return d


@dataclass
class FoldResult:
    fold: int
    fit_seconds: float
    metrics: dict
    dropped: tuple = ()
    iterations: int = 0
    converged: bool = True


@dataclass
class ExperimentReport:
    config: dict
    dataset: dict
    folds: list
    columns: tuple
    environment: dict = field(default_factory=dict)

    def column(self, name):
        if name == "fit_seconds":
            return np.array([f.fit_seconds for f in self.folds])
        return np.array([f.metrics[name] for f in self.folds])

    @property
    def aggregate(self):
        """``{column: (mean, sample std)}`` over the folds."""
        out = {}
        for name in self.columns:
            v = self.column(name)
            out[name] = (float(v.mean()), float(v.std(ddof=1)) if v.size > 1 else 0.0)
        return out


def _kernel_spec(config, task):
    if config.kernel == LINEAR:
        return KernelSpec.linear()
    gamma = config.gamma if config.gamma is not None else DEFAULT_GAMMA[task]
    return KernelSpec.rbf(gamma)


def _fit(config, kernel, x, y):
    opts = SolverOptions(config.tol, config.max_iter)
    if config.model == MATRIX:
        return fit_matrix_svm(x, y, kernel, config.c, opts)
    if config.model == BR:
        return fit_br_svm(x, y, kernel, config.c, opts, shared_gram=config.shared_gram)
    return fit_ls_matrix_svm(x, y, config.c)


def _degenerate(y):
    return [j for j in range(y.shape[1]) if (y[:, j] == y[0, j]).all()]


def _run_fold(config, kernel, task, x, y, fold, train, test):
    x_tr, x_te = x[train], x[test]
    if config.normalize == "fold":
        bounds = column_bounds(x_tr)
        x_tr = normalize_features(x_tr, bounds)
        x_te = normalize_features(x_te, bounds)
    y_tr, y_te = y[train], y[test]

    dropped = _degenerate(y_tr) if config.model != LS else []
    if dropped and not config.drop_degenerate:
        j = dropped[0]
        raise DataError(
            f"fold {fold}: {DegenerateLabelError(j, y_tr[0, j])}; "
            "enable drop_degenerate to predict such columns as constants"
        )
    keep = [j for j in range(y.shape[1]) if j not in dropped]
    if not keep:
        raise DataError(f"fold {fold}: every label column has a single class in training")

    try:
        model = _fit(config, kernel, x_tr, y_tr[:, keep])
    except NumericError as exc:
        raise NumericError(f"fold {fold}: {exc}") from exc
    except MatSVMError as exc:
        raise DataError(f"fold {fold}: {exc}") from exc

    scores = np.empty((len(test), y.shape[1]))
    scores[:, keep] = decision_scores(model, x_te)
    for j in dropped:
        scores[:, j] = y_tr[0, j]

    pred = predict_multilabel(scores)
    if (y_te > 0).any():
        metrics = evaluate(y_te, pred, scores).as_dict()
    else:
        # Ranking precision is undefined when no test row has a positive label.
        metrics = {
            "exact_match": exact_match(y_te, pred),
            "hamming_loss": hamming_loss(y_te, pred),
            "macro_f1": macro_f1(y_te, pred),
            "micro_f1": micro_f1(y_te, pred),
            "avg_precision": float("nan"),
        }
    if task == MULTICLASS:
        metrics["argmax_accuracy"] = float(np.mean(predict_multiclass(scores) == np.argmax(y_te, axis=1)))
    return FoldResult(
        fold=fold,
        fit_seconds=model.fit_seconds,
        metrics=metrics,
        dropped=tuple(dropped),
        iterations=model.solver_iterations,
        converged=model.converged,
    )


def run_experiment(config):
    """Load, subsample, normalise, cross-validate and collect fold results."""
    config.validate()
    manifest = read_manifest(config.manifest)
    ds = load_dataset(manifest)
    kernel = _kernel_spec(config, ds.task)

    idx = subsample(ds.x.shape[0], config.subsample, config.seed)
    x, y = ds.x[idx], ds.y[idx]
    if config.normalize == "global":
        x = normalize_features(x)
    n = x.shape[0]
    if config.folds > n:
        raise ConfigError(f"folds={config.folds} exceeds the {n} available samples")
    splits = kfold_split(n, config.folds, config.seed)

    def one(i):
        train, test = splits[i]
        return _run_fold(config, kernel, ds.task, x, y, i + 1, train, test)

    if config.warmup:
        try:
            one(0)
        except MatSVMError:
            pass  # the timed run reports it
    if config.parallel_folds:
        with ThreadPoolExecutor(max_workers=min(len(splits), os.cpu_count() or 1)) as pool:
            folds = list(pool.map(one, range(len(splits))))
    else:
        folds = [one(i) for i in range(len(splits))]

    columns = ("fit_seconds",) + METRIC_NAMES
    if ds.task == MULTICLASS:
        columns += ("argmax_accuracy",)
    echo = config.echo()
    echo["gamma"] = kernel.p
    return ExperimentReport(
        config=echo,
        dataset={
            "name": ds.name,
            "task": ds.task,
            "n_total": int(ds.x.shape[0]),
            "n_used": int(n),
            "d": int(x.shape[1]),
            "m": int(y.shape[1]),
        },
        folds=folds,
        columns=columns,
        environment={
            "backend": _backend.name(),
            "timing": "parallel (timings not comparable)" if config.parallel_folds else "sequential",
            "normalization": config.normalize,
            "br_gram": ("shared" if config.shared_gram else "per-column") if config.model == BR else "n/a",
            "std": "sample (n-1)",
        },
    )


def _stanza(report):
    dropped = "; ".join(f"fold {f.fold}: {list(f.dropped)}" for f in report.folds if f.dropped)
    lines = [
        "matsvm experiment report",
        "dataset: " + " ".join(f"{k}={v}" for k, v in report.dataset.items()),
        "config: " + json.dumps(report.config, sort_keys=True),
    ]
    lines += [f"{k}: {v}" for k, v in report.environment.items()]
    lines.append("dropped_columns: " + (dropped or "none"))
    no_ap = [f.fold for f in report.folds if np.isnan(f.metrics.get("avg_precision", 0.0))]
    if no_ap:
        lines.append(f"avg_precision_undefined_folds: {no_ap} (no positive label in the test fold)")
    return lines


def _f4(v):
    return f"{v:.4f}"


def _csv(report):
    buf = io.StringIO()
    for line in _stanza(report):
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    header = ["fold"]
    for name in report.columns:
        header += [name, f"{name}_std"]
    writer.writerow(header)
    for f in report.folds:
        row = [f.fold]
        for name in report.columns:
            value = f.fit_seconds if name == "fit_seconds" else f.metrics[name]
            row += [_f4(value), ""]
        writer.writerow(row)
    agg = report.aggregate
    row = ["aggregate"]
    for name in report.columns:
        row += [_f4(agg[name][0]), _f4(agg[name][1])]
    writer.writerow(row)
    return buf.getvalue()


def _md(report):
    cfg = report.config
    label = f"{cfg['model']} ({cfg['kernel']})"
    out = [f"## {report.dataset['name']}: {label}", ""]
    out += [f"- {line}" for line in _stanza(report)[1:]]
    out += ["", f"| | {label} |", "|---|---|"]
    for name, (mean, std) in report.aggregate.items():
        out.append(f"| {_PRETTY[name]} | {_f4(mean)}±{_f4(std)} |")
    out += ["", "| fold | " + " | ".join(report.columns) + " |",
            "|---" * (len(report.columns) + 1) + "|"]
    for f in report.folds:
        vals = [f.fit_seconds] + [f.metrics[c] for c in report.columns[1:]]
        out.append(f"| {f.fold} | " + " | ".join(_f4(v) for v in vals) + " |")
    return "\n".join(out) + "\n"


def emit_report(report, fmt="csv"):
    """Render ``report`` as UTF-8 bytes in ``csv`` or ``md`` format."""
    if fmt == "csv":
        return _csv(report).encode("utf-8")
    if fmt == "md":
        return _md(report).encode("utf-8")
    raise ConfigError(f"unknown report format {fmt!r}")


def write_report(report, path, fmt="csv"):
    Path(path).write_bytes(emit_report(report, fmt))


def parse_report_csv(text):
    """Read the fold rows and aggregate row back from an emitted CSV."""
    lines = [line for line in text.splitlines() if not line.startswith("#")]
    rows = list(csv.reader(lines))
    header, body = rows[0], rows[1:]
    parsed = []
    for row in body:
        parsed.append({h: (float(v) if v not in ("", "aggregate") and h != "fold" else v)
                       for h, v in zip(header, row)})
    return parsed
