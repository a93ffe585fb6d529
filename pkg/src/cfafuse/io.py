"""CSV/JSON file formats and run artifacts.

Score files are UTF-8 CSV: the first row holds class names, every further
row one sample. Labels files hold one label per line, either a class name or
a 0-based class index.
"""

from __future__ import annotations

import csv
import datetime as _dt
import json
import math
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__
from .errors import HeaderMismatch, InvalidInput, ParseError, UnknownClass
from .matrix import ScoreMatrix


def _fmt(x: float) -> str:
    # repr is the shortest string that round-trips exactly and never uses a locale.
    return repr(float(x))


def load_score_csv(path, class_names: Sequence[str] | None = None) -> ScoreMatrix:
    """Read one model's score matrix; the model id is the file stem.

    If ``class_names`` is given, the header must match it exactly (same
    names, same order).
    """
    path = Path(path)
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [(i, r) for i, r in enumerate(csv.reader(fh), start=1) if any(c.strip() for c in r)]
    if not rows:
        raise InvalidInput(f"{path}: empty file")
    _, header = rows[0]
    header = tuple(h.strip() for h in header)
    if len(header) < 2:
        raise InvalidInput(f"{path}: header needs at least two class names")
    if len(set(header)) != len(header):
        raise InvalidInput(f"{path}: duplicate class names in header")
    if class_names is not None and header != tuple(class_names):
        raise HeaderMismatch(f"{path}: header {list(header)} does not match {list(class_names)}")
    if len(rows) < 2:
        raise InvalidInput(f"{path}: no data rows")
    values = np.empty((len(rows) - 1, len(header)))
    for out_row, (line, cells) in enumerate(rows[1:]):
        if len(cells) != len(header):
            raise ParseError(path, line, len(cells), f"expected {len(header)} cells, found {len(cells)}")
        for col, cell in enumerate(cells, start=1):
            try:
                v = float(cell)
            except ValueError:
                raise ParseError(path, line, col, f"not a number: {cell!r}") from None
            if not math.isfinite(v):
                raise ParseError(path, line, col, f"non-finite value {cell!r}")
            values[out_row, col - 1] = v
    return ScoreMatrix(path.stem, values, header)


def load_labels(path, class_names: Sequence[str], n_samples: int | None = None) -> np.ndarray:
    """Read a labels file into class indices; class names win over numeric indices."""
    path = Path(path)
    lookup = {name: i for i, name in enumerate(class_names)}
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    out = []
    for lineno, raw in enumerate(lines, start=1):
        token = raw.strip()
        if token in lookup:
            out.append(lookup[token])
            continue
        try:
            idx = int(token)
        except ValueError:
            raise UnknownClass(f"{path}: line {lineno}: unknown class {token!r}") from None
        if not 0 <= idx < len(class_names):
            raise UnknownClass(f"{path}: line {lineno}: class index {idx} out of range [0, {len(class_names)})")
        out.append(idx)
    if n_samples is not None and len(out) != n_samples:
        raise InvalidInput(f"{path}: {len(out)} labels for {n_samples} samples")
    return np.asarray(out, dtype=np.int64)


def write_matrix_csv(path, matrix: np.ndarray, class_names: Sequence[str]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(class_names)
        for row in np.asarray(matrix):
            w.writerow([_fmt(v) for v in row])


@dataclass
class RunManifest:
    """Everything needed to replay a run."""

    models: list[str]
    labels: str | None
    schemes: list[str]
    batch_size: int
    tie_policy: str
    mode: str
    k: int
    output_dir: str | None
    rank_ds_source: str = "rank"
    version: str = __version__
    timestamp: str = field(default_factory=lambda: _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"))

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "RunManifest":
        names = {f.name for f in fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise InvalidInput(f"unknown manifest fields: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_result(cls, result, output_dir=None) -> "RunManifest":
        cfg = result.config
        return cls(
            models=list(result.model_ids),
            labels=None,
            schemes=[s.value for s in result.schemes],
            batch_size=cfg.batch_size if cfg else 0,
            tie_policy=cfg.tie_policy if cfg else "average",
            mode="unsupervised" if result.pseudo else "supervised",
            k=cfg.k if cfg and cfg.k is not None else len(result.model_ids),
            output_dir=None if output_dir is None else str(output_dir),
            rank_ds_source=cfg.rank_ds_source if cfg else "rank",
        )


def build_report(result, manifest: RunManifest) -> dict:
    """The ``report.json`` payload; key order is part of the format."""
    report = result.accuracy_report
    best = result.best
    return {
        "manifest": manifest.to_dict(),
        "pseudo_accuracy": report.pseudo,
        "base_accuracy": {m: round(a, 2) for m, a in report.base.items()},
        "fused_accuracy": {key.id: round(a, 2) for key, a in report.fused.items()},
        "best": {
            "id": best.id,
            "kind": best.kind,
            "scheme": best.scheme,
            "members": list(best.members),
            "accuracy": round(best.accuracy, 2),
        },
        "top_k": [{"id": key.id, "accuracy": round(acc, 2)} for key, acc in result.top_k],
    }


def write_outputs(result, out_dir, manifest: RunManifest | None = None, svg: bool = False) -> list[Path]:
    """Write every run artifact into ``out_dir`` (created if needed); return the paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if manifest is None:
        manifest = RunManifest.from_result(result, out)
    written = []

    p = out / "report.json"
    p.write_text(json.dumps(build_report(result, manifest), indent=2) + "\n", encoding="utf-8")
    written.append(p)

    p = out / "best_model.csv"
    write_matrix_csv(p, result.matrix, result.class_names)
    written.append(p)

    p = out / "predictions.csv"
    with open(p, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["sample", "class_index", "class_name"])
        for i, c in enumerate(result.predictions):
            w.writerow([i, int(c), result.class_names[int(c)]])
    written.append(p)

    for scheme, rows in result.trends.items():
        p = out / f"trend_{scheme.value}.csv"
        with open(p, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["combination", "score_accuracy", "rank_accuracy"])
            for r in rows:
                w.writerow([r.combination.id, _fmt(r.score_accuracy), _fmt(r.rank_accuracy)])
        written.append(p)

    for model_id, curve in result.rsc_curves.items():
        p = out / f"rsc_{model_id}.csv"
        write_rsc_csv(p, curve)
        written.append(p)

    if svg:
        written.extend(render_svgs(result, out))
    return written


def write_rsc_csv(path, curve) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["rank", "score"])
        for i, v in enumerate(np.asarray(curve), start=1):
            w.writerow([i, _fmt(v)])


def render_svgs(result, out: Path) -> list[Path]:
    """Best-effort SVG plots of the trend and RSC data (needs matplotlib)."""
    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        return []
    written = []
    for scheme, rows in result.trends.items():
        fig, ax = plt.subplots(figsize=(10, 4))
        x = np.arange(len(rows))
        ax.plot(x, [r.score_accuracy for r in rows], "o-", color="tab:blue", label="score")
        ax.plot(x, [r.rank_accuracy for r in rows], "s-", color="tab:red", label="rank")
        ax.set_xticks(x, [r.combination.id for r in rows], rotation=90, fontsize=7)
        ax.set_ylabel("accuracy (%)")
        ax.set_title(f"{scheme.value} fusion accuracy")
        ax.legend()
        fig.tight_layout()
        p = out / f"trend_{scheme.value}.svg"
        fig.savefig(p, metadata={"Date": None})
        plt.close(fig)
        written.append(p)
    fig, ax = plt.subplots(figsize=(6, 4))
    for model_id, curve in result.rsc_curves.items():
        ax.plot(np.arange(1, len(curve) + 1), curve, marker=".", label=model_id)
    ax.set_xlabel("rank")
    ax.set_ylabel("normalized score")
    ax.legend()
    fig.tight_layout()
    p = out / "rsc.svg"
    fig.savefig(p, metadata={"Date": None})
    plt.close(fig)
    written.append(p)
    return written
