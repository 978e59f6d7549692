"""Ground-truth manifests, confusion matrices and accuracy reports."""

import json
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .classifier import SCRIPTS, ScriptLabel
from .errors import InvalidParameter, ManifestResolutionError
from .pipeline import PipelineConfig, classify_page
from .raster import load_image
from .schemas import validate

logger = logging.getLogger(__name__)

ROWS = tuple(s.value for s in SCRIPTS)
COLUMNS = ROWS + (ScriptLabel.UNKNOWN.value,)
MIN_IOU = 0.5


@dataclass(frozen=True)
class ExpectedWord:
    label: str
    index: int | None = None
    box: tuple | None = None  # inclusive (x0, y0, x1, y1)

    def __post_init__(self):
        if self.label not in ROWS:
            raise InvalidParameter(f"ground-truth label must be one of {ROWS}, got {self.label!r}")
        if self.index is None and self.box is None:
            raise InvalidParameter("a manifest word needs an index or a box")

    def to_dict(self):
        d = {"label": self.label}
        if self.index is not None:
            d["index"] = self.index
        if self.box is not None:
            x0, y0, x1, y1 = self.box
            d["box"] = {"x0": x0, "y0": y0, "x1": x1, "y1": y1}
        return d

    @classmethod
    def from_dict(cls, d):
        box = d.get("box")
        if box is not None:
            box = (box["x0"], box["y0"], box["x1"], box["y1"])
        return cls(d["label"], d.get("index"), box)


@dataclass(frozen=True)
class ManifestEntry:
    image: str
    words: tuple = ()

    def to_dict(self):
        return {"image": self.image, "words": [w.to_dict() for w in self.words]}


@dataclass(frozen=True)
class Manifest:
    entries: tuple = ()
    base_dir: str = "."

    @property
    def word_count(self):
        return sum(len(e.words) for e in self.entries)

    def resolve(self, entry):
        return entry.image if os.path.isabs(entry.image) else os.path.join(self.base_dir, entry.image)

    def to_dict(self):
        return {"version": 1, "entries": [e.to_dict() for e in self.entries]}

    @classmethod
    def from_dict(cls, data, base_dir="."):
        validate(data, "manifest")
        entries = tuple(
            ManifestEntry(e["image"], tuple(ExpectedWord.from_dict(w) for w in e["words"]))
            for e in data["entries"]
        )
        return cls(entries, base_dir)


def load_manifest(path):
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    return Manifest.from_dict(data, os.path.dirname(os.path.abspath(path)))


def save_manifest(manifest, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")


def box_iou(a, b):
    """IoU of two inclusive ``(x0, y0, x1, y1)`` boxes."""
    ix = min(a[2], b[2]) - max(a[0], b[0]) + 1
    iy = min(a[3], b[3]) - max(a[1], b[1]) + 1
    if ix <= 0 or iy <= 0:
        return 0.0
    inter = ix * iy
    area = lambda r: (r[2] - r[0] + 1) * (r[3] - r[1] + 1)  # noqa: E731
    return inter / (area(a) + area(b) - inter)


@dataclass(frozen=True)
class EvalReport:
    """Confusion counts: one row per true script, one column per prediction
    (the three scripts then Unknown)."""

    counts: tuple = ((0, 0, 0, 0),) * 3
    unresolved: tuple = field(default=())

    @classmethod
    def empty(cls):
        return cls()

    def merge(self, other):
        counts = tuple(tuple(a + b for a, b in zip(ra, rb))
                       for ra, rb in zip(self.counts, other.counts))
        return EvalReport(counts, self.unresolved + other.unresolved)

    @property
    def row_totals(self):
        return tuple(sum(row) for row in self.counts)

    @property
    def total(self):
        return sum(self.row_totals)

    @property
    def percentages(self):
        out = []
        for row, n in zip(self.counts, self.row_totals):
            out.append(tuple(100.0 * c / n if n else 0.0 for c in row))
        return tuple(out)

    @property
    def per_class_accuracy(self):
        return {label: (self.counts[i][i] / n if n else None)
                for i, (label, n) in enumerate(zip(ROWS, self.row_totals))}

    @property
    def overall_accuracy(self):
        total = self.total
        if not total:
            return None
        return sum(self.counts[i][i] for i in range(len(ROWS))) / total

    def to_dict(self):
        return {
            "rows": list(ROWS),
            "columns": list(COLUMNS),
            "counts": [list(r) for r in self.counts],
            "percentages": [list(r) for r in self.percentages],
            "per_class_accuracy": self.per_class_accuracy,
            "overall_accuracy": self.overall_accuracy,
            "total": self.total,
            "unresolved": list(self.unresolved),
        }

    @classmethod
    def from_dict(cls, data):
        validate(data, "report")
        if tuple(data["rows"]) != ROWS or tuple(data["columns"]) != COLUMNS:
            raise InvalidParameter("report rows/columns do not match this version's layout")
        counts = tuple(tuple(int(c) for c in row) for row in data["counts"])
        return cls(counts, tuple(data["unresolved"]))

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    def format_table(self):
        """Row-normalised confusion matrix as an aligned text table."""
        width = max(len(c) for c in COLUMNS) + 2
        lines = [" " * width + "".join(c.rjust(width) for c in COLUMNS)]
        for label, row in zip(ROWS, self.percentages):
            lines.append(label.ljust(width) + "".join(f"{p:.2f}%".rjust(width) for p in row))
        acc = self.overall_accuracy
        shown = "n/a" if acc is None else f"{100 * acc:.3f}%"
        lines.append(f"Overall accuracy: {shown} over {self.total} words")
        if self.unresolved:
            lines.append(f"Unresolved references: {len(self.unresolved)}")
        return "\n".join(lines)


def _match(expected, results):
    if expected.index is not None and 0 <= expected.index < len(results):
        return results[expected.index]
    if expected.box is not None and results:
        best = max(results, key=lambda r: box_iou(expected.box, r.box.rect))
        if box_iou(expected.box, best.box.rect) >= MIN_IOU:
            return best
    return None


def score_entry(entry, results, name=None):
    """Confusion counts for one page given its pipeline results."""
    counts = [[0] * len(COLUMNS) for _ in ROWS]
    unresolved = []
    for i, expected in enumerate(entry.words):
        hit = _match(expected, results)
        if hit is None:
            ref = f"index {expected.index}" if expected.index is not None else f"box {expected.box}"
            unresolved.append(f"{name or entry.image} word {i} ({ref})")
            continue
        counts[ROWS.index(expected.label)][COLUMNS.index(hit.label.value)] += 1
    return EvalReport(tuple(tuple(r) for r in counts), tuple(unresolved))


def evaluate(manifest, cfg=None, jobs=1, strict=True):
    """Run the pipeline on every manifest page and accumulate a report.

    With ``strict`` the presence of unresolvable references raises
    ``ManifestResolutionError`` carrying the partial report.
    """
    cfg = cfg or PipelineConfig()

    def run(entry):
        results = classify_page(load_image(manifest.resolve(entry)), cfg)
        return score_entry(entry, results)

    if jobs > 1 and len(manifest.entries) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(run, manifest.entries))
    else:
        parts = [run(e) for e in manifest.entries]
    report = EvalReport.empty()
    for part in parts:
        report = report.merge(part)
    if report.unresolved:
        logger.warning("%d manifest reference(s) unresolved", len(report.unresolved))
        if strict:
            raise ManifestResolutionError(report.unresolved, report)
    return report
