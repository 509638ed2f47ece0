"""Dataset manifests: parsing, validation, and train/test split construction.

A manifest is UTF-8 text with one image record per line,
``path,label,split,source``. Lines starting with ``#`` are comments. Paths
are resolved relative to the manifest file's directory.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass
from pathlib import Path


class ManifestError(ValueError):
    """Raised for unreadable, malformed, or inconsistent manifests."""


class Label(str, enum.Enum):
    NORMAL = "Normal"
    PNEUMONIA = "Pneumonia"
    COVID19 = "COVID19"
    SYNTHETIC_A = "SyntheticA"
    SYNTHETIC_B = "SyntheticB"
    SYNTHETIC_UNKNOWN = "SyntheticUnknown"

    def __str__(self) -> str:
        return self.value


# Classes that by construction have no training data; a manifest that puts
# them in a train split is corrupt.
UNKNOWN_ONLY_LABELS = frozenset({Label.COVID19, Label.SYNTHETIC_UNKNOWN})

SPLITS = ("train", "test")

# Accept common spellings seen in upstream metadata (e.g. "COVID-19").
_LABEL_ALIASES = {
    "normal": Label.NORMAL,
    "pneumonia": Label.PNEUMONIA,
    "covid19": Label.COVID19,
    "covid": Label.COVID19,
    "synthetica": Label.SYNTHETIC_A,
    "syntheticb": Label.SYNTHETIC_B,
    "syntheticunknown": Label.SYNTHETIC_UNKNOWN,
}


def parse_label(token: str) -> Label:
    """Map a label token to its canonical Label, tolerating case/hyphens."""
    key = token.strip().lower().replace("-", "").replace("_", "")
    try:
        return _LABEL_ALIASES[key]
    except KeyError:
        raise ManifestError(f"unknown label token {token!r}") from None


@dataclass(frozen=True)
class ImageRecord:
    path: Path
    label: Label
    split: str
    source: str


class DatasetManifest:
    """An ordered, validated collection of image records."""

    def __init__(self, records: list[ImageRecord]):
        self.records = list(records)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def counts(self) -> dict[tuple[str, str], int]:
        """Record count per (label, split) pair."""
        return dict(Counter((r.label.value, r.split) for r in self.records))

    def filter(self, label: Label | None = None, split: str | None = None) -> "DatasetManifest":
        recs = [
            r
            for r in self.records
            if (label is None or r.label == label) and (split is None or r.split == split)
        ]
        return DatasetManifest(recs)

    def labels(self) -> set[Label]:
        return {r.label for r in self.records}

    def save(self, path: Path | str) -> None:
        path = Path(path)
        lines = ["# path,label,split,source"]
        for r in self.records:
            p = r.path
            try:
                p = p.relative_to(path.parent.resolve())
            except ValueError:
                pass
            lines.append(f"{p},{r.label.value},{r.split},{r.source}")
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _parse_row(line: str, lineno: int, root: Path, check_files: bool) -> ImageRecord:
    fields = [f.strip() for f in line.split(",")]
    if len(fields) != 4:
        raise ManifestError(f"line {lineno}: expected 4 comma-separated fields, got {len(fields)}")
    raw_path, raw_label, split, source = fields
    if not raw_path:
        raise ManifestError(f"line {lineno}: empty path")
    try:
        label = parse_label(raw_label)
    except ManifestError as exc:
        raise ManifestError(f"line {lineno}: {exc}") from None
    if split not in SPLITS:
        raise ManifestError(f"line {lineno}: split must be one of {SPLITS}, got {split!r}")
    if label in UNKNOWN_ONLY_LABELS and split == "train":
        raise ManifestError(
            f"line {lineno}: unknown-class-in-train: {label.value} records cannot be in the train split"
        )
    path = Path(raw_path)
    if not path.is_absolute():
        path = root / path
    if check_files and not path.is_file():
        raise ManifestError(f"line {lineno}: image file not found: {path}")
    return ImageRecord(path=path, label=label, split=split, source=source)


def load_manifest(path: Path | str, check_files: bool = True) -> DatasetManifest:
    """Load and validate a manifest file.

    Raises ManifestError for a missing file, a malformed row (reported with
    its line number), an unknown label token, or an unknown-only class
    appearing in a train split.
    """
    path = Path(path)
    if not path.is_file():
        raise ManifestError(f"manifest file not found: {path}")
    root = path.parent.resolve()
    records = []
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        records.append(_parse_row(stripped, lineno, root, check_files))
    return DatasetManifest(records)


def build_split(
    manifest: DatasetManifest, unknown_label: Label
) -> tuple[DatasetManifest, DatasetManifest]:
    """Partition a manifest into (train, test), keeping manifest order.

    The unknown class must appear in the manifest and is guaranteed absent
    from the returned train set.
    """
    if unknown_label not in manifest.labels():
        raise ManifestError(f"unknown label {unknown_label.value} has no records in the manifest")
    train = [r for r in manifest.records if r.split == "train"]
    test = [r for r in manifest.records if r.split == "test"]
    leaked = [r for r in train if r.label == unknown_label]
    if leaked:
        raise ManifestError(
            f"{len(leaked)} records of unknown class {unknown_label.value} found in the train split"
        )
    return DatasetManifest(train), DatasetManifest(test)
