"""Binary-mask post-processing and overlap scoring."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage


@dataclass(frozen=True)
class MaskPostprocessConfig:
    threshold: float = 0.5
    morph_kernel: int = 3
    operations: tuple[str, ...] = ("open", "close")

    def __post_init__(self):
        if not 0.0 < self.threshold < 1.0:
            raise ValueError(f"threshold must be in (0, 1), got {self.threshold}")
        if self.morph_kernel < 1 or self.morph_kernel % 2 == 0:
            raise ValueError(f"morph_kernel must be odd and >= 1, got {self.morph_kernel}")
        bad = set(self.operations) - {"open", "close"}
        if bad:
            raise ValueError(f"unknown morphological operations: {sorted(bad)}")


def _erode(m: np.ndarray, k: np.ndarray) -> np.ndarray:
    # Outside the image counts as foreground so borders are not eaten.
    return ndimage.binary_erosion(m, structure=k, border_value=1)


def _dilate(m: np.ndarray, k: np.ndarray) -> np.ndarray:
    return ndimage.binary_dilation(m, structure=k, border_value=0)


def postprocess_mask(soft: np.ndarray, config: MaskPostprocessConfig) -> np.ndarray:
    """Threshold a soft mask, then run the configured open/close sequence.

    Opening removes speckles smaller than the kernel; closing fills holes
    smaller than the kernel. Returns a uint8 0/1 mask.
    """
    soft = np.asarray(soft)
    if soft.min() < 0.0 or soft.max() > 1.0:
        raise ValueError("soft mask values must lie in [0, 1]")
    kernel = np.ones((config.morph_kernel, config.morph_kernel), bool)
    m = soft >= config.threshold
    for op in config.operations:
        if op == "open":
            m = _dilate(_erode(m, kernel), kernel)
        else:
            m = _erode(_dilate(m, kernel), kernel)
    return m.astype(np.uint8)


def dice(a: np.ndarray, b: np.ndarray) -> float:
    """Overlap coefficient 2|a n b| / (|a| + |b|); 1.0 when both masks are empty."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"mask shapes differ: {a.shape} vs {b.shape}")
    for m in (a, b):
        vals = np.unique(m)
        if not np.isin(vals, (0, 1)).all():
            raise ValueError("masks must be binary 0/1")
    a = a.astype(bool)
    b = b.astype(bool)
    total = int(a.sum()) + int(b.sum())
    if total == 0:
        return 1.0
    return 2.0 * int((a & b).sum()) / total
