"""Image preprocessing: grayscale, resize, range normalization, masking, I/O.

Every pixel container is an ImageTensor: a 2-D float array plus the interval
its values are declared to live in. The GAN pipeline runs
grayscale -> resize -> normalize -> (optional) mask and always ends at a
square single-channel tensor in [-1, 1].
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image

# Rec. 601 luminance weights.
_LUMA = np.array([0.299, 0.587, 0.114], dtype=np.float64)


@dataclass(frozen=True)
class ImageTensor:
    """Single-channel 2-D float image with a declared value range."""

    pixels: np.ndarray
    range: tuple[float, float]

    def __post_init__(self):
        px = np.asarray(self.pixels, dtype=np.float64)
        if px.ndim != 2:
            raise ValueError(f"pixels must be 2-D, got shape {px.shape}")
        lo, hi = self.range
        if not lo <= hi:
            raise ValueError(f"range must be a non-decreasing interval, got {self.range}")
        object.__setattr__(self, "pixels", px)
        object.__setattr__(self, "range", (float(lo), float(hi)))

    @property
    def shape(self) -> tuple[int, int]:
        return self.pixels.shape

    def validate(self) -> None:
        lo, hi = self.range
        if not np.isfinite(self.pixels).all():
            raise ValueError("pixels contain non-finite values")
        if self.pixels.min() < lo or self.pixels.max() > hi:
            raise ValueError(
                f"pixel values [{self.pixels.min()}, {self.pixels.max()}] "
                f"outside declared range [{lo}, {hi}]"
            )


@dataclass(frozen=True)
class PreprocessConfig:
    target_size: int = 128
    output_range: tuple[float, float] = (-1.0, 1.0)
    interpolation: str = "bilinear"

    def __post_init__(self):
        if self.target_size <= 0:
            raise ValueError(f"target_size must be positive, got {self.target_size}")
        if tuple(self.output_range) not in ((0.0, 1.0), (-1.0, 1.0)):
            raise ValueError(f"output_range must be (0,1) or (-1,1), got {self.output_range}")
        if self.interpolation not in ("bilinear", "nearest"):
            raise ValueError(f"unsupported interpolation {self.interpolation!r}")


def to_grayscale(rgb: np.ndarray, range_: tuple[float, float] = (0.0, 255.0)) -> ImageTensor:
    """Collapse an H x W x 3 image to one channel with fixed luminance weights."""
    rgb = np.asarray(rgb)
    if rgb.ndim != 3 or rgb.shape[2] != 3:
        raise ValueError(f"expected an H x W x 3 image, got shape {rgb.shape}")
    gray = rgb.astype(np.float64) @ _LUMA
    return ImageTensor(gray, range_)


def _bilinear(px: np.ndarray, size: int) -> np.ndarray:
    # Align pixel centers (the usual image-resampling convention): source
    # coordinate of output center j is (j + 0.5) * scale - 0.5.
    h, w = px.shape
    out = px.astype(np.float64)
    ys = (np.arange(size) + 0.5) * (h / size) - 0.5
    xs = (np.arange(size) + 0.5) * (w / size) - 0.5
    y0 = np.clip(np.floor(ys).astype(int), 0, h - 1)
    x0 = np.clip(np.floor(xs).astype(int), 0, w - 1)
    y1 = np.clip(y0 + 1, 0, h - 1)
    x1 = np.clip(x0 + 1, 0, w - 1)
    wy = np.clip(ys - y0, 0.0, 1.0)[:, None]
    wx = np.clip(xs - x0, 0.0, 1.0)[None, :]
    top = out[np.ix_(y0, x0)] * (1 - wx) + out[np.ix_(y0, x1)] * wx
    bot = out[np.ix_(y1, x0)] * (1 - wx) + out[np.ix_(y1, x1)] * wx
    return top * (1 - wy) + bot * wy


def _nearest(px: np.ndarray, size: int) -> np.ndarray:
    h, w = px.shape
    ys = np.clip(((np.arange(size) + 0.5) * (h / size)).astype(int), 0, h - 1)
    xs = np.clip(((np.arange(size) + 0.5) * (w / size)).astype(int), 0, w - 1)
    return px[np.ix_(ys, xs)]


def resize(img: ImageTensor, size: int, interpolation: str = "bilinear") -> ImageTensor:
    """Resample to size x size; values are clamped back into the declared range."""
    if size <= 0:
        raise ValueError(f"size must be positive, got {size}")
    if img.pixels.size == 0:
        raise ValueError("cannot resize an empty image")
    if img.shape == (size, size):
        return ImageTensor(img.pixels.copy(), img.range)
    if interpolation == "bilinear":
        px = _bilinear(img.pixels, size)
    elif interpolation == "nearest":
        px = _nearest(img.pixels, size)
    else:
        raise ValueError(f"unsupported interpolation {interpolation!r}")
    px = np.clip(px, img.range[0], img.range[1])
    return ImageTensor(px, img.range)


def normalize(img: ImageTensor, target: tuple[float, float]) -> ImageTensor:
    """Affinely map the declared source range onto target.

    The source endpoints map exactly onto the target endpoints. A degenerate
    source range (max == min) maps everything to the target midpoint.
    """
    lo, hi = img.range
    tlo, thi = float(target[0]), float(target[1])
    if hi == lo:
        px = np.full_like(img.pixels, (tlo + thi) / 2.0)
    else:
        px = (img.pixels.astype(np.float64) - lo) / (hi - lo) * (thi - tlo) + tlo
    return ImageTensor(px, (tlo, thi))


def denormalize(img: ImageTensor, source: tuple[float, float]) -> ImageTensor:
    """Inverse of normalize: map back onto the original source range."""
    return normalize(img, source)


def apply_mask(img: ImageTensor, mask: np.ndarray) -> ImageTensor:
    """Keep pixels where mask is 1; set the rest to the range minimum."""
    mask = np.asarray(mask)
    if mask.shape != img.shape:
        raise ValueError(f"mask shape {mask.shape} != image shape {img.shape}")
    vals = np.unique(mask)
    if not np.isin(vals, (0, 1)).all():
        raise ValueError(f"mask must be binary 0/1, found values {vals[:8]}")
    px = np.where(mask.astype(bool), img.pixels, img.range[0])
    return ImageTensor(px, img.range)


def preprocess(
    img: ImageTensor, config: PreprocessConfig, mask: np.ndarray | None = None
) -> ImageTensor:
    """Full chain: resize -> normalize -> optional mask.

    Grayscale conversion happens at load time (load_image); masks are given
    at the original mask resolution and resized here with nearest-neighbor so
    they stay binary.
    """
    out = resize(img, config.target_size, config.interpolation)
    out = normalize(out, config.output_range)
    if mask is not None:
        if mask.shape != out.shape:
            m = ImageTensor(mask, (0.0, 1.0))
            mask = resize(m, config.target_size, "nearest").pixels
        out = apply_mask(out, mask.round().astype(np.uint8))
    return out


# --- file I/O ---------------------------------------------------------------

TENSOR_SUFFIX = ".bin"


def load_image(path: Path | str) -> ImageTensor:
    """Read a PNG (8-bit grayscale or RGB) as an ImageTensor in [0, 255]."""
    with Image.open(path) as im:
        if im.mode in ("RGB", "RGBA"):
            arr = np.asarray(im.convert("RGB"), dtype=np.float32)
            return to_grayscale(arr, (0.0, 255.0))
        arr = np.asarray(im.convert("L"), dtype=np.float32)
    return ImageTensor(arr, (0.0, 255.0))


def load_mask(path: Path | str) -> np.ndarray:
    """Read a mask PNG (0 = background, 255 = foreground) as a 0/1 array."""
    with Image.open(path) as im:
        arr = np.asarray(im.convert("L"))
    return (arr >= 128).astype(np.uint8)


def save_png(img: ImageTensor, path: Path | str) -> None:
    """Persist as an 8-bit grayscale PNG (mapping the declared range to 0..255)."""
    lo, hi = img.range
    if hi == lo:
        arr = np.zeros_like(img.pixels, dtype=np.float64)
    else:
        arr = (img.pixels.astype(np.float64) - lo) / (hi - lo) * 255.0
    Image.fromarray(np.round(arr).astype(np.uint8), mode="L").save(path, format="PNG")


def save_mask(mask: np.ndarray, path: Path | str) -> None:
    Image.fromarray((np.asarray(mask) > 0).astype(np.uint8) * 255, mode="L").save(
        path, format="PNG"
    )


def save_tensor(img: ImageTensor, path: Path | str) -> None:
    """Write the binary tensor format: one ASCII header line, then float32 rows."""
    h, w = img.shape
    lo, hi = img.range
    with open(path, "wb") as fh:
        fh.write(f"{h} {w} {lo!r} {hi!r}\n".encode("ascii"))
        fh.write(img.pixels.astype("<f4").tobytes())


def load_tensor(path: Path | str) -> ImageTensor:
    with open(path, "rb") as fh:
        header = fh.readline().decode("ascii").split()
        if len(header) != 4:
            raise ValueError(f"bad tensor header in {path}")
        h, w = int(header[0]), int(header[1])
        lo, hi = float(header[2]), float(header[3])
        px = np.frombuffer(fh.read(4 * h * w), dtype="<f4").reshape(h, w)
    return ImageTensor(px.copy(), (lo, hi))
