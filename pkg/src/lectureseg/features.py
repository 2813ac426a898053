"""Static per-frame visual features feeding the media-type decision tree."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .filters import laplacian_edges

CRM_MIN_RUN = 32
CRM_MAX_DIFF = 2


@dataclass(frozen=True)
class FeatureVector:
    mean_luma: float
    border_black: tuple[float, float, float, float]  # left, right, top, bottom
    green_frac: float
    green_bottom_frac: float
    green_border_fracs: tuple[float, float, float, float]
    white_frac: float
    light_frac: float
    hlm: float
    crm: float
    dark_area_frac: float


def luma(frame: np.ndarray) -> np.ndarray:
    """Integer luma per pixel, rounded Rec.601 weighting."""
    f = frame.astype(np.float64)
    return np.rint(0.299 * f[..., 0] + 0.587 * f[..., 1] + 0.114 * f[..., 2]).astype(np.int32)


def _hsv(frame: np.ndarray):
    """Vectorized RGB -> (hue degrees, saturation, value)."""
    rgb = frame.astype(np.float64) / 255.0
    mx = rgb.max(axis=2)
    mn = rgb.min(axis=2)
    delta = mx - mn
    safe = np.where(delta > 0, delta, 1.0)
    r, g, b = rgb[..., 0], rgb[..., 1], rgb[..., 2]
    hue = np.zeros_like(mx)
    is_r = (mx == r) & (delta > 0)
    is_g = (mx == g) & (delta > 0) & ~is_r
    is_b = (delta > 0) & ~is_r & ~is_g
    hue[is_r] = 60.0 * (((g - b) / safe)[is_r] % 6.0)
    hue[is_g] = 60.0 * (((b - r) / safe)[is_g] + 2.0)
    hue[is_b] = 60.0 * (((r - g) / safe)[is_b] + 4.0)
    sat = np.where(mx > 0, delta / np.where(mx > 0, mx, 1.0), 0.0)
    return hue, sat, mx


def green_mask(frame: np.ndarray) -> np.ndarray:
    """Blackboard-green pixel predicate."""
    hue, sat, val = _hsv(frame)
    return (hue >= 70) & (hue <= 170) & (sat >= 0.15) & (val >= 0.10) & (val <= 0.85)


def white_mask(frame: np.ndarray) -> np.ndarray:
    hue, sat, val = _hsv(frame)
    del hue
    return (val >= 0.70) & (sat <= 0.20)


def light_gray_mask(frame: np.ndarray) -> np.ndarray:
    hue, sat, val = _hsv(frame)
    del hue
    return (val >= 0.50) & (val < 0.70) & (sat <= 0.15)


def skin_mask(frame: np.ndarray) -> np.ndarray:
    r = frame[..., 0].astype(np.int32)
    g = frame[..., 1].astype(np.int32)
    b = frame[..., 2].astype(np.int32)
    mx = np.maximum(np.maximum(r, g), b)
    mn = np.minimum(np.minimum(r, g), b)
    return (r > 95) & (g > 40) & (b > 20) & (r > g) & (r > b) & ((mx - mn) > 15)


def _band_slices(h: int, w: int, band_frac: float):
    bw = max(1, round(band_frac * w))
    bh = max(1, round(band_frac * h))
    left = (slice(None), slice(0, bw))
    right = (slice(None), slice(w - bw, w))
    top = (slice(0, bh), slice(None))
    bottom = (slice(h - bh, h), slice(None))
    return left, right, top, bottom


def black_border_fraction(
    frame: np.ndarray, band_frac: float = 0.05, luma_max: float = 50
) -> tuple[float, float, float, float]:
    """Per-side fraction of border-band pixels darker than luma_max."""
    lm = luma(frame)
    dark = lm < luma_max
    h, w = dark.shape
    return tuple(float(np.mean(dark[s])) for s in _band_slices(h, w, band_frac))


def _side_fractions(mask: np.ndarray, band_frac: float) -> tuple[float, float, float, float]:
    h, w = mask.shape
    return tuple(float(np.mean(mask[s])) for s in _band_slices(h, w, band_frac))


def horizontal_line_measure(edges: np.ndarray) -> float:
    """Exponentially length-weighted measure of horizontal edge runs."""
    height, width = edges.shape
    l0 = width / 16.0
    return kernels.hlm_sum(np.ascontiguousarray(edges, dtype=np.uint8), l0) / height


def color_repetition_measure(frame: np.ndarray) -> float:
    """Fraction of pixels inside long horizontal/vertical runs of near-identical color."""
    img = np.ascontiguousarray(frame, dtype=np.int16)
    covered = kernels.crm_covered(img, CRM_MIN_RUN, CRM_MAX_DIFF)
    return covered / (frame.shape[0] * frame.shape[1])


def compute_features(
    frame: np.ndarray,
    band_frac: float = 0.05,
    border_luma_max: float = 50,
    edge_threshold: int = 24,
    dark_luma: float = 40,
) -> FeatureVector:
    lm = luma(frame)
    h, w = lm.shape
    green = green_mask(frame)
    bottom_rows = slice(h - max(1, round(0.10 * h)), h)
    edges = laplacian_edges(frame, edge_threshold)
    white = white_mask(frame)
    light = white | light_gray_mask(frame) | skin_mask(frame)
    return FeatureVector(
        mean_luma=float(lm.mean()),
        border_black=black_border_fraction(frame, band_frac, border_luma_max),
        green_frac=float(green.mean()),
        green_bottom_frac=float(green[bottom_rows, :].mean()),
        green_border_fracs=_side_fractions(green, 0.10),
        white_frac=float(white.mean()),
        light_frac=float(light.mean()),
        hlm=horizontal_line_measure(edges),
        crm=color_repetition_measure(frame),
        dark_area_frac=float((lm < dark_luma).mean()),
    )
