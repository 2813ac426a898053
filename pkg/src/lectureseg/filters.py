"""Writing extraction for board and sheet frames: edge filtering, background
flooding, and the derived content frame."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import ndimage

from . import kernels
from .model import MediaType

_BOX3 = np.ones((3, 3), bool)
_CROSS = ndimage.generate_binary_structure(2, 1)  # 4-connectivity


@dataclass
class FilterConfig:
    edge_threshold: int = 24
    border_run: int = 8
    border_sim: int = 4
    border_cross: int = 12
    blob_area: int = 500        # at the reference area below, scaled by frame area
    blob_ref_area: int = 307200
    min_region_frac: float = 0.01


def laplacian_edges(frame: np.ndarray, threshold: int = 24) -> np.ndarray:
    """3x3 Laplacian (center 8, neighbors -1) on luma; |response| >= threshold.

    Image border pixels are never edges.
    """
    f = frame.astype(np.float64)
    lm = np.rint(0.299 * f[..., 0] + 0.587 * f[..., 1] + 0.114 * f[..., 2]).astype(np.int32)
    resp = 8 * lm[1:-1, 1:-1] - (
        lm[:-2, :-2] + lm[:-2, 1:-1] + lm[:-2, 2:]
        + lm[1:-1, :-2] + lm[1:-1, 2:]
        + lm[2:, :-2] + lm[2:, 1:-1] + lm[2:, 2:]
    )
    edges = np.zeros(lm.shape, bool)
    edges[1:-1, 1:-1] = np.abs(resp) >= threshold
    return edges


def suppress_region_borders(
    edges: np.ndarray, frame: np.ndarray, cfg: Optional[FilterConfig] = None
) -> np.ndarray:
    """Drop edge pixels that merely separate two large homogeneous color regions."""
    cfg = cfg or FilterConfig()
    out = kernels.suppress_split_edges(
        np.ascontiguousarray(edges, dtype=np.uint8),
        np.ascontiguousarray(frame, dtype=np.int16),
        cfg.border_run,
        cfg.border_sim,
        cfg.border_cross,
    )
    return out.astype(bool)


def _predicate_mask(frame: np.ndarray, media: MediaType) -> np.ndarray:
    from .features import green_mask, white_mask

    if media is MediaType.BOARD:
        return green_mask(frame)
    if media is MediaType.SHEET:
        return white_mask(frame)
    raise ValueError(f"content extraction only applies to board/sheet, got {media}")


def extract_background(
    frame: np.ndarray,
    media: MediaType,
    cfg: Optional[FilterConfig] = None,
    debug: Optional[dict] = None,
) -> np.ndarray:
    """Filled support mask of the physical board/sheet surface.

    Flood-fills (4-connectivity) from the largest color-predicate region with
    Laplacian edges as barriers, then fills the flooded outline's interior so
    writing holes are absorbed.
    """
    cfg = cfg or FilterConfig()
    pred = _predicate_mask(frame, media)
    h, w = pred.shape
    labels, n = ndimage.label(pred, structure=_CROSS)
    if n == 0:
        return np.zeros((h, w), bool)
    sizes = np.bincount(labels.ravel())
    sizes[0] = 0
    seed_label = int(np.argmax(sizes))
    if sizes[seed_label] < cfg.min_region_frac * h * w:
        return np.zeros((h, w), bool)
    seed = labels == seed_label

    edges = laplacian_edges(frame, cfg.edge_threshold)
    open_mask = pred & ~edges
    open_labels, n_open = ndimage.label(open_mask, structure=_CROSS)
    if n_open == 0:
        flood = seed
    else:
        touched = np.unique(open_labels[seed & open_mask])
        touched = touched[touched != 0]
        flood = np.isin(open_labels, touched) if touched.size else seed
    filled = ndimage.binary_fill_holes(flood)
    if debug is not None:
        debug["c"] = flood
        debug["d"] = flood & ~ndimage.binary_erosion(flood, _CROSS)
    return filled


def _denoise_isolated(edges: np.ndarray) -> np.ndarray:
    """Remove edge pixels with fewer than 2 edge neighbors in their 3x3 neighborhood."""
    neigh = ndimage.convolve(edges.astype(np.uint8), np.ones((3, 3), np.uint8), mode="constant") - edges
    return edges & (neigh >= 2)


def _close3(mask: np.ndarray) -> np.ndarray:
    return ndimage.binary_erosion(ndimage.binary_dilation(mask, _BOX3), _BOX3)


def blob_filter(content: np.ndarray, max_area: float) -> np.ndarray:
    """Delete 8-connected components with area strictly greater than max_area."""
    labels, n = ndimage.label(content, structure=np.ones((3, 3), bool))
    if n == 0:
        return content.copy()
    sizes = np.bincount(labels.ravel())
    keep = sizes <= max_area
    keep[0] = False
    return keep[labels]


def derive_content(
    frame: np.ndarray,
    media: MediaType,
    cfg: Optional[FilterConfig] = None,
    debug: Optional[dict] = None,
) -> np.ndarray:
    """Binary derived content frame (writing pixels) for a board or sheet frame.

    Board foreground is edge-filtered, border-suppressed, denoised, and closed;
    sheet foreground uses the raw edge map. Either is ANDed with the flooded
    background support, then oversized blobs are dropped.
    """
    cfg = cfg or FilterConfig()
    edges = laplacian_edges(frame, cfg.edge_threshold)
    bg = extract_background(frame, media, cfg, debug=debug)
    if media is MediaType.BOARD:
        suppressed = suppress_region_borders(edges, frame, cfg)
        denoised = _denoise_isolated(suppressed)
        fg = _close3(denoised)
    else:
        suppressed = denoised = None
        fg = edges
    anded = fg & bg
    h, w = anded.shape
    max_area = cfg.blob_area * (h * w) / cfg.blob_ref_area
    content = blob_filter(anded, max_area)
    if debug is not None:
        debug["b"] = _predicate_mask(frame, media)
        debug["e"] = bg
        debug["f"] = edges
        if suppressed is not None:
            debug["g"] = suppressed
            debug["h"] = denoised
        debug["i"] = fg
        debug["j"] = anded
        debug["k"] = content
    return content
