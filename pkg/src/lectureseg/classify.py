"""Media-type decision tree over static features plus the two temporal
post-processing passes."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .features import FeatureVector
from .model import MediaType


@dataclass
class ClassifierConfig:
    theta_bb: float = 0.8          # black-border fraction, 5% bands
    band_frac: float = 0.05
    border_luma_max: float = 50.0
    theta_dark: float = 50.0       # mean luma below -> computer
    theta_green: float = 0.40
    theta_gb: float = 0.05         # green fraction in bottom 10% rows
    theta_gb2: float = 0.20
    theta_gbord: float = 0.50      # per-side green fraction, 10% bands
    theta_white: float = 0.45
    theta_hlm: float = 4.0
    theta_light: float = 0.60
    theta_crm: float = 0.15
    theta_green_relaxed: float = 0.18  # green re-test on residual branch
    theta_fade: float = 0.50       # dark-area fraction for the fade-out tail walk
    fade_limit: int = 10
    theta_hist: float = 0.60       # histogram intersection for computer-run repair


def _board_or_podium(fv: FeatureVector, cfg: ClassifierConfig, green_min: float) -> Optional[MediaType]:
    """Green-dominant branch; None when the frame is not green enough."""
    if fv.green_frac < green_min:
        return None
    if fv.green_bottom_frac < cfg.theta_gb:
        return MediaType.PODIUM
    if (fv.green_frac >= green_min and fv.green_bottom_frac >= cfg.theta_gb2) or all(
        b >= cfg.theta_gbord for b in fv.green_border_fracs
    ):
        return MediaType.BOARD
    return MediaType.PODIUM


def classify_frame(fv: FeatureVector, cfg: Optional[ClassifierConfig] = None) -> MediaType:
    """Total decision tree; first matching rule wins."""
    cfg = cfg or ClassifierConfig()
    left, right, top, bottom = fv.border_black

    # 1: black-bordered or dark -> computer
    if (left >= cfg.theta_bb and right >= cfg.theta_bb) or (
        top >= cfg.theta_bb and bottom >= cfg.theta_bb
    ):
        return MediaType.COMPUTER
    if fv.mean_luma < cfg.theta_dark:
        return MediaType.COMPUTER

    # 2: green-dominant -> board / podium
    result = _board_or_podium(fv, cfg, cfg.theta_green)
    if result is not None:
        return result

    # 3: white-dominant -> computer / sheet
    if fv.white_frac >= cfg.theta_white:
        if fv.hlm >= cfg.theta_hlm:
            return MediaType.COMPUTER
        if fv.light_frac >= cfg.theta_light:
            return MediaType.SHEET

    # 4: residual branch
    if fv.hlm >= cfg.theta_hlm or fv.crm >= cfg.theta_crm:
        return MediaType.COMPUTER
    result = _board_or_podium(fv, cfg, cfg.theta_green_relaxed)
    if result is not None:
        return result
    return MediaType.ILLUSTRATION


def postprocess_tail(
    types: Sequence[MediaType], fvs: Sequence[FeatureVector], cfg: Optional[ClassifierConfig] = None
) -> list[MediaType]:
    """Reclassify the trailing fade-out frames (large dark areas) to podium.

    Walks backward from the last frame while frames stay dark, at most
    cfg.fade_limit frames, stopping at the first bright frame.
    """
    cfg = cfg or ClassifierConfig()
    out = list(types)
    n = len(out)
    for k in range(1, min(cfg.fade_limit, n) + 1):
        fv = fvs[n - k]
        if fv.dark_area_frac >= cfg.theta_fade:
            out[n - k] = MediaType.PODIUM
        else:
            break
    return out


def rgb_histogram(frame: np.ndarray) -> np.ndarray:
    """Normalized 8x8x8 RGB histogram."""
    q = (frame >> 5).reshape(-1, 3).astype(np.int64)
    flat = q[:, 0] * 64 + q[:, 1] * 8 + q[:, 2]
    hist = np.bincount(flat, minlength=512).astype(np.float64)
    return hist / hist.sum()


def histogram_intersection(h1: np.ndarray, h2: np.ndarray) -> float:
    return float(np.minimum(h1, h2).sum())


def postprocess_computer_runs(
    types: Sequence[MediaType],
    rasters: Sequence[np.ndarray],
    cfg: Optional[ClassifierConfig] = None,
) -> list[MediaType]:
    """Reclassify board/podium frames sandwiched between computer frames when
    their color distribution matches the nearer computer neighbor.

    Iterates to a fixed point so the pass is idempotent even when conversions
    create new computer-bounded runs.
    """
    cfg = cfg or ClassifierConfig()
    out = list(types)
    hists: dict[int, np.ndarray] = {}

    def hist(k: int) -> np.ndarray:
        if k not in hists:
            hists[k] = rgb_histogram(rasters[k])
        return hists[k]

    changed = True
    while changed:
        changed = False
        computer_idx = [k for k, t in enumerate(out) if t is MediaType.COMPUTER]
        converts: list[int] = []
        for c1, c2 in zip(computer_idx, computer_idx[1:]):
            interior = range(c1 + 1, c2)
            if not interior:
                continue
            if not all(out[k] in (MediaType.BOARD, MediaType.PODIUM) for k in interior):
                continue
            for k in interior:
                neighbor = c1 if (k - c1) <= (c2 - k) else c2
                if histogram_intersection(hist(k), hist(neighbor)) >= cfg.theta_hist:
                    converts.append(k)
        for k in converts:
            if out[k] is not MediaType.COMPUTER:
                out[k] = MediaType.COMPUTER
                changed = True
    return out
