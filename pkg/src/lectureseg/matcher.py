"""Sub-window selection, binary template matching, and the four-term match
score deciding whether one derived content frame elaborates another."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import ndimage

from . import kernels

# 14 alternating expansion/contraction factors, multiplicative steps of 1.08
# around 1.0, clamped to [0.6, 1.7].
SCALE_LADDER: tuple[float, ...] = (
    1.0, 1.08, 0.926, 1.166, 0.857, 1.26, 0.794,
    1.36, 0.735, 1.469, 0.681, 1.587, 0.63, 1.7,
)

_BOX3 = np.ones((3, 3), bool)


@dataclass(frozen=True)
class SubWindow:
    x: int
    y: int
    w: int
    h: int
    cc: int  # content-pixel count


@dataclass(frozen=True)
class WindowCorrespondence:
    source: SubWindow
    target_x: int
    target_y: int
    quality: float  # matched writing / window writing
    translation: tuple[int, int]


@dataclass
class MatchResult:
    correspondences: list[WindowCorrespondence]
    n_windows_found: int
    n_matched: int
    q_mean: float
    sigma_trans: float
    sigma_spatial: float
    scale: float
    score: float
    accepted: bool


@dataclass
class MatchConfig:
    height_ratio: int = 8        # window height = frame height / height_ratio
    cc_low: float = 0.05
    cc_high: float = 0.30
    coarse_stride: int = 4
    refine_radius: int = 4
    exhaustive_limit: int = 4096  # search spaces up to this get exact stride-1 scans
    w_n: float = 0.25
    w_q: float = 0.45
    w_t: float = 0.15
    w_s: float = 0.15
    tau_frac: float = 0.02       # tau = tau_frac * frame diagonal
    theta_score: float = 0.55
    q_min: float = 0.5
    scale_ladder: tuple[float, ...] = field(default=SCALE_LADDER)

    def __post_init__(self):
        total = self.w_n + self.w_q + self.w_t + self.w_s
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"score weights must sum to 1, got {total}")
        if len(self.scale_ladder) != 14 or not all(0.6 <= s <= 1.7 for s in self.scale_ladder):
            raise ValueError("scale ladder must hold 14 factors within [0.6, 1.7]")


def select_windows(content: np.ndarray, cfg: Optional[MatchConfig] = None) -> list[SubWindow]:
    """Up to 6 wide-aspect interest windows: per vertical strip, first grid
    placement with an in-range content count scanning top-down, then bottom-up."""
    cfg = cfg or MatchConfig()
    height, width = content.shape
    h = height // cfg.height_ratio
    w = 2 * h
    if h < 2 or w > width:
        return []
    low = cfg.cc_low * w * h
    high = cfg.cc_high * w * h
    integral = np.zeros((height + 1, width + 1), np.int64)
    integral[1:, 1:] = np.cumsum(np.cumsum(content.astype(np.int64), axis=0), axis=1)

    def cc_at(y: int, x: int) -> int:
        return int(
            integral[y + h, x + w] - integral[y, x + w] - integral[y + h, x] + integral[y, x]
        )

    ys = list(range(0, height - h + 1, max(1, h // 2)))
    windows: list[SubWindow] = []
    for strip in range(3):
        x0 = strip * width // 3
        x1 = (strip + 1) * width // 3
        if x1 - x0 < w:
            continue
        xs = list(range(x0, x1 - w + 1, max(1, w // 2)))

        def first_hit(y_order):
            for y in y_order:
                for x in xs:
                    cc = cc_at(y, x)
                    if low <= cc <= high:
                        return SubWindow(x=x, y=y, w=w, h=h, cc=cc)
            return None

        top = first_hit(ys)
        bot = first_hit(reversed(ys))
        for win in (top, bot):
            if win is not None and win not in windows:
                windows.append(win)
    return windows


def dilate3(mask: np.ndarray) -> np.ndarray:
    """3x3 dilation used to blur the target content frame slightly."""
    return ndimage.binary_dilation(mask, _BOX3)


def rescale_binary(mask: np.ndarray, scale: float) -> np.ndarray:
    """Nearest-neighbor rescale of a binary raster."""
    if scale == 1.0:
        return mask
    height, width = mask.shape
    oh = max(1, round(height * scale))
    ow = max(1, round(width * scale))
    ys = np.minimum((np.floor((np.arange(oh) + 0.5) / scale)).astype(np.int64), height - 1)
    xs = np.minimum((np.floor((np.arange(ow) + 0.5) / scale)).astype(np.int64), width - 1)
    return mask[ys][:, xs]


def _argbest(counts: np.ndarray, ys: np.ndarray, xs: np.ndarray) -> tuple[int, int, int]:
    """Best placement with ties broken by smallest (y, x).

    Placement lists must be ordered y-major ascending so the first maximum wins.
    """
    k = int(np.argmax(counts))
    return int(ys[k]), int(xs[k]), int(counts[k])


def _grid(y_lo, y_hi, x_lo, x_hi, step):
    ys = np.arange(y_lo, y_hi, step, dtype=np.int64)
    xs = np.arange(x_lo, x_hi, step, dtype=np.int64)
    yy = np.repeat(ys, xs.size)
    xx = np.tile(xs, ys.size)
    return yy, xx


def match_window(
    win: SubWindow,
    source: np.ndarray,
    target_dilated: np.ndarray,
    cfg: Optional[MatchConfig] = None,
) -> WindowCorrespondence:
    """Best placement of one source window inside the (dilated) target frame.

    Small search spaces are scanned exhaustively at stride 1; larger ones use a
    stride-4 coarse scan refined at stride 1 around the coarse best.
    """
    cfg = cfg or MatchConfig()
    template = np.ascontiguousarray(
        source[win.y : win.y + win.h, win.x : win.x + win.w], dtype=np.uint8
    )
    tgt = np.ascontiguousarray(target_dilated, dtype=np.uint8)
    ph = tgt.shape[0] - win.h + 1
    pw = tgt.shape[1] - win.w + 1
    if ph < 1 or pw < 1:
        return WindowCorrespondence(win, 0, 0, 0.0, (-win.x, -win.y))

    if ph * pw <= cfg.exhaustive_limit:
        yy, xx = _grid(0, ph, 0, pw, 1)
        by, bx, best = _argbest(kernels.correlate_at(tgt, template, yy, xx), yy, xx)
    else:
        s = cfg.coarse_stride
        yy, xx = _grid(0, ph, 0, pw, s)
        cy, cx, _ = _argbest(kernels.correlate_at(tgt, template, yy, xx), yy, xx)
        r = cfg.refine_radius
        yy, xx = _grid(max(0, cy - r), min(ph, cy + r + 1), max(0, cx - r), min(pw, cx + r + 1), 1)
        by, bx, best = _argbest(kernels.correlate_at(tgt, template, yy, xx), yy, xx)

    quality = best / win.cc if win.cc > 0 else 0.0
    return WindowCorrespondence(
        source=win,
        target_x=bx,
        target_y=by,
        quality=quality,
        translation=(bx - win.x, by - win.y),
    )


def _pop_std(values: list[float]) -> float:
    arr = np.asarray(values, dtype=np.float64)
    return float(np.sqrt(np.mean((arr - arr.mean()) ** 2))) if arr.size else 0.0


def score_match(
    correspondences: list[WindowCorrespondence],
    diag: float,
    cfg: Optional[MatchConfig] = None,
) -> tuple[float, float, float, bool]:
    """Weighted total score over matched windows.

    Translation consistency and spatial-arrangement consistency enter as
    exp(-sigma/tau); distances are measured in the (already rescaled) target
    frame, so no further scale correction applies. Returns
    (score, sigma_trans, sigma_spatial, accepted).
    """
    cfg = cfg or MatchConfig()
    n = len(correspondences)
    q_mean = float(np.mean([c.quality for c in correspondences])) if n else 0.0
    sigma_t = 0.0
    sigma_s = 0.0
    if n >= 2:
        sigma_t = _pop_std([math.hypot(*c.translation) for c in correspondences])
        errors = []
        for a in range(n):
            for b in range(a + 1, n):
                ca, cb = correspondences[a], correspondences[b]
                d_src = math.hypot(
                    ca.source.x - cb.source.x, ca.source.y - cb.source.y
                )
                d_tgt = math.hypot(
                    ca.target_x - cb.target_x, ca.target_y - cb.target_y
                )
                errors.append(abs(d_tgt - d_src))
        sigma_s = _pop_std(errors)
    tau = cfg.tau_frac * diag
    score = (
        cfg.w_n * (n / 6.0)
        + cfg.w_q * q_mean
        + cfg.w_t * math.exp(-sigma_t / tau)
        + cfg.w_s * math.exp(-sigma_s / tau)
    )
    accepted = score >= cfg.theta_score and n >= 2
    return score, sigma_t, sigma_s, accepted


def match_frames(
    i: np.ndarray, j: np.ndarray, cfg: Optional[MatchConfig] = None
) -> MatchResult:
    """Decide whether frame j elaborates frame i.

    Walks the alternating scale ladder, rescaling and re-dilating j, and returns
    the first accepted result, else the best-scoring rejected one.
    """
    cfg = cfg or MatchConfig()
    windows = select_windows(i, cfg)
    diag = math.hypot(*i.shape)
    if not windows:
        return MatchResult([], 0, 0, 0.0, 0.0, 0.0, 1.0, 0.0, False)
    best: Optional[MatchResult] = None
    for scale in cfg.scale_ladder:
        scaled = rescale_binary(j, scale)
        target = dilate3(scaled)
        corrs = [match_window(win, i, target, cfg) for win in windows]
        matched = [c for c in corrs if c.quality >= cfg.q_min]
        score, sigma_t, sigma_s, accepted = score_match(matched, diag, cfg)
        q_mean = float(np.mean([c.quality for c in matched])) if matched else 0.0
        result = MatchResult(
            correspondences=matched,
            n_windows_found=len(windows),
            n_matched=len(matched),
            q_mean=q_mean,
            sigma_trans=sigma_t,
            sigma_spatial=sigma_s,
            scale=scale,
            score=score,
            accepted=accepted,
        )
        if accepted:
            return result
        if best is None or result.score > best.score:
            best = result
    return best
