"""Key-frame ingestion: directory scan, filename pre-classification, thumbnails."""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

import numpy as np
from PIL import Image

from .model import KeyFrame, MediaType, VideoMeta

log = logging.getLogger(__name__)

DEFAULT_FRAME_INTERVAL_S = 22.5  # midpoint of a key frame every 20 to 25 seconds
MIN_EDGE = 32
_EXTENSIONS = {".png", ".jpg", ".jpeg"}


class IngestError(Exception):
    pass


@dataclass
class Manifest:
    timestamps: dict[str, float] = field(default_factory=dict)  # filename -> seconds
    video: VideoMeta = field(default_factory=VideoMeta)

    @classmethod
    def load(cls, path: str | Path) -> "Manifest":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        ts = {e["file"]: float(e["timestamp_s"]) for e in data.get("files", [])}
        v = data.get("video", {})
        video = VideoMeta(
            title=v.get("title", ""),
            duration_s=v.get("duration_s"),
            video_url_template=v.get("video_url_template", ""),
        )
        return cls(timestamps=ts, video=video)


def _name_hint(stem: str, title_suffix: str = "_title", slide_suffix: str = "_ppt") -> str:
    if stem.endswith(title_suffix):
        return "title"
    if stem.endswith(slide_suffix):
        return "slide"
    return "none"


def load_image(path: str | Path) -> np.ndarray:
    """Decode a PNG/JPEG file to an 8-bit RGB raster (min edge 32)."""
    p = Path(path)
    if p.suffix.lower() not in _EXTENSIONS:
        raise ValueError(f"unsupported image format: {p.suffix}")
    with Image.open(p) as im:
        rgb = im.convert("RGB")
        arr = np.asarray(rgb, dtype=np.uint8)
    if arr.shape[0] < MIN_EDGE or arr.shape[1] < MIN_EDGE:
        raise ValueError(f"image too small: {arr.shape[1]}x{arr.shape[0]}")
    return arr


def scan_key_frames(
    directory: str | Path, manifest: Optional[Manifest] = None
) -> tuple[list[KeyFrame], list[np.ndarray], list[str]]:
    """Decode a directory of key-frame images in filename order.

    Returns (frames, rasters, skipped filenames). Undecodable files are skipped
    with a warning; an unreadable or empty directory is fatal.
    """
    d = Path(directory)
    if not d.is_dir():
        raise IngestError(f"not a readable directory: {d}")
    candidates = sorted(
        p for p in d.iterdir() if p.is_file() and p.suffix.lower() in _EXTENSIONS
    )
    frames: list[KeyFrame] = []
    rasters: list[np.ndarray] = []
    skipped: list[str] = []
    for p in candidates:
        try:
            raster = load_image(p)
        except Exception as exc:
            log.warning("skipping undecodable key frame %s: %s", p.name, exc)
            skipped.append(p.name)
            continue
        seq = len(frames)
        ts = None
        if manifest is not None and p.name in manifest.timestamps:
            ts = manifest.timestamps[p.name]
        if ts is None:
            ts = seq * DEFAULT_FRAME_INTERVAL_S
        frames.append(
            KeyFrame(
                id=p.stem,
                seq=seq,
                source_path=p.name,
                timestamp_s=ts,
                name_hint=_name_hint(p.stem),
            )
        )
        rasters.append(raster)
    if not frames:
        raise IngestError(f"no decodable key frames in {d}")
    return frames, rasters, skipped


def preclassify_by_name(frame: KeyFrame) -> KeyFrame:
    """Filename-based pre-classification: title frames are podium shots and
    slide exports are computer frames; everything else stays unknown."""
    if frame.name_hint == "title":
        return replace(frame, media_type=MediaType.PODIUM)
    if frame.name_hint == "slide":
        return replace(frame, media_type=MediaType.COMPUTER)
    return frame


def _area_reduce_axis(img: np.ndarray, out_n: int) -> np.ndarray:
    """Exact box-filter reduction along axis 0 (length n -> out_n)."""
    n = img.shape[0]
    flat = img.reshape(n, -1).astype(np.float64)
    csum = np.vstack([np.zeros((1, flat.shape[1])), np.cumsum(flat, axis=0)])
    edges = np.arange(out_n + 1) * (n / out_n)
    lo = np.floor(edges).astype(np.int64)
    frac = edges - lo
    lo = np.minimum(lo, n)
    hi = np.minimum(lo + 1, n)
    at_edges = csum[lo] + frac[:, None] * (csum[hi] - csum[lo])
    sums = at_edges[1:] - at_edges[:-1]
    widths = np.diff(edges)[:, None]
    out = sums / widths
    return out.reshape((out_n,) + img.shape[1:])


def make_thumbnail(frame: np.ndarray, max_edge: int = 160) -> np.ndarray:
    """Aspect-preserving box-filter downscale so max(width, height) == max_edge.

    Frames already within the limit are returned unchanged.
    """
    if max_edge < 16:
        raise ValueError("max_edge must be >= 16")
    h, w = frame.shape[:2]
    if max(h, w) <= max_edge:
        return frame.copy()
    scale = max_edge / max(h, w)
    oh = max(1, round(h * scale))
    ow = max(1, round(w * scale))
    reduced = _area_reduce_axis(frame, oh)
    reduced = np.swapaxes(_area_reduce_axis(np.swapaxes(reduced, 0, 1), ow), 0, 1)
    return np.clip(np.rint(reduced), 0, 255).astype(np.uint8)


def write_thumbnails(
    frames: list[KeyFrame], rasters: list[np.ndarray], out_dir: str | Path, max_edge: int = 160
) -> list[Path]:
    out = Path(out_dir) / "thumbs"
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for frame, raster in zip(frames, rasters):
        p = out / f"{frame.id}.png"
        Image.fromarray(make_thumbnail(raster, max_edge)).save(p)
        paths.append(p)
    return paths
