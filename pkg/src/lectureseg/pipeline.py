"""End-to-end segmentation pipeline: classify, filter, cluster, assemble."""
from __future__ import annotations

import os
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Optional

import numpy as np

from . import cluster, filters, ingest
from .classify import classify_frame, postprocess_computer_runs, postprocess_tail
from .config import PipelineConfig
from .features import compute_features
from .model import KeyFrame, MediaType, TopicIndex, VideoMeta


def _progress(msg: str) -> None:
    print(msg, file=sys.stderr, flush=True)


def _map_ordered(fn: Callable, items, threads: int):
    """Apply fn to items preserving order; thread count never changes results."""
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def resolve_threads(requested: int) -> int:
    if requested <= 0:
        return os.cpu_count() or 1
    return requested


def run_pipeline(
    frames: list[KeyFrame],
    rasters: list[np.ndarray],
    cfg: Optional[PipelineConfig] = None,
    *,
    threads: int = 1,
    video: Optional[VideoMeta] = None,
    skipped_files: tuple[str, ...] = (),
    debug_sink: Optional[Callable[[str, dict], None]] = None,
    progress: Callable[[str], None] = _progress,
) -> TopicIndex:
    """Run the full pipeline over pre-loaded key frames.

    `debug_sink(frame_id, bundle)` receives the filter stage masks for every
    clustered frame when provided.
    """
    cfg = cfg or PipelineConfig()
    threads = resolve_threads(threads)

    frames = [ingest.preclassify_by_name(f) for f in frames]
    progress(f"classifying {len(frames)} frames")
    fvs = _map_ordered(
        lambda r: compute_features(
            r, band_frac=cfg.classifier.band_frac, border_luma_max=cfg.classifier.border_luma_max
        ),
        rasters,
        threads,
    )
    types = [
        f.media_type if f.media_type is not MediaType.UNKNOWN else classify_frame(fv, cfg.classifier)
        for f, fv in zip(frames, fvs)
    ]
    types = postprocess_tail(types, fvs, cfg.classifier)
    types = postprocess_computer_runs(types, rasters, cfg.classifier)
    frames = [
        KeyFrame(
            id=f.id,
            seq=f.seq,
            source_path=f.source_path,
            timestamp_s=f.timestamp_s,
            name_hint=f.name_hint,
            media_type=t,
            topic_id=None,
        )
        for f, t in zip(frames, types)
    ]

    def _content(pair):
        frame, raster = pair
        debug: Optional[dict] = {} if debug_sink is not None else None
        content = filters.derive_content(raster, frame.media_type, cfg.filter, debug=debug)
        return content, debug

    board_idx = [i for i, f in enumerate(frames) if f.media_type is MediaType.BOARD]
    sheet_idx = [i for i, f in enumerate(frames) if f.media_type is MediaType.SHEET]
    progress(f"extracting content for {len(board_idx) + len(sheet_idx)} frames")
    contents: dict[int, np.ndarray] = {}
    for idx in (board_idx, sheet_idx):
        results = _map_ordered(_content, [(frames[i], rasters[i]) for i in idx], threads)
        for i, (content, debug) in zip(idx, results):
            contents[i] = content
            if debug_sink is not None and debug is not None:
                debug_sink(frames[i].id, debug)

    progress(f"clustering {len(board_idx)} board and {len(sheet_idx)} sheet frames")
    board_topics, board_trace = cluster.cluster_frames(
        [frames[i] for i in board_idx], [contents[i] for i in board_idx], MediaType.BOARD, cfg.matcher
    )
    sheet_topics, sheet_trace = cluster.cluster_frames(
        [frames[i] for i in sheet_idx], [contents[i] for i in sheet_idx], MediaType.SHEET, cfg.matcher
    )
    index = cluster.assemble_index(
        frames,
        (board_topics, board_trace),
        (sheet_topics, sheet_trace),
        video=video,
        skipped_files=skipped_files,
    )
    progress(f"assembled {len(index.topics)} topics")
    return index
