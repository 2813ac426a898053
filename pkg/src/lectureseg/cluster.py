"""Recency-ordered topic clustering of board and sheet content frames, and
assembly of the final topic index."""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Optional, Sequence

import numpy as np

from .costmodel import fit_quadratic
from .matcher import MatchConfig, MatchResult, match_frames, select_windows
from .model import (
    CLUSTERED_TYPES,
    KeyFrame,
    MediaType,
    PipelineStats,
    Topic,
    TopicIndex,
    VideoMeta,
    frame_label,
    rle_topic_string,
    topic_label,
)


@dataclass(frozen=True)
class ClusterRecord:
    frame_id: str
    outcome: str  # extended-recent | extended-prior | new-topic
    topic_id: int
    topics_tried: int
    score: float
    empty_content: bool = False


class ConsistencyError(Exception):
    pass


def pair_match(
    older: np.ndarray, newer: np.ndarray, media: MediaType, cfg: MatchConfig
) -> MatchResult:
    """Sheet content only grows, so matching runs strictly forward. Board
    content can be erased, so the reverse direction is tried when forward
    fails; the better-scoring result wins."""
    forward = match_frames(older, newer, cfg)
    if media is MediaType.SHEET or forward.accepted:
        return forward
    reverse = match_frames(newer, older, cfg)
    return reverse if reverse.accepted or reverse.score > forward.score else forward


def cluster_frames(
    frames: Sequence[KeyFrame],
    contents: Sequence[np.ndarray],
    media: MediaType,
    cfg: Optional[MatchConfig] = None,
    match_fn: Optional[Callable[[np.ndarray, np.ndarray], MatchResult]] = None,
) -> tuple[list[Topic], list[ClusterRecord]]:
    """Cluster temporally ordered same-type frames into topics.

    Each frame first tries the most recent topic's last frame, then the other
    topics in recency order; extending a topic makes it most recent; otherwise
    the frame starts a new topic. Frames whose content yields no interest
    windows always start a singleton topic (flagged in the trace).
    """
    cfg = cfg or MatchConfig()
    if match_fn is None:
        match_fn = lambda a, b: pair_match(a, b, media, cfg)  # noqa: E731
    if len(frames) != len(contents):
        raise ValueError("frames and contents must align")

    # each topic: dict(id, members: list[KeyFrame], last_content)
    recency: list[dict] = []  # most recent first
    trace: list[ClusterRecord] = []
    next_id = 0

    for frame, content in zip(frames, contents):
        if frame.media_type is not media:
            raise ValueError(f"frame {frame.id} is {frame.media_type}, expected {media}")
        empty = len(select_windows(content, cfg)) == 0
        placed = False
        if not empty:
            for pos, topic in enumerate(recency):
                result = match_fn(topic["last_content"], content)
                if result.accepted:
                    topic["members"].append(frame)
                    topic["last_content"] = content
                    recency.insert(0, recency.pop(pos))
                    trace.append(
                        ClusterRecord(
                            frame_id=frame.id,
                            outcome="extended-recent" if pos == 0 else "extended-prior",
                            topic_id=topic["id"],
                            topics_tried=pos + 1,
                            score=result.score,
                        )
                    )
                    placed = True
                    break
        if not placed:
            topic = {"id": next_id, "members": [frame], "last_content": content}
            next_id += 1
            recency.insert(0, topic)
            trace.append(
                ClusterRecord(
                    frame_id=frame.id,
                    outcome="new-topic",
                    topic_id=topic["id"],
                    topics_tried=0 if empty else len(recency) - 1,
                    score=0.0,
                    empty_content=empty,
                )
            )

    topics = []
    for t in sorted(recency, key=lambda t: t["id"]):
        members = t["members"]
        topics.append(
            Topic(
                id=t["id"],
                label="",  # assigned during index assembly
                media_type=media,
                frame_ids=tuple(f.id for f in members),
                most_recent_seq=members[-1].seq,
            )
        )
    return topics, trace


def assemble_index(
    all_frames: Sequence[KeyFrame],
    board: tuple[list[Topic], list[ClusterRecord]],
    sheet: tuple[list[Topic], list[ClusterRecord]],
    video: Optional[VideoMeta] = None,
    skipped_files: Optional[list[str]] = None,
) -> TopicIndex:
    """Merge per-type clusterings into a labeled TopicIndex with statistics."""
    board_topics, board_trace = board
    sheet_topics, sheet_trace = sheet
    frames_by_id = {f.id: f for f in all_frames}

    clustered_ids = {f.id for f in all_frames if f.media_type in CLUSTERED_TYPES}
    covered = [fid for t in board_topics + sheet_topics for fid in t.frame_ids]
    if sorted(covered) != sorted(clustered_ids):
        raise ConsistencyError(
            "clusterings do not cover exactly the board/sheet frames"
        )

    # Global topic ids/labels in creation order by first-frame seq.
    merged = sorted(
        board_topics + sheet_topics, key=lambda t: frames_by_id[t.frame_ids[0]].seq
    )
    topics = [
        replace(t, id=k, label=topic_label(k)) for k, t in enumerate(merged)
    ]
    topic_of_frame = {fid: t.id for t in topics for fid in t.frame_ids}
    frames = [
        replace(f, topic_id=topic_of_frame.get(f.id))
        for f in sorted(all_frames, key=lambda f: f.seq)
    ]

    topics_by_id = {t.id: t for t in topics}
    labels = [frame_label(f, topics_by_id) for f in frames]
    topic_string = rle_topic_string(labels)

    trace = sorted(
        board_trace + sheet_trace, key=lambda r: frames_by_id[r.frame_id].seq
    )
    per_type: dict[str, int] = {}
    for f in frames:
        per_type[f.media_type.value] = per_type.get(f.media_type.value, 0) + 1
    attempts_cum = np.cumsum([r.topics_tried for r in trace])
    curve = [(k + 1, int(c)) for k, c in enumerate(attempts_cum)]
    regression = None
    if len(curve) >= 3:
        try:
            fit = fit_quadratic([(float(f), float(m)) for f, m in curve])
            regression = (fit.a, fit.b)
        except ValueError:
            regression = None
    stats = PipelineStats(
        frames_total=len(frames),
        per_type_counts=per_type,
        match_attempts=int(attempts_cum[-1]) if len(curve) else 0,
        matches_consecutive=sum(r.outcome == "extended-recent" for r in trace),
        matches_nonconsecutive=sum(r.outcome == "extended-prior" for r in trace),
        new_topics=sum(r.outcome == "new-topic" for r in trace),
        regression=regression,
        match_curve=curve,
        skipped_files=list(skipped_files or []),
    )
    return TopicIndex(
        frames=frames,
        topics=topics,
        topic_string=topic_string,
        stats=stats,
        video=video or VideoMeta(),
    )
