"""Serialization of the topic index: index.json, topics.txt, stats.txt."""
from __future__ import annotations

import json
from pathlib import Path

from .costmodel import CostModelParams, predicted_cost
from .model import (
    KeyFrame,
    MediaType,
    PipelineStats,
    Topic,
    TopicIndex,
    VideoMeta,
    validate_index,
)

SCHEMA_VERSION = 1


class InvalidIndexError(Exception):
    def __init__(self, violations: list[str]):
        super().__init__("; ".join(violations))
        self.violations = violations


def topic_spans(topic: Topic, frames_by_id: dict[str, KeyFrame]) -> list[dict]:
    """Maximal consecutive-seq runs of a topic's members."""
    seqs = [frames_by_id[fid].seq for fid in topic.frame_ids]
    spans: list[dict] = []
    start = prev = seqs[0]
    for s in seqs[1:]:
        if s != prev + 1:
            spans.append({"first_seq": start, "last_seq": prev})
            start = s
        prev = s
    spans.append({"first_seq": start, "last_seq": prev})
    out = []
    for k, sp in enumerate(spans):
        contiguous = k == 0 or sp["first_seq"] == spans[k - 1]["last_seq"] + 1
        out.append({**sp, "contiguous": contiguous})
    return out


def index_to_dict(index: TopicIndex) -> dict:
    frames_by_id = {f.id: f for f in index.frames}
    stats = index.stats
    return {
        "schema": SCHEMA_VERSION,
        "video": {
            "title": index.video.title,
            "duration_s": index.video.duration_s,
            "video_url_template": index.video.video_url_template,
        },
        "frames": [
            {
                "id": f.id,
                "seq": f.seq,
                "timestamp_s": f.timestamp_s,
                "file": f.source_path,
                "thumb": f"thumbs/{f.id}.png",
                "media_type": f.media_type.value,
                "topic_id": f.topic_id,
                "name_hint": f.name_hint,
            }
            for f in sorted(index.frames, key=lambda f: f.seq)
        ],
        "topics": [
            {
                "id": t.id,
                "label": t.label,
                "media_type": t.media_type.value,
                "frame_ids": list(t.frame_ids),
                "spans": topic_spans(t, frames_by_id),
            }
            for t in index.topics
        ],
        "stats": {
            "frames_total": stats.frames_total,
            "per_type_counts": stats.per_type_counts,
            "match_attempts": stats.match_attempts,
            "matches_consecutive": stats.matches_consecutive,
            "matches_nonconsecutive": stats.matches_nonconsecutive,
            "new_topics": stats.new_topics,
            "regression": list(stats.regression) if stats.regression else None,
            "match_curve": [list(p) for p in stats.match_curve],
            "skipped_files": stats.skipped_files,
            "topic_string": index.topic_string,
        },
    }


def _stats_text(index: TopicIndex) -> str:
    s = index.stats
    lines = [
        f"frames_total: {s.frames_total}",
        f"topics_total: {len(index.topics)}",
    ]
    for mt in MediaType:
        if mt.value in s.per_type_counts:
            lines.append(f"count_{mt.value}: {s.per_type_counts[mt.value]}")
    lines += [
        f"match_attempts: {s.match_attempts}",
        f"matches_consecutive: {s.matches_consecutive}",
        f"matches_nonconsecutive: {s.matches_nonconsecutive}",
        f"new_topics: {s.new_topics}",
    ]
    clustered = s.matches_consecutive + s.matches_nonconsecutive + s.new_topics
    if clustered:
        lines += [
            f"p_exact: {s.matches_consecutive / clustered:.4f}",
            f"p_previous: {s.matches_nonconsecutive / clustered:.4f}",
            f"p_new_topic: {s.new_topics / clustered:.4f}",
        ]
    if s.regression:
        lines.append(f"regression_a: {s.regression[0]:.6f}")
        lines.append(f"regression_b: {s.regression[1]:.6f}")
    return "\n".join(lines) + "\n"


def emit_index(index: TopicIndex, out_dir: str | Path) -> list[Path]:
    """Write index.json, topics.txt and stats.txt; refuses invalid indexes."""
    violations = validate_index(index)
    if violations:
        raise InvalidIndexError(violations)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    p = out / "index.json"
    p.write_text(json.dumps(index_to_dict(index), indent=2) + "\n", encoding="utf-8")
    paths.append(p)
    p = out / "topics.txt"
    p.write_text(index.topic_string + "\n", encoding="utf-8")
    paths.append(p)
    p = out / "stats.txt"
    p.write_text(_stats_text(index), encoding="utf-8")
    paths.append(p)
    return paths


def load_index(path: str | Path) -> TopicIndex:
    """Reconstruct a TopicIndex from an emitted index.json."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if data.get("schema") != SCHEMA_VERSION:
        raise ValueError(f"unsupported index schema: {data.get('schema')!r}")
    frames = [
        KeyFrame(
            id=f["id"],
            seq=f["seq"],
            source_path=f["file"],
            timestamp_s=f["timestamp_s"],
            name_hint=f.get("name_hint", "none"),
            media_type=MediaType(f["media_type"]),
            topic_id=f["topic_id"],
        )
        for f in data["frames"]
    ]
    topics = [
        Topic(
            id=t["id"],
            label=t["label"],
            media_type=MediaType(t["media_type"]),
            frame_ids=tuple(t["frame_ids"]),
            most_recent_seq=max(sp["last_seq"] for sp in t["spans"]),
        )
        for t in data["topics"]
    ]
    s = data["stats"]
    stats = PipelineStats(
        frames_total=s["frames_total"],
        per_type_counts=dict(s["per_type_counts"]),
        match_attempts=s["match_attempts"],
        matches_consecutive=s["matches_consecutive"],
        matches_nonconsecutive=s["matches_nonconsecutive"],
        new_topics=s["new_topics"],
        regression=tuple(s["regression"]) if s.get("regression") else None,
        match_curve=[tuple(p) for p in s.get("match_curve", [])],
        skipped_files=list(s.get("skipped_files", [])),
    )
    video = VideoMeta(
        title=data["video"]["title"],
        duration_s=data["video"]["duration_s"],
        video_url_template=data["video"]["video_url_template"],
    )
    return TopicIndex(
        frames=frames,
        topics=topics,
        topic_string=s.get("topic_string", ""),
        stats=stats,
        video=video,
    )


def stats_report(index: TopicIndex, params: CostModelParams | None = None) -> str:
    """Event probabilities, fitted regression, and model comparison for an index."""
    s = index.stats
    clustered = s.matches_consecutive + s.matches_nonconsecutive + s.new_topics
    lines = []
    if clustered:
        p_exact = s.matches_consecutive / clustered
        p_prev = s.matches_nonconsecutive / clustered
        p_new = s.new_topics / clustered
        lines += [
            f"clustered_frames: {clustered}",
            f"p_exact: {p_exact:.4f}",
            f"p_previous: {p_prev:.4f}",
            f"p_new_topic: {p_new:.4f}",
        ]
        params = params or CostModelParams(
            p_exact=p_exact,
            p_previous=p_prev,
            p_new_topic=p_new,
            topic_ratio=len(index.topics) / clustered if clustered else 0.0,
        )
        lines.append(f"measured_matches: {s.match_attempts}")
        lines.append(f"predicted_matches: {predicted_cost(clustered, params):.1f}")
    if s.regression:
        lines.append(f"fitted_a: {s.regression[0]:.6f}")
        lines.append(f"fitted_b: {s.regression[1]:.6f}")
    return "\n".join(lines) + "\n"
