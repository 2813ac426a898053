"""Shared domain types: media types, key frames, topics, and the run-length topic string."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional


class MediaType(str, Enum):
    BOARD = "board"
    PODIUM = "podium"
    SHEET = "sheet"
    ILLUSTRATION = "illustration"
    COMPUTER = "computer"
    CLASS = "class"  # representable for index compatibility, never produced
    UNKNOWN = "unknown"  # pre-classification only


# Media types whose frames get clustered into topics.
CLUSTERED_TYPES = (MediaType.BOARD, MediaType.SHEET)

# Fixed single-letter codes for non-clustered frames in the topic string.
_TYPE_LETTER = {
    MediaType.PODIUM: "X",
    MediaType.COMPUTER: "Y",
    MediaType.ILLUSTRATION: "I",
    MediaType.CLASS: "C",
    MediaType.UNKNOWN: "U",
}


@dataclass(frozen=True)
class KeyFrame:
    id: str
    seq: int
    source_path: str = ""
    timestamp_s: Optional[float] = None
    name_hint: str = "none"  # none | title | slide
    media_type: MediaType = MediaType.UNKNOWN
    topic_id: Optional[int] = None


@dataclass(frozen=True)
class Topic:
    id: int
    label: str
    media_type: MediaType
    frame_ids: tuple[str, ...]
    most_recent_seq: int


@dataclass
class PipelineStats:
    frames_total: int = 0
    per_type_counts: dict[str, int] = field(default_factory=dict)
    match_attempts: int = 0
    matches_consecutive: int = 0
    matches_nonconsecutive: int = 0
    new_topics: int = 0
    regression: Optional[tuple[float, float]] = None  # (a, b) of M(f) = a*f + b*f^2
    match_curve: list[tuple[int, int]] = field(default_factory=list)
    skipped_files: list[str] = field(default_factory=list)


@dataclass
class VideoMeta:
    title: str = ""
    duration_s: Optional[float] = None
    video_url_template: str = ""


@dataclass
class TopicIndex:
    frames: list[KeyFrame]
    topics: list[Topic]
    topic_string: str
    stats: PipelineStats
    video: VideoMeta = field(default_factory=VideoMeta)


def topic_label(i: int) -> str:
    """Letter label for the i-th created topic: A..Z, AA, AB, ..."""
    if i < 0:
        raise ValueError("topic ordinal must be >= 0")
    label = ""
    i += 1
    while i > 0:
        i, rem = divmod(i - 1, 26)
        label = chr(ord("A") + rem) + label
    return label


def frame_label(frame: KeyFrame, topics_by_id: dict[int, Topic]) -> str:
    """Topic-string label for one frame: topic letter for clustered frames, type code otherwise."""
    if frame.media_type in CLUSTERED_TYPES and frame.topic_id is not None:
        return topics_by_id[frame.topic_id].label
    return _TYPE_LETTER.get(frame.media_type, frame.media_type.value[:1].upper())


def rle_topic_string(labels: list[str]) -> str:
    """Run-length encode a sequence of frame labels into `L^n` tokens for maximal runs."""
    if not labels:
        return ""
    tokens = []
    run_label = labels[0]
    run_len = 1
    for label in labels[1:]:
        if label == run_label:
            run_len += 1
        else:
            tokens.append(f"{run_label}^{run_len}")
            run_label, run_len = label, 1
    tokens.append(f"{run_label}^{run_len}")
    return " ".join(tokens)


_TOKEN_RE = re.compile(r"^([A-Za-z]+)\^(\d+)$")


def decode_topic_string(s: str) -> list[str]:
    """Inverse of rle_topic_string: expand `L^n` tokens back into the label sequence."""
    labels: list[str] = []
    if not s.strip():
        return labels
    for token in s.split():
        m = _TOKEN_RE.match(token)
        if not m:
            raise ValueError(f"malformed topic-string token: {token!r}")
        labels.extend([m.group(1)] * int(m.group(2)))
    return labels


def validate_index(index: TopicIndex) -> list[str]:
    """Check TopicIndex invariants; returns one description per violation (empty when valid)."""
    violations: list[str] = []
    topics_by_id = {t.id: t for t in index.topics}
    frames_by_id = {f.id: f for f in index.frames}

    # Partition: every clustered frame in exactly one topic, no other frame in any.
    membership: dict[str, list[int]] = {}
    for t in index.topics:
        for fid in t.frame_ids:
            membership.setdefault(fid, []).append(t.id)
    for fid, tids in membership.items():
        if fid not in frames_by_id:
            violations.append(f"topic(s) {tids} reference unknown frame {fid}")
            continue
        f = frames_by_id[fid]
        if len(tids) > 1:
            violations.append(f"frame {fid} belongs to multiple topics {tids}")
        if f.media_type not in CLUSTERED_TYPES:
            violations.append(f"non-clustered frame {fid} ({f.media_type.value}) in topics {tids}")
    for f in index.frames:
        if f.media_type in CLUSTERED_TYPES and f.id not in membership:
            violations.append(f"clustered frame {f.id} belongs to no topic")
        if f.media_type in CLUSTERED_TYPES and f.topic_id is not None:
            t = topics_by_id.get(f.topic_id)
            if t is None:
                violations.append(f"frame {f.id} references unknown topic {f.topic_id}")
            elif f.id not in t.frame_ids:
                violations.append(f"frame {f.id} has topic_id {f.topic_id} but is not a member")
        if f.media_type not in CLUSTERED_TYPES and f.topic_id is not None:
            violations.append(f"non-clustered frame {f.id} carries topic_id {f.topic_id}")
    if any(f.media_type is MediaType.UNKNOWN for f in index.frames):
        violations.append("index contains frames of media type unknown")

    # Per-topic ordering invariants.
    for t in index.topics:
        seqs = [frames_by_id[fid].seq for fid in t.frame_ids if fid in frames_by_id]
        if any(b <= a for a, b in zip(seqs, seqs[1:])):
            violations.append(f"topic {t.id} frame seqs not strictly increasing")
        if seqs and t.most_recent_seq != seqs[-1]:
            violations.append(
                f"topic {t.id} most_recent_seq {t.most_recent_seq} != last member seq {seqs[-1]}"
            )
    recents = [t.most_recent_seq for t in index.topics]
    if len(set(recents)) != len(recents):
        violations.append("topics share a most_recent_seq value")

    # Topic string consistency.
    try:
        decoded = decode_topic_string(index.topic_string)
    except ValueError as exc:
        violations.append(str(exc))
    else:
        if len(decoded) != len(index.frames):
            violations.append(
                f"topic_string exponents sum to {len(decoded)}, expected {len(index.frames)} frames"
            )
        else:
            expected = [frame_label(f, topics_by_id) for f in sorted(index.frames, key=lambda f: f.seq)]
            if decoded != expected:
                violations.append("topic_string does not reproduce the frame label sequence")

    if index.stats.frames_total != len(index.frames):
        violations.append(
            f"stats.frames_total {index.stats.frames_total} != frame count {len(index.frames)}"
        )
    return violations
