"""Deterministic synthetic key frames and scripted lectures with ground truth.

Writing is rendered as random polyline "words" sized so an interest window's
height spans roughly two text lines; no fonts, no external assets.
"""
from __future__ import annotations

import colorsys
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import ndimage

from .model import MediaType

FRAME_H, FRAME_W = 360, 480
CANVAS_H, CANVAS_W = 540, 720

BOARD_GREEN = (45, 105, 75)
CHALK = (235, 235, 225)
SHEET_WHITE = (240, 238, 232)
INK = (40, 40, 60)
PODIUM_WOOD = (96, 66, 46)
WALL_GRAY = (126, 124, 120)
DARK_CLOTH = (58, 48, 44)
SKIN = (198, 146, 112)


def _smooth_field(rng: np.random.Generator, h: int, w: int, amp: float, cells: int = 10) -> np.ndarray:
    """Low-frequency signed noise field, bilinear, no blocky creases."""
    coarse = rng.uniform(-amp, amp, size=(cells, cells, 3))
    return ndimage.zoom(coarse, (h / cells, w / cells, 1), order=1, mode="nearest")


def _flat(color, h, w, rng=None, amp=0.0, cells=10) -> np.ndarray:
    img = np.empty((h, w, 3), np.float64)
    img[:] = color
    if rng is not None and amp > 0:
        img += _smooth_field(rng, h, w, amp, cells)
    return img


def _finish(img: np.ndarray) -> np.ndarray:
    return np.clip(np.rint(img), 0, 255).astype(np.uint8)


def _draw_polyline(img: np.ndarray, pts: list[tuple[float, float]], color, thickness: int = 2):
    h, w = img.shape[:2]
    for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
        n = max(1, int(math.hypot(x1 - x0, y1 - y0)))
        for k in range(n + 1):
            t = k / n
            x = int(round(x0 + t * (x1 - x0)))
            y = int(round(y0 + t * (y1 - y0)))
            ya, yb = max(0, y), min(h, y + thickness)
            xa, xb = max(0, x), min(w, x + thickness)
            if ya < yb and xa < xb:
                img[ya:yb, xa:xb] = color


def _draw_word(img, rng, x, y, w, h, color, thickness=1):
    """A handwritten word: a row of separated letter strokes.

    Letters stay small and well apart so that, after edge extraction and
    closing, each remains its own component far below the oversized-blob
    threshold — as disconnected real handwriting does.
    """
    pitch = float(rng.uniform(29.0, 33.0))
    hh = max(h, 10.0)
    for k in range(max(2, int(w // pitch))):
        lx = x + k * pitch + rng.uniform(0.0, 2.0)
        ly = y + rng.uniform(-2.0, 2.0)

        # a letter is a long stroke through its box center at a uniformly
        # random angle, so stroke orientations never cluster across topics
        bw = 26.0
        cx = lx + bw / 2 + rng.uniform(-2, 2)
        cy = ly + hh / 2 + rng.uniform(-2, 2)
        theta = rng.uniform(0.0, math.pi)
        half = rng.uniform(11.0, 13.0)
        dx, dy = half * math.cos(theta), half * math.sin(theta)
        p0, p1 = (cx - dx, cy - dy), (cx + dx, cy + dy)
        pts = [p0, p1]
        if rng.random() < 0.3:  # occasional bend at the center
            pts = [p0, (cx + rng.uniform(-4, 4), cy + rng.uniform(-4, 4)), p1]
        _draw_polyline(img, pts, color, thickness)


def _draw_ellipse(img, cy, cx, ry, rx, color):
    h, w = img.shape[:2]
    yy, xx = np.ogrid[:h, :w]
    mask = ((yy - cy) / ry) ** 2 + ((xx - cx) / rx) ** 2 <= 1.0
    img[mask] = color


def _hsv_color(h_deg: float, s: float, v: float) -> tuple[float, float, float]:
    r, g, b = colorsys.hsv_to_rgb((h_deg % 360) / 360.0, s, v)
    return (255 * r, 255 * g, 255 * b)


# ---------------------------------------------------------------------------
# static per-media-type frames (classification corpus)
# ---------------------------------------------------------------------------

def _word_slots(rng, h, w, n, margin=14, slot_w=72, slot_h=22):
    cols = max(1, (w - 2 * margin) // slot_w)
    rows = max(1, (h - 2 * margin) // slot_h)
    idx = rng.permutation(cols * rows)[: min(n, cols * rows)]
    for k in idx:
        r, c = divmod(int(k), cols)
        yield margin + r * slot_h + rng.uniform(0, 4), margin + c * slot_w + rng.uniform(0, 8)


def _board_frame(rng, h, w, occlude: bool):
    img = _flat(BOARD_GREEN, h, w, rng, amp=5)
    for y, x in _word_slots(rng, h, w, int(rng.integers(7, 13))):
        _draw_word(img, rng, x, y, rng.uniform(38, 60), rng.uniform(10, 15), CHALK)
    if occlude:
        cx = rng.uniform(0.25 * w, 0.75 * w)
        _draw_ellipse(img, h * 0.92, cx, h * 0.35, w * 0.11, DARK_CLOTH)
        _draw_ellipse(img, h * 0.62, cx, h * 0.09, w * 0.05, SKIN)
    return img


def _podium_frame(rng, h, w):
    img = _flat(WALL_GRAY, h, w, rng, amp=4)
    img[int(0.12 * h) : int(0.78 * h)] = _flat(
        BOARD_GREEN, int(0.78 * h) - int(0.12 * h), w, rng, amp=5
    )
    img[int(0.78 * h) :] = _flat(PODIUM_WOOD, h - int(0.78 * h), w, rng, amp=4)
    cx = rng.uniform(0.3 * w, 0.7 * w)
    _draw_ellipse(img, h * 0.80, cx, h * 0.22, w * 0.09, DARK_CLOTH)
    _draw_ellipse(img, h * 0.52, cx, h * 0.08, w * 0.045, SKIN)
    return img


def _sheet_frame(rng, h, w, hand: bool):
    img = _flat(SHEET_WHITE, h, w, rng, amp=4)
    for y, x in _word_slots(rng, h, w, int(rng.integers(9, 15))):
        _draw_word(img, rng, x, y, rng.uniform(36, 56), rng.uniform(9, 14), INK)
    if hand:
        _draw_ellipse(img, h * 0.96, w * rng.uniform(0.6, 0.85), h * 0.13, w * 0.10, SKIN)
    return img


def _computer_content(rng, h, w):
    """Bright application screen: menu bar, window frames, horizontal text lines."""
    img = _flat((246, 246, 248), h, w)
    img[0 : int(rng.integers(6, 10))] = (208, 210, 214)
    for _ in range(int(rng.integers(2, 4))):
        y0 = int(rng.uniform(0.1, 0.7) * h)
        x0 = int(rng.uniform(0.05, 0.4) * w)
        wh = int(rng.uniform(0.2, 0.3) * h)
        ww = int(rng.uniform(0.3, 0.5) * w)
        img[y0 : y0 + 2, x0 : x0 + ww] = (150, 152, 160)
        img[y0 + wh : y0 + wh + 2, x0 : x0 + ww] = (150, 152, 160)
        img[y0 : y0 + wh + 2, x0 : x0 + 2] = (150, 152, 160)
        img[y0 : y0 + wh + 2, x0 + ww : x0 + ww + 2] = (150, 152, 160)
        for line in range(int(rng.integers(3, 7))):
            ly = y0 + 6 + line * 9
            if ly >= y0 + wh - 2:
                break
            ll = int(ww * rng.uniform(0.4, 0.9))
            img[ly : ly + 2, x0 + 6 : x0 + 6 + ll] = (90, 92, 100)
    return img


def _computer_frame(rng, h, w, variant: str):
    if variant == "dark":
        img = _flat((16, 17, 22), h, w, rng, amp=3)
        y0, x0 = int(0.3 * h), int(0.3 * w)
        img[y0 : y0 + int(0.3 * h), x0 : x0 + int(0.35 * w)] = (44, 47, 58)
        return img
    if variant == "bright":
        return _computer_content(rng, h, w)
    # bordered: screen content letter/pillar-boxed with black padding
    img = _flat((8, 8, 10), h, w)
    frac = rng.uniform(0.06, 0.10)
    if rng.random() < 0.5:
        bw = int(frac * w)
        img[:, bw : w - bw] = _computer_content(rng, h, w - 2 * bw)
    else:
        bh = int(frac * h)
        img[bh : h - bh, :] = _computer_content(rng, h - 2 * bh, w)
    return img


_ILLUS_HUES = (0, 25, 45, 200, 225, 260, 300, 330)


def _illustration_frame(rng, h, w, leak: bool):
    if leak:
        # print-like smooth gradient page: long color repetitions
        top = np.array(_hsv_color(rng.choice(_ILLUS_HUES), 0.45, 0.6))
        bot = np.array(_hsv_color(rng.choice(_ILLUS_HUES), 0.5, 0.45))
        t = np.linspace(0, 1, h)[:, None, None]
        img = top * (1 - t) + bot * t
        _draw_ellipse(img, h * 0.5, w * 0.5, h * 0.2, w * 0.18, _hsv_color(30, 0.5, 0.55))
        return img
    img = _flat(_hsv_color(rng.choice(_ILLUS_HUES), rng.uniform(0.35, 0.6), rng.uniform(0.45, 0.62)), h, w)
    for _ in range(int(rng.integers(4, 9))):
        color = _hsv_color(rng.choice(_ILLUS_HUES), rng.uniform(0.3, 0.6), rng.uniform(0.42, 0.62))
        _draw_ellipse(
            img,
            rng.uniform(0.15, 0.85) * h,
            rng.uniform(0.15, 0.85) * w,
            rng.uniform(0.06, 0.22) * h,
            rng.uniform(0.06, 0.22) * w,
            color,
        )
    # pixel salt breaks color-repetition runs and keeps edge runs short
    mask = rng.random((h, w)) < 0.35
    noise = rng.integers(-6, 7, size=(h, w, 3)).astype(np.float64)
    noise[np.abs(noise) < 3] = 4
    img[mask] += noise[mask]
    if img.mean() < 65:
        img += 30
    return img


def gen_fade_frame(seed: int, size=(FRAME_H, FRAME_W)) -> np.ndarray:
    """End-of-video dark title panel with light lettering."""
    rng = np.random.default_rng(seed)
    h, w = size
    img = _flat((6, 6, 9), h, w)
    for y, x in _word_slots(rng, h, w, 4):
        _draw_word(img, rng, x, y, rng.uniform(40, 70), 12, (200, 200, 205))
    return _finish(img)


def gen_frame(media: MediaType, seed: int, size=(FRAME_H, FRAME_W), variant: Optional[str] = None):
    """One labeled synthetic frame; returns (raster, info dict). Deterministic per seed."""
    rng = np.random.default_rng(seed)
    h, w = size
    if media is MediaType.BOARD:
        occ = variant == "occluded" if variant else rng.random() < 0.3
        img, info = _board_frame(rng, h, w, occ), {"variant": "occluded" if occ else "plain"}
    elif media is MediaType.PODIUM:
        img, info = _podium_frame(rng, h, w), {"variant": "plain"}
    elif media is MediaType.SHEET:
        hand = variant == "hand" if variant else rng.random() < 0.5
        img, info = _sheet_frame(rng, h, w, hand), {"variant": "hand" if hand else "plain"}
    elif media is MediaType.COMPUTER:
        v = variant or ["bordered", "dark", "bright"][int(rng.integers(0, 3))]
        img, info = _computer_frame(rng, h, w, v), {"variant": v}
    elif media is MediaType.ILLUSTRATION:
        leak = variant == "print" if variant else False
        img, info = _illustration_frame(rng, h, w, leak), {"variant": "print" if leak else "textured"}
    else:
        raise ValueError(f"no generator for media type {media}")
    return _finish(img), info


@dataclass(frozen=True)
class CorpusItem:
    raster: np.ndarray
    media: MediaType
    variant: str


def gen_corpus(n: int = 500, seed: int = 0, leak_frac: float = 0.08) -> list[CorpusItem]:
    """Labeled classification corpus spanning the five classified media types."""
    rng = np.random.default_rng(seed)
    plan: list[tuple[MediaType, Optional[str]]] = []
    per = n // 5
    plan += [(MediaType.BOARD, None)] * per
    plan += [(MediaType.PODIUM, None)] * per
    plan += [(MediaType.SHEET, None)] * per
    for k in range(per):
        plan.append((MediaType.COMPUTER, ["bordered", "dark", "bright"][k % 3]))
    n_ill = n - 4 * per
    n_leak = int(round(leak_frac * n_ill))
    plan += [(MediaType.ILLUSTRATION, "print")] * n_leak
    plan += [(MediaType.ILLUSTRATION, None)] * (n_ill - n_leak)
    items = []
    for media, variant in plan:
        raster, info = gen_frame(media, int(rng.integers(0, 2**31)), variant=variant)
        items.append(CorpusItem(raster=raster, media=media, variant=info["variant"]))
    return items


# ---------------------------------------------------------------------------
# scripted lectures
# ---------------------------------------------------------------------------

@dataclass
class LectureScript:
    seed: int
    events: list[dict]
    frame_every: int = 2
    media: MediaType = MediaType.BOARD


class _Canvas:
    """Virtual board/sheet surface accumulating written words."""

    def __init__(self, rng: np.random.Generator, media: MediaType):
        self.media = media
        base = BOARD_GREEN if media is MediaType.BOARD else SHEET_WHITE
        self.bg = _flat(base, CANVAS_H, CANVAS_W, rng, amp=4)
        self.img = self.bg.copy()
        self.ink = CHALK if media is MediaType.BOARD else INK
        # writing stays in a central region that the camera always covers,
        # so every word is fully inside every rendered frame
        self.x0 = 172 + float(rng.uniform(0, 10))
        self.y0 = 132 + float(rng.uniform(0, 8))
        # per-canvas slot pitch so no two topics share a writing lattice
        self.slot_w = int(rng.integers(76, 93))
        self.slot_h = int(rng.integers(37, 47))
        self.cols = 4
        self.rows = max(6, 260 // self.slot_h)
        self.free = list(range(self.cols * self.rows))
        self.used: list[int] = []

    def write_words(self, rng: np.random.Generator, n: int):
        for _ in range(n):
            if not self.free:
                break
            # words pack the top rows of columns in vertically stacked pairs,
            # spread across the frame's strips; a pair fits one interest window
            col_used = [0] * self.cols
            for s in self.used:
                col_used[s % self.cols] += 1
            pref = {0: 0, 2: 1, 1: 2, 3: 3}

            def key(i):
                col = self.free[i] % self.cols
                row = self.free[i] // self.cols
                return (0 if col_used[col] % 2 == 1 else 1 + col_used[col], pref.get(col, col), row)

            order = sorted(range(len(self.free)), key=key)
            slot = self.free.pop(order[0])
            self.used.append(slot)
            r, c = divmod(slot, self.cols)
            h = rng.uniform(24.0, min(30.0, self.slot_h - 9.0))
            y = self.y0 + r * self.slot_h + rng.uniform(0, self.slot_h - h - 5)
            x = self.x0 + c * self.slot_w + rng.uniform(0, 8)
            _draw_word(self.img, rng, x, y, rng.uniform(62, 74), h, self.ink)

    def erase_word(self, rng: np.random.Generator):
        if self.media is not MediaType.BOARD or not self.used:
            return
        slot = self.used.pop(int(rng.integers(0, len(self.used))))
        r, c = divmod(slot, self.cols)
        y = int(self.y0 + r * self.slot_h)
        x = int(self.x0 + c * self.slot_w)
        y0, y1 = max(0, y - 5), min(CANVAS_H, y + self.slot_h + 8)
        x0, x1 = max(0, x - 5), min(CANVAS_W, x + self.slot_w + 10)
        self.img[y0:y1, x0:x1] = self.bg[y0:y1, x0:x1]
        self.free.append(slot)


@dataclass
class _Camera:
    cx: float = CANVAS_W / 2
    cy: float = CANVAS_H / 2
    zoom: float = 1.0

    ZOOM_MIN = 0.9
    ZOOM_MAX = 1.1
    PAN_LIMIT = 12  # keeps the shared writing region fully in view

    def clamp(self):
        self.zoom = min(self.ZOOM_MAX, max(self.ZOOM_MIN, self.zoom))
        self.cx = min(CANVAS_W / 2 + self.PAN_LIMIT, max(CANVAS_W / 2 - self.PAN_LIMIT, self.cx))
        self.cy = min(CANVAS_H / 2 + self.PAN_LIMIT, max(CANVAS_H / 2 - self.PAN_LIMIT, self.cy))

    def render(self, canvas: np.ndarray) -> np.ndarray:
        self.clamp()
        xs = self.cx - FRAME_W / self.zoom / 2 + (np.arange(FRAME_W) + 0.5) / self.zoom
        ys = self.cy - FRAME_H / self.zoom / 2 + (np.arange(FRAME_H) + 0.5) / self.zoom
        xi = np.clip(np.floor(xs).astype(np.int64), 0, CANVAS_W - 1)
        yi = np.clip(np.floor(ys).astype(np.int64), 0, CANVAS_H - 1)
        return _finish(canvas[yi][:, xi])


def script_for_profile(
    profile: str,
    n_frames: int,
    seed: int,
    media: MediaType = MediaType.BOARD,
    cutaway_frac: float = 0.0,
    probs: tuple[float, float, float] = (0.89, 0.036, 0.074),
) -> LectureScript:
    """Event stream whose emitted frames follow the requested topic pattern."""
    rng = np.random.default_rng(seed)
    events: list[dict] = []
    topics_created = 0
    current = -1
    seen: list[int] = []

    if profile == "linear":
        n_topics = max(2, round(n_frames * 0.08))
        bounds = np.linspace(0, n_frames, n_topics + 1).astype(int)[1:-1].tolist()
    elif profile == "interleaved":
        block = int(rng.integers(4, 8))
    elif profile != "mixed":
        raise ValueError(f"unknown profile: {profile}")

    p_cont, p_jump, p_new = probs
    for k in range(n_frames):
        primary: dict
        if k == 0:
            primary = {"kind": "new-topic", "params": {}}
        elif cutaway_frac > 0 and rng.random() < cutaway_frac:
            cut = MediaType.PODIUM if rng.random() < 0.7 else MediaType.COMPUTER
            events.append({"kind": "cut-to", "params": {"media": cut.value}})
            events.append({"kind": "write", "params": {"words": 0}})
            continue
        elif profile == "linear":
            primary = (
                {"kind": "new-topic", "params": {}}
                if k in bounds
                else {"kind": "write", "params": {"words": int(rng.integers(1, 3))}}
            )
        elif profile == "interleaved":
            phase = (k // block) % 2
            want = phase  # topic 0 / topic 1
            if want >= topics_created:
                primary = {"kind": "new-topic", "params": {}}
            elif want != current:
                primary = {"kind": "new-topic", "params": {"topic": want}}
            else:
                primary = {"kind": "write", "params": {"words": int(rng.integers(1, 3))}}
        else:  # mixed
            u = rng.random()
            if u < p_new and topics_created < max(3, round(0.09 * n_frames)):
                primary = {"kind": "new-topic", "params": {}}
            elif u < p_new + p_jump and topics_created > 1:
                others = [t for t in range(topics_created) if t != current]
                primary = {"kind": "new-topic", "params": {"topic": int(rng.choice(others))}}
            else:
                r = rng.random()
                if r < 0.05 and media is MediaType.BOARD:
                    primary = {"kind": "erase", "params": {}}
                elif r < 0.12:
                    primary = {"kind": "pan", "params": {"dx": float(rng.integers(-14, 15)), "dy": float(rng.integers(-10, 11))}}
                elif r < 0.16:
                    primary = {"kind": "zoom", "params": {"factor": float(rng.choice([0.93, 1.075]))}}
                else:
                    primary = {"kind": "write", "params": {"words": int(rng.integers(1, 3))}}

        if primary["kind"] == "new-topic":
            target = primary["params"].get("topic")
            if target is None:
                current = topics_created
                topics_created += 1
                primary["params"] = {}
            else:
                current = target
            seen.append(current)
        events.append(primary)
        words = 1
        if primary["kind"] == "new-topic" and not primary["params"]:
            words = 4  # a fresh board starts with enough writing for two windows
        events.append({"kind": "write", "params": {"words": words}})
    return LectureScript(seed=seed, events=events, frame_every=2, media=media)


@dataclass
class LectureTruth:
    media_types: list[MediaType]
    topics: list[Optional[int]]  # ground-truth topic id per frame (None for cutaways)


def gen_lecture(script: LectureScript) -> tuple[list[np.ndarray], LectureTruth]:
    """Render a scripted lecture; emits one frame per `frame_every` events."""
    rng = np.random.default_rng(script.seed)
    canvases: dict[int, _Canvas] = {}
    camera = _Camera()
    current: Optional[int] = None
    pending_cut: Optional[MediaType] = None
    frames: list[np.ndarray] = []
    truth = LectureTruth(media_types=[], topics=[])

    for k, event in enumerate(script.events):
        kind = event["kind"]
        params = event.get("params", {})
        if kind == "new-topic":
            target = params.get("topic")
            if target is None:
                target = len(canvases)
                canvases[target] = _Canvas(rng, script.media)
            current = target
        elif kind == "write":
            if current is not None and params.get("words", 0) > 0:
                canvases[current].write_words(rng, params["words"])
        elif kind == "erase":
            if current is not None:
                canvases[current].erase_word(rng)
        elif kind == "pan":
            camera.cx += params.get("dx", 0.0)
            camera.cy += params.get("dy", 0.0)
        elif kind == "zoom":
            camera.zoom *= params.get("factor", 1.0)
        elif kind == "cut-to":
            pending_cut = MediaType(params["media"])
        else:
            raise ValueError(f"unknown event kind: {kind}")

        if (k + 1) % script.frame_every == 0:
            if pending_cut is not None:
                raster, _ = gen_frame(pending_cut, int(rng.integers(0, 2**31)))
                frames.append(raster)
                truth.media_types.append(pending_cut)
                truth.topics.append(None)
                pending_cut = None
            else:
                # small hand-held jitter on the otherwise fixed camera
                if rng.random() < 0.35:
                    camera.cx += float(rng.integers(-3, 4))
                    camera.cy += float(rng.integers(-2, 3))
                frames.append(camera.render(canvases[current].img))
                truth.media_types.append(script.media)
                truth.topics.append(current)
    return frames, truth
