"""Command-line interface.

Exit codes: 0 success, 1 runtime failure, 2 usage or configuration error.
Progress goes to stderr; stdout carries results and the final summary line.
"""
from __future__ import annotations

import argparse
import json
import shutil
import sys
from pathlib import Path

import numpy as np
from PIL import Image

from . import emit, ingest, pipeline, synth
from .classify import classify_frame
from .config import ConfigError, load_config
from .features import compute_features
from .filters import derive_content
from .matcher import match_frames
from .model import MediaType

EXIT_OK, EXIT_RUNTIME, EXIT_USAGE = 0, 1, 2


def _err(msg: str) -> None:
    print(f"error: {msg}", file=sys.stderr)


def _write_debug_mask(path: Path, mask: np.ndarray) -> None:
    arr = (np.asarray(mask, bool).astype(np.uint8)) * 255
    Image.fromarray(arr, mode="L").convert("1").save(path)


def cmd_segment(args) -> int:
    cfg = load_config(args.config)
    out_dir = Path(args.output)
    created_out = not out_dir.exists()
    debug_dir = Path(args.debug_dir) if args.debug_dir else None
    try:
        manifest = ingest.Manifest.load(args.manifest) if args.manifest else None
        frames, rasters, skipped = ingest.scan_key_frames(args.input, manifest)

        debug_sink = None
        if debug_dir is not None:
            debug_dir.mkdir(parents=True, exist_ok=True)

            def debug_sink(frame_id: str, bundle: dict) -> None:
                for stage, mask in bundle.items():
                    _write_debug_mask(debug_dir / f"{frame_id}_{stage}.png", mask)

        index = pipeline.run_pipeline(
            frames,
            rasters,
            cfg,
            threads=pipeline.resolve_threads(args.threads),
            video=manifest.video if manifest else None,
            skipped_files=tuple(skipped),
            debug_sink=debug_sink,
        )
        out_dir.mkdir(parents=True, exist_ok=True)
        emit.emit_index(index, out_dir)
        ingest.write_thumbnails(
            frames, rasters, out_dir, max_edge=cfg.pipeline.thumb_max_edge
        )
    except (ingest.IngestError, emit.InvalidIndexError, OSError) as exc:
        _err(str(exc))
        if created_out and out_dir.exists():
            shutil.rmtree(out_dir, ignore_errors=True)
        return EXIT_RUNTIME
    print(f"frames={len(index.frames)} topics={len(index.topics)} errors={len(skipped)}")
    return EXIT_OK


def cmd_classify(args) -> int:
    cfg = load_config(args.config)
    try:
        manifest = ingest.Manifest.load(args.manifest) if args.manifest else None
        frames, rasters, skipped = ingest.scan_key_frames(args.input, manifest)
    except ingest.IngestError as exc:
        _err(str(exc))
        return EXIT_RUNTIME
    frames = [ingest.preclassify_by_name(f) for f in frames]
    for frame, raster in zip(frames, rasters):
        media = frame.media_type
        if media is MediaType.UNKNOWN:
            fv = compute_features(
                raster, band_frac=cfg.classifier.band_frac, border_luma_max=cfg.classifier.border_luma_max
            )
            media = classify_frame(fv, cfg.classifier)
        print(f"{Path(frame.source_path).name}\t{media.value}")
    print(f"frames={len(frames)} topics=0 errors={len(skipped)}")
    return EXIT_OK


def cmd_match(args) -> int:
    cfg = load_config(args.config)
    media = MediaType(args.media)
    try:
        a = ingest.load_image(args.frame_a)
        b = ingest.load_image(args.frame_b)
    except ingest.IngestError as exc:
        _err(str(exc))
        return EXIT_RUNTIME
    ca = derive_content(a, media, cfg.filter)
    cb = derive_content(b, media, cfg.filter)
    result = match_frames(ca, cb, cfg.matcher)
    print(
        f"accepted={str(result.accepted).lower()} score={result.score:.4f} "
        f"scale={result.scale:.4f} windows={result.n_matched}"
    )
    print(f"frames=2 topics=0 errors=0")
    return EXIT_OK


def cmd_stats(args) -> int:
    path = Path(args.index)
    if path.is_dir():
        path = path / "index.json"
    try:
        index = emit.load_index(path)
    except (OSError, json.JSONDecodeError, emit.InvalidIndexError, KeyError, ValueError) as exc:
        _err(f"cannot load index: {exc}")
        return EXIT_RUNTIME
    print(emit.stats_report(index))
    print(f"frames={len(index.frames)} topics={len(index.topics)} errors=0")
    return EXIT_OK


def cmd_synth(args) -> int:
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    try:
        if args.kind == "corpus":
            items = synth.gen_corpus(n=args.frames, seed=args.seed)
            truth = []
            for i, item in enumerate(items):
                name = f"frame_{i:04d}.png"
                Image.fromarray(item.raster).save(out / name)
                truth.append({"file": name, "media_type": item.media.value, "variant": item.variant})
            (out / "truth.json").write_text(json.dumps({"frames": truth}, indent=2) + "\n")
            print(f"frames={len(items)} topics=0 errors=0")
        else:
            media = MediaType(args.media)
            script = synth.script_for_profile(
                args.profile, args.frames, args.seed, media=media, cutaway_frac=args.cutaways
            )
            rasters, truth = synth.gen_lecture(script)
            records = []
            for i, raster in enumerate(rasters):
                name = f"frame_{i:04d}.png"
                Image.fromarray(raster).save(out / name)
                records.append(
                    {
                        "file": name,
                        "media_type": truth.media_types[i].value,
                        "topic": truth.topics[i],
                    }
                )
            (out / "truth.json").write_text(json.dumps({"frames": records}, indent=2) + "\n")
            n_topics = len({t for t in truth.topics if t is not None})
            print(f"frames={len(rasters)} topics={n_topics} errors=0")
    except OSError as exc:
        _err(str(exc))
        return EXIT_RUNTIME
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lectureseg", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="INI configuration file")

    p = sub.add_parser("segment", help="run the full pipeline over a key-frame directory")
    p.add_argument("input", help="directory of key-frame images")
    p.add_argument("-o", "--output", required=True, help="output directory")
    p.add_argument("--manifest", help="JSON manifest with timestamps and video metadata")
    p.add_argument("--threads", type=int, default=1, help="worker threads (0 = all cores)")
    p.add_argument("--debug-dir", help="write per-frame filter stage masks here")
    common(p)
    p.set_defaults(func=cmd_segment)

    p = sub.add_parser("classify", help="print the media type of each frame")
    p.add_argument("input")
    p.add_argument("--manifest")
    common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("match", help="match the handwriting of two frames")
    p.add_argument("frame_a")
    p.add_argument("frame_b")
    p.add_argument("--media", choices=["board", "sheet"], default="board")
    common(p)
    p.set_defaults(func=cmd_match)

    p = sub.add_parser("stats", help="report statistics for an emitted index")
    p.add_argument("index", help="index.json or its directory")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("synth", help="generate a synthetic corpus or lecture")
    p.add_argument("kind", choices=["corpus", "lecture"])
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--frames", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--profile", choices=["linear", "interleaved", "mixed"], default="mixed")
    p.add_argument("--media", choices=["board", "sheet"], default="board")
    p.add_argument("--cutaways", type=float, default=0.0)
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except ConfigError as exc:
        _err(str(exc))
        return EXIT_USAGE
    except ValueError as exc:
        _err(str(exc))
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
