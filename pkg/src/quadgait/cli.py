"""Command line entry points: clip synthesis and the live tuning service."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bvh import write_bvh
from .clips import bake, clip_to_json_dict
from .gait import GaitParams, footfall_order, preset, preset_names
from .presets_io import read_layer, read_preset, read_template
from .skeleton import build_quadruped_template


def _resolve_gait(spec: str) -> tuple[str, GaitParams]:
    """A --gait value is either a library preset name or a preset file path."""
    if spec in preset_names():
        p = preset(spec)
        return p.name, p.params
    path = Path(spec)
    if path.exists():
        loaded = read_preset(path)
        return loaded.name, loaded.params
    raise ValueError(
        f"unknown gait '{spec}'; available presets: {', '.join(preset_names())} "
        "(or pass a preset file path)"
    )


def cmd_synth(args) -> int:
    if args.frames < 1:
        print("error: frames must be >= 1", file=sys.stderr)
        return 1
    if args.fps <= 0:
        print("error: fps must be > 0", file=sys.stderr)
        return 1
    try:
        name, params = _resolve_gait(args.gait)
        layer = read_layer(args.layer) if args.layer else None
        template = read_template(args.skeleton) if args.skeleton else None
        skeleton = build_quadruped_template(template)
        clip = bake(params, skeleton, layer, args.fps, args.frames)
        if args.format == "bvh":
            write_bvh(clip, args.out)
        else:
            Path(args.out).write_text(json.dumps(clip_to_json_dict(clip), indent=1))
    except (ValueError, KeyError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    order = footfall_order(params)
    print(f"gait: {name}")
    print(f"frames: {args.frames}")
    print(f"duration: {args.frames / args.fps:.3f} s")
    print(f"footfall order: {', '.join(order)}")
    print(f"wrote {args.out}")
    return 0


def cmd_serve(args) -> int:
    from .service import serve

    try:
        name, params = _resolve_gait(args.preset)
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    try:
        serve(port=args.port, preset_name=name, params=params, fps=args.fps, ui_dir=args.ui)
    except OSError as err:
        print(f"error: cannot serve on port {args.port}: {err}", file=sys.stderr)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quadgait", description="Procedural quadruped gait synthesis"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    synth = sub.add_parser("synth", help="bake a clip and write it to disk")
    synth.add_argument("--gait", required=True, help="preset name or preset file path")
    synth.add_argument("--frames", type=int, required=True, help="frame count (>= 1)")
    synth.add_argument("--fps", type=float, default=24.0, help="frames per second")
    synth.add_argument("--out", required=True, help="output file path")
    synth.add_argument("--layer", default=None, help="override layer file")
    synth.add_argument("--skeleton", default=None, help="skeleton template config file")
    synth.add_argument("--format", choices=("bvh", "json"), default="bvh")
    synth.set_defaults(func=cmd_synth)

    serve = sub.add_parser("serve", help="run the live tuning HTTP service")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--preset", default="walk", help="starting preset")
    serve.add_argument("--fps", type=float, default=24.0)
    serve.add_argument("--ui", default=None, help="static directory to mount at / (built studio)")
    serve.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
