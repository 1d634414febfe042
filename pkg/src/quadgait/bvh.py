"""BVH export and import.

Writes the subset: root channels "Xposition Yposition Zposition
Zrotation Xrotation Yrotation", every other joint "Zrotation Xrotation
Yrotation", rotations in degrees, leaf joints closed with a zero End
Site. The reader accepts exactly that subset and reports parse failures
with line numbers.

Per-joint translation offsets have no channel slots in this layout and
do not survive export (root offsets are folded into the root position).
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from .clips import FrameClip
from .skeleton import Joint, Pose, Skeleton

ROOT_CHANNELS = ("Xposition", "Yposition", "Zposition", "Zrotation", "Xrotation", "Yrotation")
JOINT_CHANNELS = ("Zrotation", "Xrotation", "Yrotation")


class BvhParseError(ValueError):
    def __init__(self, line_number: int, message: str):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


def _fmt(value: float) -> str:
    return f"{value:.8f}"


def _dfs_order(skeleton: Skeleton) -> list[Joint]:
    children: dict[str | None, list[Joint]] = {}
    for joint in skeleton.joints:
        children.setdefault(joint.parent, []).append(joint)
    order: list[Joint] = []

    def visit(joint: Joint):
        order.append(joint)
        for child in children.get(joint.name, []):
            visit(child)

    visit(skeleton.root)
    return order


def _write_joint(lines, skeleton, children, joint, depth):
    indent = "  " * depth
    keyword = "ROOT" if joint.parent is None else "JOINT"
    lines.append(f"{indent}{keyword} {joint.name}")
    lines.append(f"{indent}{{")
    inner = "  " * (depth + 1)
    off = joint.rest_offset
    lines.append(f"{inner}OFFSET {_fmt(off[0])} {_fmt(off[1])} {_fmt(off[2])}")
    channels = ROOT_CHANNELS if joint.parent is None else JOINT_CHANNELS
    lines.append(f"{inner}CHANNELS {len(channels)} {' '.join(channels)}")
    kids = children.get(joint.name, [])
    if kids:
        for child in kids:
            _write_joint(lines, skeleton, children, child, depth + 1)
    else:
        lines.append(f"{inner}End Site")
        lines.append(f"{inner}{{")
        lines.append(f"{inner}  OFFSET {_fmt(0.0)} {_fmt(0.0)} {_fmt(0.0)}")
        lines.append(f"{inner}}}")
    lines.append(f"{indent}}}")


def write_bvh(clip: FrameClip, path) -> None:
    """Write the clip; one motion row per frame in hierarchy DFS order."""
    if not clip.frames:
        raise ValueError("cannot export an empty clip")
    skeleton = clip.skeleton
    order = _dfs_order(skeleton)
    children: dict[str | None, list[Joint]] = {}
    for joint in skeleton.joints:
        children.setdefault(joint.parent, []).append(joint)

    lines = ["HIERARCHY"]
    _write_joint(lines, skeleton, children, skeleton.root, 0)
    lines.append("MOTION")
    lines.append(f"Frames: {len(clip.frames)}")
    lines.append(f"Frame Time: {1.0 / clip.fps:.7f}")

    root_name = skeleton.root.name
    for pose in clip.frames:
        row: list[str] = []
        for joint in order:
            rx, ry, rz = pose.rotations.get(joint.name, (0.0, 0.0, 0.0))
            if joint.parent is None:
                trans = np.asarray(pose.root_translation) + np.asarray(
                    pose.translations.get(root_name, (0.0, 0.0, 0.0))
                )
                row.extend(_fmt(v) for v in trans)
            row.extend(_fmt(math.degrees(v)) for v in (rz, rx, ry))
        lines.append(" ".join(row))

    Path(path).write_text("\n".join(lines) + "\n")


class _Reader:
    def __init__(self, lines: list[str]):
        self.lines = lines
        self.index = 0

    @property
    def line_number(self) -> int:
        return self.index  # index already advanced past the returned line

    def next(self) -> str:
        while self.index < len(self.lines):
            line = self.lines[self.index].strip()
            self.index += 1
            if line:
                return line
        raise BvhParseError(len(self.lines), "unexpected end of file")

    def peek(self) -> str | None:
        index = self.index
        while index < len(self.lines):
            line = self.lines[index].strip()
            if line:
                return line
            index += 1
        return None


def _expect(reader: _Reader, keyword: str) -> str:
    line = reader.next()
    if not line.startswith(keyword):
        raise BvhParseError(reader.line_number, f"expected {keyword}, got '{line}'")
    return line


def _parse_offset(reader: _Reader) -> tuple[float, float, float]:
    line = _expect(reader, "OFFSET")
    parts = line.split()
    if len(parts) != 4:
        raise BvhParseError(reader.line_number, "OFFSET needs exactly 3 values")
    try:
        return (float(parts[1]), float(parts[2]), float(parts[3]))
    except ValueError:
        raise BvhParseError(reader.line_number, f"bad OFFSET values: '{line}'") from None


def _parse_joint(reader: _Reader, name: str, parent: str | None, joints: list[Joint]):
    _expect(reader, "{")
    offset = _parse_offset(reader)
    line = _expect(reader, "CHANNELS")
    parts = line.split()
    try:
        count = int(parts[1])
    except (IndexError, ValueError):
        raise BvhParseError(reader.line_number, f"bad CHANNELS line: '{line}'") from None
    names = tuple(parts[2:])
    if len(names) != count:
        raise BvhParseError(
            reader.line_number, f"CHANNELS lists {len(names)} names but declares {count}"
        )
    expected = ROOT_CHANNELS if parent is None else JOINT_CHANNELS
    if names != expected:
        raise BvhParseError(
            reader.line_number,
            f"unsupported channel layout {names}; expected {expected}",
        )
    joints.append(Joint(name=name, parent=parent, rest_offset=offset))

    while True:
        line = reader.next()
        if line == "}":
            return
        if line.startswith("JOINT"):
            child = line.split(None, 1)[1].strip()
            _parse_joint(reader, child, name, joints)
        elif line == "End Site":
            _expect(reader, "{")
            _parse_offset(reader)
            _expect(reader, "}")
        else:
            raise BvhParseError(reader.line_number, f"unexpected token '{line}'")


def read_bvh(path) -> FrameClip:
    """Read a file produced by write_bvh back into a clip.

    The returned skeleton carries hierarchy and offsets only (leg chain
    descriptors are not representable in BVH).
    """
    lines = Path(path).read_text().splitlines()
    reader = _Reader(lines)

    line = reader.next()
    if line != "HIERARCHY":
        raise BvhParseError(reader.line_number, f"expected HIERARCHY, got '{line}'")
    line = _expect(reader, "ROOT")
    root_name = line.split(None, 1)[1].strip()
    joints: list[Joint] = []
    _parse_joint(reader, root_name, None, joints)

    if reader.peek() is None:
        raise BvhParseError(len(lines), "expected MOTION keyword, reached end of file")
    line = reader.next()
    if line != "MOTION":
        raise BvhParseError(reader.line_number, f"expected MOTION, got '{line}'")
    line = _expect(reader, "Frames:")
    try:
        frame_count = int(line.split()[1])
    except (IndexError, ValueError):
        raise BvhParseError(reader.line_number, f"bad Frames line: '{line}'") from None
    line = _expect(reader, "Frame Time:")
    try:
        frame_time = float(line.split()[2])
    except (IndexError, ValueError):
        raise BvhParseError(reader.line_number, f"bad Frame Time line: '{line}'") from None
    if frame_time <= 0.0:
        raise BvhParseError(reader.line_number, "Frame Time must be > 0")

    skeleton = Skeleton(joints=tuple(joints))
    values_per_row = 6 + 3 * (len(joints) - 1)
    frames: list[Pose] = []
    for _ in range(frame_count):
        line = reader.next()
        parts = line.split()
        if len(parts) != values_per_row:
            raise BvhParseError(
                reader.line_number,
                f"frame row has {len(parts)} values, expected {values_per_row}",
            )
        try:
            numbers = [float(p) for p in parts]
        except ValueError:
            raise BvhParseError(reader.line_number, "frame row holds a non-numeric value") from None
        root_translation = (numbers[0], numbers[1], numbers[2])
        rotations: dict[str, tuple[float, float, float]] = {}
        cursor = 3
        for joint in joints:  # joints were appended in DFS encounter order
            rz, rx, ry = numbers[cursor : cursor + 3]
            cursor += 3
            rotations[joint.name] = (math.radians(rx), math.radians(ry), math.radians(rz))
        frames.append(Pose(root_translation=root_translation, rotations=rotations))

    return FrameClip(skeleton=skeleton, fps=1.0 / frame_time, frames=tuple(frames))
