"""Quadruped joint hierarchy: template construction and pose resolution.

Coordinate frame: Y up, character faces +Z, +X to the character's left.
The template is a horse-proportioned quadruped with a root at the hip
girdle, a multi-joint spine to the sternum, neck + head, tail, and four
legs (front: shoulder -> carpus -> fetlock -> foot, hind: hip -> patella
-> calcaneus -> fetlock -> foot).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .rotations import Vec3, euler_to_matrix

ZERO3: Vec3 = (0.0, 0.0, 0.0)


@dataclass(frozen=True)
class Joint:
    name: str
    parent: str | None
    rest_offset: Vec3
    dof: tuple[str, ...] = ("X", "Y", "Z")


@dataclass(frozen=True)
class LegChain:
    """Descending joint path for one leg, chain root through foot.

    joints[:-2] are the IK-driven joints, joints[-2] is the fetlock
    (IK effector), joints[-1] the foot end joint.
    """

    leg_id: str  # FR / FL / BR / BL
    joints: tuple[str, ...]
    kind: str  # "front" | "hind"


@dataclass(frozen=True)
class Skeleton:
    """Immutable joint tree. joints are ordered parents-before-children."""

    joints: tuple[Joint, ...]
    legs: tuple[LegChain, ...] = ()
    chains: dict[str, tuple[str, ...]] = field(default_factory=dict)

    @cached_property
    def _by_name(self) -> dict[str, Joint]:
        return {j.name: j for j in self.joints}

    @cached_property
    def root(self) -> Joint:
        roots = [j for j in self.joints if j.parent is None]
        if len(roots) != 1:
            raise ValueError(f"skeleton must have exactly one root, found {len(roots)}")
        return roots[0]

    def joint(self, name: str) -> Joint:
        try:
            return self._by_name[name]
        except KeyError:
            raise KeyError(f"unknown joint '{name}'") from None

    def has_joint(self, name: str) -> bool:
        return name in self._by_name

    def children(self, name: str) -> list[str]:
        return [j.name for j in self.joints if j.parent == name]

    def leg(self, leg_id: str) -> LegChain:
        for leg in self.legs:
            if leg.leg_id == leg_id:
                return leg
        raise KeyError(f"unknown leg '{leg_id}'")

    def rest_world_position(self, name: str) -> np.ndarray:
        """World position of a joint in the identity pose, root at origin."""
        pos = np.zeros(3)
        j: Joint | None = self.joint(name)
        while j is not None:
            pos += np.asarray(j.rest_offset)
            j = self._by_name[j.parent] if j.parent is not None else None
        return pos

    def segment_length(self, name: str) -> float:
        return float(np.linalg.norm(self.joint(name).rest_offset))


@dataclass(frozen=True)
class Pose:
    """Per-joint local rotations plus root translation.

    rotations maps joint name -> (rx, ry, rz) radians, fixed ZXY order.
    translations holds optional extra parent-frame offsets (used by the
    override layer's trans channels and the sternum z oscillation);
    joints absent from either map are treated as identity / zero.
    """

    root_translation: Vec3 = ZERO3
    rotations: dict[str, Vec3] = field(default_factory=dict)
    translations: dict[str, Vec3] = field(default_factory=dict)


@dataclass(frozen=True)
class WorldPose:
    """Resolved world transforms: joint name -> (position, orientation)."""

    transforms: dict[str, tuple[np.ndarray, np.ndarray]]

    def position(self, name: str) -> np.ndarray:
        return self.transforms[name][0]

    def orientation(self, name: str) -> np.ndarray:
        return self.transforms[name][1]


def local_to_world(skeleton: Skeleton, pose: Pose) -> WorldPose:
    """Resolve a pose to world space, parents before children.

    Missing rotation entries are identity; unknown joint names in the pose
    raise a ValueError naming the joint.
    """
    for name in list(pose.rotations) + list(pose.translations):
        if not skeleton.has_joint(name):
            raise ValueError(f"pose references unknown joint '{name}'")

    transforms: dict[str, tuple[np.ndarray, np.ndarray]] = {}
    for joint in skeleton.joints:
        local_rot = euler_to_matrix(pose.rotations.get(joint.name, ZERO3))
        offset = np.asarray(joint.rest_offset) + np.asarray(
            pose.translations.get(joint.name, ZERO3)
        )
        if joint.parent is None:
            pos = np.asarray(pose.root_translation) + offset
            orient = local_rot
        else:
            parent_pos, parent_orient = transforms[joint.parent]
            pos = parent_pos + parent_orient @ offset
            orient = parent_orient @ local_rot
        transforms[joint.name] = (pos, orient)
    return WorldPose(transforms)


def validate(skeleton: Skeleton) -> list[str]:
    """Check the skeleton invariants; returns a list of violations."""
    violations: list[str] = []
    names = [j.name for j in skeleton.joints]
    seen: set[str] = set()
    for n in names:
        if n in seen:
            violations.append(f"duplicate joint name '{n}'")
        seen.add(n)

    roots = [j for j in skeleton.joints if j.parent is None]
    if len(roots) != 1:
        violations.append(f"expected exactly one root joint, found {len(roots)}")

    known: set[str] = set()
    for j in skeleton.joints:
        if j.parent is not None:
            if j.parent not in seen:
                violations.append(f"joint '{j.name}' has unknown parent '{j.parent}'")
            elif j.parent not in known:
                violations.append(f"joint '{j.name}' appears before its parent '{j.parent}'")
            if float(np.linalg.norm(j.rest_offset)) == 0.0:
                violations.append(f"non-root joint '{j.name}' has zero-length rest offset")
        known.add(j.name)

    # tree property: every joint reachable from the root
    if len(roots) == 1 and not any(v.startswith("joint '") for v in violations):
        reachable = {roots[0].name}
        for j in skeleton.joints:
            if j.parent in reachable:
                reachable.add(j.name)
        for n in names:
            if n not in reachable:
                violations.append(f"joint '{n}' is not connected to the root")

    for leg in skeleton.legs:
        for name in leg.joints:
            if name not in seen:
                violations.append(f"leg {leg.leg_id} references unknown joint '{name}'")
        for a, b in zip(leg.joints, leg.joints[1:]):
            if b in seen and skeleton._by_name[b].parent != a:
                violations.append(
                    f"leg {leg.leg_id}: '{b}' is not a child of '{a}' (chain must descend)"
                )

    spine = skeleton.chains.get("spine")
    if spine and skeleton.legs and len(roots) == 1:
        # the spine must sit on the path from the root to the front leg frame
        for leg in skeleton.legs:
            if leg.kind != "front" or leg.joints[0] not in seen:
                continue
            ancestors: set[str] = set()
            cur = skeleton._by_name[leg.joints[0]].parent
            while cur is not None:
                ancestors.add(cur)
                cur = skeleton._by_name[cur].parent
            missing = [n for n in spine if n not in ancestors]
            if missing:
                violations.append(
                    f"spine chain does not connect the leg frames (joints {missing} "
                    f"are not ancestors of {leg.joints[0]})"
                )
            break

    return violations


@dataclass(frozen=True)
class TemplateConfig:
    """Segment lengths (scene units) and chain joint counts for the template.

    Defaults are horse proportioned. hip_drop is solved automatically when
    None so that front and hind rest feet share one depth.
    """

    spine_joints: int = 5
    neck_joints: int = 3
    tail_joints: int = 5

    spine_length: float = 0.90
    sternum_length: float = 0.15
    neck_segment: float = 0.14
    neck_pitch: float = math.pi / 4  # rise of the neck from horizontal
    head_length: float = 0.12
    tail_segment: float = 0.14
    tail_droop: float = 0.175  # rad below horizontal

    shoulder_spread: float = 0.22
    shoulder_drop: float = 0.15
    shoulder_forward: float = 0.05
    front_upper: float = 0.46
    front_lower: float = 0.46
    front_foot: float = 0.12
    front_rest_flex: float = 0.45  # rad, symmetric rest bend of the front leg

    hip_spread: float = 0.24
    hip_back: float = 0.05
    hip_drop: float | None = None
    hind_thigh: float = 0.36
    hind_shank: float = 0.32
    hind_cannon: float = 0.28
    hind_foot: float = 0.12
    hock_angle: float = 2.2  # interior angle at the calcaneus, rad
    hind_thigh_tilt: float = 0.55  # rad from straight down, + is forward


def _sagittal(length: float, tilt: float) -> Vec3:
    """Offset of `length` pointing down, tilted `tilt` rad toward +Z."""
    return (0.0, -length * math.cos(tilt), length * math.sin(tilt))


def build_quadruped_template(config: TemplateConfig | None = None) -> Skeleton:
    """Build the quadruped skeleton from a template config.

    Raises ValueError for non-positive segment lengths or chain counts
    below the minimums (spine >= 3, neck >= 2, tail >= 3).
    """
    cfg = config or TemplateConfig()

    counts = {"spine": (cfg.spine_joints, 3), "neck": (cfg.neck_joints, 2), "tail": (cfg.tail_joints, 3)}
    for chain, (count, minimum) in counts.items():
        if count < minimum:
            raise ValueError(f"{chain} joint count must be >= {minimum}, got {count}")
    lengths = {
        "spine_length": cfg.spine_length,
        "sternum_length": cfg.sternum_length,
        "neck_segment": cfg.neck_segment,
        "head_length": cfg.head_length,
        "tail_segment": cfg.tail_segment,
        "shoulder_spread": cfg.shoulder_spread,
        "shoulder_drop": cfg.shoulder_drop,
        "front_upper": cfg.front_upper,
        "front_lower": cfg.front_lower,
        "front_foot": cfg.front_foot,
        "hip_spread": cfg.hip_spread,
        "hind_thigh": cfg.hind_thigh,
        "hind_shank": cfg.hind_shank,
        "hind_cannon": cfg.hind_cannon,
        "hind_foot": cfg.hind_foot,
    }
    for field_name, value in lengths.items():
        if value <= 0.0:
            raise ValueError(f"{field_name} must be > 0, got {value}")
    if not 0.0 < cfg.hock_angle < math.pi:
        raise ValueError(f"hock_angle must be in (0, pi), got {cfg.hock_angle}")

    joints: list[Joint] = [Joint("pelvis", None, ZERO3)]

    # spine runs forward from the pelvis to the sternum (front leg frame)
    spine_names: list[str] = []
    seg = cfg.spine_length / cfg.spine_joints
    parent = "pelvis"
    for i in range(cfg.spine_joints):
        name = f"spine_{i + 1}"
        joints.append(Joint(name, parent, (0.0, 0.0, seg)))
        spine_names.append(name)
        parent = name
    joints.append(Joint("sternum", parent, (0.0, 0.0, cfg.sternum_length)))

    # neck + head rise from the sternum
    neck_names: list[str] = []
    neck_off = (
        0.0,
        cfg.neck_segment * math.sin(cfg.neck_pitch),
        cfg.neck_segment * math.cos(cfg.neck_pitch),
    )
    parent = "sternum"
    for i in range(cfg.neck_joints):
        name = f"neck_{i + 1}"
        joints.append(Joint(name, parent, neck_off))
        neck_names.append(name)
        parent = name
    head_off = (
        0.0,
        cfg.head_length * math.sin(cfg.neck_pitch * 0.5),
        cfg.head_length * math.cos(cfg.neck_pitch * 0.5),
    )
    joints.append(Joint("head", parent, head_off))
    neck_names.append("head")

    # tail trails backward and slightly down from the pelvis
    tail_names: list[str] = []
    tail_off = (
        0.0,
        -cfg.tail_segment * math.sin(cfg.tail_droop),
        -cfg.tail_segment * math.cos(cfg.tail_droop),
    )
    parent = "pelvis"
    for i in range(cfg.tail_joints):
        name = f"tail_{i + 1}"
        joints.append(Joint(name, parent, tail_off))
        tail_names.append(name)
        parent = name

    # front legs: symmetric rest flex, carpus vertex pointing forward
    phi = cfg.front_rest_flex
    front_drop = cfg.shoulder_drop + (cfg.front_upper + cfg.front_lower) * math.cos(phi) + cfg.front_foot

    # hind legs: zigzag whose rest hock interior angle equals the coupling
    # angle. The shank+cannon pair acts as a rigid virtual bone; its tilt
    # is solved so the rest foot sits directly under the hip, which keeps
    # the thigh and the virtual bone well off collinear (reach slack)
    a1 = cfg.hind_thigh_tilt
    l1, l2, l3 = cfg.hind_thigh, cfg.hind_shank, cfg.hind_cannon
    lv = math.sqrt(l2 * l2 + l3 * l3 - 2.0 * l2 * l3 * math.cos(cfg.hock_angle))
    sin_av = -l1 * math.sin(a1) / lv
    if abs(sin_av) >= 1.0:
        raise ValueError("hind leg tilts are not realizable (virtual bone too short)")
    a_v = math.asin(sin_av)
    beta = math.acos(min(1.0, max(-1.0, (l2 * l2 + lv * lv - l3 * l3) / (2.0 * l2 * lv))))
    a2 = a_v - beta  # hock vertex points backward
    a3 = a2 + (math.pi - cfg.hock_angle)
    hind_chain_drop = l1 * math.cos(a1) + l2 * math.cos(a2) + l3 * math.cos(a3)
    hip_drop = cfg.hip_drop
    if hip_drop is None:
        hip_drop = front_drop - hind_chain_drop - cfg.hind_foot

    legs: list[LegChain] = []
    for side, sign in (("L", 1.0), ("R", -1.0)):
        shoulder = f"shoulder_{side}"
        joints.append(
            Joint(shoulder, "sternum", (sign * cfg.shoulder_spread, -cfg.shoulder_drop, cfg.shoulder_forward))
        )
        joints.append(Joint(f"carpus_{side}", shoulder, _sagittal(cfg.front_upper, phi)))
        joints.append(Joint(f"front_fetlock_{side}", f"carpus_{side}", _sagittal(cfg.front_lower, -phi)))
        joints.append(Joint(f"front_foot_{side}", f"front_fetlock_{side}", (0.0, -cfg.front_foot, 0.0)))
        legs.append(
            LegChain(
                leg_id="FL" if side == "L" else "FR",
                joints=(shoulder, f"carpus_{side}", f"front_fetlock_{side}", f"front_foot_{side}"),
                kind="front",
            )
        )

    for side, sign in (("L", 1.0), ("R", -1.0)):
        hip = f"hip_{side}"
        joints.append(Joint(hip, "pelvis", (sign * cfg.hip_spread, -hip_drop, -cfg.hip_back)))
        joints.append(Joint(f"patella_{side}", hip, _sagittal(cfg.hind_thigh, a1)))
        joints.append(Joint(f"calcaneus_{side}", f"patella_{side}", _sagittal(cfg.hind_shank, a2)))
        joints.append(Joint(f"hind_fetlock_{side}", f"calcaneus_{side}", _sagittal(cfg.hind_cannon, a3)))
        joints.append(Joint(f"hind_foot_{side}", f"hind_fetlock_{side}", (0.0, -cfg.hind_foot, 0.0)))
        legs.append(
            LegChain(
                leg_id="BL" if side == "L" else "BR",
                joints=(hip, f"patella_{side}", f"calcaneus_{side}", f"hind_fetlock_{side}", f"hind_foot_{side}"),
                kind="hind",
            )
        )

    order = {"FR": 0, "FL": 1, "BR": 2, "BL": 3}
    legs.sort(key=lambda leg: order[leg.leg_id])

    return Skeleton(
        joints=tuple(joints),
        legs=tuple(legs),
        chains={
            "spine": tuple(spine_names),
            "neck": tuple(neck_names),
            "tail": tuple(tail_names),
        },
    )


def standing_height(skeleton: Skeleton) -> float:
    """Drop from the root to the lowest rest foot (the natural body height)."""
    drops = [-float(skeleton.rest_world_position(leg.joints[-1])[1]) for leg in skeleton.legs]
    if not drops:
        raise ValueError("skeleton has no legs")
    return max(drops)
