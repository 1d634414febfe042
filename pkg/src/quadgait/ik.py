"""Analytic limb IK and chain waves.

Two-bone solves use the law of cosines with the bend placed in the plane
spanned by the chain root, the target, and a pole point. The hind limb's
three segments reduce to a two-bone solve by locking the calcaneus
interior angle to a coupling angle, which forms a virtual lower bone of
length sqrt(l2^2 + l3^2 - 2*l2*l3*cos(theta)).

Solutions are clamped, never raised: unreachable targets extend the limb
straight toward the target with reached=False and residual = miss
distance, so frame evaluation always produces output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .rotations import Vec3, matrix_to_euler, normalized
from .skeleton import LegChain, Skeleton

REACH_EPS = 1e-9
DEFAULT_COUPLING_ANGLE = 2.6  # rad, interior angle locked at the calcaneus


@dataclass(frozen=True)
class ChainBinding:
    """Skeleton context for turning a geometric solve into joint rotations.

    joint_names are the rotated joints from the chain root down;
    rest_offsets[i] is the rest offset of the joint that follows
    joint_names[i] (the bone it rotates). rest_pole fixes the bend
    reference of the rest configuration, by default straight ahead.
    """

    joint_names: tuple[str, ...]
    rest_offsets: tuple[np.ndarray, ...]
    parent_orientation: np.ndarray
    rest_pole: np.ndarray = field(default_factory=lambda: np.array([0.0, 0.0, 1.0]))


def binding_for_leg(
    skeleton: Skeleton, leg: LegChain, parent_orientation: np.ndarray
) -> ChainBinding:
    """Binding for a template leg: IK joints are everything above the fetlock."""
    rotated = leg.joints[:-2]
    children = leg.joints[1:-1]
    return ChainBinding(
        joint_names=tuple(rotated),
        rest_offsets=tuple(np.asarray(skeleton.joint(c).rest_offset, dtype=float) for c in children),
        parent_orientation=np.asarray(parent_orientation, dtype=float),
    )


@dataclass(frozen=True)
class IkSolution:
    """joint_rotations is empty when the solve ran without a binding."""

    joint_rotations: dict[str, Vec3]
    reached: bool
    residual: float
    points: tuple[np.ndarray, ...]  # chain world positions, root .. effector
    end_orientation: np.ndarray | None = None


def _bend_frame(root_pos, target, pole_hint):
    """Unit axis toward the target, in-plane bend direction, plane normal."""
    to_target = np.asarray(target, dtype=float) - np.asarray(root_pos, dtype=float)
    dist = float(np.linalg.norm(to_target))
    if dist < 1e-12:
        raise ValueError("target coincides with the chain root; bend plane is ambiguous")
    axis = to_target / dist
    pole_vec = np.asarray(pole_hint, dtype=float) - np.asarray(root_pos, dtype=float)
    bend = pole_vec - axis * float(np.dot(pole_vec, axis))
    norm = float(np.linalg.norm(bend))
    if norm < 1e-12:
        raise ValueError("pole hint is collinear with the root-to-target line")
    return dist, axis, bend / norm, np.cross(axis, bend / norm)


def _two_bone_points(root_pos, target, len_upper, len_lower, pole_hint):
    """Law-of-cosines point solve: (mid, effector, normal, reached, residual)."""
    root_pos = np.asarray(root_pos, dtype=float)
    dist, axis, bend_dir, normal = _bend_frame(root_pos, target, pole_hint)
    reach = len_upper + len_lower
    closest = abs(len_upper - len_lower)
    if dist >= reach:
        mid = root_pos + axis * len_upper
        effector = root_pos + axis * reach
        residual = dist - reach
    elif dist <= closest:
        mid = root_pos + axis * len_upper
        effector = root_pos + axis * (len_upper - len_lower)
        residual = closest - dist
    else:
        cos_a = (dist * dist + len_upper * len_upper - len_lower * len_lower) / (
            2.0 * dist * len_upper
        )
        sin_a = math.sqrt(max(0.0, 1.0 - cos_a * cos_a))
        mid = root_pos + (axis * cos_a + bend_dir * sin_a) * len_upper
        effector = np.asarray(target, dtype=float)
        residual = 0.0
    return mid, effector, normal, residual < REACH_EPS, residual


def _rest_plane_normal(rest_offsets, rest_pole):
    total = np.zeros(3)
    for off in rest_offsets:
        total = total + off
    e_dir = normalized(total)
    bend = np.asarray(rest_pole, dtype=float) - e_dir * float(np.dot(rest_pole, e_dir))
    norm = float(np.linalg.norm(bend))
    if norm < 1e-12:
        raise ValueError("rest pole is collinear with the rest chain direction")
    return np.cross(e_dir, bend / norm)


def _frame(primary: np.ndarray, normal: np.ndarray) -> np.ndarray:
    """Right-handed frame with the given primary column and normal column."""
    return np.column_stack((primary, np.cross(normal, primary), normal))


def _rotations_from_points(points, normal, binding) -> tuple[dict[str, Vec3], np.ndarray]:
    """Map solved bone directions to local Euler rotations for the binding."""
    n_rest = _rest_plane_normal(binding.rest_offsets, binding.rest_pole)
    rotations: dict[str, Vec3] = {}
    world_parent = binding.parent_orientation
    end_orientation = world_parent
    for i, name in enumerate(binding.joint_names):
        bone = points[i + 1] - points[i]
        u = normalized(bone)
        r_hat = normalized(binding.rest_offsets[i])
        world = _frame(u, normal) @ _frame(r_hat, n_rest).T
        local = world_parent.T @ world
        rotations[name] = matrix_to_euler(local)
        world_parent = world
        end_orientation = world
    return rotations, end_orientation


def solve_two_bone(
    root_pos,
    target,
    len_upper: float,
    len_lower: float,
    pole_hint,
    binding: ChainBinding | None = None,
) -> IkSolution:
    """Two-bone solve; the bend lies in the root/target/pole plane.

    Targets beyond len_upper+len_lower extend the limb straight toward the
    target; targets inside |len_upper-len_lower| fold it. Both clamp with
    reached=False and the miss distance as residual.
    """
    if len_upper <= 0.0 or len_lower <= 0.0:
        raise ValueError("segment lengths must be > 0")
    mid, effector, normal, reached, residual = _two_bone_points(
        root_pos, target, len_upper, len_lower, pole_hint
    )
    points = (np.asarray(root_pos, dtype=float), mid, effector)
    rotations: dict[str, Vec3] = {}
    end_orientation = None
    if binding is not None:
        if len(binding.joint_names) != 2 or len(binding.rest_offsets) != 2:
            raise ValueError("two-bone binding must carry exactly two joints")
        rotations, end_orientation = _rotations_from_points(points, normal, binding)
    return IkSolution(rotations, reached, residual, points, end_orientation)


def hind_virtual_length(len_shank: float, len_cannon: float, coupling_angle: float) -> float:
    """Length of the virtual lower bone with the hock locked at coupling_angle."""
    return math.sqrt(
        len_shank * len_shank
        + len_cannon * len_cannon
        - 2.0 * len_shank * len_cannon * math.cos(coupling_angle)
    )


def solve_hind_leg(
    root_pos,
    target,
    lengths: tuple[float, float, float],
    pole_hint,
    coupling_angle: float = DEFAULT_COUPLING_ANGLE,
    binding: ChainBinding | None = None,
) -> IkSolution:
    """Three-segment hind solve via the locked-hock virtual bone.

    lengths are (thigh, shank, cannon). The virtual-bone rotation is
    distributed back to the shank and cannon, keeping the hock on its
    rest side of the virtual line. coupling_angle = pi degenerates to a
    plain two-bone solve with lower length shank+cannon.
    """
    l1, l2, l3 = lengths
    if min(lengths) <= 0.0:
        raise ValueError("segment lengths must be > 0")
    if not 0.0 < coupling_angle <= math.pi:
        raise ValueError(f"coupling_angle must be in (0, pi], got {coupling_angle}")
    lv = hind_virtual_length(l2, l3, coupling_angle)
    mid, effector, normal, reached, residual = _two_bone_points(
        root_pos, target, l1, lv, pole_hint
    )

    # place the hock: rotate the virtual direction by the triangle angle at
    # the patella, on whichever side the rest pose keeps it
    virtual = normalized(effector - mid)
    cos_beta = (l2 * l2 + lv * lv - l3 * l3) / (2.0 * l2 * lv)
    cos_beta = min(1.0, max(-1.0, cos_beta))
    sin_beta = math.sqrt(max(0.0, 1.0 - cos_beta * cos_beta))
    side = -1.0
    if binding is not None:
        if len(binding.joint_names) != 3 or len(binding.rest_offsets) != 3:
            raise ValueError("hind binding must carry exactly three joints")
        v_rest = normalized(binding.rest_offsets[1] + binding.rest_offsets[2])
        n_rest = _rest_plane_normal(binding.rest_offsets, binding.rest_pole)
        rest_side = float(np.dot(normalized(binding.rest_offsets[1]), np.cross(n_rest, v_rest)))
        side = 1.0 if rest_side >= 0.0 else -1.0
    shank_dir = virtual * cos_beta + np.cross(normal, virtual) * (side * sin_beta)
    hock = mid + shank_dir * l2

    points = (np.asarray(root_pos, dtype=float), mid, hock, effector)
    rotations: dict[str, Vec3] = {}
    end_orientation = None
    if binding is not None:
        rotations, end_orientation = _rotations_from_points(points, normal, binding)
    return IkSolution(rotations, reached, residual, points, end_orientation)


def chain_wave(
    chain_len: int, amplitude: float, phase: float, falloff: float
) -> list[Vec3]:
    """Per-joint bend triples about the chain's lateral (X) axis.

    Joint k gets amplitude * sin(phase + k * falloff).
    """
    if chain_len < 1:
        raise ValueError(f"chain_len must be >= 1, got {chain_len}")
    return [
        (amplitude * math.sin(phase + k * falloff), 0.0, 0.0) for k in range(chain_len)
    ]


def interior_angle(solution: IkSolution, vertex_index: int = 1) -> float:
    """Angle at an interior chain point, from the solved world points."""
    points = solution.points
    a = points[vertex_index - 1] - points[vertex_index]
    b = points[vertex_index + 1] - points[vertex_index]
    cos_t = float(np.dot(a, b) / (np.linalg.norm(a) * np.linalg.norm(b)))
    return math.acos(min(1.0, max(-1.0, cos_t)))
