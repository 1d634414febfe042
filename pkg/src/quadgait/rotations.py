"""Euler ZXY rotation math.

Rotations are stored everywhere as (rx, ry, rz) radian triples and applied
in fixed Z, X, Y order (intrinsic), i.e. R = Rz @ Rx @ Ry. This matches the
BVH channel order "Zrotation Xrotation Yrotation" used by the exporter.
"""

from __future__ import annotations

import math

import numpy as np

Vec3 = tuple[float, float, float]

IDENTITY_ROTATION: Vec3 = (0.0, 0.0, 0.0)


def euler_to_matrix(euler: Vec3) -> np.ndarray:
    """Build the 3x3 matrix for an (rx, ry, rz) triple, R = Rz @ Rx @ Ry."""
    rx, ry, rz = euler
    cx, sx = math.cos(rx), math.sin(rx)
    cy, sy = math.cos(ry), math.sin(ry)
    cz, sz = math.cos(rz), math.sin(rz)
    return np.array(
        [
            [cz * cy - sz * sx * sy, -sz * cx, cz * sy + sz * sx * cy],
            [sz * cy + cz * sx * sy, cz * cx, sz * sy - cz * sx * cy],
            [-cx * sy, sx, cx * cy],
        ]
    )


def matrix_to_euler(m: np.ndarray) -> Vec3:
    """Decompose a rotation matrix into the (rx, ry, rz) ZXY triple.

    At gimbal lock (|rx| = pi/2) rz is fixed to 0 and the remaining spin
    goes into ry.
    """
    sx = min(1.0, max(-1.0, float(m[2, 1])))
    rx = math.asin(sx)
    if abs(sx) < 1.0 - 1e-12:
        ry = math.atan2(-float(m[2, 0]), float(m[2, 2]))
        rz = math.atan2(-float(m[0, 1]), float(m[1, 1]))
    else:
        # rows collapse to functions of (ry +/- rz); put everything in ry
        ry = math.atan2(float(m[0, 2]), float(m[0, 0]))
        rz = 0.0
    return (rx, ry, rz)


def axis_angle_matrix(axis: np.ndarray, angle: float) -> np.ndarray:
    """Rodrigues rotation about a unit axis."""
    x, y, z = axis
    c, s = math.cos(angle), math.sin(angle)
    t = 1.0 - c
    return np.array(
        [
            [t * x * x + c, t * x * y - s * z, t * x * z + s * y],
            [t * x * y + s * z, t * y * y + c, t * y * z - s * x],
            [t * x * z - s * y, t * y * z + s * x, t * z * z + c],
        ]
    )


def normalized(v: np.ndarray) -> np.ndarray:
    n = float(np.linalg.norm(v))
    if n < 1e-12:
        raise ValueError("cannot normalize a zero-length vector")
    return v / n
