"""Toric structure of CP^2: the coordinate circle actions, moment map and action-angle chart."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .projective_core import (
    ProjPoint,
    Tangent,
    canonicalize,
    fs_form,
    horizontal,
    point,
    tangent_at,
)

INTERIOR_MARGIN = 1e-6
TWO_PI = 2 * np.pi

# weights of e^{i theta} on (z0, z1, z2)
_WEIGHTS = {
    "first": (0, 1, 0),
    "second": (0, 0, 1),
    "tilted": (0, 1, 2),
}


class CircleAction(enum.Enum):
    FIRST = "first"
    SECOND = "second"
    TILTED = "tilted"

    @property
    def weights(self) -> np.ndarray:
        return np.array(_WEIGHTS[self.value], dtype=float)

    @classmethod
    def parse(cls, s) -> "CircleAction":
        if isinstance(s, cls):
            return s
        key = str(s).lower()
        aliases = {"1": "first", "2": "second", "t": "tilted"}
        return cls(aliases.get(key, key))


@dataclass(frozen=True)
class MomentValue:
    mu1: float
    mu2: float

    def as_tuple(self) -> tuple[float, float]:
        return (self.mu1, self.mu2)

    def edge_margin(self) -> float:
        """Distance-like margin to the nearest edge of the moment triangle."""
        return min(-self.mu1, -self.mu2, 0.5 + self.mu1 + self.mu2)


@dataclass(frozen=True)
class ActionAngle:
    theta1: float
    theta2: float
    mu: MomentValue


def moment(p: ProjPoint) -> MomentValue:
    z = p.rep
    return MomentValue(-0.5 * abs(z[1]) ** 2, -0.5 * abs(z[2]) ** 2)


def moment_array(zs: np.ndarray) -> np.ndarray:
    """Vectorized ``(mu1, mu2)`` for an (n, 3) array of representatives of any norm."""
    zs = np.asarray(zs, dtype=complex)
    a = np.abs(zs) ** 2
    tot = a.sum(axis=-1)
    return -0.5 * np.stack([a[..., 1] / tot, a[..., 2] / tot], axis=-1)


def circle_act(action, theta: float, p: ProjPoint) -> ProjPoint:
    w = CircleAction.parse(action).weights
    return canonicalize(np.exp(1j * theta * w) * p.rep)


def generator(action, p: ProjPoint) -> Tangent:
    """Infinitesimal generator d/dtheta of the action at ``p``, horizontalized."""
    w = CircleAction.parse(action).weights
    return horizontal(p, 1j * w * p.rep)


def circ_dist(a: float, b: float) -> float:
    d = (a - b) % TWO_PI
    return min(d, TWO_PI - d)


def to_action_angle(p: ProjPoint, margin: float = INTERIOR_MARGIN) -> ActionAngle:
    mu = moment(p)
    m = mu.edge_margin()
    if m < margin:
        raise ValueError(
            f"point {p} is not in the polytope interior: edge margin {m:.3g} < {margin:.3g}")
    z = p.rep
    t1 = float(np.angle(z[1] / z[0]) % TWO_PI)
    t2 = float(np.angle(z[2] / z[0]) % TWO_PI)
    return ActionAngle(t1, t2, mu)


def action_angle_rep(theta1: float, mu1: float, theta2: float, mu2: float) -> np.ndarray:
    """Unit representative with z0 > 0 for the given action-angle data (no checks)."""
    r0 = np.sqrt(1.0 + 2.0 * mu1 + 2.0 * mu2)
    return np.array([r0, np.sqrt(-2.0 * mu1) * np.exp(1j * theta1),
                     np.sqrt(-2.0 * mu2) * np.exp(1j * theta2)])


def from_action_angle(a: ActionAngle, margin: float = INTERIOR_MARGIN) -> ProjPoint:
    m = a.mu.edge_margin()
    if m < margin:
        raise ValueError(f"moment value {a.mu} is not interior: edge margin {m:.3g}")
    return canonicalize(action_angle_rep(a.theta1, a.mu.mu1, a.theta2, a.mu.mu2))


@dataclass(frozen=True)
class Polytope:
    vertices: tuple = ((0.0, 0.0), (-0.5, 0.0), (0.0, -0.5))

    @property
    def area(self) -> float:
        (x0, y0), (x1, y1), (x2, y2) = self.vertices
        return 0.5 * abs((x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0))

    def contains(self, mu1: float, mu2: float, tol: float = 0.0) -> bool:
        return mu1 <= tol and mu2 <= tol and mu1 + mu2 >= -0.5 - tol


def polytope() -> Polytope:
    return Polytope()


def moment_differential(p: ProjPoint, v: Tangent, h: float = 1e-5) -> np.ndarray:
    """Central finite difference of ``(mu1, mu2)`` along ``v``."""
    z = p.rep
    d = v.direction
    plus = moment_array(z + h * d)
    minus = moment_array(z - h * d)
    return (plus - minus) / (2 * h)


def hamiltonian_ratio(action, p: ProjPoint, v: Tangent) -> tuple[float, float]:
    """(d mu(v), omega(X#, v)) for one of the coordinate actions."""
    action = CircleAction.parse(action)
    if action is CircleAction.TILTED:
        dmu = moment_differential(p, v) @ np.array([1.0, 2.0])
    else:
        dmu = moment_differential(p, v)[0 if action is CircleAction.FIRST else 1]
    return float(dmu), fs_form(generator(action, p), v)


@lru_cache(maxsize=None)
def moment_sign() -> int:
    """Sign s with d mu = s * omega(X#, .), calibrated once at a fixed interior point."""
    p = point(1.0, 0.8 + 0.3j, -0.4 + 0.9j)
    v = horizontal(p, [0.3 - 0.2j, 0.7 + 0.1j, -0.5 + 0.6j])
    dmu, om = hamiltonian_ratio(CircleAction.SECOND, p, v)
    if abs(om) < 1e-6:
        raise RuntimeError("degenerate calibration direction")
    return 1 if dmu / om > 0 else -1


def action_angle_frame(theta1: float, mu1: float, theta2: float, mu2: float,
                       h: float = 1e-5) -> list[Tangent]:
    """Pushforward of (d/dtheta1, d/dmu1, d/dtheta2, d/dmu2) by central differences."""
    x0 = np.array([theta1, mu1, theta2, mu2])
    base = action_angle_rep(*x0)
    p = canonicalize(base)
    frame = []
    for k in range(4):
        e = np.zeros(4)
        e[k] = h
        w = (action_angle_rep(*(x0 + e)) - action_angle_rep(*(x0 - e))) / (2 * h)
        frame.append(tangent_at(p, base, w))
    return frame


ACTION_ANGLE_FORM = np.array([
    [0.0, 1.0, 0.0, 0.0],
    [-1.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
    [0.0, 0.0, -1.0, 0.0],
])
