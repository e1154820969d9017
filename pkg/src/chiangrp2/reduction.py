"""Reduction of CP^2 by the second circle action.

At a level ``mu2 = a`` the second action rotates z2 only, so the orbit
space of the level set is CP^1 with coordinates ``[z0:z1]`` and the
point-orbit projection is a coordinate projection. The reduced form is the
Fubini-Study form of CP^1 scaled by ``1 + 2a``, giving total area
``2 pi (1/2 + a)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Real
from typing import Iterable, NamedTuple

import numpy as np

from .lagrangian import chiang_array, level_circle
from .projective_core import (
    GEOM_TOL,
    ProjPoint,
    Tangent,
    canonicalize,
    curve_tangent,
    fs_form,
    hermitian,
    horizontal,
    tangent_at,
)
from .toric import moment, moment_array

ReducedPoint = ProjPoint


@dataclass(frozen=True)
class ReductionLevel:
    a: Real

    def __post_init__(self):
        if not -0.5 < self.a < 0:
            raise ValueError(f"reduction level {self.a} outside (-1/2, 0)")

    @property
    def t(self) -> float:
        """|z2|^2 on the level set."""
        return -2.0 * float(self.a)

    def require_lifting_range(self):
        if not -0.25 < self.a < 0:
            raise ValueError(f"level {self.a} outside (-1/4, 0): no one-to-one transverse lifting")


def _level(lvl) -> ReductionLevel:
    return lvl if isinstance(lvl, ReductionLevel) else ReductionLevel(lvl)


def project(p: ProjPoint, lvl, tol: float = GEOM_TOL) -> ReducedPoint:
    lvl = _level(lvl)
    r = moment(p).mu2 - float(lvl.a)
    if abs(r) > tol:
        raise ValueError(f"point {p} is off the level mu2 = {lvl.a}: residual {r:.3g}")
    return canonicalize(p.rep[:2])


def project_array(zs: np.ndarray) -> np.ndarray:
    """Unit [z0:z1] representatives of an (n, 3) array (no level check)."""
    w = np.asarray(zs, dtype=complex)[..., :2]
    return w / np.linalg.norm(w, axis=-1, keepdims=True)


def area_coefficient(a) -> Fraction | float:
    """Reduced area in units of pi: ``2 (1/2 + a)``; exact for Fraction input."""
    if isinstance(a, Fraction):
        return 2 * (Fraction(1, 2) + a)
    return 2 * (0.5 + a)


def reduced_area(lvl) -> float:
    return math.pi * float(area_coefficient(_level(lvl).a))


def mu_red(w: ReducedPoint, lvl) -> float:
    a = float(_level(lvl).a)
    r = w.rep
    return -0.5 * (1 + 2 * a) * abs(r[1]) ** 2 / float(np.sum(np.abs(r) ** 2))


def mu_red_array(ws: np.ndarray, a: float) -> np.ndarray:
    ws = np.asarray(ws, dtype=complex)
    s = np.abs(ws) ** 2
    return -0.5 * (1 + 2 * a) * s[..., 1] / s.sum(axis=-1)


def mu_red_range(a) -> tuple:
    """Image of mu_red: ``[-(1 + 2a)/2, 0]``; exact for Fraction input."""
    return (-(1 + 2 * a) / 2, a - a)


def pushed_level(a):
    """mu_red value of the pushed-down Chiang circle: ``-(1 + 4a)/2``."""
    return -(1 + 4 * a) / 2


def lift_point(w, lvl, phi: float = 0.0) -> np.ndarray:
    """Unit representative over ``[w0:w1]`` on the level set, fibre phase ``phi``."""
    t = _level(lvl).t
    w = np.asarray(w.rep if isinstance(w, ProjPoint) else w, dtype=complex)
    w = w / np.linalg.norm(w)
    return np.array([math.sqrt(1 - t) * w[0], math.sqrt(1 - t) * w[1],
                     math.sqrt(t) * np.exp(1j * phi)])


@dataclass
class LiftedSurface:
    """Preimage of a closed curve of CP^1 in the level set, sampled on a grid."""

    curve: np.ndarray       # (n, 2) unit representatives, phase-continuous
    level: ReductionLevel
    phases: np.ndarray      # (m,)
    points: np.ndarray      # (n, m, 3)

    def __len__(self) -> int:
        return self.points.shape[0] * self.points.shape[1]

    def curve_velocities(self) -> np.ndarray:
        """Horizontal (in C^2) velocities of the sampled loop, by periodic central differences."""
        c = self.curve
        n = len(c)
        out = np.empty_like(c)
        h = 2 * np.pi / n
        for k in range(n):
            z = c[k]
            nxt, prv = c[(k + 1) % n], c[k - 1]
            nxt = nxt * (np.vdot(nxt, z) / abs(np.vdot(nxt, z)))
            prv = prv * (np.vdot(prv, z) / abs(np.vdot(prv, z)))
            d = (nxt - prv) / (2 * h)
            out[k] = d - np.vdot(z, d) * z
        return out

    def frame(self, i: int, j: int, vel: np.ndarray | None = None) -> tuple[Tangent, Tangent]:
        """Tangents along the loop and along the fibre at grid point (i, j)."""
        if vel is None:
            vel = self.curve_velocities()
        rep = self.points[i, j]
        p = canonicalize(rep)
        s = math.sqrt(1 - self.level.t)
        along = tangent_at(p, rep, [s * vel[i, 0], s * vel[i, 1], 0])
        fibre = tangent_at(p, rep, [0, 0, 1j * rep[2]])
        return along, fibre

    def isotropy_residual(self) -> float:
        vel = self.curve_velocities()
        n, m, _ = self.points.shape
        return max(abs(fs_form(*self.frame(i, j, vel))) for i in range(n) for j in range(m))

    def project_residual(self) -> float:
        """Max distance between projected surface points and the curve samples."""
        w = project_array(self.points.reshape(-1, 3)).reshape(self.points.shape[0], -1, 2)
        c = self.curve[:, None, :]
        wedge = np.abs(w[..., 0] * c[..., 1] - w[..., 1] * c[..., 0])
        return float(wedge.max())


def _phase_continuous(curve: np.ndarray) -> np.ndarray:
    out = curve / np.linalg.norm(curve, axis=1, keepdims=True)
    for k in range(1, len(out)):
        c = np.vdot(out[k], out[k - 1])
        out[k] = out[k] * (c / abs(c))
    return out


def lift_circle(curve: Iterable, lvl, m: int = 32) -> LiftedSurface:
    """Lift a sampled closed loop in CP^1 to its preimage torus in the level set."""
    lvl = _level(lvl)
    reps = np.array([w.rep if isinstance(w, ProjPoint) else np.asarray(w, complex)
                     for w in curve], dtype=complex)
    reps = _phase_continuous(reps)
    phases = 2 * np.pi * np.arange(m) / m
    t = lvl.t
    pts = np.empty((len(reps), m, 3), dtype=complex)
    pts[:, :, 0] = math.sqrt(1 - t) * reps[:, None, 0]
    pts[:, :, 1] = math.sqrt(1 - t) * reps[:, None, 1]
    pts[:, :, 2] = math.sqrt(t) * np.exp(1j * phases)[None, :]
    return LiftedSurface(reps, lvl, phases, pts)


def great_circle(n: int) -> np.ndarray:
    """The loop ``[1 : e^{i psi}]``, the equator |w0| = |w1| of CP^1."""
    psi = 2 * np.pi * np.arange(n) / n
    return np.stack([np.ones(n), np.exp(1j * psi)], axis=1) / math.sqrt(2)


def mu_red_circle(value: float, lvl, n: int) -> np.ndarray:
    """The loop where mu_red equals ``value``."""
    a = float(_level(lvl).a)
    frac = value / (-0.5 * (1 + 2 * a))
    if not 0 < frac < 1:
        raise ValueError(f"mu_red = {value} is not a regular value at level {a}")
    psi = 2 * np.pi * np.arange(n) / n
    return np.stack([np.full(n, math.sqrt(1 - frac)), math.sqrt(frac) * np.exp(1j * psi)], axis=1)


def push_chiang_array(lvl, n: int) -> np.ndarray:
    lvl = _level(lvl)
    lvl.require_lifting_range()
    return project_array(chiang_array(level_circle(float(lvl.a), n)))


def push_chiang(lvl, n: int) -> list[ReducedPoint]:
    """Images in CP^1 of n points of L2 on the level (one sheet, i.e. modulo antipodes)."""
    return [canonicalize(w) for w in push_chiang_array(lvl, n)]


def max_angular_gap(ws) -> float:
    """Largest gap between consecutive values of arg(w1/w0) around the circle."""
    ws = np.array([w.rep if isinstance(w, ProjPoint) else w for w in ws], dtype=complex)
    psi = np.sort(np.angle(ws[:, 1] / ws[:, 0]) % (2 * np.pi))
    gaps = np.diff(np.concatenate([psi, [psi[0] + 2 * np.pi]]))
    return float(gaps.max())


class InjectivityReport(NamedTuple):
    n: int
    collisions: int
    min_distance: float


def injectivity_check(lvl, n: int, tol: float = GEOM_TOL) -> InjectivityReport:
    """Pairwise distinctness of the projections of n level samples of L2.

    Samples are taken on the Z > 0 sheet, which meets every antipodal pair
    exactly once. A collision is a pair with ``1 - |h| <= tol``.
    """
    ws = push_chiang_array(lvl, n)
    h = np.abs(ws.conj() @ ws.T)
    iu = np.triu_indices(n, k=1)
    collisions = int(np.count_nonzero(1 - h[iu] <= tol))
    wedge = np.abs(np.outer(ws[:, 0], ws[:, 1]) - np.outer(ws[:, 1], ws[:, 0]))
    return InjectivityReport(n, collisions, float(wedge[iu].min()))


def level_tangent(p: ProjPoint, w) -> Tangent:
    """Horizontal tangent along ``w`` with its d mu2 component removed."""
    v = horizontal(p, w).direction
    g = horizontal(p, [0, 0, -p.rep[2]]).direction  # Re h(g, .) = d mu2
    gg = hermitian(g, g).real
    return Tangent(p, v - (hermitian(g, v).real / gg) * g)


def reduced_form(p: ProjPoint, u: Tangent, v: Tangent, lvl, h: float = 1e-5) -> float:
    """omega_red on the projections of u, v, by finite differences of the projection."""
    a = float(_level(lvl).a)
    z = p.rep

    def pushed(t: Tangent) -> Tangent:
        return curve_tangent(lambda s: (z + s * t.direction)[:2], 0.0, h)

    return (1 + 2 * a) * fs_form(pushed(u), pushed(v))


def level_points(a: float, n: int, rng: np.random.Generator) -> list[ProjPoint]:
    """Random points of the level set mu2 = a."""
    out = []
    for _ in range(n):
        w = rng.normal(size=2) + 1j * rng.normal(size=2)
        out.append(canonicalize(lift_point(w, a, rng.uniform(0, 2 * np.pi))))
    return out
