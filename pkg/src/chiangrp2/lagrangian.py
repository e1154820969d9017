"""The Lagrangian RP^2 L2 (SU(2)-orbit of [1:0:1]) and comparison Lagrangians.

L2 is the image of the unit sphere under

    (X, Y, Z) -> [X - iY : sqrt(2) i Z : X + iY],

a double cover identifying antipodes. The standard RP^2 is the image of the
sphere under the inclusion of R^3. Both are linear maps restricted to S^2,
so they share the machinery below; the negative-control fixtures are
further linear maps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.optimize import least_squares

from .projective_core import (
    ALG_TOL,
    GEOM_TOL,
    ProjPoint,
    Tangent,
    canonicalize,
    fs_form,
    horizontal,
    proj_dist,
    proj_eq,
    tangent_at,
)
from .su2 import SU2Element, chiang_point, mu_cp2
from .toric import CircleAction, circle_act, generator, moment, moment_array

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class SpherePoint:
    X: float
    Y: float
    Z: float

    def __post_init__(self):
        n = self.X**2 + self.Y**2 + self.Z**2
        if abs(n - 1.0) > ALG_TOL:
            raise ValueError(f"X^2 + Y^2 + Z^2 = {n!r}, expected 1")

    @classmethod
    def from_vector(cls, v) -> "SpherePoint":
        v = np.asarray(v, dtype=float)
        v = v / np.linalg.norm(v)
        return cls(float(v[0]), float(v[1]), float(v[2]))

    def vector(self) -> np.ndarray:
        return np.array([self.X, self.Y, self.Z])

    def __neg__(self) -> "SpherePoint":
        return SpherePoint(-self.X, -self.Y, -self.Z)


# Linear maps R^3 -> C^3 whose restriction to S^2 parametrizes a Lagrangian
# (or a control surface). Columns are the images of X, Y, Z.
CHIANG_MAP = np.array([[1, -1j, 0], [0, 0, SQRT2 * 1j], [1, 1j, 0]]) / SQRT2
RP2_MAP = np.eye(3, dtype=complex)
# z1 = sqrt(2) Z with the factor i removed
DROP_I_MAP = np.array([[1, -1j, 0], [0, 0, SQRT2], [1, 1j, 0]]) / SQRT2
# z2 = X - iY: the conjugation relating z0 and z2 removed
NO_CONJ_MAP = np.array([[1, -1j, 0], [0, 0, SQRT2 * 1j], [1, -1j, 0]]) / SQRT2

# coordinate shuffles carrying the Chiang median to the other two medians
MEDIAN_SHUFFLES = {
    "mu1=mu2": (1, 0, 2),
    "2mu1+mu2=-1/2": (0, 2, 1),
}


@dataclass(frozen=True)
class LagrangianId:
    kind: str
    mu: tuple[float, float] | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown lagrangian kind {self.kind!r}")
        if self.kind == "action_torus":
            if self.mu is None:
                raise ValueError("action torus needs moment values")
            m1, m2 = self.mu
            if not (m1 < 0 and m2 < 0 and m1 + m2 > -0.5):
                raise ValueError(f"action torus level {self.mu} is not interior")

    @property
    def sphere_map(self) -> np.ndarray | None:
        return _SPHERE_MAPS.get(self.kind)

    @classmethod
    def parse(cls, s) -> "LagrangianId":
        if isinstance(s, cls):
            return s
        key = {"rp2": "standard_rp2", "clifford": "clifford_torus"}.get(str(s).lower(), str(s).lower())
        return cls(key)


_SPHERE_MAPS = {
    "chiang": CHIANG_MAP,
    "standard_rp2": RP2_MAP,
    "drop_i": DROP_I_MAP,
    "no_conj": NO_CONJ_MAP,
}
_KINDS = set(_SPHERE_MAPS) | {"clifford_torus", "action_torus"}

CHIANG = LagrangianId("chiang")
STANDARD_RP2 = LagrangianId("standard_rp2")
CLIFFORD_TORUS = LagrangianId("clifford_torus", (-1 / 6, -1 / 6))
DROP_I = LagrangianId("drop_i")
NO_CONJ = LagrangianId("no_conj")


def action_torus(mu1: float, mu2: float) -> LagrangianId:
    return LagrangianId("action_torus", (mu1, mu2))


# --- sampling ---------------------------------------------------------------

def fibonacci_sphere(n: int) -> np.ndarray:
    k = np.arange(n) + 0.5
    z = 1 - 2 * k / n
    r = np.sqrt(1 - z**2)
    phi = np.pi * (3 - np.sqrt(5)) * k
    return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)


def uniform_sphere(n: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=(n, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def sphere_samples(n: int, seed: int) -> np.ndarray:
    """Half Fibonacci lattice (coverage), half seeded uniform draws."""
    n_fib = n // 2
    rng = np.random.default_rng(seed)
    return np.vstack([fibonacci_sphere(n_fib), uniform_sphere(n - n_fib, rng)])


# --- parametrizations -------------------------------------------------------

def chiang_from_sphere(s: SpherePoint) -> ProjPoint:
    return canonicalize(CHIANG_MAP @ s.vector())


def chiang_array(ss: np.ndarray) -> np.ndarray:
    """Unit representatives ``CHIANG_MAP @ s`` for an (n, 3) array of sphere points."""
    return np.asarray(ss, dtype=float) @ CHIANG_MAP.T


def sphere_from_su2(a: SU2Element) -> SpherePoint:
    w = a.alpha**2 + a.beta**2
    z = 2 * (np.conj(a.alpha) * a.beta).imag
    return SpherePoint(float(w.real), float(w.imag), float(z))


def standard_rp2(y0: float, y1: float, y2: float) -> ProjPoint:
    return canonicalize(np.array([y0, y1, y2], dtype=float))


def on_lagrangian(lag: LagrangianId, q: ProjPoint, tol: float = GEOM_TOL) -> bool:
    """Membership test for the named Lagrangian."""
    lag = LagrangianId.parse(lag)
    if lag.kind == "chiang":
        # L2 is exactly the zero level of the su(2) moment map
        return float(np.max(np.abs(mu_cp2(q)))) <= tol
    if lag.kind == "standard_rp2":
        return float(np.max(np.abs(q.rep.imag))) <= tol
    if lag.kind in ("clifford_torus", "action_torus"):
        return np.allclose(moment(q).as_tuple(), lag.mu, atol=tol)
    raise ValueError(f"no membership test for {lag.kind}")


# --- tangent frames ---------------------------------------------------------

def chart_basis(s) -> tuple[np.ndarray, np.ndarray]:
    """Coordinate tangent vectors of a graph chart of S^2 at ``s``.

    The (X, Y) chart is used when |Z| > 0.1; otherwise the chart excluding
    the larger of |X|, |Y|.
    """
    s = np.asarray(s, dtype=float)
    if abs(s[2]) > 0.1:
        k = 2
    else:
        k = 0 if abs(s[0]) >= abs(s[1]) else 1
    free = [i for i in range(3) if i != k]
    out = []
    for i in free:
        e = np.zeros(3)
        e[i] = 1.0
        e[k] = -s[i] / s[k]
        out.append(e)
    return out[0], out[1]


def sphere_frame(m: np.ndarray, s) -> tuple[Tangent, Tangent]:
    s = np.asarray(s, dtype=float)
    rep = m @ s
    p = canonicalize(rep)
    e1, e2 = chart_basis(s)
    return tangent_at(p, rep, m @ e1), tangent_at(p, rep, m @ e2)


def tangent_frame(s: SpherePoint) -> tuple[Tangent, Tangent]:
    """Two independent tangents to L2 at ``chiang_from_sphere(s)``."""
    return sphere_frame(CHIANG_MAP, s.vector())


def torus_frame(mu: tuple[float, float], theta1: float, theta2: float) -> tuple[Tangent, Tangent]:
    m1, m2 = mu
    rep = np.array([np.sqrt(1 + 2 * m1 + 2 * m2), np.sqrt(-2 * m1) * np.exp(1j * theta1),
                    np.sqrt(-2 * m2) * np.exp(1j * theta2)])
    p = canonicalize(rep)
    return (tangent_at(p, rep, [0, 1j * rep[1], 0]),
            tangent_at(p, rep, [0, 0, 1j * rep[2]]))


def isotropy_residual(lag, n_samples: int, seed: int) -> float:
    """Max |omega(u, v)| over sampled tangent frames of the named surface."""
    lag = LagrangianId.parse(lag)
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    worst = 0.0
    if lag.sphere_map is not None:
        for s in sphere_samples(n_samples, seed):
            u, v = sphere_frame(lag.sphere_map, s)
            worst = max(worst, abs(fs_form(u, v)))
    else:
        rng = np.random.default_rng(seed)
        for t1, t2 in rng.uniform(0, 2 * np.pi, size=(n_samples, 2)):
            u, v = torus_frame(lag.mu, t1, t2)
            worst = max(worst, abs(fs_form(u, v)))
    return worst


def span_residual(frame, t: Tangent) -> float:
    """Distance from ``t`` to the real span of the frame."""
    basis = np.stack([np.concatenate([f.direction.real, f.direction.imag]) for f in frame], axis=1)
    target = horizontal(frame[0].base, _at(t, frame[0].base)).direction
    target = np.concatenate([target.real, target.imag])
    coef, *_ = np.linalg.lstsq(basis, target, rcond=None)
    return float(np.linalg.norm(basis @ coef - target))


def _at(t: Tangent, base: ProjPoint) -> np.ndarray:
    c = np.vdot(t.base.rep, base.rep)
    return (c / abs(c)) * t.direction


# --- moment identities ------------------------------------------------------

def chiang_mu2(s: SpherePoint) -> float:
    mu2 = moment(chiang_from_sphere(s)).mu2
    expected = -0.25 * (s.X**2 + s.Y**2)
    if abs(mu2 - expected) > ALG_TOL:
        raise ArithmeticError(f"mu2 = {mu2!r} but -(X^2+Y^2)/4 = {expected!r}")
    return mu2


class MomentImageReport(NamedTuple):
    residual: float
    mu2_min: float
    mu2_max: float


def moment_image_residual(n_samples: int, seed: int) -> MomentImageReport:
    mu = moment_array(chiang_array(sphere_samples(n_samples, seed)))
    res = np.abs(mu[:, 0] + 2 * mu[:, 1] + 0.5)
    return MomentImageReport(float(res.max()), float(mu[:, 1].min()), float(mu[:, 1].max()))


def level_circle(a: float, n: int, both_sheets: bool = False) -> np.ndarray:
    """Sphere points of L2 over the level mu2 = a: X^2 + Y^2 = -4a, Z = +-sqrt(1 + 4a).

    With ``both_sheets`` false only Z > 0 is returned, which already covers
    the level set once modulo antipodes.
    """
    if not -0.25 < a < 0:
        raise ValueError(f"level {a} outside (-1/4, 0)")
    r = math.sqrt(-4 * a)
    zc = math.sqrt(1 + 4 * a)
    phi = 2 * np.pi * np.arange(n) / n
    pts = np.stack([r * np.cos(phi), r * np.sin(phi), np.full(n, zc)], axis=1)
    if both_sheets:
        low = pts.copy()
        low[:, 2] = -zc
        pts = np.vstack([pts, low])
    return pts


def transversality_margin(a: float, n_samples: int, h: float = 1e-5) -> float:
    """Min norm of grad(mu2 o chart) on L2 over the level, in the (X, Y) chart."""
    if not -0.25 < a < 0:
        raise ValueError(f"level {a} outside (-1/4, 0): transversality degenerates")
    pts = level_circle(a, n_samples, both_sheets=True)

    def mu2(xy, sign):
        x, y = xy[..., 0], xy[..., 1]
        z = sign * np.sqrt(1 - x**2 - y**2)
        return moment_array(chiang_array(np.stack([x, y, z], axis=-1)))[..., 1]

    xy = pts[:, :2]
    sign = np.sign(pts[:, 2])
    grads = []
    for e in (np.array([h, 0.0]), np.array([0.0, h])):
        grads.append((mu2(xy + e, sign) - mu2(xy - e, sign)) / (2 * h))
    return float(np.min(np.hypot(*grads)))


def transversality_closed_form(a: float) -> float:
    return 0.5 * math.sqrt(-4 * a)


def tilted_invariance_residual(n_samples: int, seed: int, thetas=None) -> float:
    """Max distance between a tilted-rotated L2 point and its predicted L2 preimage."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for k in range(n_samples):
        a = SU2Element.random(rng)
        theta = rng.uniform(0, 2 * np.pi) if thetas is None else thetas[k % len(thetas)]
        p = circle_act(CircleAction.TILTED, theta, chiang_from_sphere(sphere_from_su2(a)))
        q = chiang_point(a.scaled_phase(theta / 2))
        worst = max(worst, proj_dist(p, q))
    return worst


class DoubleCoverReport(NamedTuple):
    false_matches: int
    antipode_residual: float


def double_cover_check(n_pairs: int, seed: int, tol: float = GEOM_TOL) -> DoubleCoverReport:
    rng = np.random.default_rng(seed)
    a = uniform_sphere(n_pairs, rng)
    b = uniform_sphere(n_pairs, rng)
    false_matches = 0
    worst = 0.0
    for s, t in zip(a, b):
        ps = chiang_from_sphere(SpherePoint.from_vector(s))
        pt = chiang_from_sphere(SpherePoint.from_vector(t))
        if min(np.linalg.norm(s - t), np.linalg.norm(s + t)) > 1e-6 and proj_eq(ps, pt, tol):
            false_matches += 1
        neg = chiang_from_sphere(SpherePoint.from_vector(-s))
        worst = max(worst, proj_dist(ps, neg))
    return DoubleCoverReport(false_matches, worst)


def median_residuals(n_samples: int, seed: int) -> dict[str, float]:
    zs = chiang_array(sphere_samples(n_samples, seed))
    out = {}
    for name, perm in MEDIAN_SHUFFLES.items():
        mu = moment_array(zs[:, list(perm)])
        if name == "mu1=mu2":
            r = mu[:, 0] - mu[:, 1]
        else:
            r = 2 * mu[:, 0] + mu[:, 1] + 0.5
        out[name] = float(np.max(np.abs(r)))
    return out


# --- orbit intersections ----------------------------------------------------

@dataclass
class IntersectionReport:
    action: CircleAction
    base: ProjPoint
    count: int
    solutions: list[SpherePoint] = field(default_factory=list)
    residuals: list[float] = field(default_factory=list)
    thetas: list[float] = field(default_factory=list)
    isolated: bool = True


_INVARIANT_PAIR = {CircleAction.SECOND: (0, 1), CircleAction.FIRST: (0, 2)}


def _orbit_residual(zs: np.ndarray, q: np.ndarray, action: CircleAction) -> np.ndarray:
    """Residuals vanishing iff each row of ``zs`` lies on the action orbit through ``q``."""
    zs = zs / np.linalg.norm(zs, axis=-1, keepdims=True)
    dmu = moment_array(zs) - moment_array(q)
    if action is CircleAction.TILTED:
        inv = lambda z: z[..., 0] * z[..., 2] * np.conj(z[..., 1]) ** 2  # noqa: E731
        c = inv(zs) - inv(q)
    else:
        i, j = _INVARIANT_PAIR[action]
        c = zs[..., i] * q[j] - zs[..., j] * q[i]
    return np.concatenate([dmu, np.stack([c.real, c.imag], axis=-1)], axis=-1)


def _orbit_angle(z: np.ndarray, q: np.ndarray, action: CircleAction) -> float:
    """theta with act(theta, q) = [z], assuming membership."""
    z = z * (q[0] / z[0])
    k = 2 if action is CircleAction.SECOND else 1
    t = float(np.angle(z[k] / q[k])) % (2 * np.pi)
    return 0.0 if t >= 2 * np.pi else t


def orbit_intersections(lag, action, q: ProjPoint, tol: float = GEOM_TOL, *,
                        n_seeds: int = 512, n_starts: int = 16,
                        solve_tol: float = 1e-10, cluster_radius: float = 1e-5,
                        margin: float = 1e-6) -> IntersectionReport:
    """Count the points of a sphere-parametrized Lagrangian on the orbit through ``q``.

    Seeds a Fibonacci lattice on S^2, refines the best-separated low-residual
    seeds by least squares in a local tangent chart, then clusters the
    converged solutions modulo antipodes.
    """
    lag = LagrangianId.parse(lag)
    action = CircleAction.parse(action)
    m = lag.sphere_map
    if m is None:
        raise ValueError(f"{lag.kind} is not sphere-parametrized")
    if moment(q).edge_margin() < margin:
        raise ValueError(f"base point {q} is not interior to the moment polytope")
    if not on_lagrangian(lag, q, max(tol, 1e-9)):
        raise ValueError(f"base point {q} does not lie on {lag.kind}")
    qv = q.rep

    seeds = fibonacci_sphere(n_seeds)
    r0 = np.linalg.norm(_orbit_residual(seeds @ m.T, qv, action), axis=1)
    starts = []
    for idx in np.argsort(r0):
        s = seeds[idx]
        if all(np.linalg.norm(s - t) > 0.1 for t in starts):
            starts.append(s)
        if len(starts) == n_starts:
            break

    found: list[np.ndarray] = []
    resids: list[float] = []
    isolated = True
    for s0 in starts:
        e1 = np.cross(s0, [1.0, 0, 0] if abs(s0[0]) < 0.9 else [0, 1.0, 0])
        e1 /= np.linalg.norm(e1)
        e2 = np.cross(s0, e1)

        def chart(x, s0=s0, e1=e1, e2=e2):
            v = s0 + x[0] * e1 + x[1] * e2
            return v / np.linalg.norm(v)

        fun = lambda x, chart=chart: _orbit_residual(m @ chart(x), qv, action)  # noqa: E731
        sol = least_squares(fun, np.zeros(2), method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15)
        r = float(np.max(np.abs(sol.fun)))
        if r > solve_tol:
            continue
        s = chart(sol.x)
        if np.linalg.svd(sol.jac, compute_uv=False)[-1] < 1e-6:
            isolated = False
        if any(min(np.linalg.norm(s - t), np.linalg.norm(s + t)) < cluster_radius for t in found):
            continue
        found.append(s)
        resids.append(r)

    sols = [SpherePoint.from_vector(s) for s in found]
    thetas = [_orbit_angle(m @ s, qv, action) for s in found]
    return IntersectionReport(action, q, len(sols), sols, resids, thetas, isolated)


def orbit_generator_in_span(s: SpherePoint, action=CircleAction.TILTED) -> float:
    """Distance from the action generator at L2(s) to the tangent plane of L2."""
    frame = tangent_frame(s)
    return span_residual(frame, generator(action, frame[0].base))
