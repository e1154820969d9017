"""Points and tangent vectors of complex projective space, and the Fubini-Study form.

A point is stored through a unit-norm representative in C^{n+1}. A tangent
vector at a point is stored as its horizontal lift at that representative,
i.e. the ambient vector orthogonal (for the hermitian metric) to the Hopf
fibre. With this model the symplectic form of CP^n is literally the
imaginary part of the hermitian pairing of the two lifts.

Normalization: the circle actions rotating one coordinate have moment maps
``-1/2 |z_k|^2 / |z|^2`` and the total volume of CP^2 is ``pi^2 / 2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

GEOM_TOL = 1e-9
ALG_TOL = 1e-12
ZERO_FLOOR = 1e-300


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=complex)
    arr.setflags(write=False)
    return arr


def hermitian(u, v) -> complex:
    """Hermitian pairing ``conj(u)^T v`` (conjugate-linear in the first slot)."""
    return complex(np.vdot(u, v))


@dataclass(frozen=True, eq=False)
class ProjPoint:
    """A point of CP^n given by a canonical unit-norm representative.

    Build instances with :func:`canonicalize`; the constructor does not
    normalize.
    """

    rep: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.rep) - 1

    def __repr__(self) -> str:
        coords = ":".join(f"{c.real:.6g}{c.imag:+.6g}j" for c in self.rep)
        return f"ProjPoint([{coords}])"


@dataclass(frozen=True, eq=False)
class Tangent:
    """Tangent vector at ``base`` stored as a horizontal ambient vector."""

    base: ProjPoint
    direction: np.ndarray

    def __add__(self, other: "Tangent") -> "Tangent":
        return Tangent(self.base, _frozen(self.direction + _rebase(other, self.base)))

    def __mul__(self, c: float) -> "Tangent":
        return Tangent(self.base, _frozen(float(c) * self.direction))

    __rmul__ = __mul__


def canonicalize(v) -> ProjPoint:
    """Normalize ``v`` and rotate its phase so the first largest-modulus entry is real >= 0."""
    v = np.asarray(v, dtype=complex)
    norm = np.linalg.norm(v)
    if not np.isfinite(norm) or norm <= ZERO_FLOOR:
        raise ValueError("cannot form a projective point from the zero vector")
    v = v / norm
    k = int(np.argmax(np.abs(v)))
    phase = v[k] / abs(v[k])
    v = v / phase
    v[k] = abs(v[k])
    return ProjPoint(_frozen(v))


def point(*coords) -> ProjPoint:
    """Shorthand: ``point(1, 0, 1)`` is ``[1:0:1]``."""
    return canonicalize(coords)


def proj_eq(p: ProjPoint, q: ProjPoint, tol: float = GEOM_TOL) -> bool:
    if tol <= 0:
        raise ValueError("tol must be positive")
    if len(p.rep) != len(q.rep):
        return False
    return 1.0 - abs(hermitian(p.rep, q.rep)) <= tol


def proj_dist(p, q) -> float:
    """Sine of the Fubini-Study angle between two points.

    Computed as the norm of the wedge product of the unit representatives,
    which stays accurate for nearby points (unlike ``1 - |h|``).
    Accepts ProjPoints or raw vectors.
    """
    a = p.rep if isinstance(p, ProjPoint) else np.asarray(p, complex)
    b = q.rep if isinstance(q, ProjPoint) else np.asarray(q, complex)
    a = a / np.linalg.norm(a)
    b = b / np.linalg.norm(b)
    w = np.outer(a, b) - np.outer(b, a)
    return float(np.sqrt(0.5) * np.linalg.norm(w))


def horizontal(p: ProjPoint, w) -> Tangent:
    """Remove the component of ``w`` along the fibre through ``p.rep``."""
    w = np.asarray(w, dtype=complex)
    return Tangent(p, _frozen(w - hermitian(p.rep, w) * p.rep))


def tangent_at(p: ProjPoint, rep, w) -> Tangent:
    """Push an ambient velocity ``w`` of a curve through ``rep`` to a tangent at ``p``.

    ``rep`` is any (not necessarily unit, not necessarily canonical)
    representative of ``p``; ``w`` is d/dt of that representative.
    """
    rep = np.asarray(rep, dtype=complex)
    n = np.linalg.norm(rep)
    c = hermitian(rep / n, p.rep)
    c /= abs(c)
    return horizontal(p, c * np.asarray(w, dtype=complex) / n)


def _rebase(t: Tangent, base: ProjPoint) -> np.ndarray:
    if t.base is base or np.array_equal(t.base.rep, base.rep):
        return t.direction
    if not proj_eq(t.base, base, GEOM_TOL):
        raise ValueError("tangent vectors live at different points")
    c = hermitian(t.base.rep, base.rep)
    return (c / abs(c)) * t.direction


def fs_form(u: Tangent, v: Tangent) -> float:
    """Fubini-Study symplectic form on two tangents at the same point."""
    return hermitian(u.direction, _rebase(v, u.base)).imag


def curve_tangent(f: Callable[[float], np.ndarray], t: float, h: float = 1e-5) -> Tangent:
    """Central-difference tangent of a curve ``t -> f(t)`` of representatives.

    Neighbouring representatives are phase-aligned to ``f(t)`` first so that
    arbitrary phase jumps in ``f`` do not leak into the derivative.
    """
    z = np.asarray(f(t), dtype=complex)
    z = z / np.linalg.norm(z)
    p = canonicalize(z)

    def aligned(s):
        y = np.asarray(f(s), dtype=complex)
        y = y / np.linalg.norm(y)
        c = np.vdot(y, z)
        return y * (c / abs(c))

    return tangent_at(p, z, (aligned(t + h) - aligned(t - h)) / (2 * h))


def permute(p: ProjPoint, perm) -> ProjPoint:
    return canonicalize(p.rep[list(perm)])


def permute_tangent(t: Tangent, perm) -> Tangent:
    base = permute(t.base, perm)
    return tangent_at(base, t.base.rep[list(perm)], t.direction[list(perm)])


def affine_volume_density(w1: complex, w2: complex) -> float:
    """Density of omega^2/2 against Lebesgue measure in the chart ``[1:w1:w2]``.

    Evaluated from :func:`fs_form` on the pushed-forward coordinate frame
    (Pfaffian of the 4x4 Gram matrix), so it exercises the normalization of
    the form rather than a closed formula.
    """
    base = np.array([1.0, w1, w2], dtype=complex)
    p = canonicalize(base)
    frame = [tangent_at(p, base, e) for e in (
        [0, 1, 0], [0, 1j, 0], [0, 0, 1], [0, 0, 1j])]
    m = np.array([[fs_form(a, b) for b in frame] for a in frame])
    return float(m[0, 1] * m[2, 3] - m[0, 2] * m[1, 3] + m[0, 3] * m[1, 2])


def total_volume() -> float:
    """Symplectic volume of CP^2: (2 pi)^2 times the moment-triangle area 1/8."""
    return 4 * np.pi**2 * 0.125
