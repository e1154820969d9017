"""SU(2) acting on binary quadratic forms, and its moment maps.

A quadratic form is written ``u0*y^2 + u1*sqrt(2)*x*y + u2*x^2``; in these
coordinates the hermitian metric induced from C^2 is the standard one, so
the substitution action ``p(x, y) -> p((x, y) A)`` is unitary. Acting by
B and then by A substitutes ``(x, y) A B``, so ``rep3`` is multiplicative:
``rep3(A @ B) = rep3(A) @ rep3(B)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .projective_core import ALG_TOL, ProjPoint, canonicalize

SQRT2 = np.sqrt(2.0)

X_A = np.array([[1j, 0], [0, -1j]])
X_B = np.array([[0, 1j], [1j, 0]])
X_C = np.array([[0, 1], [-1, 0]], dtype=complex)
SU2_BASIS = (X_A, X_B, X_C)


@dataclass(frozen=True)
class SU2Element:
    """The matrix ``[[alpha, beta], [-conj(beta), conj(alpha)]]``."""

    alpha: complex
    beta: complex

    def __post_init__(self):
        n = abs(self.alpha) ** 2 + abs(self.beta) ** 2
        if abs(n - 1.0) > ALG_TOL:
            raise ValueError(f"|alpha|^2 + |beta|^2 = {n!r}, expected 1")

    @classmethod
    def identity(cls) -> "SU2Element":
        return cls(1.0 + 0j, 0j)

    @classmethod
    def from_matrix(cls, m) -> "SU2Element":
        m = np.asarray(m, dtype=complex)
        return cls(complex(m[0, 0]), complex(m[0, 1]))

    @classmethod
    def random(cls, rng: np.random.Generator) -> "SU2Element":
        q = rng.normal(size=4)
        q /= np.linalg.norm(q)
        return cls(complex(q[0], q[1]), complex(q[2], q[3]))

    def matrix(self) -> np.ndarray:
        a, b = self.alpha, self.beta
        return np.array([[a, b], [-np.conj(b), np.conj(a)]])

    def inverse(self) -> "SU2Element":
        return SU2Element(np.conj(self.alpha), -self.beta)

    def scaled_phase(self, nu: float) -> "SU2Element":
        """``(e^{i nu} alpha, e^{i nu} beta)``, the multiplication by diag(e^{i nu}, e^{-i nu}) on the left."""
        c = np.exp(1j * nu)
        return SU2Element(c * self.alpha, c * self.beta)


def su2_mul(a: SU2Element, b: SU2Element) -> SU2Element:
    return SU2Element.from_matrix(a.matrix() @ b.matrix())


def rep3(a: SU2Element) -> np.ndarray:
    """Matrix of ``p -> p((x, y) A)`` on (u0, u1, u2)."""
    al, be = a.alpha, a.beta
    ac, bc = np.conj(al), np.conj(be)
    return np.array([
        [ac**2, -SQRT2 * ac * bc, bc**2],
        [SQRT2 * ac * be, abs(al) ** 2 - abs(be) ** 2, -SQRT2 * al * bc],
        [be**2, SQRT2 * al * be, al**2],
    ])


def act_poly(a: SU2Element, u) -> np.ndarray:
    return rep3(a) @ np.asarray(u, dtype=complex)


def eval_poly(u, x, y):
    """Evaluate the quadratic form with coefficients ``u`` at (x, y)."""
    return u[0] * y**2 + u[1] * SQRT2 * x * y + u[2] * x**2


def rep3_derivative(xi) -> np.ndarray:
    """d/dt rep3(exp(t xi)) at t = 0, for xi in su(2).

    Differentiates the entries of :func:`rep3` at the identity using
    alpha'(0) = xi[0, 0] and beta'(0) = xi[0, 1].
    """
    xi = np.asarray(xi, dtype=complex)
    da, db = xi[0, 0], xi[0, 1]
    return np.array([
        [2 * np.conj(da), -SQRT2 * np.conj(db), 0],
        [SQRT2 * db, 2 * da.real, -SQRT2 * np.conj(db)],
        [0, SQRT2 * db, 2 * da],
    ])


REP3_GENERATORS = tuple(rep3_derivative(x) for x in SU2_BASIS)

CHIANG_SEED = np.array([1.0, 0.0, 1.0], dtype=complex)


def chiang_vector(a: SU2Element) -> np.ndarray:
    al, be = a.alpha, a.beta
    ac, bc = np.conj(al), np.conj(be)
    return np.array([ac**2 + bc**2, SQRT2 * (ac * be - al * bc), al**2 + be**2])


def chiang_point(a: SU2Element) -> ProjPoint:
    """Point of the orbit of [1:0:1] reached by ``a``."""
    return canonicalize(chiang_vector(a))


def mu_tilde(u) -> np.ndarray:
    """su(2)* moment map on quadratic forms, against the basis X_A, X_B, X_C."""
    u0, u1, u2 = np.asarray(u, dtype=complex)
    c = u0 * np.conj(u1) + u1 * np.conj(u2)
    return np.array([abs(u0) ** 2 - abs(u2) ** 2, -SQRT2 * c.real, -SQRT2 * c.imag])


def mu_general(u, xi_rep) -> float:
    """Moment pairing ``(i/2) z* X z`` of a unitary representation.

    ``xi_rep`` is the (anti-hermitian) matrix representing a Lie algebra
    element.
    """
    x = np.asarray(xi_rep, dtype=complex)
    if np.max(np.abs(x + x.conj().T), initial=0.0) > ALG_TOL:
        raise ValueError("matrix is not anti-hermitian")
    z = np.asarray(u, dtype=complex)
    return float((0.5j * np.vdot(z, x @ z)).real)


def mu_symplectic(u, xi_rep) -> float:
    """General symplectic-representation pairing ``(i/4)(z*Xz - z*X*z)``."""
    x = np.asarray(xi_rep, dtype=complex)
    z = np.asarray(u, dtype=complex)
    return float((0.25j * (np.vdot(z, x @ z) - np.vdot(z, x.conj().T @ z))).real)


def mu_cp2(p: ProjPoint) -> np.ndarray:
    return mu_tilde(p.rep)


def stabilizer_elements(theta: float) -> tuple[SU2Element, SU2Element]:
    c, s = np.cos(theta), np.sin(theta)
    return SU2Element(complex(c), complex(s)), SU2Element(1j * c, 1j * s)
