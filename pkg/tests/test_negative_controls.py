"""Perturbed fixtures that each check must reject, guarding against vacuous passes."""

import math

import numpy as np
import pytest

from chiangrp2 import lagrangian as lag
from chiangrp2 import reduction as red
from chiangrp2.lagrangian import NO_CONJ, STANDARD_RP2, SpherePoint
from chiangrp2.projective_core import canonicalize, fs_form, horizontal, point, proj_dist, proj_eq, tangent_at
from chiangrp2.su2 import REP3_GENERATORS, SQRT2, SU2Element, chiang_point, mu_cp2, mu_general, mu_tilde, rep3
from chiangrp2.toric import circle_act, generator, moment, moment_array, moment_sign

SS = lag.sphere_samples(2000, 42)


def test_isotropy_rejects_non_lagrangian_sphere():
    assert lag.isotropy_residual(NO_CONJ, 2000, 42) > 1e-2


def test_isotropy_rejects_moment_level_surface():
    # the coordinate sphere [z0 : z1 : 0] is symplectic, not isotropic
    worst = 0.0
    for s in SS[:200]:
        rep = np.array([s[0] + 1j * s[1], s[2], 0])
        p = canonicalize(rep)
        u = tangent_at(p, rep, [1, 0, 0])
        v = tangent_at(p, rep, [1j, 0, 0])
        worst = max(worst, abs(fs_form(u, v)))
    assert worst > 1e-2


def test_mu2_identity_rejects_wrong_coefficient():
    mu = moment_array(lag.chiang_array(SS))[:, 1]
    assert np.max(np.abs(mu + (SS[:, 0] ** 2 + SS[:, 1] ** 2) / 3)) > 1e-2


def test_median_rejects_standard_rp2():
    mu = moment_array(SS.astype(complex))
    assert np.max(np.abs(mu[:, 0] + 2 * mu[:, 1] + 0.5)) > 1e-2


def test_transversality_degenerates_near_top():
    assert lag.transversality_margin(-1e-10, 64) < 1e-4


def test_one_to_one_rejects_standard_rp2():
    y = np.array([0.6, 0.5, 0.4])
    assert lag.orbit_intersections(STANDARD_RP2, "2", lag.standard_rp2(*y)).count != 1


def test_injectivity_counts_antipodal_duplicates():
    pts = lag.level_circle(-1 / 6, 50, both_sheets=False)
    ws = red.project_array(lag.chiang_array(np.vstack([pts, -pts])))
    h = np.abs(ws.conj() @ ws.T)
    iu = np.triu_indices(len(ws), k=1)
    assert np.count_nonzero(1 - h[iu] <= 1e-9) == 50


def test_contrast_count_rejects_chiang_second():
    s = SpherePoint.from_vector(np.array([0.5, 0.3, 0.6]) / np.linalg.norm([0.5, 0.3, 0.6]))
    assert lag.orbit_intersections(lag.CHIANG, "2", lag.chiang_from_sphere(s)).count != 2


def test_great_circle_rejects_other_level():
    ws = red.push_chiang_array(-0.2, 200)
    assert np.max(np.abs(red.mu_red_array(ws, -0.2) + 1 / 6)) > 1e-2
    assert np.max(np.abs(np.abs(ws[:, 0]) - np.abs(ws[:, 1]))) > 1e-2


def test_coverage_rejects_sparse_sampling():
    assert red.max_angular_gap(red.push_chiang(-1 / 6, 100)) >= 0.02


def test_equal_halves_rejects_other_level():
    lo, hi = red.mu_red_range(-0.2)
    mark = red.pushed_level(-0.2)
    assert abs((mark - lo) - (hi - mark)) > 1e-2


def test_reduction_scaling_rejects_wrong_level():
    assert abs(red.reduced_area(-0.2) - 2 * math.pi / 3) > 1e-2


def test_rep3_unitarity_rejects_unscaled_basis():
    # coefficients in the (y^2, xy, x^2) basis: the representation is no longer unitary
    d = np.diag([1, SQRT2, 1])
    a = SU2Element(0.6, 0.8j)
    m = d @ rep3(a) @ np.linalg.inv(d)
    assert np.max(np.abs(m.conj().T @ m - np.eye(3))) > 1e-2


def test_orbit_closed_form_rejects_conjugation_dropped():
    a = SU2Element.random(np.random.default_rng(3))
    al, be = a.alpha, a.beta
    # outer coordinates without the complex conjugates
    wrong = canonicalize([al**2 + be**2, SQRT2 * (np.conj(al) * be - al * np.conj(be)), al**2 + be**2])
    assert not proj_eq(wrong, chiang_point(a), 1e-6)


def test_stabilizer_rejects_non_stabilizer():
    s = 1 / math.sqrt(2)
    assert not proj_eq(chiang_point(SU2Element(s, 1j * s)), point(1, 0, 1), 1e-6)


def test_mu_general_rejects_wrong_generator_sign():
    rng = np.random.default_rng(1)
    u = rng.normal(size=3) + 1j * rng.normal(size=3)
    got = [mu_general(u, -g) for g in REP3_GENERATORS]
    assert np.max(np.abs(np.subtract(got, mu_tilde(u)))) > 1e-2


def test_mu_cp2_rejects_off_orbit_points():
    vals = [np.max(np.abs(mu_cp2(lag.standard_rp2(*s)))) for s in SS[:100]]
    assert max(vals) > 1e-2


def test_hamiltonian_rejects_flipped_sign():
    p = point(1.0, 0.5 + 0.2j, -0.3 + 0.4j)
    v = horizontal(p, [0.2, 0.1 - 0.3j, 0.6j])
    h = 1e-5
    dmu = (moment(canonicalize(p.rep + h * v.direction)).mu2
           - moment(canonicalize(p.rep - h * v.direction)).mu2) / (2 * h)
    assert abs(dmu + moment_sign() * fs_form(generator("2", p), v)) > 1e-2


def test_double_cover_rejects_folded_map():
    # taking abs(X) folds the sphere, so non-antipodal pairs collide
    s, t = np.array([0.6, 0.0, 0.8]), np.array([-0.6, 0.0, 0.8])
    f = lambda v: lag.chiang_from_sphere(SpherePoint(abs(v[0]), v[1], v[2]))  # noqa: E731
    assert proj_eq(f(s), f(t), 1e-9)
    assert min(np.linalg.norm(s - t), np.linalg.norm(s + t)) > 0.1


def test_tilted_invariance_rejects_standard_rp2():
    rng = np.random.default_rng(2)
    worst = 0.0
    for s in SS[:100]:
        q = circle_act("tilted", rng.uniform(0.5, 2.5), lag.standard_rp2(*s))
        worst = max(worst, float(np.max(np.abs(q.rep.imag))))
    assert worst > 1e-2


def test_lift_isotropy_rejects_wrong_fibre():
    # use the first circle as the fibre over a meridian: omega(X1, v) = d mu1(v) != 0
    worst = 0.0
    for t in np.linspace(0.2, 1.3, 20):
        rep = red.lift_point([math.cos(t), math.sin(t)], -1 / 6)
        p = canonicalize(rep)
        s = math.sqrt(2 / 3)
        along = tangent_at(p, rep, [-s * math.sin(t), s * math.cos(t), 0])
        worst = max(worst, abs(fs_form(along, generator("1", p))))
    assert worst > 1e-2


def test_project_lift_rejects_shifted_lift():
    surf = red.lift_circle(red.great_circle(32), -1 / 6, m=4)
    surf.points[..., 1] *= np.exp(0.1j)
    assert surf.project_residual() > 1e-2


def test_proj_dist_separates_distinct_points():
    assert proj_dist(point(1, 0, 1), point(1, 0, -1)) == pytest.approx(1.0)
