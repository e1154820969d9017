"""Deterministic verification suite producing :class:`CheckReport` records."""

from __future__ import annotations

import json
import math
import zlib
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from . import lagrangian as lag
from . import reduction as red
from . import su2, toric
from .projective_core import (
    GEOM_TOL,
    canonicalize,
    fs_form,
    horizontal,
    point,
    proj_dist,
    total_volume,
)

SUITE_VERSION = "1.0.0"

# comparison modes: "le" residual <= tol; "gt" residual > tol (negative
# controls); "count" observed count == expected count
LE, GT, COUNT = "le", "gt", "count"


@dataclass
class CheckReport:
    check_id: str
    paper_ref: str
    n_samples: int
    seed: int
    max_residual: float
    tolerance: float
    passed: bool
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "check_id": self.check_id,
            "paper_ref": self.paper_ref,
            "n_samples": self.n_samples,
            "seed": self.seed,
            "max_residual": self.max_residual,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "details": self.details,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CheckReport":
        return cls(d["check_id"], d["paper_ref"], int(d["n_samples"]), int(d["seed"]),
                   float(d["max_residual"]), float(d["tolerance"]), bool(d["pass"]),
                   dict(d.get("details", {})))


def _report(check_id, claim, n, seed, value, tol, mode=LE, expected=None, **details) -> CheckReport:
    if mode == LE:
        ok = bool(value <= tol)
    elif mode == GT:
        ok = bool(value > tol)
    elif mode == COUNT:
        ok = int(value) == int(expected)
        details = {"expected_count": int(expected), **details}
    else:
        raise ValueError(mode)
    return CheckReport(check_id, claim, int(n), int(seed), float(value), float(tol), ok,
                       {"comparison": mode, **details})


def check_seed(master: int, check_id: str) -> int:
    """Per-check seed derived from the master seed and the check id."""
    ss = np.random.SeedSequence([int(master), zlib.crc32(check_id.encode())])
    return int(ss.generate_state(1)[0])


DEFAULT_TOLERANCES = {
    "isotropy": 1e-8,
    "negative_control": 1e-2,
    "algebraic": 1e-12,
    "hull": 1e-3,
    "transversality": 1e-9,
    "great_circle": 1e-10,
    "gap": 0.02,
    "finite_difference": 1e-6,
    "norm_equivariance": 1e-10,
}


# --- individual checks --------------------------------------------------------

def _isotropy(seed, n, tol, **_):
    sid = check_seed(seed, "C01_lagrangian_isotropy")
    vals = {
        "chiang": lag.isotropy_residual(lag.CHIANG, n, sid),
        "standard_rp2": lag.isotropy_residual(lag.STANDARD_RP2, n, sid),
        "clifford_torus": lag.isotropy_residual(lag.CLIFFORD_TORUS, n, sid),
    }
    control = lag.isotropy_residual(lag.NO_CONJ, min(n, 1000), sid)
    return _report("C01_lagrangian_isotropy", "L2 is Lagrangian (omega vanishes on tangent frames)",
                   n, sid, max(vals.values()), tol["isotropy"], residuals=vals,
                   control_no_conjugation=control)


def _drop_i_control(seed, n, tol, **_):
    sid = check_seed(seed, "C01_negative_control_drop_i")
    r = lag.isotropy_residual(lag.DROP_I, min(n, 1000), sid)
    return _report("C01_negative_control_drop_i",
                   "isotropy check rejects the fixture z1 = sqrt(2) Z (factor i dropped)",
                   min(n, 1000), sid, r, tol["negative_control"], GT,
                   note="this fixture is a unitary image of the real RP^2, hence Lagrangian")


def _mu2_identity(seed, n, tol, **_):
    sid = check_seed(seed, "C02_mu2_identity")
    ss = lag.sphere_samples(n, sid)
    mu = toric.moment_array(lag.chiang_array(ss))
    r = np.abs(mu[:, 1] + 0.25 * (ss[:, 0] ** 2 + ss[:, 1] ** 2))
    return _report("C02_mu2_identity", "mu2 = -(X^2 + Y^2)/4 on L2", n, sid, r.max(), tol["algebraic"])


def _median(seed, n, tol, **_):
    sid = check_seed(seed, "C03_median_segment")
    rep = lag.moment_image_residual(n, sid)
    e0 = abs(toric.moment(lag.chiang_from_sphere(lag.SpherePoint(1.0, 0.0, 0.0))).mu2 + 0.25)
    e1 = abs(toric.moment(lag.chiang_from_sphere(lag.SpherePoint(0.0, 0.0, 1.0))).mu2)
    others = lag.median_residuals(n, sid)
    value = max(rep.residual, e0, e1, *others.values())
    return _report("C03_median_segment", "moment image of L2 lies on mu1 + 2 mu2 = -1/2",
                   n, sid, value, tol["algebraic"], line_residual=rep.residual,
                   endpoint_minus_quarter=e0, endpoint_zero=e1, shuffled_medians=others)


def _median_hull(seed, n, tol, **_):
    sid = check_seed(seed, "C03_median_segment")
    rep = lag.moment_image_residual(n, sid)
    value = max(abs(rep.mu2_min + 0.25), abs(rep.mu2_max))
    return _report("C03_median_hull", "sampled mu2 range on L2 fills [-1/4, 0]", n, sid, value,
                   tol["hull"], mu2_min=rep.mu2_min, mu2_max=rep.mu2_max)


def _transversality(seed, n, tol, level, **_):
    m = lag.transversality_margin(level, 1000)
    exact = lag.transversality_closed_form(level)
    return _report("C04_transversality", "L2 meets mu2^{-1}(a) transversally; margin = sqrt(-4a)/2",
                   1000, seed, abs(m - exact), tol["transversality"], margin=m, closed_form=exact,
                   level=level)


def _transversality_levels(seed, n, tol, **_):
    levels = np.linspace(-0.25, 0.0, 22)[1:-1]
    margins = [lag.transversality_margin(float(a), 200) for a in levels]
    positive = sum(m > 0 for m in margins)
    return _report("C04_transversality_levels", "transversality margin positive on 20 levels in (-1/4, 0)",
                   20, seed, positive, 0, COUNT, expected=20, min_margin=min(margins))


def _orbit_bases_on_level(rng, level, count):
    r, zc = math.sqrt(-4 * level), math.sqrt(1 + 4 * level)
    out = []
    for _ in range(count):
        phi = rng.uniform(0, 2 * math.pi)
        z = zc * rng.choice([-1.0, 1.0])
        out.append(lag.SpherePoint.from_vector([r * math.cos(phi), r * math.sin(phi), z]))
    return out


def _count_orbits(check_id, claim, lag_id, action, bases, expected, seed, geom_tol):
    counts, worst = [], 0.0
    for q in bases:
        rep = lag.orbit_intersections(lag_id, action, q, geom_tol)
        counts.append(rep.count)
        worst = max([worst, *rep.residuals])
    good = sum(c == expected for c in counts)
    hist = {str(k): counts.count(k) for k in sorted(set(counts))}
    return _report(check_id, claim, len(bases), seed, good, 0, COUNT, expected=len(bases),
                   per_orbit_expected=expected, count_histogram=hist, max_solver_residual=worst)


def _one_to_one(seed, n, tol, level, geom_tol, **_):
    sid = check_seed(seed, "C05_one_to_one_orbits")
    rng = np.random.default_rng(sid)
    bases = [lag.chiang_from_sphere(s) for s in _orbit_bases_on_level(rng, level, 200)]
    return _count_orbits("C05_one_to_one_orbits",
                         "L2 meets each interior orbit of the second action at most once",
                         lag.CHIANG, toric.CircleAction.SECOND, bases, 1, sid, geom_tol)


def _injectivity(seed, n, tol, level, geom_tol, **_):
    rep = red.injectivity_check(level, 2000, geom_tol)
    return _report("C05_injectivity", "projections of L2 level samples are pairwise distinct",
                   2000, seed, rep.collisions, 0, COUNT, expected=0, min_distance=rep.min_distance)


def _contrast_rp2(seed, n, tol, geom_tol, **_):
    sid = check_seed(seed, "C06_rp2_second_double")
    rng = np.random.default_rng(sid)
    bases = []
    while len(bases) < 200:
        y = lag.uniform_sphere(1, rng)[0]
        if np.min(np.abs(y)) > 0.1:
            bases.append(lag.standard_rp2(*y))
    return _count_orbits("C06_rp2_second_double",
                         "standard RP^2 meets interior orbits of the second action twice",
                         lag.STANDARD_RP2, toric.CircleAction.SECOND, bases, 2, sid, geom_tol)


def _contrast_first(seed, n, tol, geom_tol, **_):
    sid = check_seed(seed, "C06_chiang_first_double")
    rng = np.random.default_rng(sid)
    bases = []
    while len(bases) < 200:
        s = lag.uniform_sphere(1, rng)[0]
        if abs(s[2]) > 0.1 and s[0] ** 2 + s[1] ** 2 > 0.01:
            bases.append(lag.chiang_from_sphere(lag.SpherePoint.from_vector(s)))
    return _count_orbits("C06_chiang_first_double",
                         "L2 meets interior orbits of the first action twice, at (X, Y, +-Z)",
                         lag.CHIANG, toric.CircleAction.FIRST, bases, 2, sid, geom_tol)


def _great_circle(seed, n, tol, level, **_):
    ws = red.push_chiang_array(level, 2000)
    r = np.abs(red.mu_red_array(ws, level) + 1 / 6)
    return _report("C07_great_circle", "L2 pushes down to the middle level mu_red = -1/6",
                   2000, seed, r.max(), tol["great_circle"], level=level)


def _coverage(seed, n, tol, level, **_):
    ws = red.push_chiang_array(level, 2000)
    return _report("C07_circle_coverage", "pushed-down samples close up into a loop",
                   2000, seed, red.max_angular_gap(ws), tol["gap"])


def _equal_halves(seed, n, tol, **_):
    a = Fraction(-1, 6)
    lo, hi = red.mu_red_range(a)
    mid = red.pushed_level(a)
    d = abs((mid - lo) - (hi - mid)) + abs((hi - mid) - Fraction(1, 6))
    return _report("C07_equal_halves", "the great circle cuts the mu_red range into halves of length 1/6",
                   1, seed, float(d), 0.0, range=[str(lo), str(hi)], circle_level=str(mid))


def _scaling(seed, n, tol, **_):
    coeff = red.area_coefficient(Fraction(-1, 6))
    vol_coeff = 4 * Fraction(1, 8)
    d = abs(coeff - Fraction(2, 3)) + abs(vol_coeff - Fraction(1, 2))
    return _report("C08_reduction_scaling", "reduced area 2 pi/3 at a = -1/6; total volume pi^2/2",
                   1, seed, float(d), 0.0, reduced_area=red.reduced_area(Fraction(-1, 6)),
                   total_volume=total_volume(), polytope_area=toric.polytope().area)


def _rep3_unitarity(seed, n, tol, **_):
    sid = check_seed(seed, "C09_rep3_unitarity")
    rng = np.random.default_rng(sid)
    worst = 0.0
    for _ in range(500):
        m = su2.rep3(su2.SU2Element.random(rng))
        worst = max(worst, float(np.abs(m.conj().T @ m - np.eye(3)).max()))
    return _report("C09_rep3_unitarity", "the 3-dimensional representation is unitary",
                   500, sid, worst, tol["algebraic"])


def _rep3_anti(seed, n, tol, **_):
    sid = check_seed(seed, "C09_rep3_antihomomorphism")
    rng = np.random.default_rng(sid)
    anti, hom = 0.0, 0.0
    for _ in range(500):
        a, b = su2.SU2Element.random(rng), su2.SU2Element.random(rng)
        ab = su2.rep3(su2.su2_mul(a, b))
        anti = max(anti, float(np.abs(ab - su2.rep3(b) @ su2.rep3(a)).max()))
        hom = max(hom, float(np.abs(ab - su2.rep3(a) @ su2.rep3(b)).max()))
    return _report("C09_rep3_antihomomorphism", "rep3(AB) = rep3(B) rep3(A)",
                   500, sid, anti, tol["algebraic"], homomorphism_residual=hom,
                   note="p -> p((x, y) A) satisfies rep3(AB) = rep3(A) rep3(B)")


def _orbit_closed_form(seed, n, tol, **_):
    sid = check_seed(seed, "C09_orbit_closed_form")
    rng = np.random.default_rng(sid)
    worst = 0.0
    for _ in range(1000):
        a = su2.SU2Element.random(rng)
        p = su2.chiang_point(a)
        worst = max(worst, proj_dist(p, su2.rep3(a) @ su2.CHIANG_SEED),
                    proj_dist(p, lag.chiang_from_sphere(lag.sphere_from_su2(a))))
    return _report("C09_orbit_closed_form", "L2 is the SU(2)-orbit of [1:0:1]", 1000, sid, worst,
                   tol["algebraic"])


def _stabilizer(seed, n, tol, **_):
    base = point(1, 0, 1)
    worst = 0.0
    for theta in np.linspace(0, 2 * np.pi, 50, endpoint=False):
        for g in su2.stabilizer_elements(theta):
            worst = max(worst, proj_dist(su2.chiang_point(g), base))
    return _report("C09_stabilizer", "both stabilizer components fix [1:0:1]", 100, seed, worst,
                   tol["algebraic"], n_theta=50)


def _mu_general(seed, n, tol, **_):
    sid = check_seed(seed, "C10_mu_general")
    rng = np.random.default_rng(sid)
    worst = 0.0
    for _ in range(500):
        u = rng.normal(size=3) + 1j * rng.normal(size=3)
        pair = np.array([su2.mu_general(u, g) for g in su2.REP3_GENERATORS])
        worst = max(worst, float(np.abs(pair - su2.mu_tilde(u)).max()))
    return _report("C10_mu_general", "(i/2) z* X z reproduces the explicit su(2) moment map",
                   500, sid, worst, tol["algebraic"])


def _mu_cp2_vanishing(seed, n, tol, **_):
    sid = check_seed(seed, "C10_mu_cp2_vanishing")
    rng = np.random.default_rng(sid)
    worst = 0.0
    for _ in range(1000):
        worst = max(worst, float(np.abs(su2.mu_cp2(su2.chiang_point(su2.SU2Element.random(rng)))).max()))
    return _report("C10_mu_cp2_vanishing", "L2 lies in the zero level of the su(2) moment map",
                   1000, sid, worst, tol["algebraic"])


def interior_point(rng, floor=0.15):
    while True:
        z = rng.normal(size=3) + 1j * rng.normal(size=3)
        z /= np.linalg.norm(z)
        if np.min(np.abs(z)) > floor:
            return canonicalize(z)


def hamiltonian_residuals(rng, n_points=200):
    """Worst |d mu(v) - s omega(X#, v)| for the toric and su(2) generators."""
    s = toric.moment_sign()
    worst = {"first": 0.0, "second": 0.0, "tilted": 0.0, "su2": 0.0}
    h = 1e-5
    for _ in range(n_points):
        p = interior_point(rng)
        v = horizontal(p, rng.normal(size=3) + 1j * rng.normal(size=3))
        for act in toric.CircleAction:
            dmu, om = toric.hamiltonian_ratio(act, p, v)
            worst[act.value] = max(worst[act.value], abs(dmu - s * om))
        z, d = p.rep, v.direction
        dmu = (su2.mu_tilde((z + h * d) / np.linalg.norm(z + h * d))
               - su2.mu_tilde((z - h * d) / np.linalg.norm(z - h * d))) / (2 * h)
        for k, g in enumerate(su2.REP3_GENERATORS):
            om = fs_form(horizontal(p, g @ z), v)
            worst["su2"] = max(worst["su2"], abs(dmu[k] - s * om))
    return s, worst


def _hamiltonian(seed, n, tol, **_):
    sid = check_seed(seed, "C10_hamiltonian")
    s, worst = hamiltonian_residuals(np.random.default_rng(sid))
    return _report("C10_hamiltonian", "d mu = s * omega(X#, .) for circle and su(2) generators",
                   200, sid, max(worst.values()), tol["finite_difference"], sign=s, per_generator=worst)


def _double_cover(seed, n, tol, geom_tol, **_):
    sid = check_seed(seed, "C11_double_cover")
    rep = lag.double_cover_check(1000, sid, geom_tol)
    bad = rep.false_matches + int(rep.antipode_residual > tol["algebraic"])
    return _report("C11_double_cover", "the sphere chart identifies exactly antipodal points",
                   1000, sid, bad, 0, COUNT, expected=0, antipode_residual=rep.antipode_residual,
                   false_matches=rep.false_matches)


def _tilted(seed, n, tol, **_):
    sid = check_seed(seed, "C11_tilted_invariance")
    r = lag.tilted_invariance_residual(n, sid)
    return _report("C11_tilted_invariance", "L2 is invariant under the tilted circle action", n, sid, r,
                   tol["algebraic"])


def _lift_isotropy(seed, n, tol, level, **_):
    surf = red.lift_circle(red.great_circle(128), level, 32)
    return _report("C12_lift_isotropy", "the preimage of the great circle is Lagrangian",
                   len(surf), seed, surf.isotropy_residual(), tol["isotropy"], level=level)


def _lift_project(seed, n, tol, level, **_):
    surf = red.lift_circle(red.great_circle(128), level, 32)
    return _report("C12_lift_project_identity", "projecting the lifted torus recovers the curve",
                   len(surf), seed, surf.project_residual(), tol["algebraic"], level=level)


CATALOG: list[tuple[int, Callable]] = [
    (1, _isotropy), (1, _drop_i_control),
    (2, _mu2_identity),
    (3, _median), (3, _median_hull),
    (4, _transversality), (4, _transversality_levels),
    (5, _one_to_one), (5, _injectivity),
    (6, _contrast_rp2), (6, _contrast_first),
    (7, _great_circle), (7, _coverage), (7, _equal_halves),
    (8, _scaling),
    (9, _rep3_unitarity), (9, _rep3_anti), (9, _orbit_closed_form), (9, _stabilizer),
    (10, _mu_general), (10, _mu_cp2_vanishing), (10, _hamiltonian),
    (11, _double_cover), (11, _tilted),
    (12, _lift_isotropy), (12, _lift_project),
]


def run_suite(seed: int = 42, n: int = 20000, tolerances: dict | None = None,
              level: float = -1 / 6, geom_tol: float = GEOM_TOL) -> list[CheckReport]:
    """Run every check; failures are recorded, never raised."""
    if n < 100:
        raise ValueError("n must be >= 100")
    tol = {**DEFAULT_TOLERANCES, **(tolerances or {})}
    reports = []
    for criterion, fn in CATALOG:
        try:
            rep = fn(seed=seed, n=n, tol=tol, level=level, geom_tol=geom_tol)
        except Exception as exc:  # a crashing check is a failed check
            name = fn.__name__.lstrip("_")
            rep = CheckReport(name, "", n, seed, math.inf, 0.0, False,
                              {"error": f"{type(exc).__name__}: {exc}"})
        rep.details["criterion"] = criterion
        reports.append(rep)
    return reports


def suite_document(reports: list[CheckReport], seed: int, n: int) -> dict:
    return {"suite_version": SUITE_VERSION, "seed": seed, "samples": n,
            "checks": [r.to_dict() for r in reports]}


# --- JSON with 17 significant digits ------------------------------------------

def _fmt(x, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(x, bool) or x is None:
        return {True: "true", False: "false", None: "null"}[x]
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x):
            return '"nan"'
        if math.isinf(x):
            return '"inf"' if x > 0 else '"-inf"'
        return format(x, ".17g")
    if isinstance(x, str):
        return json.dumps(x)
    if isinstance(x, dict):
        if not x:
            return "{}"
        items = [f'{pad}{_fmt(str(k), indent, level)}: {_fmt(v, indent, level + 1)}' for k, v in x.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(x, (list, tuple)):
        if not x:
            return "[]"
        items = [pad + _fmt(v, indent, level + 1) for v in x]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(x).__name__}")


def dumps(doc, indent: int = 2) -> str:
    return _fmt(doc, indent, 0) + "\n"


def loads(text: str) -> dict:
    special = {"nan": math.nan, "inf": math.inf, "-inf": -math.inf}
    doc = json.loads(text)
    for c in doc.get("checks", []):
        for key in ("max_residual", "tolerance"):
            if isinstance(c.get(key), str):
                c[key] = special[c[key]]
    return doc
