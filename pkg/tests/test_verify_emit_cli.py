import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chiangrp2 import cli, emit, verify
from chiangrp2.lagrangian import SpherePoint, chiang_from_sphere, tangent_frame
from chiangrp2.projective_core import canonicalize, fs_form, point, proj_eq, tangent_at
from chiangrp2.reduction import mu_red
from chiangrp2.verify import CheckReport, check_seed, dumps, loads


# --- report plumbing ---------------------------------------------------------

def make_report(**kw):
    base = dict(check_id="X", paper_ref="claim", n_samples=10, seed=1, max_residual=0.1,
                tolerance=0.2, passed=True, details={"comparison": "le"})
    base.update(kw)
    return CheckReport(**base)


@settings(max_examples=200, deadline=None)
@given(st.floats(allow_nan=False, allow_infinity=False), st.floats(min_value=0, allow_nan=False,
                                                                    allow_infinity=False))
def test_report_json_round_trip_is_lossless(res, tol):
    r = make_report(max_residual=res, tolerance=tol)
    doc = loads(dumps(verify.suite_document([r], 3, 100)))
    back = CheckReport.from_dict(doc["checks"][0])
    assert back == r
    assert back.max_residual == res  # bit-exact via 17 significant digits


def test_infinite_residual_round_trips():
    r = make_report(max_residual=math.inf, passed=False)
    assert CheckReport.from_dict(loads(dumps({"checks": [r.to_dict()]}))["checks"][0]) == r


def test_dumps_is_valid_json():
    doc = verify.suite_document([make_report()], 42, 100)
    parsed = json.loads(dumps(doc))
    assert set(parsed) == {"suite_version", "seed", "samples", "checks"}
    assert set(parsed["checks"][0]) == {"check_id", "paper_ref", "n_samples", "seed", "max_residual",
                                        "tolerance", "pass", "details"}


def test_dumps_rejects_unknown_types():
    with pytest.raises(TypeError):
        dumps({"x": object()})


@pytest.mark.parametrize("mode, value, tol, expected, ok", [
    (verify.LE, 1e-9, 1e-8, None, True),
    (verify.LE, 1e-7, 1e-8, None, False),
    (verify.GT, 0.5, 1e-2, None, True),
    (verify.GT, 1e-15, 1e-2, None, False),
    (verify.COUNT, 200, 0, 200, True),
    (verify.COUNT, 199, 0, 200, False),
])
def test_pass_rule(mode, value, tol, expected, ok):
    r = verify._report("id", "claim", 10, 1, value, tol, mode, expected)
    assert r.passed is ok
    assert r.details["comparison"] == mode


def test_check_seeds_differ_by_id_and_master():
    assert check_seed(42, "a") == check_seed(42, "a")
    assert check_seed(42, "a") != check_seed(42, "b")
    assert check_seed(42, "a") != check_seed(7, "a")


def test_catalog_covers_all_suite_criteria():
    assert sorted({c for c, _ in verify.CATALOG}) == list(range(1, 13))


def test_run_suite_rejects_small_n():
    with pytest.raises(ValueError):
        verify.run_suite(42, 50)


def test_crashing_check_is_recorded(monkeypatch):
    def boom(**_):
        raise RuntimeError("kaput")

    monkeypatch.setattr(verify, "CATALOG", [(1, boom)])
    (rep,) = verify.run_suite(42, 100)
    assert not rep.passed and "kaput" in rep.details["error"]


# --- emitters ------------------------------------------------------------------

def test_chiang_samples(tmp_path):
    rows = emit.read_csv(emit.emit_samples("chiang", 100, 42, tmp_path / "c.csv"))
    assert len(rows) == 100
    for r in rows:
        assert abs(r["mu1"] + 2 * r["mu2"] + 0.5) <= 1e-12
        z = canonicalize([complex(r[f"re_z{i}"], r[f"im_z{i}"]) for i in range(3)])
        assert proj_eq(z, chiang_from_sphere(SpherePoint(r["X"], r["Y"], r["Z"])), 1e-12)


def test_csv_header(tmp_path):
    path = emit.emit_samples("level-slice", 10, 1, tmp_path / "s.csv")
    lines = path.read_text().splitlines()
    assert lines[0].startswith("#") and "antipodes" in lines[0]
    assert lines[1].split(",") == emit.CP2_COLUMNS


def test_reduced_circle_samples(tmp_path):
    rows = emit.read_csv(emit.emit_samples("reduced-circle", 200, 3, tmp_path / "r.csv"))
    assert len(rows) == 200
    assert max(abs(r["mu_red"] + 1 / 6) for r in rows) <= 1e-10


def test_lifted_torus_samples_are_isotropic(tmp_path):
    rows = emit.read_csv(emit.emit_samples("lifted-torus", 50, 4, tmp_path / "t.csv"))
    for r in rows:
        assert abs(r["mu2"] + 1 / 6) <= 1e-12
        z = np.array([complex(r[f"re_z{i}"], r[f"im_z{i}"]) for i in range(3)])
        assert abs(abs(z[0]) - abs(z[1])) <= 1e-12
        # spot check: along the great circle and along the fibre
        p = canonicalize(z)
        along = tangent_at(p, z, [0, 1j * z[1], 0])
        fibre = tangent_at(p, z, [0, 0, 1j * z[2]])
        assert abs(fs_form(along, fibre)) <= 1e-12


def test_reduce_pipeline(tmp_path):
    src = emit.emit_samples("level-slice", 64, 5, tmp_path / "slice.csv")
    out = emit.reduce_csv(src, -1 / 6, tmp_path / "red.csv")
    rows = emit.read_csv(out)
    assert len(rows) == 64
    for r in rows:
        w = point(complex(r["re_w0"], r["im_w0"]), complex(r["re_w1"], r["im_w1"]))
        assert abs(mu_red(w, -1 / 6) + 1 / 6) <= 1e-10
        assert r["mu_red"] == pytest.approx(-1 / 6, abs=1e-10)


def test_reduce_rejects_off_level_rows(tmp_path):
    src = emit.emit_samples("chiang", 20, 6, tmp_path / "c.csv")
    with pytest.raises(ValueError, match="row"):
        emit.reduce_csv(src, -1 / 6, tmp_path / "bad.csv")


def test_unknown_sample_kind(tmp_path):
    with pytest.raises(ValueError):
        emit.emit_samples("moebius", 5, 1, tmp_path / "x.csv")


def test_write_error_has_path_context(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    with pytest.raises(OSError, match="file"):
        emit.emit_samples("chiang", 5, 1, blocker / "sub" / "x.csv")


def _figure_rows(path):
    import csv
    with path.open() as fh:
        return list(csv.reader(fh))[1:]


def test_polytope_figure(tmp_path):
    svg, companion = emit.emit_figure(emit.FigureSpec("polytope", -1 / 6), tmp_path / "poly.svg")
    text = svg.read_text()
    assert text.startswith("<svg") and "<polygon" in text and "stroke-dasharray" in text
    ends = [(float(a), float(b)) for name, a, b in _figure_rows(companion) if name == "median_endpoint"]
    assert ends == [(0.0, -0.25), (-0.5, 0.0)]
    lvl = [float(b) for name, a, b in _figure_rows(companion) if name == "level_endpoint"]
    assert lvl == [pytest.approx(-1 / 6)] * 2


def test_reduced_segment_figure(tmp_path):
    _, companion = emit.emit_figure(emit.FigureSpec("reduced-segment"), tmp_path / "seg.svg")
    vals = {name: float(a) for name, a, _ in _figure_rows(companion) if name != "endpoint"}
    ends = sorted(float(a) for name, a, _ in _figure_rows(companion) if name == "endpoint")
    assert ends == [pytest.approx(-1 / 3), 0.0]
    assert vals["midpoint"] == pytest.approx(-1 / 6)
    assert vals["pushed_circle"] == pytest.approx(-1 / 6)


def test_level_slice_figure(tmp_path):
    _, companion = emit.emit_figure(emit.FigureSpec("level-slice"), tmp_path / "ls.svg")
    vals = {name: float(a) for name, a, _ in _figure_rows(companion)}
    assert vals["level_circle_radius_squared"] == pytest.approx(2 / 3)


@pytest.mark.parametrize("kind, level", [("cube", -0.1), ("polytope", -0.6), ("level-slice", -0.3)])
def test_figure_spec_validation(kind, level):
    with pytest.raises(ValueError):
        emit.FigureSpec(kind, level)


# --- CLI -------------------------------------------------------------------------

def test_cli_sample_and_reduce(tmp_path, capsys):
    src = tmp_path / "s.csv"
    assert cli.main(["sample", "level-slice", "--n", "16", "--level=-1/6", "--out", str(src)]) == 0
    dst = tmp_path / "r.csv"
    assert cli.main(["reduce", "--in", str(src), "--level=-1/6", "--out", str(dst)]) == 0
    assert len(emit.read_csv(dst)) == 16


def test_cli_reduce_error_exit(tmp_path, capsys):
    src = tmp_path / "c.csv"
    cli.main(["sample", "chiang", "--n", "5", "--out", str(src)])
    assert cli.main(["reduce", "--in", str(src), "--out", str(tmp_path / "x.csv")]) == 2
    assert "error" in capsys.readouterr().err


def test_cli_figure(tmp_path, capsys):
    assert cli.main(["figure", "polytope", "--out", str(tmp_path / "p.svg")]) == 0
    assert (tmp_path / "p.csv").exists()


def test_cli_orbits(capsys):
    q = chiang_from_sphere(SpherePoint.from_vector(np.array([0.5, 0.3, 0.6]) / np.linalg.norm([0.5, 0.3, 0.6])))
    arg = ",".join(f"{z.real:.17g}{z.imag:+.17g}j" for z in q.rep)
    assert cli.main(["orbits", "--lagrangian", "chiang", "--action", "2", f"--point={arg}"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["count"] == 1 and doc["action"] == "second"


def test_cli_point_parsing():
    p = cli._point("1, 2i, 0.5-1j")
    assert proj_eq(p, point(1, 2j, 0.5 - 1j), 1e-15)
    with pytest.raises(Exception):
        cli._point("1,2")


@pytest.mark.parametrize("s, v", [("-1/6", -1 / 6), ("-0.2", -0.2), ("1/4", 0.25)])
def test_cli_level_parsing(s, v):
    assert cli._level(s) == pytest.approx(v)


def test_cli_verify_exit_code_and_json(tmp_path, monkeypatch, capsys):
    good = lambda **kw: verify._report("ok", "c", kw["n"], kw["seed"], 0.0, 1.0)  # noqa: E731
    bad = lambda **kw: verify._report("bad", "c", kw["n"], kw["seed"], 2.0, 1.0)  # noqa: E731
    monkeypatch.setattr(verify, "CATALOG", [(1, good)])
    out = tmp_path / "r.json"
    assert cli.main(["verify", "--samples", "100", "--out", str(out)]) == 0
    assert loads(out.read_text())["checks"][0]["pass"] is True
    monkeypatch.setattr(verify, "CATALOG", [(1, good), (2, bad)])
    assert cli.main(["verify", "--samples", "100"]) == 1


def test_tangent_frame_smoke():
    u, v = tangent_frame(SpherePoint(0.6, 0.0, 0.8))
    assert abs(fs_form(u, v)) <= 1e-12
