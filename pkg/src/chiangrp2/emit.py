"""CSV point clouds and SVG figures."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import lagrangian as lag
from . import reduction as red
from .projective_core import canonicalize
from .toric import moment_array

CP2_COLUMNS = ["X", "Y", "Z", "re_z0", "im_z0", "re_z1", "im_z1", "re_z2", "im_z2", "mu1", "mu2"]
CP1_COLUMNS = ["re_w0", "im_w0", "re_w1", "im_w1", "mu_red"]
SAMPLE_KINDS = ("chiang", "level-slice", "reduced-circle", "lifted-torus")
FIGURE_KINDS = ("polytope", "reduced-segment", "level-slice")


def _num(x: float) -> str:
    return format(float(x), ".17g")


def _open(out) -> Path:
    path = Path(out)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create directory for {path}: {exc}") from exc
    return path


def _write_csv(out, header_note: str, columns: list[str], rows) -> Path:
    path = _open(out)
    try:
        with path.open("w", newline="") as fh:
            fh.write(f"# {header_note}\n")
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(columns)
            for row in rows:
                w.writerow([_num(v) for v in row])
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
    return path


def read_csv(path) -> list[dict[str, float]]:
    """Read a CSV written by this module, skipping ``#`` comment lines."""
    path = Path(path)
    try:
        with path.open() as fh:
            lines = [ln for ln in fh if not ln.startswith("#")]
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc}") from exc
    return [{k: float(v) for k, v in row.items()} for row in csv.DictReader(lines)]


def cp2_rows(sphere: np.ndarray | None, zs: np.ndarray):
    mu = moment_array(zs)
    for k, z in enumerate(zs):
        rep = canonicalize(z).rep
        s = sphere[k] if sphere is not None else (math.nan,) * 3
        yield (*s, rep[0].real, rep[0].imag, rep[1].real, rep[1].imag,
               rep[2].real, rep[2].imag, mu[k, 0], mu[k, 1])


def cp1_rows(ws: np.ndarray, a: float):
    mr = red.mu_red_array(ws, a)
    for k, w in enumerate(ws):
        rep = canonicalize(w).rep
        yield (rep[0].real, rep[0].imag, rep[1].real, rep[1].imag, mr[k])


def _level_sheet(a: float, phi: np.ndarray) -> np.ndarray:
    r, zc = math.sqrt(-4 * a), math.sqrt(1 + 4 * a)
    return np.stack([r * np.cos(phi), r * np.sin(phi), np.full(len(phi), zc)], axis=1)


def emit_samples(what: str, n: int, seed: int, out, level: float = -1 / 6) -> Path:
    """Write n seeded samples of the requested kind as CSV."""
    rng = np.random.default_rng(seed)
    if what == "chiang":
        ss = lag.uniform_sphere(n, rng)
        note = f"chiang n={n} seed={seed}; sphere points, antipodes not deduplicated"
        return _write_csv(out, note, CP2_COLUMNS, cp2_rows(ss, lag.chiang_array(ss)))
    if what == "level-slice":
        ss = _level_sheet(level, np.sort(rng.uniform(0, 2 * np.pi, n)))
        note = f"level-slice n={n} seed={seed} level={_num(level)}; sheet Z>0 only (antipodes deduplicated)"
        return _write_csv(out, note, CP2_COLUMNS, cp2_rows(ss, lag.chiang_array(ss)))
    if what == "reduced-circle":
        red.ReductionLevel(level).require_lifting_range()
        ss = _level_sheet(level, np.sort(rng.uniform(0, 2 * np.pi, n)))
        ws = red.project_array(lag.chiang_array(ss))
        note = f"reduced-circle n={n} seed={seed} level={_num(level)}; sheet Z>0 only (antipodes deduplicated)"
        return _write_csv(out, note, CP1_COLUMNS, cp1_rows(ws, level))
    if what == "lifted-torus":
        psi = rng.uniform(0, 2 * np.pi, n)
        phi = rng.uniform(0, 2 * np.pi, n)
        zs = np.array([red.lift_point([1, np.exp(1j * s)], level, f) for s, f in zip(psi, phi)])
        note = f"lifted-torus n={n} seed={seed} level={_num(level)}; preimage of the great circle |w0|=|w1|"
        return _write_csv(out, note, CP2_COLUMNS, cp2_rows(None, zs))
    raise ValueError(f"unknown sample kind {what!r}; expected one of {SAMPLE_KINDS}")


def reduce_csv(src, level: float, out, tol: float = 1e-9) -> Path:
    """Project CP^2 samples on the level mu2 = a to CP^1."""
    lvl = red.ReductionLevel(level)
    rows = read_csv(src)
    ws = []
    for k, row in enumerate(rows):
        z = np.array([complex(row[f"re_z{i}"], row[f"im_z{i}"]) for i in range(3)])
        try:
            ws.append(red.project(canonicalize(z), lvl, tol).rep)
        except ValueError as exc:
            raise ValueError(f"{src}: row {k + 1}: {exc}") from exc
    ws = np.array(ws).reshape(-1, 2)
    note = f"reduced from {Path(src).name} level={_num(level)} rows={len(ws)}"
    return _write_csv(out, note, CP1_COLUMNS, cp1_rows(ws, level))


# --- figures -----------------------------------------------------------------

@dataclass(frozen=True)
class FigureSpec:
    kind: str
    level: float = -1 / 6
    size: int = 420
    stroke: float = 1.5
    bold: float = 5.0
    dash: str = "6,4"

    def __post_init__(self):
        if self.kind not in FIGURE_KINDS:
            raise ValueError(f"unknown figure kind {self.kind!r}; expected one of {FIGURE_KINDS}")
        if self.kind == "polytope" and not -0.5 < self.level < 0:
            raise ValueError(f"level {self.level} outside (-1/2, 0)")
        if self.kind != "polytope" and not -0.25 < self.level < 0:
            raise ValueError(f"level {self.level} outside (-1/4, 0)")


def _svg(size: int, body: list[str]) -> str:
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
            f'viewBox="0 0 {size} {size}">')
    return "\n".join([head, f'<rect width="{size}" height="{size}" fill="white"/>', *body, "</svg>", ""])


def _f(x: float) -> str:
    return f"{x:.3f}"


def _polytope(spec: FigureSpec):
    a = spec.level
    pad, span = 40, spec.size - 80
    # mu1 in [-0.5, 0] -> x; mu2 in [-0.5, 0] -> y (mu2 = 0 at the top)
    X = lambda m1: pad + (m1 + 0.5) / 0.5 * span  # noqa: E731
    Y = lambda m2: pad + (-m2) / 0.5 * span  # noqa: E731
    tri = [(0, 0), (-0.5, 0), (0, -0.5)]
    seg = [(0.0, -0.25), (-0.5, 0.0)]
    lvl = [(-(0.5 + a), a), (0.0, a)]
    pts = " ".join(f"{_f(X(u))},{_f(Y(v))}" for u, v in tri)
    body = [
        f'<polygon points="{pts}" fill="#eef3fb" stroke="black" stroke-width="{spec.stroke}"/>',
        f'<line x1="{_f(X(seg[0][0]))}" y1="{_f(Y(seg[0][1]))}" x2="{_f(X(seg[1][0]))}" '
        f'y2="{_f(Y(seg[1][1]))}" stroke="black" stroke-width="{spec.bold}"/>',
        f'<line x1="{_f(X(lvl[0][0]))}" y1="{_f(Y(lvl[0][1]))}" x2="{_f(X(lvl[1][0]))}" '
        f'y2="{_f(Y(lvl[1][1]))}" stroke="#c0392b" stroke-width="{spec.stroke}" '
        f'stroke-dasharray="{spec.dash}"/>',
        f'<text x="{_f(X(0) - 60)}" y="{_f(Y(a) - 6)}" font-size="12">mu2 = {a:.4g}</text>',
        f'<text x="{_f(X(-0.5))}" y="{_f(Y(0) - 8)}" font-size="12">(-1/2, 0)</text>',
        f'<text x="{_f(X(0) - 40)}" y="{_f(Y(-0.5) + 16)}" font-size="12">(0, -1/2)</text>',
    ]
    rows = [("vertex", *tri[0]), ("vertex", *tri[1]), ("vertex", *tri[2]),
            ("median_endpoint", *seg[0]), ("median_endpoint", *seg[1]),
            ("level_endpoint", *lvl[0]), ("level_endpoint", *lvl[1])]
    return body, ("feature", "mu1", "mu2"), rows


def _reduced_segment(spec: FigureSpec):
    a = spec.level
    lo, hi = red.mu_red_range(a)
    mark = red.pushed_level(a)
    mid = (lo + hi) / 2
    pad, span, yy = 40, spec.size - 80, spec.size / 2
    X = lambda m: pad + (m - lo) / (hi - lo) * span  # noqa: E731
    body = [
        f'<line x1="{_f(X(lo))}" y1="{_f(yy)}" x2="{_f(X(hi))}" y2="{_f(yy)}" '
        f'stroke="black" stroke-width="{spec.bold}"/>',
        f'<circle cx="{_f(X(mark))}" cy="{_f(yy)}" r="6" fill="#c0392b"/>',
        f'<text x="{_f(X(lo))}" y="{_f(yy + 24)}" font-size="12">{lo:.4g}</text>',
        f'<text x="{_f(X(hi) - 10)}" y="{_f(yy + 24)}" font-size="12">0</text>',
        f'<text x="{_f(X(mark) - 20)}" y="{_f(yy - 14)}" font-size="12">{mark:.4g}</text>',
    ]
    rows = [("endpoint", lo, 0.0), ("endpoint", hi, 0.0), ("midpoint", mid, 0.0),
            ("pushed_circle", mark, 0.0)]
    return body, ("feature", "mu_red", "y"), rows


def _level_slice(spec: FigureSpec):
    r = math.sqrt(-4 * spec.level)
    c, rad = spec.size / 2, spec.size / 2 - 30
    body = [
        f'<circle cx="{_f(c)}" cy="{_f(c)}" r="{_f(rad)}" fill="#eef3fb" stroke="black" '
        f'stroke-width="{spec.stroke}"/>',
        f'<circle cx="{_f(c)}" cy="{_f(c)}" r="{_f(rad * r)}" fill="none" stroke="black" '
        f'stroke-width="{spec.bold}"/>',
        f'<text x="{_f(c + 4)}" y="{_f(c - rad * r - 8)}" font-size="12">X^2+Y^2 = {r * r:.4g}</text>',
    ]
    rows = [("unit_disc_radius", 1.0, 0.0), ("level_circle_radius", r, 0.0),
            ("level_circle_radius_squared", r * r, 0.0)]
    return body, ("feature", "value", "y"), rows


def emit_figure(spec: FigureSpec, out) -> tuple[Path, Path]:
    """Write the SVG figure and a companion CSV (same stem, ``.csv``)."""
    build = {"polytope": _polytope, "reduced-segment": _reduced_segment,
             "level-slice": _level_slice}[spec.kind]
    body, cols, rows = build(spec)
    path = _open(out)
    try:
        path.write_text(_svg(spec.size, body))
        companion = path.with_suffix(".csv")
        with companion.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(cols)
            for name, *vals in rows:
                w.writerow([name, *(_num(v) for v in vals)])
    except OSError as exc:
        raise OSError(f"cannot write figure {path}: {exc}") from exc
    return path, companion
