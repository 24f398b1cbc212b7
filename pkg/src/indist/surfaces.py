"""Delay-space region where the c1 lower bound is non-trivial.

With Gaussian dips every chain overlap depends on its own delay, and the
bound ``r_AB + r_BC + r_CD - 2`` is positive on a bounded-volume region
around zero delay.  Volumes are computed by midpoint counting on a grid or
by Monte-Carlo; the boundary is exported as a marching-cubes mesh.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from skimage.measure import marching_cubes

from ._parallel import map_chunks
from .core import IndistError
from .homtest import NonPositiveWidth

MIN_GRID = 32
DEFAULT_GRID = 128
DEFAULT_BOX = 4.0
DEFAULT_MC_SAMPLES = 10_000_000
_FACE_TOLERANCE = 1e-3


class BoxTooSmall(IndistError, ValueError):
    pass


class GridTooCoarse(IndistError, ValueError):
    pass


@dataclass(frozen=True)
class DelayAxes:
    """Per-pair (AB, BC, CD) dip visibility and spectral width.

    ``box`` is the integration half-width in units of ``1/width``.
    """

    visibilities: tuple[float, float, float] = (1.0, 1.0, 1.0)
    widths: tuple[float, float, float] = (1.0, 1.0, 1.0)
    box: float = DEFAULT_BOX
    grid: int = DEFAULT_GRID

    def __post_init__(self):
        vis = tuple(float(v) for v in self.visibilities)
        wid = tuple(float(w) for w in self.widths)
        if len(vis) != 3 or len(wid) != 3:
            raise ValueError("need three visibilities and three widths")
        if any(not (0.0 <= v <= 1.0) for v in vis):
            raise ValueError(f"visibilities must lie in [0, 1]: {vis}")
        if any(not w > 0 for w in wid):
            raise NonPositiveWidth(f"widths must be positive: {wid}")
        if self.grid < MIN_GRID:
            raise GridTooCoarse(f"grid resolution {self.grid} below minimum {MIN_GRID}")
        object.__setattr__(self, "visibilities", vis)
        object.__setattr__(self, "widths", wid)

    @property
    def half_widths(self) -> np.ndarray:
        return self.box / np.asarray(self.widths)

    @property
    def box_volume(self) -> float:
        return float(np.prod(2 * self.half_widths))

    def with_visibilities(self, vis: Sequence[float]) -> "DelayAxes":
        return DelayAxes(tuple(vis), self.widths, self.box, self.grid)


def _c1_lower(delays: np.ndarray, axes: DelayAxes) -> np.ndarray:
    v = np.asarray(axes.visibilities)
    w = np.asarray(axes.widths)
    r = v * np.exp(-0.5 * (np.asarray(delays) * w) ** 2)
    return r.sum(axis=-1) - 2.0


def c1_lower_at(delays: Sequence[float], axes: DelayAxes) -> float:
    """Unclamped ``r_AB + r_BC + r_CD - 2`` at the given delays."""
    return float(_c1_lower(np.asarray(delays, dtype=float), axes))


def classify_configuration(delays: Sequence[float], axes: DelayAxes) -> str:
    return "inside" if c1_lower_at(delays, axes) > 0 else "outside"


def _check_box(axes: DelayAxes, face_points: int = 64) -> None:
    if axes.box < DEFAULT_BOX:
        raise BoxTooSmall(f"box half-width {axes.box}/width is below {DEFAULT_BOX}/width")
    h = axes.half_widths
    u = (np.arange(face_points) + 0.5) / face_points * 2 - 1
    a, b = np.meshgrid(u, u, indexing="ij")
    for ax in range(3):
        others = [i for i in range(3) if i != ax]
        for sign in (-1.0, 1.0):
            pts = np.empty((face_points * face_points, 3))
            pts[:, ax] = sign * h[ax]
            pts[:, others[0]] = a.ravel() * h[others[0]]
            pts[:, others[1]] = b.ravel() * h[others[1]]
            frac = np.mean(_c1_lower(pts, axes) > 0)
            if frac > _FACE_TOLERANCE:
                raise BoxTooSmall(f"region covers {frac:.2%} of a box face")


@dataclass(frozen=True)
class VolumeEstimate:
    volume: float
    stderr: float
    method: str
    samples: int


def _grid_axes(axes: DelayAxes, n: int, midpoints: bool) -> list[np.ndarray]:
    out = []
    for h in axes.half_widths:
        if midpoints:
            out.append(-h + (np.arange(n) + 0.5) * (2 * h / n))
        else:
            out.append(np.linspace(-h, h, n))
    return out


def _grid_inside(axes: DelayAxes, n: int) -> np.ndarray:
    """Boolean n^3 array of cell centres inside the region (separable evaluation)."""
    xs = _grid_axes(axes, n, midpoints=True)
    r = [v * np.exp(-0.5 * (x * w) ** 2) for v, w, x in zip(axes.visibilities, axes.widths, xs)]
    return (r[0][:, None, None] + r[1][None, :, None] + r[2][None, None, :]) > 2.0


def _mc_inside_counts(axes_list: list[DelayAxes], samples: int, seed: int) -> np.ndarray:
    """Inside-counts for several visibility sets on common random points."""
    h = axes_list[0].half_widths

    def run(rng: np.random.Generator, n: int) -> np.ndarray:
        pts = rng.uniform(-h, h, size=(n, 3))
        return np.array([np.count_nonzero(_c1_lower(pts, a) > 0) for a in axes_list])

    return np.sum(map_chunks(run, samples, seed, chunk=1_000_000), axis=0)


def nontrivial_region_volume(
    axes: DelayAxes,
    method: str = "grid",
    samples: int = DEFAULT_MC_SAMPLES,
    seed: int = 0,
) -> VolumeEstimate:
    """Volume of ``{delays : c1_lower_at > 0}`` inside the integration box."""
    _check_box(axes)
    if sum(axes.visibilities) <= 2.0:
        return VolumeEstimate(0.0, 0.0, method, samples if method != "grid" else axes.grid**3)
    box = axes.box_volume
    if method == "grid":
        n = axes.grid
        frac = float(np.mean(_grid_inside(axes, n)))
        return VolumeEstimate(frac * box, 0.0, "grid", n**3)
    if method in ("mc", "monte-carlo"):
        k = int(_mc_inside_counts([axes], samples, seed)[0])
        p = k / samples
        return VolumeEstimate(p * box, box * math.sqrt(p * (1 - p) / samples), "monte-carlo", samples)
    raise ValueError(f"unknown method {method!r}")


@dataclass(frozen=True)
class RatioEstimate:
    ratio: float
    stderr: float
    volume_ideal: float
    volume_real: float
    method: str


def volume_ratio(
    axes_ideal: DelayAxes,
    axes_real: DelayAxes,
    method: str = "monte-carlo",
    samples: int = DEFAULT_MC_SAMPLES,
    seed: int = 0,
) -> RatioEstimate:
    """``V_b / V_a`` with shared sample points (or a shared grid).

    When the real visibilities are pointwise below the ideal ones the real
    region is nested in the ideal one, and the ratio's standard error is the
    binomial error of the nested fraction.
    """
    if axes_ideal.widths != axes_real.widths or axes_ideal.box != axes_real.box:
        raise ValueError("both axes must share widths and box")
    _check_box(axes_ideal)
    _check_box(axes_real)
    box = axes_ideal.box_volume
    if method == "grid":
        n = axes_ideal.grid
        a = _grid_inside(axes_ideal, n)
        b = _grid_inside(axes_real, n)
        ka, kb, total = int(a.sum()), int(b.sum()), n**3
        stderr = 0.0
    elif method in ("mc", "monte-carlo"):
        ka, kb = (int(x) for x in _mc_inside_counts([axes_ideal, axes_real], samples, seed))
        total = samples
        q = kb / ka if ka else 0.0
        stderr = math.sqrt(q * (1 - q) / ka) if ka else 0.0
    else:
        raise ValueError(f"unknown method {method!r}")
    va, vb = ka / total * box, kb / total * box
    if ka == 0:
        # empty ideal region: identical axes give 1 by convention, else undefined
        ratio = 1.0 if axes_ideal == axes_real else math.nan
    else:
        ratio = kb / ka
    return RatioEstimate(ratio, stderr, va, vb, "grid" if method == "grid" else "monte-carlo")


@dataclass(frozen=True)
class Mesh:
    vertices: np.ndarray  # (V, 3)
    faces: np.ndarray  # (F, 3), 0-based

    def write(self, path) -> None:
        """Plain text: ``v x y z`` lines then ``f i j k`` lines, 1-based."""
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.to_text())

    def to_text(self) -> str:
        lines = [f"v {x:.6f} {y:.6f} {z:.6f}" for x, y, z in self.vertices]
        lines += [f"f {i + 1} {j + 1} {k + 1}" for i, j, k in self.faces]
        return "\n".join(lines) + "\n"


def read_mesh(path) -> Mesh:
    verts, faces = [], []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            parts = line.split()
            if not parts:
                continue
            if parts[0] == "v":
                verts.append([float(x) for x in parts[1:4]])
            elif parts[0] == "f":
                faces.append([int(x) - 1 for x in parts[1:4]])
    return Mesh(np.array(verts).reshape(-1, 3), np.array(faces, dtype=int).reshape(-1, 3))


def isosurface(axes: DelayAxes, level: float = 0.0, n: int | None = None) -> Mesh:
    """Triangulated level set ``c1_lower_at = level``, normals pointing outward."""
    n = n or axes.grid
    xs = _grid_axes(axes, n, midpoints=False)
    r = [v * np.exp(-0.5 * (x * w) ** 2) for v, w, x in zip(axes.visibilities, axes.widths, xs)]
    field = (r[0][:, None, None] + r[1][None, :, None] + r[2][None, None, :]) - 2.0 - level
    if field.max() <= 0 or field.min() >= 0:
        return Mesh(np.zeros((0, 3)), np.zeros((0, 3), dtype=int))
    spacing = tuple(float(x[1] - x[0]) for x in xs)
    verts, faces, _, _ = marching_cubes(field, 0.0, spacing=spacing, gradient_direction="ascent")
    verts = verts + np.array([x[0] for x in xs])
    return Mesh(verts, faces.astype(int))


def mesh_enclosed_volume(mesh: Mesh) -> float:
    """Enclosed volume of a closed, outward-oriented mesh (divergence theorem)."""
    v = mesh.vertices[mesh.faces]
    return float(np.einsum("ij,ij->i", v[:, 0], np.cross(v[:, 1], v[:, 2])).sum() / 6.0)
