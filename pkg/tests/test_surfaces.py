import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from indist.homtest import NonPositiveWidth
from indist.surfaces import (
    BoxTooSmall,
    DelayAxes,
    GridTooCoarse,
    _grid_inside,
    c1_lower_at,
    classify_configuration,
    isosurface,
    mesh_enclosed_volume,
    nontrivial_region_volume,
    read_mesh,
    volume_ratio,
)

REAL = (0.944, 0.835, 0.915)
IDEAL = DelayAxes((1, 1, 1))


def test_c1_lower_examples():
    assert c1_lower_at((0, 0, 0), IDEAL) == 1.0
    assert c1_lower_at((0, 0, 0), DelayAxes(REAL)) == pytest.approx(0.694)
    far = c1_lower_at((0, 1e6, 0), DelayAxes(REAL))
    assert far == pytest.approx(0.944 + 0.915 - 2) and far <= 0


def test_classification_examples():
    assert classify_configuration((0, 0, 0), DelayAxes(REAL)) == "inside"
    assert classify_configuration((0, 50.0, 0), DelayAxes(REAL)) == "outside"
    hw = math.sqrt(2 * math.log(2))
    assert c1_lower_at((hw, hw, hw), IDEAL) == pytest.approx(-0.5)
    assert classify_configuration((hw, hw, hw), IDEAL) == "outside"


def test_axes_validation():
    with pytest.raises(GridTooCoarse):
        DelayAxes(grid=16)
    with pytest.raises(NonPositiveWidth):
        DelayAxes(widths=(1, 0, 1))
    with pytest.raises(ValueError):
        DelayAxes((1.2, 1, 1))


def test_box_too_small():
    with pytest.raises(BoxTooSmall):
        nontrivial_region_volume(DelayAxes(box=2.0))


def test_volume_examples():
    va = nontrivial_region_volume(IDEAL).volume
    assert va > 0
    assert nontrivial_region_volume(DelayAxes((0.9, 0.9, 0.9))).volume < va
    assert nontrivial_region_volume(DelayAxes((0.5, 0.9, 0.9))).volume > 0
    assert nontrivial_region_volume(DelayAxes((0.5, 0.5, 0.9))).volume == 0.0


def test_grid_and_mc_agree():
    axes = DelayAxes(REAL)
    g = nontrivial_region_volume(axes, "grid")
    m = nontrivial_region_volume(axes, "monte-carlo", samples=1_000_000, seed=2)
    assert m.stderr > 0
    assert g.volume == pytest.approx(m.volume, abs=5 * m.stderr + 0.01 * g.volume)


@settings(deadline=None, max_examples=10)
@given(st.tuples(*[st.floats(0.6, 1.0)] * 3), st.integers(0, 2), st.floats(0.0, 0.2))
def test_monotone_set_inclusion(vis, axis, bump):
    hi = list(vis)
    hi[axis] = min(1.0, hi[axis] + bump)
    a = _grid_inside(DelayAxes(vis, grid=32), 32)
    b = _grid_inside(DelayAxes(tuple(hi), grid=32), 32)
    assert not np.any(a & ~b)


def test_symmetry():
    inside = _grid_inside(DelayAxes((0.9, 0.9, 0.9), grid=40), 40)
    assert np.array_equal(inside, inside[::-1, :, :])
    assert np.array_equal(inside, inside[:, :, ::-1])
    assert np.array_equal(inside, inside.transpose(1, 0, 2))
    assert np.array_equal(inside, inside.transpose(2, 1, 0))


def test_ratio_examples():
    assert volume_ratio(DelayAxes(REAL), DelayAxes(REAL), samples=100_000).ratio == 1.0
    assert volume_ratio(IDEAL, DelayAxes((0.0, 1.0, 1.0)), samples=100_000).ratio == 0.0
    r = volume_ratio(IDEAL, DelayAxes(REAL), samples=1_000_000, seed=1)
    assert r.ratio == pytest.approx(0.516, abs=0.01)
    assert 0 < r.stderr < 0.005


@pytest.mark.parametrize("widths", [(0.1, 1.0, 10.0), (3.0, 3.0, 0.3)])
def test_ratio_width_invariant(widths):
    base = volume_ratio(IDEAL, DelayAxes(REAL), samples=500_000, seed=3)
    scaled = volume_ratio(DelayAxes((1, 1, 1), widths), DelayAxes(REAL, widths), samples=500_000, seed=3)
    assert scaled.ratio == pytest.approx(base.ratio, abs=3 * base.stderr)
    g0 = volume_ratio(IDEAL, DelayAxes(REAL), method="grid")
    g1 = volume_ratio(DelayAxes((1, 1, 1), widths), DelayAxes(REAL, widths), method="grid")
    assert g1.ratio == pytest.approx(g0.ratio, abs=1e-12)


def test_ratio_requires_shared_widths():
    with pytest.raises(ValueError):
        volume_ratio(IDEAL, DelayAxes(REAL, (1, 2, 1)))


def test_mesh_format_and_volume(tmp_path):
    axes = DelayAxes(REAL, grid=48)
    mesh = isosurface(axes)
    assert len(mesh.faces) > 0
    path = tmp_path / "surface.txt"
    mesh.write(path)
    text = path.read_text()
    first = text.splitlines()[0].split()
    assert first[0] == "v" and len(first) == 4
    assert "\r" not in text
    faces = [line.split() for line in text.splitlines() if line.startswith("f")]
    assert min(int(x) for f in faces for x in f[1:]) == 1
    back = read_mesh(path)
    assert back.faces.shape == mesh.faces.shape
    vol = mesh_enclosed_volume(back)
    grid_vol = nontrivial_region_volume(DelayAxes(REAL)).volume
    assert vol == pytest.approx(grid_vol, rel=0.03)


def test_empty_isosurface():
    assert len(isosurface(DelayAxes((0.5, 0.5, 0.5), grid=32)).faces) == 0
