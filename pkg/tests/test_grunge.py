import numpy as np
import pytest

from evopool.functions import Bounds
from evopool.grunge import (
    GrungeFormatError,
    GrungeLandscape,
    catalog_load,
    catalog_save,
    grunge_enumerate,
    grunge_generate,
    grunge_load,
    grunge_save,
    grunge_value,
    random_multistart,
)


def test_generate_is_deterministic():
    a = grunge_generate(3, 10, 42)
    b = grunge_generate(3, 10, 42)
    assert a == b
    assert a != grunge_generate(3, 10, 43)


def test_generate_respects_ranges():
    land = grunge_generate(4, 50, 1, depth_range=(-3.0, -1.0),
                           width_range=(1.0, 2.0))
    assert np.all((land.weights >= -3.0) & (land.weights <= -1.0))
    assert np.all((land.widths >= 1.0) & (land.widths <= 2.0))
    assert np.all((land.centers >= 0.0) & (land.centers <= 10.0))
    assert land.name == "GRUNGE[4,50]"


def test_generate_validation():
    with pytest.raises(ValueError):
        grunge_generate(0, 5, 1)
    with pytest.raises(ValueError):
        grunge_generate(2, 5, 1, depth_range=(-1.0, 1.0))
    with pytest.raises(ValueError):
        grunge_generate(2, 5, 1, width_range=(-1.0, 2.0))
    # mixed-sign weights are allowed when requested explicitly
    land = grunge_generate(2, 5, 1, depth_range=(-1.0, 1.0),
                           allow_mixed_sign=True)
    assert land.N == 5


def test_landscape_round_trip_is_bit_exact(tmp_path):
    land = grunge_generate(5, 30, 7)
    path = tmp_path / "l.grunge"
    grunge_save(land, path)
    loaded = grunge_load(path)
    assert loaded == land
    assert np.array_equal(loaded.weights, land.weights)
    assert np.array_equal(loaded.centers, land.centers)


def test_load_rejects_bad_header(tmp_path):
    path = tmp_path / "bad.grunge"
    path.write_text("NOPE\n")
    with pytest.raises(GrungeFormatError, match="line 1"):
        grunge_load(path)


def test_load_rejects_truncation(tmp_path):
    land = grunge_generate(2, 5, 3)
    path = tmp_path / "l.grunge"
    grunge_save(land, path)
    lines = path.read_text().splitlines()
    path.write_text("\n".join(lines[:4]) + "\n")
    with pytest.raises(GrungeFormatError, match="truncated"):
        grunge_load(path)


def test_load_rejects_bad_field_count(tmp_path):
    path = tmp_path / "l.grunge"
    path.write_text("GRUNGE 1\n1 1\n-1.0 2.0 5.0 9.0\nBOUNDS 0.0 10.0\n")
    with pytest.raises(GrungeFormatError, match="line 3"):
        grunge_load(path)


def test_load_rejects_nonpositive_width(tmp_path):
    path = tmp_path / "l.grunge"
    path.write_text("GRUNGE 1\n1 1\n-1.0 0.0 5.0\nBOUNDS 0.0 10.0\n")
    with pytest.raises(GrungeFormatError):
        grunge_load(path)


def test_load_rejects_bad_bounds_line(tmp_path):
    path = tmp_path / "l.grunge"
    path.write_text("GRUNGE 1\n1 1\n-1.0 2.0 5.0\nBOUNDS 0.0\n")
    with pytest.raises(GrungeFormatError, match="BOUNDS"):
        grunge_load(path)


def test_value_lower_bound():
    # each Gaussian contributes at least min(weight, 0), so the sum of
    # negative weights is a global floor
    land = grunge_generate(3, 40, 5)
    floor = float(np.sum(np.minimum(land.weights, 0.0)))
    rng = np.random.default_rng(0)
    pts = rng.uniform(0.0, 10.0, (1000, 3))
    for p in pts:
        assert grunge_value(land, p) >= floor


def test_single_gaussian_catalog():
    center = np.array([[4.0, 6.0]])
    land = GrungeLandscape(2, 1, np.array([-3.0]), np.array([1.5]), center,
                           Bounds(0.0, 10.0))
    cat = grunge_enumerate(land, 8)
    assert len(cat) == 1
    assert cat.global_min_value == pytest.approx(-3.0, abs=1e-9)
    np.testing.assert_allclose(cat.global_min_location, center[0], atol=1e-6)


def test_grid_doubling_invariance():
    land = grunge_generate(2, 20, 9)
    coarse = grunge_enumerate(land, 50)
    fine = grunge_enumerate(land, 100)
    assert len(coarse) == len(fine)
    np.testing.assert_allclose(
        np.sort(coarse.values), np.sort(fine.values), atol=1e-8
    )


def test_catalog_matches_multistart():
    land = grunge_generate(2, 20, 9)
    grid = grunge_enumerate(land, 60)
    ms = random_multistart(land, 20000, 4)
    assert len(grid) == len(ms)
    assert grid.global_min_value == pytest.approx(
        ms.global_min_value, abs=1e-10
    )


def test_catalog_entries_are_critical_points():
    land = grunge_generate(2, 15, 13)
    cat = grunge_enumerate(land, 40)
    assert np.all(np.diff(cat.values) >= 0.0)  # sorted ascending
    for loc in cat.locations:
        assert np.linalg.norm(land.gradient(loc)) < 1e-6


def test_catalog_round_trip(tmp_path):
    land = grunge_generate(2, 12, 21)
    cat = grunge_enumerate(land, 30)
    path = tmp_path / "c.cat"
    catalog_save(cat, path)
    loaded = catalog_load(path)
    assert len(loaded) == len(cat)
    np.testing.assert_array_equal(loaded.values, cat.values)
    np.testing.assert_array_equal(loaded.locations, cat.locations)
    np.testing.assert_array_equal(loaded.hits, cat.hits)


def test_weight_scaling_linearity():
    land = grunge_generate(3, 25, 2)
    scaled = GrungeLandscape(land.M, land.N, 2.5 * land.weights, land.widths,
                             land.centers, land.bounds)
    rng = np.random.default_rng(1)
    for _ in range(50):
        x = rng.uniform(0.0, 10.0, 3)
        assert scaled.value(x) == pytest.approx(2.5 * land.value(x), rel=1e-12)


def test_enumerate_guards_grid_explosion():
    land = grunge_generate(12, 5, 1)
    with pytest.raises(ValueError, match="grid"):
        grunge_enumerate(land, 10)  # 10**12 starts


def test_as_function_spec_wiring():
    land = grunge_generate(4, 10, 6)
    spec = land.as_function_spec(target_value=-5.0)
    assert spec.dim == 4
    assert spec.target_value == -5.0
    rng = np.random.default_rng(0)
    x = rng.uniform(0, 10, 4)
    assert spec.value(x) == pytest.approx(land.value(x), rel=1e-12)
    np.testing.assert_allclose(spec.gradient(x), land.gradient(x), rtol=1e-10)
