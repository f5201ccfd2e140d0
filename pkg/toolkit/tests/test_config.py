import numpy as np
import pytest

from polygon_extrema.core.config import (
    OUTPUT_DIR_ENV,
    PROFILE_DEFAULTS,
    TOLERANCES,
    default_output_dir,
    load_settings,
)
from polygon_extrema.core.geometry import ConvexPolygon, is_strictly_convex
from polygon_extrema.core.utils import (
    central_gradient,
    has_odd_factor,
    is_power_of_two,
    make_document_name,
    odd_divisors,
    random_convex_polygon,
    random_cyclic_polygon,
)


def test_defaults_without_file():
    settings = load_settings()
    assert settings.tolerances == TOLERANCES
    assert settings.profiles == PROFILE_DEFAULTS
    assert settings.enumeration_cap == 100


def test_yaml_overrides(tmp_path):
    path = tmp_path / "settings.yaml"
    path.write_text(
        "tolerances:\n  equality: 1.0e-8\n"
        "profiles:\n  overnight:\n    starts: 1024\n"
        "enumeration_cap: 60\n"
        "output_dir: results\n"
    )
    settings = load_settings(path)
    assert settings.tolerances.equality == 1e-8
    assert settings.tolerances.cross == TOLERANCES.cross
    assert settings.profiles["overnight"]["starts"] == 1024
    assert settings.profiles["overnight"]["max_iter"] == PROFILE_DEFAULTS["desk"]["max_iter"]
    assert settings.enumeration_cap == 60
    assert settings.resolve_output_dir() == "results"


@pytest.mark.parametrize(
    "text",
    ["- just\n- a list\n", "colour: red\n", "tolerances:\n  sharpness: 1\n"],
)
def test_bad_settings_are_rejected(tmp_path, text):
    path = tmp_path / "settings.yaml"
    path.write_text(text)
    with pytest.raises(ValueError):
        load_settings(path)


def test_output_dir_environment(monkeypatch):
    monkeypatch.delenv(OUTPUT_DIR_ENV, raising=False)
    assert default_output_dir() == "./out"
    monkeypatch.setenv(OUTPUT_DIR_ENV, "/tmp/polygons")
    assert default_output_dir() == "/tmp/polygons"
    assert load_settings().resolve_output_dir() == "/tmp/polygons"


def test_number_helpers():
    assert [n for n in range(1, 40) if is_power_of_two(n)] == [1, 2, 4, 8, 16, 32]
    assert not has_odd_factor(16)
    assert has_odd_factor(12)
    assert odd_divisors(30) == [3, 5, 15]
    assert odd_divisors(8) == []


def test_document_names():
    assert make_document_name("reinhardt", 30) == "reinhardt-n30.json"
    assert make_document_name("optimized", 6, "graham-area-s0") == "optimized-n6-graham-area-s0.json"


def test_random_generators_are_seeded_and_convex():
    a = random_convex_polygon(np.random.default_rng(5), 12)
    b = random_convex_polygon(np.random.default_rng(5), 12)
    assert np.array_equal(a, b)
    assert is_strictly_convex(ConvexPolygon(a))
    cyclic = random_cyclic_polygon(np.random.default_rng(5), 9, radius=0.5)
    assert np.allclose(np.hypot(*cyclic.T), 0.5)
    with pytest.raises(ValueError):
        random_convex_polygon(np.random.default_rng(0), 2)


def test_central_gradient_of_quadratic():
    grad = central_gradient(lambda x: float(x @ x), np.array([1.0, -2.0, 0.5]))
    assert np.allclose(grad, [2.0, -4.0, 1.0])
