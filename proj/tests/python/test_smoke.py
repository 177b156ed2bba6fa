import math

import pytest

import philab

TRACE_FREE = '[phi]\ntype = "trace_free_quadratic"\n'


def test_cancel_run_returns_artifact():
    r = philab.run("cancel", TRACE_FREE + "[experiment]\nxi_count = 12\n")
    assert r["schema_version"] == philab.schema_version == 1
    assert r["experiment"] == "cancel"
    assert r["pass"] is True
    assert r["exit_status"] == 0
    assert r["columns"] == ["xi_0", "xi_1", "value_plus", "value_minus"]
    assert len(r["rows"]) == 12
    assert r["config_hash"] == philab.config_hash("cancel", TRACE_FREE + "[experiment]\nxi_count = 12\n")


def test_hash_ignores_threads_but_not_seed():
    a = philab.run("cancel", "[experiment]\nxi_count = 4\n", threads=1)
    b = philab.run("cancel", "[experiment]\nxi_count = 4\n", threads=3)
    assert a["config_hash"] == b["config_hash"]
    assert philab.config_hash("cancel", seed=5) != philab.config_hash("cancel", seed=6)


def test_validation_error_is_a_value_error():
    with pytest.raises(ValueError, match=r"p\*\(d-alpha\) = d"):
        philab.run("cancel", "[kernel]\nalpha = 0.5\n")
    with pytest.raises(philab.ValidationError):
        philab.resolved_config("cancel", "[kernel]\nbogus = 1\n")


def test_hemisphere_functional_half_circle():
    # |v|^2 over half of the unit circle
    assert philab.hemisphere_functional([0.3, -0.7]) == pytest.approx(math.pi, rel=1e-12)
    assert philab.hemisphere_functional([1.0, 0.0], TRACE_FREE) == pytest.approx(0.0, abs=1e-12)


def test_new_simple_ratio():
    assert philab.new_simple_ratio(2.0, 0.0, [1.0, 1.0]) == pytest.approx(1.0)


def test_resolved_config_defaults():
    cfg = philab.resolved_config("besov", "[source]\npoints = [[0.0, 0.0, 1.0]]\n")
    assert cfg["experiment"] == {"n_lo": -2, "n_hi": 6}
    assert cfg["source"]["points"] == [[0, 0, 1]]
