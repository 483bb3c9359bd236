import json
import math

import pytest

import tpgsim


def test_version_and_default_config():
    assert tpgsim.__version__
    cfg = json.loads(tpgsim.default_config())
    assert cfg["engine"] == "quantized"
    assert len(tpgsim.config_hash()) == 64


def test_unknown_config_key_is_value_error():
    with pytest.raises(ValueError):
        tpgsim.config_hash('{"no_such_key": 1}')


def test_tmsv_closed_forms():
    xi = 0.3
    assert tpgsim.tmsv_log_negativity(xi) == pytest.approx(2 * xi)
    lam = math.tanh(xi) ** 2
    assert tpgsim.tmsv_photon_dist(xi, 2) == pytest.approx((1 - lam) * lam**2)
    assert tpgsim.tmsv_mean_photons(xi) == pytest.approx(math.sinh(xi) ** 2)


def test_tps_measures_ordering():
    d = tpgsim.tps_measures(0.3)
    assert d["qre_abc"] > d["qre_ab"] > d["qre_a"] > 0
    assert d["nu_minus"] >= 0.5 - 1e-6
    assert d["log_negativity"] > tpgsim.tmsv_log_negativity(0.3)
    assert d["log_negativity_ab"] <= 1e-4
    assert sum(d["photon_distribution"]) == pytest.approx(1.0, abs=1e-8)


def test_small_figure_run_verifies(tmp_path):
    cfg = json.dumps({"xi": [0.0, 0.2, 0.1], "xi_panels": [0.2], "chain_xi": [0.1, 0.2],
                      "xi_conditioning": 0.2, "xi_joint": 0.2})
    manifests = tpgsim.run_figure("figure2", cfg, str(tmp_path), use_cache=False)
    assert len(manifests) == 1
    report = tpgsim.verify_outputs(str(tmp_path))
    assert report["ok"], report["problems"]


def test_truncation_error_is_raised(tmp_path):
    cfg = json.dumps({"engine": "classical", "mode_cutoff": 4})
    with pytest.raises(tpgsim.TruncationError):
        tpgsim.run_figure("figure1", cfg, str(tmp_path), use_cache=False)
