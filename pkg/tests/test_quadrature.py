import numpy as np
import pytest

from fermideco.errors import QuadratureFailure
from fermideco.quadrature import G_WEIGHTS, K_WEIGHTS, NODES, gauss_kronrod


def test_rule_weights():
    assert K_WEIGHTS.sum() == pytest.approx(2, abs=1e-15)
    assert G_WEIGHTS.sum() == pytest.approx(2, abs=1e-15)
    # K15 integrates x^22 exactly, G7 x^12
    assert (K_WEIGHTS * NODES**22).sum() == pytest.approx(2 / 23, abs=1e-15)
    assert (G_WEIGHTS * NODES**12).sum() == pytest.approx(2 / 13, abs=1e-15)


def test_smooth_integral():
    val, err = gauss_kronrod(np.sin, np.array([0.0, np.pi]))
    assert val == pytest.approx(2, rel=1e-13)
    assert err <= 1e-10 * 2


def test_oscillatory_integral():
    w = 50.0
    exact = (1 - np.exp(-40) * (np.cos(40 * w) - w * np.sin(40 * w))) / (1 + w * w)
    val, _ = gauss_kronrod(lambda x: np.exp(-x) * np.cos(w * x), np.linspace(0, 40, 400))
    assert val == pytest.approx(exact, rel=1e-10)


def test_integrable_endpoint_singularity():
    val, _ = gauss_kronrod(lambda x: 1 / np.sqrt(x), np.array([0.0, 1.0]), rel_tol=1e-8)
    assert val == pytest.approx(2, rel=1e-8)


def test_budget_exhaustion_raises():
    with pytest.raises(QuadratureFailure):
        gauss_kronrod(lambda x: np.sin(1e4 * x), np.array([0.0, 1.0]), rel_tol=1e-12, max_evals=200)


def test_non_finite_integrand_raises():
    with pytest.raises(QuadratureFailure):
        gauss_kronrod(lambda x: np.full_like(x, np.nan), np.array([0.0, 1.0]))
