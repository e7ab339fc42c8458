import numpy as np
import pytest
from scipy.integrate import trapezoid

from ccs_ica.density import (
    ParzenModel,
    default_bandwidth,
    kernel_multi,
    kernel_uni,
    pdf_multi,
    pdf_uni,
    pdf_uni_deriv,
)


def test_kernel_uni():
    assert kernel_uni(0.0) == pytest.approx(0.3989422804, abs=1e-10)
    u = np.linspace(-4, 4, 17)
    np.testing.assert_array_equal(kernel_uni(u), kernel_uni(-u))
    grid = np.linspace(-8, 8, 4001)
    assert trapezoid(kernel_uni(grid), grid) == pytest.approx(1.0, abs=1e-6)


def test_kernel_multi():
    assert kernel_multi([0.0, 0.0]) == pytest.approx(1 / (2 * np.pi), abs=1e-10)
    u = np.array([0.3, -1.2, 2.0])
    assert kernel_multi(u) == pytest.approx(np.prod(kernel_uni(u)), rel=1e-14)
    g = np.linspace(-6, 6, 401)
    z1, z2 = np.meshgrid(g, g, indexing="ij")
    vals = kernel_multi(np.stack([z1, z2], axis=-1))
    assert trapezoid(trapezoid(vals, g, axis=1), g) == pytest.approx(1.0, abs=1e-4)


def test_default_bandwidth():
    assert default_bandwidth(1000) == pytest.approx(1.06 * 1000 ** (-0.2))


def test_single_anchor():
    model = ParzenModel(np.array([[0.0, 0.0]]), h=1.0, stride=1)
    assert pdf_uni(model, 0, 0.0) == pytest.approx(0.3989422804, abs=1e-10)
    assert pdf_uni_deriv(model, 0, 0.0) == pytest.approx(0.0, abs=1e-15)
    for d in (0.1, 0.7, 2.0):
        assert pdf_uni_deriv(model, 0, d) == pytest.approx(-pdf_uni_deriv(model, 0, -d), rel=1e-14)
    multi = ParzenModel(np.zeros((2, 2)), h=1.0)
    assert pdf_multi(multi, [0.0, 0.0]) == pytest.approx(1 / (2 * np.pi))


def test_pdf_uni_symmetric_pair():
    model = ParzenModel(np.array([[-1.3, 1.3]]), h=0.5)
    y = np.linspace(0, 3, 7)
    np.testing.assert_allclose(pdf_uni(model, 0, y), pdf_uni(model, 0, -y), rtol=1e-14)


def test_pdf_uni_integrates_to_one():
    rng = np.random.default_rng(0)
    model = ParzenModel(rng.standard_normal((2, 300)))
    h = model.bandwidth
    c = model.centres[1]
    grid = np.linspace(c.min() - 8 * h, c.max() + 8 * h, 6001)
    assert trapezoid(pdf_uni(model, 1, grid), grid) == pytest.approx(1.0, abs=1e-3)


def test_pdf_multi_integrates_to_one():
    rng = np.random.default_rng(1)
    model = ParzenModel(rng.standard_normal((2, 200)), stride=2)
    h = model.bandwidth
    lo = model.centres.min() - 6 * h
    hi = model.centres.max() + 6 * h
    g = np.linspace(lo, hi, 241)
    z1, z2 = np.meshgrid(g, g, indexing="ij")
    vals = pdf_multi(model, np.vstack([z1.ravel(), z2.ravel()])).reshape(z1.shape)
    assert trapezoid(trapezoid(vals, g, axis=1), g) == pytest.approx(1.0, abs=1e-3)


def test_pdf_uni_deriv_matches_finite_difference():
    rng = np.random.default_rng(2)
    model = ParzenModel(rng.standard_normal((1, 150)))
    ys = rng.uniform(-3, 3, 100)
    d = 1e-5
    for y in ys:
        fd = (pdf_uni(model, 0, y + d) - pdf_uni(model, 0, y - d)) / (2 * d)
        ref = pdf_uni_deriv(model, 0, y)
        assert abs(ref - fd) <= 1e-6 * max(abs(ref), 1e-3)


def test_multi_matches_uni_in_one_dimension():
    rng = np.random.default_rng(3)
    model = ParzenModel(rng.standard_normal((1, 80)), stride=3)
    y = rng.standard_normal(10)
    np.testing.assert_allclose(pdf_multi(model, y[None, :]), pdf_uni(model, 0, y), rtol=1e-13)


def test_positivity():
    rng = np.random.default_rng(4)
    model = ParzenModel(rng.standard_normal((2, 50)))
    assert np.all(pdf_uni(model, 0, np.linspace(-20, 20, 11)) > 0)
    assert pdf_multi(model, [5.0, -5.0]) > 0


def test_stride():
    rng = np.random.default_rng(5)
    a = rng.standard_normal((2, 101))
    full = ParzenModel(a)
    assert full.n_anchors == 101
    np.testing.assert_array_equal(full.centres, a)
    strided = ParzenModel(a, stride=10)
    assert strided.n_anchors == 11
    np.testing.assert_array_equal(strided.centres, a[:, ::10])
    assert strided.bandwidth == pytest.approx(default_bandwidth(11))
    # stride 1 reproduces the plain estimator
    explicit = np.mean(kernel_uni((0.2 - a[0]) / full.bandwidth)) / full.bandwidth
    assert pdf_uni(full, 0, 0.2) == pytest.approx(explicit, rel=1e-13)


def test_invalid_models():
    with pytest.raises(ValueError):
        ParzenModel(np.zeros((1, 5)), stride=0)
    with pytest.raises(ValueError):
        ParzenModel(np.zeros((1, 5)), stride=5)
    with pytest.raises(ValueError):
        ParzenModel(np.zeros((1, 5)), h=-1.0)
    model = ParzenModel(np.zeros((2, 5)))
    with pytest.raises(ValueError):
        pdf_multi(model, [0.0, 0.0, 0.0])
