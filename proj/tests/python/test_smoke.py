import json

import numpy as np
import pytest

import dmcd


def rng_image(seed, shape=(32, 32), scale=255.0):
    return np.random.default_rng(seed).uniform(0.0, scale, shape)


def test_adjoint_pair():
    rng = np.random.default_rng(1)
    f = rng.standard_normal((7, 5))
    g = rng.standard_normal((7, 5))
    for L in (1, 3, 8):
        for l in range(L):
            lhs = np.sum(dmcd.forward_diff(f, l, L) * g)
            rhs = -np.sum(f * dmcd.backward_diff(g, l, L))
            assert abs(lhs - rhs) < 1e-12


def test_horizontal_difference_is_a_column_shift():
    f = rng_image(2, (6, 6))
    expect = np.roll(f, -1, axis=1) - f
    np.testing.assert_allclose(dmcd.forward_diff(f, 0, 4), expect, atol=1e-12)


def test_convolution_matches_numpy_fft():
    f = rng_image(3, (8, 12))
    h = dmcd.make_blur_kernel("gaussian:5", 8, 12)
    assert abs(h.sum() - 1.0) < 1e-12
    expect = np.real(np.fft.ifft2(np.fft.fft2(f) * np.fft.fft2(h)))
    np.testing.assert_allclose(dmcd.circular_convolve(f, h), expect, atol=1e-10)


def test_shrink():
    out = dmcd.shrink(np.array([[-3.0, -0.5], [0.5, 3.0]]), 1.0)
    np.testing.assert_array_equal(out, [[-2.0, 0.0], [0.0, 2.0]])
    with pytest.raises(ValueError):
        dmcd.shrink(np.zeros((2, 2)), -1.0)


def test_frames_round_trip():
    fb = dmcd.MultiscaleFrames(64, 64, scales=3, directions=4, dilation=2.0, c=1.0)
    assert fb.unity_residual() < 1e-10
    f = rng_image(4, (64, 64))
    low, bands = fb.analyze(f)
    assert len(bands) == 12
    np.testing.assert_allclose(fb.synthesize(low, bands), f, atol=1e-9)


def test_metrics():
    a = rng_image(5)
    b = rng_image(6)
    assert dmcd.mse(a, b) == pytest.approx(np.mean((a - b) ** 2), rel=1e-12)
    assert dmcd.sparsity(np.eye(4)) == pytest.approx(25.0)
    assert dmcd.mec(np.zeros((20, 20))) == 0.0


def test_noise_is_seeded():
    f = np.zeros((64, 64))
    a = dmcd.add_noise(f, 10.0, 3)
    np.testing.assert_array_equal(a, dmcd.add_noise(f, 10.0, 3))
    assert 8.0 < a.std() < 12.0


def test_demix_constant_image():
    f = np.full((16, 16), 100.0)
    h = dmcd.make_blur_kernel("delta", 16, 16)
    d = dmcd.demix(f, h, L=4, S=4, max_iters=50, cst_directions=4, cst_scales=2)
    assert d["converged"]
    assert np.max(np.abs(d["u"] - 100.0)) < 0.1
    for key in ("v", "rho", "eps", "f_re"):
        assert d[key].shape == f.shape


def test_demix_rejects_bad_parameters():
    f = np.zeros((8, 8))
    h = dmcd.make_blur_kernel("delta", 8, 8)
    with pytest.raises(ValueError):
        dmcd.demix(f, h, L=0)
    with pytest.raises(ValueError):
        dmcd.demix(f, h, no_such_key=1)


def test_run_experiment_writes_report(tmp_path):
    f0 = np.round(rng_image(7))
    dmcd.save_image(f0, str(tmp_path / "in.png"))
    np.testing.assert_array_equal(dmcd.load_image(str(tmp_path / "in.png")), f0)
    out = tmp_path / "out"
    r = dmcd.run_experiment(
        input=str(tmp_path / "in.png"),
        output=str(out),
        kernel="gaussian:5",
        noise_sigma=2.0,
        seed=1,
        L=4,
        S=4,
        max_iters=20,
        cst_scales=2,
        cst_directions=4,
    )
    report = json.loads((out / "report.json").read_text())
    assert report["iterations"] == r["iterations"]
    assert report["mse"] == pytest.approx(r["mse"])
    assert "u.png" in r["files"]


def test_missing_input_raises(tmp_path):
    with pytest.raises(RuntimeError):
        dmcd.run_experiment(input=str(tmp_path / "nope.png"), output=str(tmp_path / "out"))
    assert not (tmp_path / "out").exists()
