"""Both kernel backends agree with each other and with direct arithmetic."""

import numpy as np
import pytest

from homelearn import kernels

BACKENDS = list(kernels.backends().items())


@pytest.fixture
def arrays():
    rng = np.random.default_rng(7)
    centroids = rng.standard_normal((17, 24))
    x = rng.standard_normal(24)
    mask = rng.random(24) < 0.4
    events = np.sort(rng.random((17, 9)) * 20.0, axis=1)
    counts = rng.integers(1, 10, size=17).astype(np.int64)
    return centroids, x, mask, events, counts


@pytest.mark.parametrize("name,backend", BACKENDS)
def test_l1_distances(name, backend, arrays):
    centroids, x, _, _, _ = arrays
    got = backend["l1_distances"](centroids, x)
    want = np.abs(centroids - x).sum(axis=1)
    np.testing.assert_allclose(got, want, rtol=0, atol=1e-12)


@pytest.mark.parametrize("name,backend", BACKENDS)
def test_masked_l1_distances(name, backend, arrays):
    centroids, x, mask, _, _ = arrays
    got = backend["masked_l1_distances"](centroids, x, mask)
    want = np.abs(centroids[:, mask] - x[mask]).sum(axis=1)
    np.testing.assert_allclose(got, want, rtol=0, atol=1e-12)


@pytest.mark.parametrize("name,backend", BACKENDS)
def test_model_times_match_direct_formula(name, backend, arrays):
    _, _, _, events, counts = arrays
    now, u, t_floor = 25.0, 0.6, 1.0 / 24.0
    got = backend["model_times"](events, counts, now, u, t_floor)
    for i in range(events.shape[0]):
        ages = np.maximum(now - events[i, : counts[i]], t_floor)
        h = ages ** -u
        h = h / h.sum()
        assert got[i] == pytest.approx(float((h * ages).sum()), abs=1e-12)
        assert ages.min() - 1e-12 <= got[i] <= ages.max() + 1e-12


@pytest.mark.parametrize("name,backend", BACKENDS)
def test_retention_is_capped_at_one(name, backend):
    times = np.array([1 / 24, 0.5, 1.0, 2.0, 30.0])
    got = backend["retention"](times, 0.2)
    assert np.all(got <= 1.0)
    assert got[2] == pytest.approx(1.0)
    assert got[4] == pytest.approx(30.0 ** -0.2, abs=1e-15)
    # alpha = 0 disables fading entirely
    np.testing.assert_allclose(backend["retention"](times, 0.0), 1.0)


@pytest.mark.parametrize("name,backend", BACKENDS)
def test_activations(name, backend):
    d = np.array([0.0, 1.0, 3.0])
    w = np.array([1.0, 1.0, 2.0])
    np.testing.assert_allclose(backend["activations"](d, w), np.exp(-d / w), atol=1e-15)


def test_backends_agree(arrays):
    if len(BACKENDS) < 2:
        pytest.skip("numba unavailable")
    centroids, x, mask, events, counts = arrays
    results = {}
    for name, backend in BACKENDS:
        results[name] = (
            backend["l1_distances"](centroids, x),
            backend["masked_l1_distances"](centroids, x, mask),
            backend["model_times"](events, counts, 25.0, 0.6, 1 / 24),
        )
    a, b = results["numpy"], results["numba"]
    for x_np, x_nb in zip(a, b):
        np.testing.assert_allclose(x_np, x_nb, rtol=1e-13)
