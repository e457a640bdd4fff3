import math

import numpy as np
import pytest

from homelearn.features import (
    EmbeddingFormatError,
    load_embeddings,
    make_category_model,
    sample_view,
)


def test_model_is_deterministic():
    a = make_category_model("cup", 7, 0.05)
    b = make_category_model("cup", 7, 0.05)
    np.testing.assert_array_equal(a.mean, b.mean)


def test_different_seeds_give_different_means():
    a = make_category_model("cup", 7, 0.05)
    b = make_category_model("cup", 8, 0.05)
    assert np.abs(a.mean - b.mean).sum() > 0.1


def test_mean_is_unit_norm():
    for label in ("cup", "plate", "a-very-long-label"):
        m = make_category_model(label, 3, 0.1)
        assert np.linalg.norm(m.mean) == pytest.approx(1.0, abs=1e-12)


def test_empty_label_rejected():
    with pytest.raises(ValueError):
        make_category_model("", 7, 0.05)


def test_negative_sigma_rejected():
    with pytest.raises(ValueError):
        make_category_model("cup", 7, -0.1)


def test_zero_sigma_returns_mean_exactly():
    m = make_category_model("cup", 7, 0.0)
    np.testing.assert_array_equal(sample_view(m, 3), m.mean)


def test_views_deterministic_and_distinct():
    m = make_category_model("cup", 7, 0.05)
    np.testing.assert_array_equal(sample_view(m, 4), sample_view(m, 4))
    assert np.abs(sample_view(m, 4) - sample_view(m, 5)).sum() > 0


def test_view_noise_scale_monte_carlo():
    # mean squared L2 distance from the mean should be D * sigma^2
    m = make_category_model("cup", 7, 0.05, dim=64)
    sq = [float(((sample_view(m, i) - m.mean) ** 2).sum()) for i in range(1000)]
    expected = 64 * 0.05 ** 2
    assert np.mean(sq) == pytest.approx(expected, rel=0.10)


def test_negative_view_index_rejected():
    m = make_category_model("cup", 7, 0.05)
    with pytest.raises(ValueError):
        sample_view(m, -1)


# ------------------------------------------------------------- separability


def _mean_within_spread(model, n=200):
    return float(np.mean([np.abs(sample_view(model, i) - model.mean).sum() for i in range(n)]))


def _separability_ratio(sigma, n_labels=8, dim=64):
    models = [make_category_model(f"cat{i}", 5, sigma, dim=dim) for i in range(n_labels)]
    pair_dists = [
        np.abs(a.mean - b.mean).sum()
        for i, a in enumerate(models)
        for b in models[i + 1 :]
    ]
    within = np.mean([_mean_within_spread(m) for m in models])
    return float(np.mean(pair_dists)) / within


def test_separability_20x_at_low_sigma():
    assert _separability_ratio(0.005) > 20.0


def test_separability_ratio_near_analytic_at_sigma_002():
    # analytic ratio 2 / (sigma * sqrt(2 D)) ~ 8.8 at sigma = 0.02, D = 64
    ratio = _separability_ratio(0.02)
    assert ratio > 8.0
    assert ratio == pytest.approx(2.0 / (0.02 * math.sqrt(2 * 64)), rel=0.15)


# --------------------------------------------------------------- embeddings


def test_load_empty_file(tmp_path):
    p = tmp_path / "e.tsv"
    p.write_text("", encoding="utf-8")
    assert load_embeddings(p, dim=4) == []


def test_load_valid_lines_in_order(tmp_path):
    p = tmp_path / "e.tsv"
    p.write_text(
        "# comment\n"
        "cup\t1.0,2.0,3.0,4.0\n"
        "\n"
        "plate\t0.5,0.5,0.5,0.5\n"
        "cup\t0,0,0,1\n",
        encoding="utf-8",
    )
    records = load_embeddings(p, dim=4)
    assert [r.label for r in records] == ["cup", "plate", "cup"]
    np.testing.assert_array_equal(records[0].vector, [1.0, 2.0, 3.0, 4.0])


def test_dimension_mismatch_names_line(tmp_path):
    p = tmp_path / "e.tsv"
    p.write_text("cup\t1.0,2.0,3.0,4.0\nplate\t1.0,2.0,3.0\n", encoding="utf-8")
    with pytest.raises(EmbeddingFormatError, match="line 2"):
        load_embeddings(p, dim=4)


def test_malformed_value_names_line(tmp_path):
    p = tmp_path / "e.tsv"
    p.write_text("cup\t1.0,x,3.0,4.0\n", encoding="utf-8")
    with pytest.raises(EmbeddingFormatError, match="line 1"):
        load_embeddings(p, dim=4)


def test_missing_tab_rejected(tmp_path):
    p = tmp_path / "e.tsv"
    p.write_text("cup 1.0,2.0,3.0,4.0\n", encoding="utf-8")
    with pytest.raises(EmbeddingFormatError, match="line 1"):
        load_embeddings(p, dim=4)


def test_normalize_switch(tmp_path):
    p = tmp_path / "e.tsv"
    p.write_text("cup\t3.0,4.0,0.0,0.0\n", encoding="utf-8")
    rec = load_embeddings(p, dim=4, normalize=True)[0]
    assert np.linalg.norm(rec.vector) == pytest.approx(1.0)
