import numpy as np
import pytest

from homelearn.clusters import Cluster, EmptyNetworkError
from homelearn.context import (
    LabelIndex,
    UnknownLabelError,
    build_context_map,
    masked_fetch_query,
    teach_context,
)
from homelearn.decay import DecayConfig
from homelearn.features import make_category_model, sample_view

from conftest import make_store

NO_DECAY = DecayConfig(alpha=0.0)


def taught_store(dim=16, labels=("cup", "plate", "book"), views=5, sigma=0.01):
    store = make_store(dim=dim)
    models = {}
    for label in labels:
        m = make_category_model(label, 3, sigma, dim=dim)
        models[label] = m
        for i in range(views):
            store.object_net.learn_one(label, sample_view(m, i), 0.0, store.config.ltm_decay)
    return store, models


def fresh_index(labels=(), locations=(1, 2, 3)):
    idx = LabelIndex()
    for loc in locations:
        idx.register_location(loc)
    for label in labels:
        idx.register_category(label)
    return idx


# ------------------------------------------------------------- label index


def test_index_is_append_only_and_stable():
    idx = fresh_index()
    a = idx.register_category("cup")
    b = idx.register_category("plate")
    assert (a, b) == (0, 1)
    assert idx.register_category("cup") == 0  # idempotent
    v = idx.version
    idx.register_category("cup")
    assert idx.version == v


def test_index_unknowns_raise():
    idx = fresh_index()
    with pytest.raises(UnknownLabelError):
        idx.category_dim("nope")
    with pytest.raises(UnknownLabelError):
        idx.location_dim(99)


# --------------------------------------------------------------- map build


def test_empty_scene_sets_location_only():
    store, _ = taught_store()
    idx = fresh_index()
    cmap, predicted = build_context_map([], 2, store.object_net, idx, 0.0, NO_DECAY)
    assert predicted == []
    assert cmap.category_dims.sum() == 0
    assert cmap.location_dims[idx.location_dim(2)] == 1.0
    assert cmap.fully_masked


def test_binary_mode_collapses_duplicates():
    store, models = taught_store()
    idx = fresh_index()
    scene = [models["cup"].mean, models["plate"].mean, models["cup"].mean]
    cmap, predicted = build_context_map(scene, 1, store.object_net, idx, 0.0, NO_DECAY)
    assert predicted == ["cup", "plate", "cup"]
    assert cmap.category_dims[idx.category_dim("cup")] == 1.0
    assert cmap.category_dims[idx.category_dim("plate")] == 1.0
    assert cmap.category_dims.sum() == 2.0


def test_counts_mode_keeps_duplicates():
    store, models = taught_store()
    idx = fresh_index()
    scene = [models["cup"].mean, models["cup"].mean]
    cmap, _ = build_context_map(scene, 1, store.object_net, idx, 0.0, NO_DECAY, presence="counts")
    assert cmap.category_dims[idx.category_dim("cup")] == 2.0


def test_empty_object_network_rejected():
    store = make_store(dim=16)
    with pytest.raises(EmptyNetworkError):
        build_context_map([], 1, store.object_net, fresh_index(), 0.0, NO_DECAY)


def test_map_build_is_read_only_on_object_net():
    store, models = taught_store()
    idx = fresh_index()
    before = store.object_net.to_document()
    build_context_map([models["cup"].mean], 1, store.object_net, idx, 0.0, NO_DECAY)
    assert store.object_net.to_document() == before


def test_confusable_pair_propagates_into_map():
    # a sparsely-taught category sitting on a heavier neighbor's prototype is
    # predicted as the neighbor, and the map carries that prediction
    store = make_store(dim=16)
    spoon = make_category_model("spoon", 3, 0.01, dim=16)
    for i in range(6):
        store.object_net.learn_one("spoon", sample_view(spoon, i), 0.0, store.config.ltm_decay)
    fork_view = spoon.mean + 0.005  # fork looks just like the spoon prototype
    store.object_net.learn_one("fork", np.asarray(fork_view), 0.0, store.config.ltm_decay)
    idx = fresh_index()
    cmap, predicted = build_context_map(
        [sample_view(spoon, 99) + 0.005], 1, store.object_net, idx, 0.0, NO_DECAY
    )
    assert predicted == ["spoon"]
    assert cmap.category_dims[idx.category_dim("spoon")] == 1.0


# ----------------------------------------------------------------- teaching


def test_first_context_recruits_exact_map():
    store, models = taught_store()
    idx = fresh_index()
    cmap, _ = build_context_map([models["cup"].mean], 2, store.object_net, idx, 0.0, NO_DECAY)
    out = teach_context(store, "kitchen", cmap)
    assert out.recruited
    np.testing.assert_array_equal(store.context_net.clusters[0].centroid, cmap.vector())


def test_repeat_view_updates_and_new_context_recruits():
    store, models = taught_store()
    idx = fresh_index()
    cmap, _ = build_context_map([models["cup"].mean], 2, store.object_net, idx, 0.0, NO_DECAY)
    assert teach_context(store, "kitchen", cmap).recruited
    assert teach_context(store, "kitchen", cmap).kind == "updated"  # identical map, H_out = 1
    cmap2, _ = build_context_map([models["book"].mean], 3, store.object_net, idx, 0.0, NO_DECAY)
    assert teach_context(store, "office", cmap2).recruited


def test_partial_mask_rejected_for_teaching():
    store, models = taught_store()
    idx = fresh_index()
    cmap, _ = build_context_map([models["cup"].mean], 2, store.object_net, idx, 0.0, NO_DECAY)
    cmap.mask[0] = False
    with pytest.raises(ValueError):
        teach_context(store, "kitchen", cmap)


# ------------------------------------------------------------------ queries


def _teach_scene(store, idx, models, labels, location, name, now=0.0):
    cmap, _ = build_context_map(
        [models[l].mean for l in labels], location, store.object_net, idx, now, NO_DECAY
    )
    return teach_context(store, name, cmap, now=now)


def test_unique_evidence_query():
    store, models = taught_store()
    idx = fresh_index()
    _teach_scene(store, idx, models, ["cup", "plate"], 2, "kitchen")
    _teach_scene(store, idx, models, ["book"], 3, "office")
    pred = masked_fetch_query(store, "cup", idx)
    assert (pred.context, pred.location) == ("kitchen", 2)
    pred = masked_fetch_query(store, "book", idx)
    assert (pred.context, pred.location) == ("office", 3)


def test_unknown_label_and_empty_network_errors():
    store, models = taught_store()
    idx = fresh_index()
    with pytest.raises(UnknownLabelError):
        masked_fetch_query(store, "cup", idx)  # taught but no category dim yet
    _teach_scene(store, idx, models, ["cup"], 2, "kitchen")
    with pytest.raises(UnknownLabelError):
        masked_fetch_query(store, "never-taught", idx)


def test_decay_shrinks_stale_cluster_activation():
    # equal raw weight, equal masked distance: the recently-active cluster wins
    store, _ = taught_store()
    idx = fresh_index(labels=("cup",))
    c, l = idx.category_count, idx.location_count
    store.sync_context_layout(c, l)
    cup = idx.category_dim("cup")

    def centroid(presence, loc):
        v = np.zeros(c + l)
        v[cup] = presence
        v[c + idx.location_dim(loc)] = 1.0
        return v

    store.context_net.clusters = [
        Cluster(0, "kitchen", centroid(0.5, 2), 5.0, np.array([0.0])),
        Cluster(1, "office", centroid(0.5, 3), 5.0, np.array([20.0])),
    ]
    store.context_net._next_id = 2
    store.context_net.dim = c + l
    store.clock = 20.0

    pred = masked_fetch_query(store, "cup", idx)
    assert (pred.context, pred.location) == ("office", 3)
    report = pred.report
    k, o = report.cluster_ids.index(0), report.cluster_ids.index(1)
    assert report.distances[k] == pytest.approx(0.5) and report.distances[o] == pytest.approx(0.5)
    assert report.effective_weights[k] == pytest.approx(5.0 * 20 ** -0.2, abs=1e-9)
    assert report.effective_weights[o] == pytest.approx(5.0)
    assert report.activations[o] > report.activations[k]
    # ranked candidates expose the stale location as the fallback
    assert [loc for _, loc, _ in pred.ranked] == [3, 2]


def test_dimension_stability_under_index_growth():
    store, models = taught_store()
    idx = fresh_index()
    _teach_scene(store, idx, models, ["cup", "plate"], 2, "kitchen")
    _teach_scene(store, idx, models, ["book"], 3, "office")
    before = masked_fetch_query(store, "cup", idx)
    idx.register_category("totally-new-dim")
    idx.register_category("another-one")
    after = masked_fetch_query(store, "cup", idx)
    assert (before.context, before.location) == (after.context, after.location)
    assert store.context_net.dim == idx.category_count + idx.location_count


def test_masked_distance_equals_full_when_other_dims_agree():
    store, models = taught_store()
    idx = fresh_index()
    _teach_scene(store, idx, models, ["cup"], 2, "kitchen")
    c, l = idx.category_count, idx.location_count
    centroid = store.context_net.clusters[0].centroid
    query = centroid.copy()
    query[idx.category_dim("cup")] = 0.25  # differ only on the masked dim
    mask = np.zeros(c + l, dtype=bool)
    mask[idx.category_dim("cup")] = True
    _, masked_report = store.context_net.classify(query, 0.0, NO_DECAY, mask=mask)
    _, full_report = store.context_net.classify(query, 0.0, NO_DECAY)
    assert masked_report.distances[0] == pytest.approx(full_report.distances[0], abs=1e-12)


def test_recency_beats_age_at_equal_distance_and_weight():
    # the adaptation property, asserted numerically on the activation values
    cfg = DecayConfig(alpha=0.2)
    from homelearn.decay import batch_effective_weights

    raws = np.array([4.0, 4.0])
    fresh, stale = batch_effective_weights(raws, [np.array([19.0]), np.array([0.0])], 20.0, cfg)
    d = 0.7
    assert np.exp(-d / fresh) > np.exp(-d / stale)


def test_stm_context_entries_migrate_with_layout():
    store, models = taught_store()
    idx = fresh_index()
    cmap, _ = build_context_map([models["cup"].mean], 2, store.object_net, idx, 0.0, NO_DECAY)
    teach_context(store, "kitchen", cmap)
    store.stm_observe(cmap.vector(), "kitchen", "context")
    idx.register_category("plate")
    cmap2, _ = build_context_map([models["plate"].mean], 2, store.object_net, idx, 0.0, NO_DECAY)
    teach_context(store, "kitchen", cmap2)  # triggers layout sync
    entry = [e for e in store.stm if e.kind == "context"][0]
    assert entry.feature.shape[0] == idx.category_count + idx.location_count
    assert entry.feature[idx.category_dim("cup")] == 1.0
    assert entry.feature[idx.category_dim("plate")] == 0.0
