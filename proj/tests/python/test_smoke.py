"""End-to-end smoke checks for the siotrust extension module."""

import math

import pytest

import siotrust as st


def make_graph():
    g = st.TrustGraph(8, 6)
    ratings = [
        (0, 0, 4.5), (0, 1, 4.0), (0, 2, 2.0),
        (1, 0, 4.0), (1, 1, 5.0), (1, 3, 3.0),
        (2, 2, 1.5), (2, 3, 2.0), (2, 4, 2.5),
        (3, 2, 2.0), (3, 4, 3.0), (3, 5, 1.0),
        (4, 0, 5.0), (4, 1, 4.5), (4, 5, 3.5),
        (5, 1, 4.0), (5, 3, 3.5), (5, 4, 4.0),
        (6, 0, 3.0), (6, 2, 2.5), (6, 5, 2.0),
        (7, 1, 4.5), (7, 3, 4.0), (7, 5, 3.0),
    ]
    for i, j, r in ratings:
        g.rate(i, j, r)
    return g


def test_graph_roundtrip():
    g = make_graph()
    assert g.trustor_count() == 8
    assert g.trustee_count() == 6
    assert g.rating_count() == 24
    assert g.value(0, 0) == pytest.approx(0.9)
    assert not g.has_edge(0, 5)

    text = st.write_ratings_tsv(g)
    h = st.read_ratings_tsv(text)
    assert h.rating_count() == g.rating_count()
    assert h.value(3, 4) == pytest.approx(g.value(3, 4))


def test_rating_validation():
    g = st.TrustGraph(2, 2)
    with pytest.raises(ValueError):
        g.rate(0, 0, 7.0)
    with pytest.raises(st.DataError):
        st.read_ratings_tsv("a\tb\n")


def test_social_pipeline():
    g = make_graph()
    build = st.build_social_network_percentile(g, percentile=50)
    net = build.network
    assert len(net) == 8
    assert net.threshold() > 0
    assert net.edge_count() > 0

    d = build.distances.distance(0, 1)
    assert d is None or 0.0 <= d <= 1.0

    pattern = st.trust_pattern(g, build, similarity="hellinger", beta=1.0)
    for i in range(len(pattern)):
        row = pattern.row(i)
        if row:
            assert sum(w for _, w in row) == pytest.approx(1.0)


def test_train_predict_evaluate():
    g = make_graph()
    build = st.build_social_network_percentile(g, percentile=50)
    pattern = st.trust_pattern(g, build)

    cfg = st.TrainConfig()
    cfg.latent_dim = 3
    cfg.epochs = 60
    cfg.seed = 7
    model = st.train(g, pattern, cfg)
    history = model.loss_history()
    assert len(history) == 60
    assert history[-1] < history[0]

    preds = st.predict_blended(model, pattern, cfg.alpha)
    p = preds.at(0, 0)
    assert 0.0 < p < 1.0

    ranked = st.rank_trustees(preds, 0)
    assert sorted(ranked) == list(range(6))

    metrics = st.evaluate(g, seed=3, split_fraction=0.75, latent_dim=3,
                          epochs=60)
    assert metrics["coverage"] == 1.0
    assert metrics["rmse"] >= 0.0
    assert 0.0 <= metrics["precision"] <= 1.0


def test_checkpoint_roundtrip():
    g = make_graph()
    pattern = st.binary_trust_pattern(
        st.build_social_network_percentile(g, percentile=50))
    cfg = st.TrainConfig()
    cfg.latent_dim = 2
    cfg.epochs = 30
    model = st.train(g, pattern, cfg)

    again = st.load_factors(st.save_factors(model))
    assert again.latent_dim() == 2
    assert st.predict(again).at(1, 2) == pytest.approx(
        st.predict(model).at(1, 2))


def test_simulation_smoke():
    out = st.simulate(maliciousness=0.3, seed=11, horizon_hours=60)
    kinds = {kind for _, kind in out["tracked"]}
    assert "none" in kinds
    assert "self-promoting" in kinds or "bad-mouthing" in kinds \
        or "ballot-stuffing" in kinds
    assert out["selection_count"] > 0
    hours = sorted({h for h, *_ in out["snapshots"]})
    assert hours[0] == 0.0
    for _, _, mean, lo, hi, _ in out["snapshots"]:
        assert 1.0 <= mean <= 5.0
        assert lo <= mean <= hi

    again = st.simulate(maliciousness=0.3, seed=11, horizon_hours=60)
    assert again["snapshots"] == out["snapshots"]


def test_version():
    assert st.__version__ == "0.1.0"
    assert not math.isnan(0.0)
