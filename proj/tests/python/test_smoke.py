"""Smoke tests for the python bindings."""

import json

import pytest

import egolayers as eg


def test_kmeans_separated():
    c = eg.kmeans_1d([1, 1, 1, 8, 8, 8], 2)
    assert c.k == 2
    assert c.centroids == [8.0, 1.0]
    assert c.wcss == pytest.approx(0.0, abs=1e-12)
    assert c.sizes() == [3, 3]
    assert c.assignments == [1, 1, 1, 0, 0, 0]


def test_kmeans_validation():
    with pytest.raises(ValueError):
        eg.kmeans_1d([], 1)
    with pytest.raises(ValueError):
        eg.kmeans_1d([1.0, 2.0], 5)


def test_wcss_curve_and_elbow():
    curve = eg.wcss_curve([1, 1, 8, 8], k_max=3)
    assert curve[0] == pytest.approx(49.0)
    assert curve[1] == pytest.approx(0.0, abs=1e-12)
    assert eg.elbow_optimal_k([100, 10, 8, 7]) == 2
    assert eg.elbow_optimal_k([100, 60, 12, 10, 9.5]) == 3


def test_silhouette():
    w = [1, 2, 8, 9]
    s = eg.silhouette(w, eg.kmeans_1d(w, 2))
    assert s == pytest.approx(0.8564, abs=1e-4)


def test_lloyd_never_beats_exact():
    w = [0.5, 1.0, 1.5, 7.0, 8.0, 9.0]
    exact = eg.kmeans_1d(w, 2)
    lloyd = eg.kmeans_1d_lloyd(w, 2, seed=7)
    assert lloyd.wcss >= exact.wcss - 1e-9


def test_planted_three_layer_recovery():
    alters, truth = eg.generate_ego(eg.reviewer_three_layer(), seed=42)
    assert len(alters) == len(truth)
    weights = [f for _, f in alters]
    analysis = eg.analyze_weights(weights, fixed_ks=[2, 3])
    assert analysis.optimal_k == 3
    assert analysis.silhouette is not None
    assert 2 in analysis.fixed and 3 in analysis.fixed
    # frequencies descending, layer indices planted
    assert weights == sorted(weights, reverse=True)
    assert {layer for _, layer, _ in truth} == {0, 1, 2}


def test_classify_review():
    assert eg.classify_review("Please update soon!") == (True, False)
    assert eg.classify_review("The dialogue in this scene felt stiff") == (False, True)
    assert eg.classify_review("") == (False, False)


def test_config_driven_pipeline(tmp_path):
    synth_dir = tmp_path / "synth"
    run_dir = tmp_path / "run"
    config = {
        "seed": 1234,
        "output_dir": str(synth_dir),
        "criteria": {"min_monthly_rate": 1.0, "min_connections": 3},
        "directions": ["outgoing"],
        "synth": {
            "mixture": [
                {"egos": 30, "layers": "reviewer_two_layer"},
                {"egos": 20, "layers": "reviewer_three_layer"},
            ]
        },
    }
    eg.run_synth(json.dumps(config))
    assert (synth_dir / "events.csv").exists()
    assert (synth_dir / "ledger.jsonl").exists()

    config["input"] = {"path": str(synth_dir / "events.csv")}
    config["output_dir"] = str(run_dir)
    eg.run_ingest(json.dumps(config))
    assert (run_dir / "edges.csv").exists()

    eg.run_analyze(json.dumps(config))
    summary = json.loads((run_dir / "summary_outgoing.json").read_text())
    assert summary["ego_count"] == 50
    assert sum(summary["p_of_x"].values()) == pytest.approx(1.0)

    config["labels"] = {"source": "file", "path": str(synth_dir / "labels.csv")}
    eg.run_crosstab(json.dumps(config))
    tab = json.loads((run_dir / "crosstab.json").read_text())
    assert tab["k"] == 3
    assert tab["unassigned"] >= 0

    manifest = json.loads((run_dir / "manifest.json").read_text())
    assert manifest["tool"] == "egolayers"
    assert len(manifest["inputs"][0]["sha256"]) == 64


def test_bad_config_raises():
    with pytest.raises(ValueError):
        eg.run_synth(json.dumps({"unknown_key": 1}))
    with pytest.raises(ValueError):
        eg.run_synth("{not json")
