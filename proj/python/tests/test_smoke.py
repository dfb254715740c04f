import json
import math

import numpy as np
import pytest

import trilat


def test_simulate_reconstruct_verify():
    truth = trilat.random_configuration(6, 2, 3)
    data = trilat.simulate(truth, mode="loop", extra=4, seed_ensemble=5, seed_shuffle=6)
    assert len(data["values"]) == len(data["paths"]) == 12 + 4
    points, labeling = trilat.reconstruct(data["values"], 2, "loop", data["bound"])
    assert points.shape == (6, 2)
    verdict = trilat.verify(truth, points, max_scale=1)
    assert verdict["matched"] and verdict["scale"] == 1
    assert verdict["max_residual"] < 1e-7
    assert sorted(i for i, _ in labeling) == sorted(set(i for i, _ in labeling))


def test_path_mode_in_space():
    truth = trilat.random_configuration(5, 3, 8)
    data = trilat.simulate(truth, mode="path", seed_ensemble=1, seed_shuffle=2)
    points, _ = trilat.reconstruct(data["values"], 3, "path", data["bound"])
    assert trilat.verify(truth, points)["matched"]


def test_scaled_ensemble_reports_scale():
    truth = trilat.random_configuration(5, 2, 4)
    data = trilat.simulate(truth, mode="path", scale=2, seed_ensemble=2)
    points, _ = trilat.reconstruct(data["values"], 2, "path", data["bound"])
    assert trilat.verify(truth, points, max_scale=3)["scale"] == 2


def test_canonical_matrices():
    base = trilat.canonical_matrix("base", 2)
    assert base.shape == (6, 6)
    assert round(np.linalg.det(base)) == 8
    assert round(np.linalg.det(trilat.canonical_matrix("trilat", 3))) == 2
    with pytest.raises(trilat.InvalidArgument):
        trilat.canonical_matrix("other", 2)


def test_membership_and_cayley_menger():
    pts = trilat.random_configuration(4, 2, 11)
    lengths = [np.linalg.norm(pts[i] - pts[j]) for j in range(4) for i in range(j)]
    assert trilat.is_member(lengths, 2)
    assert not trilat.is_member([1.0] * 6, 2)
    assert abs(trilat.cayley_menger_det(np.square(lengths), 2)) < 1e-9
    w = trilat.canonical_matrix("base", 2) @ np.array(lengths)
    assert trilat.is_member(list(w), 2, kind="base")
    assert trilat.is_singular_L24(lengths) is None
    assert trilat.is_singular_L24([1.0, 2.0, 1.0, 3.0, 2.0, 1.0]) is not None


def test_integer_relations():
    rel = trilat.find_integer_relation([1.0, math.sqrt(2), 1.0 + math.sqrt(2)], 2)
    assert rel is not None
    assert abs(rel[0] + rel[1] * math.sqrt(2) + rel[2] * (1 + math.sqrt(2))) < 1e-12
    assert trilat.find_integer_relation([1.0, math.sqrt(2), math.sqrt(3)], 3) is None


def test_errors():
    with pytest.raises(trilat.NoBaseFound):
        trilat.reconstruct([1.1, 1.73, 2.2, 0.91, 1.37, 2.71], 2, "loop", 2)
    with pytest.raises(trilat.InvalidArgument):
        trilat.reconstruct([1.0, 2.0, 3.0], 1, "path", 1)


def test_dataset_json():
    text = trilat.dataset_to_json([0.5, 1.25], 2, "path", 1)
    doc = json.loads(text)
    assert doc["values"] == [0.5, 1.25] and doc["mode"] == "path"
