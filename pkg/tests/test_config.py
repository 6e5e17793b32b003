import pytest

from liftlab.errors import InvalidParameterError
from liftlab.montecarlo.config import (
    ExperimentConfig,
    estimate,
    payload_hash,
    run_document,
    run_experiment,
    with_workers,
)
from liftlab.montecarlo.harness import BLOCK_SIZE


def test_round_trip():
    cfg = ExperimentConfig("connectivity", family="cycle:3", ns=(2, 3), trials=100)
    assert ExperimentConfig.from_dict(cfg.to_dict()) == cfg


@pytest.mark.parametrize(
    "data",
    [
        {"kind": "nope"},
        {"kind": "exact", "trials": 0},
        {"kind": "exact", "workers": 0},
        {"kind": "exact", "seed": -1},
        {"kind": "exact", "ns": [0]},
        {"kind": "exact", "l": -1},
        {"kind": "exact", "colour": "red"},
    ],
)
def test_validation(data):
    with pytest.raises(InvalidParameterError):
        ExperimentConfig.from_dict(data)


def test_missing_inputs():
    with pytest.raises(InvalidParameterError):
        run_experiment(ExperimentConfig("connectivity", n=2))
    with pytest.raises(InvalidParameterError):
        run_experiment(ExperimentConfig("transitive", l=2))
    with pytest.raises(InvalidParameterError):
        run_experiment(ExperimentConfig("wreath", l=2))
    with pytest.raises(InvalidParameterError):
        run_experiment(ExperimentConfig("homotopy", families=("cycle:3",), n=3))
    with pytest.raises(InvalidParameterError):
        run_experiment(ExperimentConfig("slope", family="cycle:3", l=2, ns=(2, 3, 4, 5)))
    with pytest.raises(InvalidParameterError):
        run_experiment(ExperimentConfig("exact", n=3, l=2, method="guess"))
    with pytest.raises(InvalidParameterError):
        estimate(ExperimentConfig("barbell", k=3, n=2))


def test_graph_file(tmp_path):
    path = tmp_path / "g.txt"
    path.write_text("2 3\n0 1\n0 1\n0 1\n")
    out = run_experiment(ExperimentConfig("connectivity", graph_file=str(path), n=2, trials=2000))
    assert out["betti"] == 2 and out["ok"]


@pytest.mark.parametrize(
    "cfg",
    [
        ExperimentConfig("transitive", n=3, l=2, trials=500),
        ExperimentConfig("sym-or-alt", n=4, l=2, trials=200),
        ExperimentConfig("k-transitive", n=4, l=2, k=2, trials=200),
        ExperimentConfig("regular", d=2, n=5, trials=500),
        ExperimentConfig("wreath", signature=(2, 2), l=2, trials=500),
        ExperimentConfig("iterated", family="cycle:3", signature=(2, 2), trials=300),
    ],
)
def test_estimates_are_reproducible(cfg):
    a, b = estimate(cfg), estimate(cfg)
    assert a == b and 0 <= a.p_hat <= 1


def test_exact_payload():
    out = run_experiment(ExperimentConfig("exact", n=3, l=2, method="both"))
    assert out["probability"]["fraction"] == "13/18"
    assert out["agree"] and out["bound_holds"] and out["ok"]


def test_document_independent_of_workers():
    cfg = ExperimentConfig("connectivity", family="theta", ns=(3,), trials=BLOCK_SIZE + 100)
    one = run_document(cfg)
    two = run_document(with_workers(cfg, 2))
    assert one["payload"] == two["payload"]
    assert one["payload_sha256"] == two["payload_sha256"] == payload_hash(one["payload"])
    assert one["tool"] == "liftlab" and one["seed"] == cfg.seed
    assert two["config"]["workers"] == 2
