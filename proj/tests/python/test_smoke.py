import math
from fractions import Fraction

import pytest

import qnetfid as q


def test_table_values_scenario_a():
    expected = {"chain": Fraction(65, 96), "star": Fraction(66, 96), "complete": Fraction(72, 96)}
    for family, value in expected.items():
        net = q.generate(family, 4, p=0.5)
        assert q.average_max_fidelity(net)["F_avg_max"] == pytest.approx(float(value), abs=1e-12)
        assert Fraction(q.scenario_A_exact(family, 4, "1/2")) == value
    ring = q.generate("ring", 4, p=0.5)
    assert q.average_max_fidelity(ring, averaging="max-paths")["F_avg_max"] == pytest.approx(66 / 96)
    assert q.average_max_fidelity(ring)["F_avg_max"] == pytest.approx(68 / 96)


def test_pair_records_and_paths():
    net = q.generate("chain", 4, p=0.5)
    r = q.average_max_fidelity(net, pairs=True, effective_path_length=True)
    assert len(r["pairs"]) == 6
    assert r["effective_path_length"] == pytest.approx(10 / 6)
    far = q.pair_max_fidelity(net, 0, 3)
    assert far["path"] == [0, 1, 2, 3]
    assert far["fidelity"] == pytest.approx(0.5625)
    assert q.brute_force_pair_fidelity(net, 0, 3)["product"] == far["product"]


def test_network_roundtrip(tmp_path):
    net = q.Network(3, [(0, 1, 0.25), (1, 2, 0.75)])
    path = tmp_path / "g.txt"
    q.save_edge_list(net, str(path))
    assert q.load_edge_list(str(path)) == net
    assert net.is_tree()


def test_validation_errors(tmp_path):
    with pytest.raises(ValueError):
        q.Network(4, [(0, 1, 0.5), (2, 3, 0.5)])
    with pytest.raises(ValueError):
        q.generate("ring", 2, p=0.5)
    with pytest.raises(OSError):
        q.load_edge_list(str(tmp_path / "missing.txt"))


def test_scenario_b_closed_form_and_engine():
    r = q.run_scenario_B("chain", 4, 0.5, 1)
    assert r["sample_count"] == 3
    assert r["mean"] == pytest.approx(109 / 144, abs=1e-12)
    assert q.scenario_B_exact("chain", 4, 1, "1/2") == "109/144"
    assert q.scenario_B("ring", 5, 1, 0.5) is None


def test_scenario_c_is_seeded():
    a = q.run_scenario_C("ring", 3, 20000, seed=3, threads=1)
    b = q.run_scenario_C("ring", 3, 20000, seed=3, threads=4)
    assert a["mean"] == b["mean"]
    assert abs(a["mean"] - 7 / 9) < 4 * a["std_error"]


def test_decoherence_weight():
    assert q.decoherence_weight(0.46, 1.0, 30.0) == pytest.approx(10 ** -1.38, abs=1e-12)


def test_cli_in_process():
    code, out, _ = q.cli(["compute", "--family", "star", "--n", "4", "--p", "0.5"])
    assert code == 0
    assert "0.687500" in out
    code, _, err = q.cli(["compute", "--family", "ring", "--n", "2", "--p", "0.5"])
    assert code == 2 and err
