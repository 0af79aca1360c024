import json
import os
from pathlib import Path

import numpy as np
import pytest

import kronred

DATA = Path(os.environ.get("KRONRED_DATA_DIR", Path(__file__).resolve().parents[2] / "data"))
WYE = DATA / "wye.json"
SINUSOID = DATA / "wye_sinusoid.json"
F0 = [-5.0, -5.0, 10.0]


def wye_dict(r, l):
    return {
        "nodes": ["1", "2", "3", "4"],
        "boundary": ["1", "2", "3"],
        "edges": [{"id": k, "from": n, "to": "4", "r_ohm": r, "l_henry": l} for k, n in (("a", "1"), ("b", "2"), ("c", "3"))],
    }


def test_validate_orders_boundary_first():
    v = kronred.validate(str(WYE))
    assert v["boundary"] == ["1", "2", "3"]
    assert v["interior"] == ["4"]
    assert v["B1"].shape == (3, 3)
    np.testing.assert_array_equal(v["B0"], [[-1, -1, -1]])


def test_reduced_matrices_match_congruence():
    net = json.loads(WYE.read_text())
    r = np.array([e["r_ohm"] for e in net["edges"]])
    l = np.array([e["l_henry"] for e in net["edges"]])
    for strategy in ("tree", "nullbasis", "modal"):
        m = kronred.reduce(net, strategy)
        P = m["P"]
        np.testing.assert_allclose(m["Lhat"], P.T @ np.diag(l) @ P, atol=1e-12)
        np.testing.assert_allclose(m["Rhat"], P.T @ np.diag(r) @ P, atol=1e-12)
        np.testing.assert_allclose(np.array([[-1, -1, -1]]) @ P, 0, atol=1e-12)
        back = kronred.load_model(m["json"])
        assert np.array_equal(back["P"], P)


def test_reduced_run_tracks_the_oracle():
    kw = dict(dt=1e-3, t_end=2.0)
    red = kronred.simulate(WYE, SINUSOID, F0, method="reduced", **kw)
    dae = kronred.simulate(WYE, SINUSOID, F0, method="dae", **kw)
    np.testing.assert_allclose(red["i1"][0], F0, atol=1e-12)
    dev = kronred.compare(dae["t"], red["i1"], dae["i1"])
    assert dev["max_rel"] < 1e-9


def test_phasor_matches_numpy_schur_complement():
    omega = 2 * np.pi * 1.5
    v1 = [120 * np.exp(1j * np.deg2rad(p)) for p in (0, 30, -30)]
    out = kronred.phasor(WYE, omega, v1)
    net = json.loads(WYE.read_text())
    z = np.array([e["r_ohm"] + 1j * omega * e["l_henry"] for e in net["edges"]])
    B = np.array([[1, 0, 0], [0, 1, 0], [0, 0, 1], [-1, -1, -1]], dtype=float)
    Y = B @ np.diag(1 / z) @ B.T
    Yr = Y[:3, :3] - np.outer(Y[:3, 3], Y[3, :3]) / Y[3, 3]
    np.testing.assert_allclose(out["Yr"], Yr, rtol=1e-12)
    np.testing.assert_allclose(out["i1"], Yr @ np.array(v1), rtol=1e-12)


def test_homogeneous_refuses_the_wye():
    with pytest.raises(kronred.KronredError) as info:
        kronred.simulate(WYE, SINUSOID, F0, dt=1e-3, t_end=0.1, method="homogeneous")
    assert info.value.code == "NotHomogeneous"


def test_balanced_wye_gives_a_delta():
    delta = kronred.heuristic_reduce(wye_dict(1.0, 1.0), 2.0)
    assert [(e["from"], e["to"]) for e in delta["edges"]] == [("1", "2"), ("2", "3"), ("3", "1")]
    for e in delta["edges"]:
        assert e["r_ohm"] == pytest.approx(3.0, rel=1e-12)
        assert e["l_henry"] == pytest.approx(3.0, rel=1e-12)


def test_gamma_draws_are_seeded():
    a = kronred.draw_gammas(7, 5)
    assert a == kronred.draw_gammas(7, 5)
    assert a != kronred.draw_gammas(8, 5)
    assert all(-5 <= g <= 5 for g in a)


def test_bad_network_raises():
    with pytest.raises(kronred.KronredError) as info:
        kronred.validate({"nodes": ["1"], "boundary": ["1"], "edges": [], "extra": 0})
    assert info.value.code == "ParseError"


def test_sinusoid_experiment():
    res = kronred.experiment("sinusoid")
    assert res["all_hold"]
    assert len(res["baseline"]) == 5
    assert res["reduced_vs_dae_max_rel"] < 1e-6
