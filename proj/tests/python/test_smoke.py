import json
import math

import numpy as np
import pytest

import qstatfn as q

SZ = np.diag([1.0, -1.0]).astype(complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
MIXED = np.eye(2, dtype=complex) / 2
PLUS = np.full((2, 2), 0.5, dtype=complex)


def test_generating_functions():
    assert q.qmgf(MIXED, SZ, 0.5) == pytest.approx(math.cosh(0.5))
    assert q.qcf(MIXED, SZ, 1.0) == pytest.approx(math.cos(1.0))
    assert q.qcgf(MIXED, SZ, 0.5) == pytest.approx(math.log(math.cosh(0.5)))
    ex, var = q.moments(MIXED, SX)
    assert ex == pytest.approx(0.0)
    assert var == pytest.approx(1.0)


def test_validation_errors_surface_as_value_errors():
    with pytest.raises(ValueError):
        q.qmgf(SZ, SZ, 0.1)  # trace 0 is not a state
    with pytest.raises(ValueError):
        q.make_density(np.diag([1.2, -0.2]).astype(complex))


def test_kd_table_and_weak_value():
    outcomes, table = q.kd_distribution(PLUS, [SZ, SX])
    assert np.allclose(outcomes, [[-1.0, 1.0], [-1.0, 1.0]])
    assert table.shape == (2, 2)
    assert table.sum() == pytest.approx(1.0)
    assert table[1, 1] == pytest.approx(0.5)
    assert table[0, 1] == pytest.approx(0.5)

    alpha = math.pi / 8
    psi = np.array([math.cos(alpha), math.sin(alpha)], dtype=complex)
    pre = np.outer(psi, psi.conj())
    post = np.diag([0.0, 1.0]).astype(complex)
    wv = q.weak_value(pre, post, SX)
    assert wv.real == pytest.approx(1.0 / math.tan(alpha))
    assert q.weak_variance(pre, post, SX).real < 0


def test_multivariable_and_npoint():
    theta = np.array([0.3, -0.4])
    kd = q.multivariable_qmgf(PLUS, [SZ, SX], theta, ordering="kd")
    outcomes, table = q.kd_distribution(PLUS, [SZ, SX])
    oracle = sum(
        math.exp(theta[0] * a + theta[1] * b) * table[i, j]
        for i, a in enumerate(outcomes[0])
        for j, b in enumerate(outcomes[1])
    )
    assert kd == pytest.approx(oracle)

    direct, chain, skipped = q.npoint_correlation(
        np.diag([0.6, 0.4]).astype(complex), [SZ, SZ]
    )
    assert direct == pytest.approx(1.0)
    assert chain == pytest.approx(1.0)
    assert skipped >= 0


def test_wigner_round_trip():
    rng = np.random.default_rng(5)
    g = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    rho = g @ g.conj().T
    rho /= np.trace(rho).real
    table = q.wigner_function(rho)
    assert table.sum() == pytest.approx(1.0)
    back = q.reconstruct_state(table)
    assert np.abs(back - rho).max() < 1e-9


def test_geometry_and_information():
    tr_geo, fid = q.geo_mean_trace_bound(MIXED, np.diag([0.7, 0.3]).astype(complex))
    assert tr_geo <= fid + 1e-10
    d = q.relative_entropy(MIXED, np.diag([0.75, 0.25]).astype(complex))
    assert d == pytest.approx(0.5 * math.log(4.0 / 3.0))
    lhs, rhs = q.golden_thompson_gap(SX, SZ)
    assert lhs <= rhs + 1e-10


def test_estimation_round_trip():
    config = {
        "model": "tfim",
        "n_spins": 4,
        "beta": 0.05,
        "true_params": {"J": 1.0, "h": 0.5},
        "observables": ["O1", "O2"],
        "shots": 0,
        "seed": 1,
        "method": "qmm",
        "moment_variant": "exact",
    }
    result = json.loads(q.run_estimation(json.dumps(config)))
    assert result["phi_hat"]["J"] == pytest.approx(1.0, abs=1e-8)
    assert result["phi_hat"]["h"] == pytest.approx(0.5, abs=1e-8)

    mean, stderr = q.simulate_measurements(MIXED, SZ, 20000, 7)
    assert abs(mean) < 4 * stderr + 1e-12
    again, _ = q.simulate_measurements(MIXED, SZ, 20000, 7)
    assert mean == again
