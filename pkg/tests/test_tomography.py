import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dfs_mbqc.core import I2, KET_0, KET_1, X, Y, Z
from dfs_mbqc.jsonio import chi_from_json, chi_to_json, kraus_from_json, kraus_to_json, matrix_from_json
from dfs_mbqc.mbqc import analytic_standard_output, chain_channel, input_amplitudes
from dfs_mbqc.noise import NoiseSpec
from dfs_mbqc.tomography import (
    MATRIX_UNITS,
    PAULIS,
    ChannelError,
    analytic_transfer_kraus,
    apply_kraus,
    average_fidelity,
    beta_tensor,
    channel_distance,
    chi_from_channel,
    chi_from_kraus,
    chi_from_lambda,
    entanglement_fidelity,
    kraus_channel,
    kraus_completeness_error,
    kraus_from_chi,
    monte_carlo_average_fidelity,
    probe_channel,
    process_tomography,
    reconstruct_offdiagonal,
    trace_preservation_error,
)

from conftest import random_density, random_kraus, random_unitary

seeds = st.integers(0, 2**32 - 1)
taus = st.floats(0, 10, allow_nan=False)

identity = lambda rho: rho  # noqa: E731
full_dephasing = lambda rho: np.diag(np.diag(rho))  # noqa: E731


def test_probe_identity():
    outs = probe_channel(identity)
    assert np.allclose(outs[0], np.outer(KET_0, KET_0))
    assert np.allclose(outs[3], np.array([[1, -1j], [1j, 1]]) / 2)


def test_probe_full_dephasing():
    outs = probe_channel(full_dephasing)
    assert np.allclose(outs[2], I2 / 2) and np.allclose(outs[3], I2 / 2)


def test_probe_rejects_trace_loss():
    with pytest.raises(ChannelError):
        probe_channel(lambda rho: 0.5 * rho)


def test_offdiagonal_identity_and_dephasing():
    e01, e10 = reconstruct_offdiagonal(probe_channel(identity))
    assert np.abs(e01 - MATRIX_UNITS[1]).max() < 1e-15
    assert np.abs(e10 - MATRIX_UNITS[2]).max() < 1e-15
    e01, _ = reconstruct_offdiagonal(probe_channel(full_dephasing))
    assert np.abs(e01).max() < 1e-15


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_offdiagonal_matches_direct_action(seed):
    ks = random_kraus(np.random.default_rng(seed))
    e01, e10 = reconstruct_offdiagonal(probe_channel(kraus_channel(ks)))
    assert np.abs(e01 - apply_kraus(ks, MATRIX_UNITS[1])).max() < 1e-12
    assert np.abs(e10 - apply_kraus(ks, MATRIX_UNITS[2])).max() < 1e-12


def test_beta_tensor_definition(rng):
    beta = beta_tensor()
    assert not beta.flags.writeable
    for _ in range(10):
        m, n, j = rng.integers(0, 4, size=3)
        lhs = PAULIS[m] @ MATRIX_UNITS[j] @ PAULIS[n].conj().T
        rhs = sum(beta[m, n, j, k] * MATRIX_UNITS[k] for k in range(4))
        assert np.abs(lhs - rhs).max() < 1e-15
    assert abs(np.linalg.det(beta.transpose(2, 3, 0, 1).reshape(16, 16))) > 1e-6


def test_chi_identity():
    chi = chi_from_channel(identity)
    expected = np.zeros((4, 4))
    expected[0, 0] = 1
    assert np.abs(chi - expected).max() < 1e-12


def test_chi_bit_flip():
    chi = chi_from_channel(lambda rho: X @ rho @ X)
    assert abs(chi[1, 1] - 1) < 1e-12
    assert np.abs(chi).sum() - 1 < 1e-12


def test_chi_full_dephasing():
    chi = chi_from_channel(full_dephasing)
    assert np.abs(chi - np.diag([0.5, 0, 0, 0.5])).max() < 1e-12


def test_chi_solve_rejects_non_finite_outputs():
    with pytest.raises(ChannelError):
        chi_from_lambda([MATRIX_UNITS[0]] * 3 + [np.full((2, 2), np.nan)])


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_chi_routes_agree(seed):
    ks = random_kraus(np.random.default_rng(seed))
    lam_chi = chi_from_lambda([apply_kraus(ks, e) for e in MATRIX_UNITS])
    assert np.abs(lam_chi - chi_from_kraus(ks)).max() < 1e-12
    assert np.abs(chi_from_channel(kraus_channel(ks)) - lam_chi).max() < 1e-12
    assert trace_preservation_error(lam_chi) < 1e-12
    assert abs(np.trace(lam_chi) - 1) < 1e-12
    assert np.linalg.eigvalsh(lam_chi).min() > -1e-12


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_kraus_round_trip(seed):
    rng = np.random.default_rng(seed)
    ks = random_kraus(rng)
    rec = kraus_from_chi(chi_from_channel(kraus_channel(ks)))
    assert len(rec) <= 4
    assert kraus_completeness_error(rec) < 1e-10
    for _ in range(5):
        rho = random_density(rng, 1)
        assert np.abs(apply_kraus(rec, rho) - apply_kraus(ks, rho)).max() < 1e-10


def test_kraus_from_diagonal_chi():
    ks = kraus_from_chi(np.diag([1.0, 0, 0, 0]))
    assert len(ks) == 1 and np.abs(ks[0] - I2).max() < 1e-15


def test_kraus_from_chi_rejects_non_cp():
    with pytest.raises(ChannelError):
        kraus_from_chi(np.diag([1.1, -0.1, 0, 0]))


def test_kraus_from_chi_rejects_non_hermitian():
    chi = np.diag([1.0, 0, 0, 0]).astype(complex)
    chi[0, 1] = 0.1
    with pytest.raises(ChannelError):
        kraus_from_chi(chi)


def test_kraus_from_chi_clamps_tiny_negative():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        ks = kraus_from_chi(np.diag([1.0 + 1e-10, -1e-10, 0, 0]))
    assert any(issubclass(w.category, RuntimeWarning) for w in caught)
    assert len(ks) == 1


@pytest.mark.parametrize("tau", [0.0, 0.15, 0.5, 1.0, 5.0])
def test_analytic_kraus_complete(tau):
    assert kraus_completeness_error(analytic_transfer_kraus(tau)) < 1e-12


@settings(max_examples=40, deadline=None)
@given(taus, st.floats(0, np.pi), st.floats(0, 2 * np.pi))
def test_analytic_kraus_reproduce_closed_form(tau, theta, phi):
    psi = np.array(input_amplitudes(theta, phi))
    out = apply_kraus(analytic_transfer_kraus(tau), np.outer(psi, psi.conj()))
    assert np.abs(out - analytic_standard_output(theta, phi, tau)).max() < 1e-12


@pytest.mark.parametrize("tau", [0.15, 1.0])
def test_simulated_chain_chi_is_pauli_diagonal(tau):
    chi = chi_from_channel(chain_channel(NoiseSpec("independent_dephasing", tau)))
    assert np.abs(chi - np.diag(np.diag(chi))).max() < 1e-12
    assert np.abs(chi - chi_from_kraus(analytic_transfer_kraus(tau))).max() < 1e-12


def test_entanglement_fidelity_examples():
    assert abs(entanglement_fidelity(identity) - 1) < 1e-15
    assert abs(entanglement_fidelity(full_dephasing) - 0.5) < 1e-15
    assert abs(entanglement_fidelity(lambda rho: X @ rho @ X)) < 1e-15


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_entanglement_fidelity_of_unitary(seed):
    u = random_unitary(np.random.default_rng(seed), 2)
    f = entanglement_fidelity(lambda rho: u @ rho @ u.conj().T)
    assert abs(f - abs(np.trace(u) / 2) ** 2) < 1e-12


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_entanglement_fidelity_is_chi_00(seed):
    ks = random_kraus(np.random.default_rng(seed))
    ch = kraus_channel(ks)
    assert abs(entanglement_fidelity(ch) - chi_from_channel(ch)[0, 0].real) < 1e-12


def test_transfer_kraus_entanglement_fidelity():
    tau = 0.5
    f = entanglement_fidelity(kraus_channel(analytic_transfer_kraus(tau)))
    assert abs(f - np.exp(-0.75 * tau) * np.cosh(tau / 4) * np.cosh(tau / 2)) < 1e-14


def test_average_fidelity():
    assert average_fidelity(1.0) == 1.0
    assert abs(average_fidelity(0.5) - 2 / 3) < 1e-15
    assert average_fidelity(0.0) == 1 / 3
    with pytest.raises(ValueError):
        average_fidelity(1.2)


def test_monte_carlo_small_sample_consistent():
    ch = kraus_channel(analytic_transfer_kraus(1.0))
    mean, se = monte_carlo_average_fidelity(ch, 2000, np.random.default_rng(5))
    assert abs(mean - average_fidelity(entanglement_fidelity(ch))) < 4 * se


def test_channel_distance():
    assert channel_distance(identity, identity) == 0
    assert abs(channel_distance(identity, full_dephasing) - 0.5) < 1e-15


def test_process_tomography_result():
    res = process_tomography(kraus_channel(analytic_transfer_kraus(0.5)))
    d = res.to_dict()
    assert d["basis"] == ["I", "X", "Y", "Z"]
    assert d["completeness_error"] < 1e-12
    assert abs(d["average_fidelity"] - (2 * d["entanglement_fidelity"] + 1) / 3) < 1e-15


def test_json_round_trip(rng):
    ks = random_kraus(rng, 3)
    back = kraus_from_json(kraus_to_json(ks))
    assert all(np.array_equal(a, b) for a, b in zip(ks, back))
    chi = chi_from_kraus(ks)
    assert np.array_equal(chi_from_json(chi_to_json(chi)), chi)
    with pytest.raises(ValueError):
        chi_from_json({"basis": ["I", "Z", "X", "Y"], "chi": []})
    with pytest.raises(ValueError):
        kraus_from_json({"kraus": []})
    with pytest.raises(ValueError):
        matrix_from_json([[1, 2], [3, 4]])


def test_kraus_channel_accepts_lists():
    ch = kraus_channel([[[1, 0], [0, 1]]])
    assert np.array_equal(ch(np.outer(KET_1, KET_1)), np.outer(KET_1, KET_1))


def test_pauli_set():
    assert [np.array_equal(p, q) for p, q in zip(PAULIS, (I2, X, Y, Z))] == [True] * 4
