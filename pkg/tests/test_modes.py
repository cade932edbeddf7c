import math

import numpy as np
import pytest

from quasicat import (
    AmplitudePair,
    BasisMismatch,
    BothCouplingsZero,
    DimTooSmall,
    NonUnitPhase,
    ZeroDetuning,
    coherent_state,
    decouple_params,
    ladder_matrix,
    mode_rotation_unitary,
    quasi_phase_amplitudes,
    rotate_amplitudes,
    rotation_params,
    squeeze_composition,
    squeeze_identity_residual,
)
from quasicat.modes import total_photon_shell_indices


def test_rotation_params_symmetric():
    rot = rotation_params(1.3, 1.3)
    assert rot.theta == pytest.approx(math.pi / 4)
    assert rot.g == pytest.approx(1.3 * math.sqrt(2))


def test_rotation_params_single_mode():
    rot = rotation_params(2.0, 0.0)
    assert rot.theta == 0.0
    assert rot.g == 2.0


def test_rotation_params_pythagorean():
    rot = rotation_params(3.0, 4.0)
    assert rot.g == pytest.approx(5.0)
    assert math.cos(rot.theta) == pytest.approx(0.6)
    assert abs(math.cos(rot.theta) - rot.g1 / rot.g) < 1e-12


def test_rotation_params_rejects_zero():
    with pytest.raises(BothCouplingsZero):
        rotation_params(0.0, 0.0)


def test_rotate_amplitudes_symmetric_concentrates():
    rot = rotation_params(1.0, 1.0)
    alpha = 0.8 - 0.3j
    quasi = rotate_amplitudes(rot, AmplitudePair(alpha, alpha), "forward")
    assert quasi.first == pytest.approx(math.sqrt(2) * alpha)
    assert abs(quasi.second) < 1e-15
    assert quasi.basis == "quasi"


def test_rotate_amplitudes_worked_case():
    nbar = 25.0
    rot = rotation_params(1.0, 1.0)
    amp = -1j * math.sqrt(nbar)
    quasi = rotate_amplitudes(rot, AmplitudePair(amp, amp), "forward")
    assert quasi.first == pytest.approx(-1j * math.sqrt(2 * nbar))
    assert abs(quasi.second) < 1e-14


def test_rotate_amplitudes_theta_zero_identity():
    rot = rotation_params(1.0, 0.0)
    pair = AmplitudePair(0.2 + 0.1j, -0.4j)
    quasi = rotate_amplitudes(rot, pair, "forward")
    assert quasi.first == pair.first and quasi.second == pair.second


def test_rotate_amplitudes_round_trip_and_norm():
    rot = rotation_params(1.0, 0.7)
    rng = np.random.default_rng(11)
    for _ in range(20):
        pair = AmplitudePair(
            complex(rng.normal(), rng.normal()), complex(rng.normal(), rng.normal())
        )
        quasi = rotate_amplitudes(rot, pair, "forward")
        back = rotate_amplitudes(rot, quasi, "inverse")
        assert abs(back.first - pair.first) < 1e-14
        assert abs(back.second - pair.second) < 1e-14
        assert abs(quasi.first) ** 2 + abs(quasi.second) ** 2 == pytest.approx(
            abs(pair.first) ** 2 + abs(pair.second) ** 2
        )


def test_rotate_amplitudes_enforces_basis_tags():
    rot = rotation_params(1.0, 1.0)
    with pytest.raises(BasisMismatch):
        rotate_amplitudes(rot, AmplitudePair(1.0, 0.0, "quasi"), "forward")
    with pytest.raises(BasisMismatch):
        rotate_amplitudes(rot, AmplitudePair(1.0, 0.0, "physical"), "inverse")
    with pytest.raises(BasisMismatch):
        AmplitudePair(1.0, 0.0, "lab")


def test_mode_rotation_unitary_theta_zero():
    rot = rotation_params(1.0, 0.0)
    np.testing.assert_allclose(mode_rotation_unitary(rot, 6, 6), np.eye(36), atol=1e-12)


def test_mode_rotation_unitary_is_unitary():
    rot = rotation_params(1.0, 0.6)
    r = mode_rotation_unitary(rot, 8, 8)
    np.testing.assert_allclose(r.conj().T @ r, np.eye(64), atol=1e-10)


def test_mode_rotation_unitary_coherent_factorization():
    rot = rotation_params(1.0, 1.4)
    dim = 40
    r = mode_rotation_unitary(rot, dim, dim)
    alpha, beta = 1.1 - 0.5j, -0.7 + 0.9j
    quasi = rotate_amplitudes(rot, AmplitudePair(alpha, beta), "forward")
    prod = np.kron(coherent_state(alpha, dim).amps, coherent_state(beta, dim).amps)
    target = np.kron(
        coherent_state(quasi.first, dim).amps, coherent_state(quasi.second, dim).amps
    )
    assert abs(np.vdot(target, r @ prod)) ** 2 >= 1.0 - 1e-8


def test_mode_rotation_conjugates_ladder():
    rot = rotation_params(1.0, 0.8)
    dim = 10
    r = mode_rotation_unitary(rot, dim, dim)
    a = np.kron(ladder_matrix(dim), np.eye(dim))
    b = np.kron(np.eye(dim), ladder_matrix(dim))
    expected = math.cos(rot.theta) * a + math.sin(rot.theta) * b
    cols = total_photon_shell_indices(dim, dim, dim - 2)
    diff = (r.conj().T @ a @ r - expected)[:, cols]
    assert np.linalg.norm(diff, 2) < 1e-8


def test_mode_rotation_preserves_total_photon():
    rot = rotation_params(0.9, 1.2)
    dim = 10
    r = mode_rotation_unitary(rot, dim, dim)
    a = np.kron(ladder_matrix(dim), np.eye(dim))
    b = np.kron(np.eye(dim), ladder_matrix(dim))
    total = a.conj().T @ a + b.conj().T @ b
    cols = total_photon_shell_indices(dim, dim, dim - 2)
    diff = (r.conj().T @ total @ r - total)[:, cols]
    assert np.linalg.norm(diff, 2) < 1e-9


def test_mode_rotation_unitary_dim_guard():
    with pytest.raises(DimTooSmall):
        mode_rotation_unitary(rotation_params(1.0, 1.0), 1, 6)


def test_squeeze_composition_equal_parameters():
    rot = rotation_params(1.0, 0.7)
    p, q = squeeze_composition(rot, 0.3 - 0.2j, 0.3 - 0.2j)
    assert p == 0.0
    assert q == pytest.approx(0.3 - 0.2j)


def test_squeeze_composition_theta_zero():
    rot = rotation_params(1.0, 0.0)
    p, q = squeeze_composition(rot, 0.4j, -0.1)
    assert p == 0.0
    assert q == pytest.approx(0.4j)


def test_squeeze_composition_balanced():
    rot = rotation_params(1.0, 1.0)
    p, q = squeeze_composition(rot, 0.0, 0.4)
    assert p == pytest.approx(0.2)
    assert q == pytest.approx(0.2)


def test_squeeze_identity_equal_parameters():
    resid = squeeze_identity_residual(
        rotation_params(1.0, 0.7), 0.25 + 0.1j, 0.25 + 0.1j, dim=24, input_cap=6
    )
    assert resid < 1e-9


def test_squeeze_identity_balanced_real():
    resid = squeeze_identity_residual(
        rotation_params(1.0, 1.0), 0.1, 0.35, dim=30, input_cap=6
    )
    assert resid < 1e-6


def test_quasi_phase_identity():
    rot = rotation_params(1.0, 0.6)
    pair = AmplitudePair(0.4 + 0.2j, -0.3 + 0.1j)
    out = quasi_phase_amplitudes(rot, 1.0, pair)
    assert abs(out.first - pair.first) < 1e-14
    assert abs(out.second - pair.second) < 1e-14


def test_quasi_phase_branch_symmetric():
    # balanced couplings, equal amplitudes: phasing mode I by i phases both
    # physical amplitudes by i
    rot = rotation_params(1.0, 1.0)
    alpha = 0.7 - 0.2j
    out = quasi_phase_amplitudes(rot, 1j, AmplitudePair(alpha, alpha))
    assert abs(out.first - 1j * alpha) < 1e-14
    assert abs(out.second - 1j * alpha) < 1e-14


def test_quasi_phase_minus_one_flips():
    rot = rotation_params(1.0, 1.0)
    alpha, beta = 0.5 + 0.1j, 0.5 + 0.1j
    out = quasi_phase_amplitudes(rot, -1.0, AmplitudePair(alpha, beta))
    assert abs(out.first + alpha) < 1e-14
    assert abs(out.second + beta) < 1e-14


def test_quasi_phase_branches_share_energy():
    rot = rotation_params(1.0, 0.45)
    pair = AmplitudePair(0.6 - 0.3j, 0.2 + 0.9j)
    up = quasi_phase_amplitudes(rot, 1j, pair)
    dn = quasi_phase_amplitudes(rot, -1j, pair)
    nup = abs(up.first) ** 2 + abs(up.second) ** 2
    ndn = abs(dn.first) ** 2 + abs(dn.second) ** 2
    assert nup == pytest.approx(ndn)


def test_quasi_phase_rejects_nonunit():
    rot = rotation_params(1.0, 1.0)
    with pytest.raises(NonUnitPhase):
        quasi_phase_amplitudes(rot, 0.5, AmplitudePair(1.0, 0.0))


def test_decouple_params_single_coupling():
    out = decouple_params(1.2, 0.0, 30.0, 50.0)
    assert out.eta == pytest.approx(0.0)
    assert out.lambda_mode == pytest.approx(1.2**2 / 30.0)
    assert out.zeta_mode == pytest.approx(0.0)


def test_decouple_params_symmetric():
    g0, delta = 0.9, 40.0
    out = decouple_params(g0, g0, delta, delta)
    assert out.eta == pytest.approx(math.pi / 4)
    assert out.lambda_mode == pytest.approx(2 * g0 * g0 / delta)
    assert abs(out.zeta_mode) < 1e-14


def test_decouple_params_eigenvalues():
    g1, g2, d1, d2 = 1.0, 0.8, 25.0, 60.0
    out = decouple_params(g1, g2, d1, d2)
    cross = g1 * g2 * (d1 + d2) / (2 * d1 * d2)
    form = np.array([[g1 * g1 / d1, cross], [cross, g2 * g2 / d2]])
    eigs = sorted(np.linalg.eigvalsh(form))
    got = sorted([out.lambda_mode, out.zeta_mode])
    assert abs(got[0] - eigs[0]) < 1e-10
    assert abs(got[1] - eigs[1]) < 1e-10


def test_decouple_params_rejects_zero_detuning():
    with pytest.raises(ZeroDetuning):
        decouple_params(1.0, 1.0, 0.0, 50.0)
