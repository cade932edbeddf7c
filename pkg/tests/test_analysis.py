import math

import numpy as np
import pytest

from quasicat import (
    BadSubsystem,
    BasisMismatch,
    DensityMatrix,
    DimensionMismatch,
    GridTooSmall,
    NormViolation,
    SystemState,
    atomic_inversion,
    basis_state,
    cat_target,
    coherent_overlap,
    coherent_state,
    entropy,
    fidelity,
    husimi_q,
    mean_photon,
    partial_trace,
    product_state,
    pure_overlap,
    purity,
    rotation_params,
    suggested_dim,
    trace_distance,
    two_mode_cat_target,
)


def _pure_dm(vec, dims):
    vec = np.asarray(vec, dtype=np.complex128).reshape(-1)
    return DensityMatrix(np.outer(vec, vec.conj()), dims)


def _random_state(rng, dims=(5, 4, 2)):
    t = rng.normal(size=dims) + 1j * rng.normal(size=dims)
    t /= np.linalg.norm(t)
    return SystemState(t, "physical")


# --------------------------------------------------------- density matrix


def test_density_matrix_guards():
    with pytest.raises(DimensionMismatch):
        DensityMatrix(np.eye(3) / 3.0, (2,))
    with pytest.raises(DimensionMismatch):
        DensityMatrix(np.array([[0.5, 0.3], [0.0, 0.5]]), (2,))
    with pytest.raises(NormViolation):
        DensityMatrix(np.eye(2), (2,))


def test_partial_trace_product_state_is_pure():
    st = product_state(coherent_state(0.9, 16), basis_state(2, 5), (0.6, 0.8))
    for keep in ("mode1", "mode2", "atom"):
        assert purity(partial_trace(st, keep)) == pytest.approx(1.0, abs=1e-10)


def test_partial_trace_orthogonal_branches_half_purity():
    t = np.zeros((3, 2, 2), dtype=complex)
    t[0, 0, 0] = 1.0 / math.sqrt(2.0)
    t[1, 0, 1] = 1.0 / math.sqrt(2.0)
    st = SystemState(t, "physical")
    rho = partial_trace(st, "atom")
    assert purity(rho) == pytest.approx(0.5, abs=1e-12)
    assert entropy(rho) == pytest.approx(math.log(2.0), abs=1e-12)


def test_partial_trace_mode1_purity_tracks_branch_overlap():
    # (|a>|0> + |b>|1>)/sqrt(2) with orthogonal flags on mode 2 leaves
    # mode 1 in an even mixture of the two branches
    a, b = 0.8, -0.5 + 0.3j
    dim = 20
    va = coherent_state(a, dim).amps
    vb = coherent_state(b, dim).amps
    t = np.zeros((dim, 2, 1), dtype=complex)
    t[:, 0, 0] = va / math.sqrt(2.0)
    t[:, 1, 0] = vb / math.sqrt(2.0)
    st = SystemState(t, "physical")
    expected = 0.5 * (1.0 + abs(coherent_overlap(a, b)) ** 2)
    assert purity(partial_trace(st, "mode1")) == pytest.approx(expected, abs=1e-9)


def test_partial_trace_keep_order_is_layout_order():
    rng = np.random.default_rng(7)
    st = _random_state(rng)
    r1 = partial_trace(st, ("mode1", "atom"))
    r2 = partial_trace(st, ("atom", "mode1"))
    assert r1.dims == r2.dims == (5, 2)
    np.testing.assert_allclose(r1.matrix, r2.matrix, atol=1e-14)


def test_partial_trace_of_density_matrix_matches_direct():
    rng = np.random.default_rng(8)
    st = _random_state(rng)
    joint = partial_trace(st, ("mode1", "mode2", "atom"))
    via_dm = partial_trace(joint, "atom")
    direct = partial_trace(st, "atom")
    assert trace_distance(via_dm, direct) < 1e-12


def test_partial_trace_bad_subsystem():
    rng = np.random.default_rng(9)
    st = _random_state(rng)
    with pytest.raises(BadSubsystem):
        partial_trace(st, "mode3")
    with pytest.raises(BadSubsystem):
        partial_trace(st, ())
    rho = partial_trace(st, ("mode1", "atom"))
    with pytest.raises(BadSubsystem):
        partial_trace(rho, "mode1")


# ------------------------------------------------------- scalar measures


def test_entropy_and_purity_limits():
    pure = _pure_dm([1.0, 0.0], (2,))
    assert entropy(pure) == pytest.approx(0.0, abs=1e-12)
    assert purity(pure) == pytest.approx(1.0, abs=1e-12)
    mixed = DensityMatrix(0.5 * np.eye(2), (2,))
    assert entropy(mixed) == pytest.approx(math.log(2.0), abs=1e-12)
    assert purity(mixed) == pytest.approx(0.5, abs=1e-12)


def test_fidelity_basic():
    v0 = basis_state(0, 4)
    v1 = basis_state(1, 4)
    assert fidelity(v0, v0) == pytest.approx(1.0)
    assert fidelity(v0, v1) == pytest.approx(0.0, abs=1e-15)
    a, b = 0.7 + 0.2j, -0.4
    f = fidelity(coherent_state(a, 20), coherent_state(b, 20))
    assert f == pytest.approx(abs(coherent_overlap(a, b)) ** 2, abs=1e-10)


def test_fidelity_guards():
    sa = product_state(basis_state(0, 3), basis_state(0, 2), (1.0, 0.0), "physical")
    sb = product_state(basis_state(0, 3), basis_state(0, 2), (1.0, 0.0), "quasi")
    with pytest.raises(BasisMismatch):
        fidelity(sa, sb)
    with pytest.raises(DimensionMismatch):
        fidelity(basis_state(0, 3), basis_state(0, 4))


def test_pure_overlap_mixed_state():
    mixed = DensityMatrix(0.5 * np.eye(2), (2,))
    assert pure_overlap(mixed, [1.0, 0.0]) == pytest.approx(0.5)
    with pytest.raises(DimensionMismatch):
        pure_overlap(mixed, [1.0, 0.0, 0.0])


def test_trace_distance_limits():
    p0 = _pure_dm([1.0, 0.0], (2,))
    p1 = _pure_dm([0.0, 1.0], (2,))
    assert trace_distance(p0, p0) == pytest.approx(0.0, abs=1e-15)
    assert trace_distance(p0, p1) == pytest.approx(1.0)
    mixed = DensityMatrix(0.5 * np.eye(2), (2,))
    assert trace_distance(mixed, p0) == pytest.approx(0.5)
    with pytest.raises(DimensionMismatch):
        trace_distance(p0, _pure_dm([1.0, 0.0, 0.0], (3,)))


def test_atomic_inversion_values():
    lower = product_state(basis_state(0, 3), basis_state(0, 2), (1.0, 0.0))
    assert atomic_inversion(lower) == pytest.approx(-1.0)
    upper = product_state(basis_state(0, 3), basis_state(0, 2), (0.0, 1.0))
    assert atomic_inversion(upper) == pytest.approx(1.0)
    amp = 1.0 / math.sqrt(2.0)
    even = product_state(basis_state(0, 3), basis_state(0, 2), (amp, amp))
    assert atomic_inversion(even) == pytest.approx(0.0, abs=1e-15)
    field_only = product_state(basis_state(0, 3), basis_state(0, 2), (1.0,))
    with pytest.raises(BadSubsystem):
        atomic_inversion(field_only)


def test_mean_photon():
    alpha = 1.2 - 0.4j
    rho = _pure_dm(coherent_state(alpha, 24).amps, (24,))
    assert mean_photon(rho) == pytest.approx(abs(alpha) ** 2, abs=1e-9)
    rng = np.random.default_rng(10)
    with pytest.raises(BadSubsystem):
        mean_photon(partial_trace(_random_state(rng), ("mode1", "mode2")))


# ---------------------------------------------------------- entanglement


def test_schmidt_entropy_symmetry():
    rng = np.random.default_rng(11)
    st = _random_state(rng, (6, 5, 2))
    s_a = entropy(partial_trace(st, "mode1"))
    s_b = entropy(partial_trace(st, ("mode2", "atom")))
    assert abs(s_a - s_b) < 1e-8


def test_local_unitary_leaves_spectra_alone():
    rng = np.random.default_rng(12)
    st = _random_state(rng, (5, 4, 2))
    u, _ = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
    rotated = SystemState(np.einsum("st,ijt->ijs", u, st.tensor), st.basis)
    assert entropy(partial_trace(rotated, "atom")) == pytest.approx(
        entropy(partial_trace(st, "atom")), abs=1e-9
    )
    assert (
        trace_distance(
            partial_trace(rotated, "mode1"), partial_trace(st, "mode1")
        )
        < 1e-9
    )


def test_two_mode_cat_entanglement_is_one_bit():
    rot = rotation_params(1.0, 1.0)
    nbar = 16.0
    alpha = 1j * math.sqrt(nbar / 2.0)
    st = two_mode_cat_target(alpha, alpha, rot, nbar, 40, 40, convention=1)
    assert entropy(partial_trace(st, "mode1")) == pytest.approx(
        math.log(2.0), abs=1e-6
    )
    assert entropy(partial_trace(st, "mode2")) == pytest.approx(
        math.log(2.0), abs=1e-6
    )


# -------------------------------------------------------------- husimi Q


def test_husimi_vacuum_origin_value():
    rho = _pure_dm(basis_state(0, 8).amps, (8,))
    axis = np.linspace(-2.0, 2.0, 81)
    grid = husimi_q(rho, axis, axis)
    assert grid.values[40, 40] == pytest.approx(1.0 / math.pi, abs=1e-12)
    assert grid.values.max() <= 1.0 / math.pi + 1e-12
    assert grid.values.min() >= 0.0


def test_husimi_coherent_peak_location():
    alpha = 1.0 + 0.5j
    rho = _pure_dm(coherent_state(alpha, suggested_dim(alpha)).amps,
                   (suggested_dim(alpha),))
    grid = husimi_q(rho)
    i, j = np.unravel_index(np.argmax(grid.values), grid.values.shape)
    step = grid.re_axis[1] - grid.re_axis[0]
    assert abs(grid.re_axis[j] - alpha.real) <= step
    assert abs(grid.im_axis[i] - alpha.imag) <= step
    assert grid.integral() == pytest.approx(1.0, rel=0.02)


def test_husimi_cat_shows_both_lobes():
    cat = cat_target(3.0, 9.0, 1, dim=40)
    rho = _pure_dm(cat.amps, (40,))
    grid = husimi_q(rho)
    for sel, sign in ((grid.im_axis > 0, 1.0), (grid.im_axis < 0, -1.0)):
        sub = grid.values[sel, :]
        i, j = np.unravel_index(np.argmax(sub), sub.shape)
        assert abs(grid.re_axis[j] - 0.0) < 0.2
        assert abs(grid.im_axis[sel][i] - sign * 3.0) < 0.2
    assert grid.integral() == pytest.approx(1.0, rel=0.02)
    assert grid.values.max() <= 1.0 / math.pi + 1e-12


def test_husimi_grid_guards():
    cat = cat_target(2.0, 4.0, 1, dim=30)
    rho = _pure_dm(cat.amps, (30,))
    with pytest.raises(GridTooSmall):
        husimi_q(rho, np.linspace(-2.0, 2.0, 41), np.linspace(-2.0, 2.0, 41))
    with pytest.raises(GridTooSmall):
        husimi_q(rho, np.array([0.0]), None)
    rng = np.random.default_rng(13)
    joint = partial_trace(_random_state(rng), ("mode1", "mode2"))
    with pytest.raises(BadSubsystem):
        husimi_q(joint)
