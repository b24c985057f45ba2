import math

import numpy as np
import pytest
from scipy.special import jv

from fluxring import io
from fluxring.analytic import energy
from fluxring.gauges import gauge_function
from fluxring.model import GaugeKind
from fluxring.operators import (AngularMomentumKind, Basis, RingOperator, RingState,
                                basis_vector, build_angular_momentum, build_hamiltonian,
                                commutator, covariance_ledger, current_from_state,
                                diagonalize, evolve, expectation, gauge_transport,
                                landau_eigenstate, make_state, multiplication_operator,
                                pointwise_lz_action, random_interior_state, retwist,
                                rotate_2pi, transport_unitary, twist_for_flux, untwist)

TWO_PI = 2.0 * math.pi
F_PROBE = 1.0 / 3.0


@pytest.fixture(scope="module")
def basis32():
    return Basis(32)


def twisted_basis(f, l_max=32):
    return Basis(l_max, twist_for_flux(f))


# ---------------------------------------------------------------- construction

def test_basis_invariants():
    b = Basis(8, 0.25)
    assert b.dim == 17
    assert b.labels()[0] == -8 and b.labels()[-1] == 8
    with pytest.raises(ValueError):
        Basis(0)
    with pytest.raises(ValueError):
        Basis(8, 1.0)


def test_ring_operator_rejects_non_hermitian():
    b = Basis(2)
    mat = np.zeros((5, 5), complex)
    mat[0, 1] = 1.0
    with pytest.raises(ValueError, match="Hermitian"):
        RingOperator(mat, b)


def test_ring_state_requires_normalization():
    b = Basis(2)
    with pytest.raises(ValueError, match="norm"):
        RingState(np.ones(5, complex), b)
    state = make_state(np.ones(5, complex), b)
    assert state.norm() == pytest.approx(1.0, abs=1e-15)


def test_cylindrical_hamiltonian_is_diagonal(basis32):
    h = build_hamiltonian(GaugeKind.CYLINDRICAL, F_PROBE, basis32)
    off = h.matrix - np.diag(np.diag(h.matrix))
    assert np.abs(off).max() == 0.0
    idx = basis32.index_of(2)
    assert h.matrix[idx, idx].real == pytest.approx(25.0 / 18.0, abs=1e-14)


def test_landau_hamiltonian_band_structure(basis32):
    f = 0.5
    h = build_hamiltonian(GaugeKind.LANDAU, f, basis32)
    labels = basis32.labels()
    offsets = np.abs(labels[:, None] - labels[None, :])
    assert np.abs(h.matrix[offsets > 4]).max() == 0.0  # half-bandwidth 4, exact zeros
    assert np.abs(h.matrix - h.matrix.conj().T).max() < 1e-12

    i1, i3 = basis32.index_of(1), basis32.index_of(3)
    # band product of the squared mechanical operator, halved by the 1/2 m prefactor
    assert h.matrix[i1, i3].real == pytest.approx(-f * (1 + 1 - f) / 2.0, abs=1e-14)
    pi = build_angular_momentum(AngularMomentumKind.MECHANICAL, GaugeKind.LANDAU, f, basis32)
    pipi = pi.matrix @ pi.matrix
    assert pipi[i1, i3].real == pytest.approx(-0.75, abs=1e-14)


def test_landau_hamiltonian_zero_flux_is_diagonal(basis32):
    h = build_hamiltonian(GaugeKind.LANDAU, 0.0, basis32)
    labels = basis32.labels()
    assert np.allclose(h.matrix, np.diag(0.5 * labels.astype(float) ** 2), atol=0)


def test_singular_hamiltonian_entries():
    f = F_PROBE
    b = twisted_basis(f)
    h = build_hamiltonian(GaugeKind.SINGULAR, f, b)
    labels = b.labels()
    assert np.allclose(np.diag(h.matrix).real, 0.5 * (labels - b.twist) ** 2, atol=1e-15)


def test_hamiltonian_twist_compatibility():
    with pytest.raises(ValueError, match="twist"):
        build_hamiltonian(GaugeKind.CYLINDRICAL, F_PROBE, twisted_basis(F_PROBE))
    with pytest.raises(ValueError, match="twist"):
        build_hamiltonian(GaugeKind.SINGULAR, F_PROBE, Basis(32))


def test_angular_momentum_entries(basis32):
    lz = build_angular_momentum(AngularMomentumKind.CANONICAL, GaugeKind.CYLINDRICAL,
                                0.0, Basis(2))
    assert np.allclose(np.diag(lz.matrix).real, [-2, -1, 0, 1, 2], atol=0)

    mech = build_angular_momentum(AngularMomentumKind.MECHANICAL, GaugeKind.CYLINDRICAL,
                                  0.5, basis32)
    assert mech.matrix[basis32.index_of(2), basis32.index_of(2)].real == pytest.approx(1.5)

    corrected = build_angular_momentum(AngularMomentumKind.SINGULAR_CORRECTED,
                                       GaugeKind.SINGULAR, F_PROBE, twisted_basis(F_PROBE))
    spectrum = np.diag(corrected.matrix).real
    assert np.abs(spectrum - np.round(spectrum)).max() == 0.0  # exact integers

    with pytest.raises(ValueError, match="twist"):
        build_angular_momentum(AngularMomentumKind.SINGULAR_CORRECTED,
                               GaugeKind.SINGULAR, F_PROBE, Basis(32))


# ---------------------------------------------------------------- diagonalize

def test_diagonalize_identity():
    b = Basis(4)
    op = RingOperator(np.eye(b.dim, dtype=complex), b, "I")
    evals, states = diagonalize(op)
    assert np.allclose(evals, 1.0, atol=0)
    assert len(states) == b.dim


def test_diagonalize_cylindrical_ground_state():
    b = Basis(8)
    evals, _ = diagonalize(build_hamiltonian(GaugeKind.CYLINDRICAL, F_PROBE, b))
    assert evals[0] == pytest.approx(1.0 / 18.0, abs=1e-14)


def test_non_hermitian_matrices_cannot_reach_diagonalize():
    # the constructor is the gate: a non-Hermitian matrix never becomes a RingOperator
    with pytest.raises(ValueError, match="Hermitian"):
        RingOperator(np.triu(np.ones((5, 5), complex)), Basis(2))


@pytest.mark.parametrize("f", [-2.5, F_PROBE, 0.5])
def test_interior_spectrum_matches_closed_form(f, basis32):
    evals, _ = diagonalize(build_hamiltonian(GaugeKind.LANDAU, f, basis32))
    for l in range(-8, 9):
        target = energy(l, f)
        assert np.abs(evals - target).min() < 1e-8


def test_half_integer_flux_pairs_degenerate():
    b = Basis(16)
    h = build_hamiltonian(GaugeKind.CYLINDRICAL, 0.5, b)
    diag = np.diag(h.matrix).real
    for l in range(-7, 8):
        assert diag[b.index_of(l)] == diag[b.index_of(1 - l)]  # exact pair


def test_zero_flux_parity_degeneracy():
    b = Basis(16)
    h = build_hamiltonian(GaugeKind.LANDAU, 0.0, b)
    evals, _ = diagonalize(h)
    diag = np.sort(np.diag(h.matrix).real)
    assert np.allclose(evals, diag, atol=1e-12)


# ---------------------------------------------------------------- eigenstates

def test_landau_eigenstate_zero_flux_is_basis_vector(basis32):
    state = landau_eigenstate(3, 0.0, basis32)
    expected = np.zeros(basis32.dim)
    expected[basis32.index_of(3)] = 1.0
    assert np.abs(state.coeffs - expected).max() < 1e-14


def test_landau_eigenstate_even_sidebands_only(basis32):
    state = landau_eigenstate(2, F_PROBE, basis32)
    labels = basis32.labels()
    odd = (np.abs(labels - 2) % 2) == 1
    assert np.abs(state.coeffs[odd]).max() < 1e-12


def test_landau_eigenstate_bessel_coefficients(basis32):
    f = F_PROBE
    state = landau_eigenstate(2, f, basis32)
    for k in range(-4, 5):
        idx = basis32.index_of(2 + 2 * k)
        assert state.coeffs[idx].real == pytest.approx(jv(k, 0.5 * f), abs=1e-12)
        assert abs(state.coeffs[idx].imag) < 1e-12


def test_landau_eigenstate_eigen_residual(basis32):
    f = F_PROBE
    state = landau_eigenstate(2, f, basis32)
    h = build_hamiltonian(GaugeKind.LANDAU, f, basis32)
    residual = np.linalg.norm(h.matrix @ state.coeffs - energy(2, f) * state.coeffs)
    assert residual < 1e-8


def test_landau_eigenstate_parseval(basis32):
    raw = landau_eigenstate(2, -2.5, basis32)
    assert abs(np.sum(np.abs(raw.coeffs) ** 2) - 1.0) < 1e-10


def test_landau_eigenstate_sideband_overflow():
    with pytest.raises(ValueError, match="sideband"):
        landau_eigenstate(6, 2.0, Basis(12))


# ---------------------------------------------------------------- expectations

def test_lz_expectation_restored_on_landau_eigenstate(basis32):
    state = landau_eigenstate(2, F_PROBE, basis32)
    lz = build_angular_momentum(AngularMomentumKind.CANONICAL, GaugeKind.CYLINDRICAL,
                                F_PROBE, basis32)
    assert expectation(lz, state) == pytest.approx(2.0, abs=1e-9)

    mech = build_angular_momentum(AngularMomentumKind.MECHANICAL, GaugeKind.LANDAU,
                                  F_PROBE, basis32)
    assert expectation(mech, state) == pytest.approx(2.0 - F_PROBE, abs=1e-9)


def test_expectation_of_diagonal_on_basis_vector(basis32):
    h = build_hamiltonian(GaugeKind.CYLINDRICAL, F_PROBE, basis32)
    state = basis_vector(2, basis32)
    assert expectation(h, state) == pytest.approx(25.0 / 18.0, abs=1e-14)


def test_expectation_rejects_basis_mismatch(basis32):
    h = build_hamiltonian(GaugeKind.CYLINDRICAL, F_PROBE, basis32)
    with pytest.raises(ValueError, match="mismatch"):
        expectation(h, basis_vector(0, Basis(8)))


def test_pointwise_lz_factor_values():
    assert pointwise_lz_action(2, F_PROBE, 0.0) == pytest.approx(7.0 / 3.0, abs=1e-15)
    assert pointwise_lz_action(2, F_PROBE, math.pi / 4) == pytest.approx(2.0, abs=1e-15)
    phi = np.arange(256) * (TWO_PI / 256)
    assert np.mean(pointwise_lz_action(2, F_PROBE, phi)) == pytest.approx(2.0, abs=1e-13)


def test_pointwise_lz_factor_against_finite_difference():
    f, l, h = F_PROBE, 2, 1e-5
    phi = np.linspace(0.3, 5.9, 41)

    def psi(p):
        theta = l * p + 0.5 * f * np.sin(2.0 * p)
        return np.exp(1j * theta)

    fd = (-1j * (psi(phi + h) - psi(phi - h)) / (2 * h)) / psi(phi)
    assert np.abs(fd.real - pointwise_lz_action(l, f, phi)).max() < 1e-8


# ---------------------------------------------------------------- commutators

def test_commutator_of_commuting_diagonals(basis32):
    h = build_hamiltonian(GaugeKind.CYLINDRICAL, F_PROBE, basis32)
    lz = build_angular_momentum(AngularMomentumKind.CANONICAL, GaugeKind.CYLINDRICAL,
                                F_PROBE, basis32)
    assert commutator(h, lz).frobenius_norm() == 0.0


def test_commutator_landau_hamiltonian_with_lz(basis32):
    h = build_hamiltonian(GaugeKind.LANDAU, F_PROBE, basis32)
    lz = build_angular_momentum(AngularMomentumKind.CANONICAL, GaugeKind.CYLINDRICAL,
                                F_PROBE, basis32)
    comm = commutator(h, lz)
    assert comm.frobenius_norm() > 0.1
    # brute-force small-matrix oracle for one entry: (i[H,L])_{m,l} = i H_{m,l} (l - m)
    b4 = Basis(4)
    h4 = build_hamiltonian(GaugeKind.LANDAU, F_PROBE, b4)
    lz4 = build_angular_momentum(AngularMomentumKind.CANONICAL, GaugeKind.CYLINDRICAL,
                                 F_PROBE, b4)
    comm4 = commutator(h4, lz4)
    labels = b4.labels().astype(float)
    oracle = 1j * h4.matrix * (labels[None, :] - labels[:, None])
    assert np.abs(comm4.matrix - oracle).max() < 1e-12


def test_commutator_expectation_vanishes_on_eigenstates(basis32):
    h = build_hamiltonian(GaugeKind.LANDAU, F_PROBE, basis32)
    lz = build_angular_momentum(AngularMomentumKind.CANONICAL, GaugeKind.CYLINDRICAL,
                                F_PROBE, basis32)
    comm = commutator(h, lz)
    evals, states = diagonalize(h)
    interior = [s for w, s in zip(evals, states) if w < energy(8, F_PROBE)]
    assert len(interior) > 5
    for state in interior:
        assert abs(expectation(comm, state)) < 1e-9


# ---------------------------------------------------------------- transport

def test_transport_identity_for_zero_alpha(basis32):
    alpha = gauge_function(GaugeKind.CYLINDRICAL, GaugeKind.LANDAU, 0.0)
    u = transport_unitary(alpha, basis32)
    assert np.abs(u - np.eye(basis32.dim)).max() < 1e-14


def test_transport_unitarity_defect(basis32):
    alpha = gauge_function(GaugeKind.CYLINDRICAL, GaugeKind.LANDAU, F_PROBE)
    u = transport_unitary(alpha, basis32)
    assert np.abs(u.conj().T @ u - np.eye(basis32.dim)).max() < 1e-10


def test_transport_rejects_multivalued(basis32):
    alpha = gauge_function(GaugeKind.CYLINDRICAL, GaugeKind.SINGULAR, F_PROBE)
    with pytest.raises(ValueError, match="multivalued"):
        transport_unitary(alpha, basis32)


def test_transported_eigenstate_matches_projection(basis32):
    alpha = gauge_function(GaugeKind.CYLINDRICAL, GaugeKind.LANDAU, F_PROBE)
    transported = gauge_transport(basis_vector(2, basis32), alpha)
    direct = landau_eigenstate(2, F_PROBE, basis32)
    assert np.abs(transported.coeffs - direct.coeffs).max() < 1e-10


def test_conjugated_hamiltonian_matches_banded_interior(basis32):
    f = F_PROBE
    alpha = gauge_function(GaugeKind.CYLINDRICAL, GaugeKind.LANDAU, f)
    h_cyl = build_hamiltonian(GaugeKind.CYLINDRICAL, f, basis32)
    h_lan = build_hamiltonian(GaugeKind.LANDAU, f, basis32)
    conjugated = gauge_transport(h_cyl, alpha)
    pad = 2 * math.ceil(4 * abs(f)) + 2
    inner = slice(pad, basis32.dim - pad)
    assert np.abs(conjugated.matrix[inner, inner] - h_lan.matrix[inner, inner]).max() < 1e-9


# ---------------------------------------------------------------- retwist

def test_retwist_integer_flux_is_index_shift():
    b = Basis(8)
    state = basis_vector(2, b)
    shifted = retwist(state, 3.0)
    assert shifted.basis.twist == 0.0
    assert abs(shifted.coeffs[shifted.basis.index_of(-1)] - 1.0) < 1e-15


def test_retwist_fractional_flux():
    b = Basis(8)
    state = basis_vector(2, b)
    twisted = retwist(state, F_PROBE)
    assert twisted.basis.twist == pytest.approx(F_PROBE)
    assert abs(twisted.coeffs[twisted.basis.index_of(2)] - 1.0) < 1e-15
    assert twisted.norm() == pytest.approx(1.0, abs=0.0)


def test_retwist_round_trip():
    b = Basis(12)
    rng = np.random.default_rng(5)
    state = random_interior_state(b, 6, rng)
    back = untwist(retwist(state, -2.5), -2.5)
    assert np.abs(back.coeffs - state.coeffs).max() < 1e-12


def test_retwist_rejects_edge_weight():
    b = Basis(4)
    state = basis_vector(4, b)
    with pytest.raises(ValueError, match="edge weight"):
        retwist(state, -2.5)  # shift by -3 pushes the coefficient out


# ---------------------------------------------------------------- rotation

def test_rotation_identity_fractional_flux():
    f = F_PROBE
    state = retwist(basis_vector(2, Basis(16)), f)
    rotated = rotate_2pi(state, f)
    assert np.abs(rotated.coeffs - state.coeffs).max() < 1e-10


def test_rotation_identity_zero_flux():
    state = basis_vector(1, Basis(8))
    rotated = rotate_2pi(state, 0.0)
    assert np.abs(rotated.coeffs - state.coeffs).max() < 1e-10


def test_rotation_diagnostic_mode_spurious_phase():
    f = F_PROBE
    state = retwist(basis_vector(2, Basis(16)), f)
    diag = rotate_2pi(state, f, corrected=False)
    spurious = np.exp(2j * math.pi * f)
    assert np.abs(diag.coeffs - spurious * state.coeffs).max() < 1e-10


def test_rotation_requires_matching_twist():
    with pytest.raises(ValueError, match="twist"):
        rotate_2pi(basis_vector(0, Basis(8)), F_PROBE)


# ---------------------------------------------------------------- evolution

def test_evolve_time_zero_is_identity(basis32):
    h = build_hamiltonian(GaugeKind.CYLINDRICAL, F_PROBE, basis32)
    state = basis_vector(1, basis32)
    out = evolve(h, state, 0.0)
    assert np.abs(out.coeffs - state.coeffs).max() < 1e-14


def test_evolve_eigenstate_phase(basis32):
    h = build_hamiltonian(GaugeKind.CYLINDRICAL, 0.5, basis32)
    state = basis_vector(1, basis32)
    out = evolve(h, state, TWO_PI)
    idx = basis32.index_of(1)
    assert out.coeffs[idx] == pytest.approx(np.exp(-1j * math.pi / 4.0), abs=1e-12)
    assert out.norm() == pytest.approx(1.0, abs=1e-12)


def test_evolution_commutes_with_transport(basis32):
    f = F_PROBE
    alpha = gauge_function(GaugeKind.CYLINDRICAL, GaugeKind.LANDAU, f)
    u = transport_unitary(alpha, basis32)
    h_cyl = build_hamiltonian(GaugeKind.CYLINDRICAL, f, basis32)
    h_lan = build_hamiltonian(GaugeKind.LANDAU, f, basis32)
    rng = np.random.default_rng(11)
    for _ in range(3):
        psi = random_interior_state(basis32, 8, rng)
        for t in (0.1, 1.0, 10.0):
            lhs = u @ evolve(h_cyl, psi, t).coeffs
            rhs = evolve(h_lan, RingState(u @ psi.coeffs, basis32), t).coeffs
            assert np.linalg.norm(lhs - rhs) < 1e-8


# ---------------------------------------------------------------- currents

@pytest.mark.parametrize("l,f", [(2, 0.5), (0, -2.5), (1, F_PROBE)])
def test_current_equal_in_all_gauges(l, f, basis32):
    expected = (l - f) / TWO_PI
    assert current_from_state(GaugeKind.CYLINDRICAL, f,
                              basis_vector(l, basis32)) == pytest.approx(expected, abs=1e-9)
    assert current_from_state(GaugeKind.LANDAU, f,
                              landau_eigenstate(l, f, basis32)) == pytest.approx(expected, abs=1e-9)
    twisted = retwist(basis_vector(l, basis32), f)
    assert current_from_state(GaugeKind.SINGULAR, f, twisted) == pytest.approx(expected, abs=1e-9)


# ---------------------------------------------------------------- ledger

def test_covariance_ledger_zero_flux(basis32):
    report = covariance_ledger(0.0, basis32, n_states=5)
    assert report.max_deviation() < 1e-14


def test_covariance_ledger_fractional_flux(basis32):
    report = covariance_ledger(F_PROBE, basis32)
    assert report.n_states == 20
    assert report.mechanical_invariance < 1e-9
    assert report.generator_correction < 1e-9
    assert report.hamiltonian_conjugation < 1e-9


def test_generator_correction_averages_out_on_eigenstates(basis32):
    f = F_PROBE
    correction = multiplication_operator(lambda phi: f * np.cos(2.0 * phi), basis32)
    state = landau_eigenstate(2, f, basis32)
    assert abs(expectation(correction, state)) < 1e-12


# ---------------------------------------------------------------- json dumps

def test_operator_json_round_trip(tmp_path):
    b = Basis(4)
    op = build_hamiltonian(GaugeKind.LANDAU, 0.5, b)
    path = io.dump_operator(op, tmp_path / "op.json")
    loaded = io.load_operator(path)
    assert loaded.basis == op.basis
    assert loaded.label == op.label
    assert np.abs(loaded.matrix - op.matrix).max() == 0.0


def test_state_json_round_trip(tmp_path):
    b = Basis(4)
    state = landau_eigenstate(1, 0.5, b)
    path = io.dump_state(state, tmp_path / "state.json")
    loaded = io.load_state(path)
    assert np.abs(loaded.coeffs - state.coeffs).max() == 0.0
