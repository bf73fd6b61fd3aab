import math

import numpy as np
import numpy.testing as npt
import pytest

from qubitherm.errors import InvalidStateError, NonHermitianError
from qubitherm.qubit import (
    Hamiltonian,
    ProbeState,
    bloch_from_density,
    density_from_bloch,
    density_from_ket,
    eig_hermitian2,
    expectation,
    fidelity,
    internal_energy,
    ket_from_probe,
    validate_density_matrix,
    validate_observable,
    von_neumann_entropy,
)


def random_density(rng):
    v = rng.normal(size=3)
    v *= rng.uniform(0.0, 1.0) ** (1.0 / 3.0) / np.linalg.norm(v)
    return density_from_bloch(v)


def test_probe_kets():
    npt.assert_allclose(ket_from_probe(ProbeState(theta=0.0)), [1.0, 0.0])
    npt.assert_allclose(ket_from_probe(ProbeState(theta=math.pi)), [0.0, 1.0],
                        atol=1e-15)
    k = ket_from_probe(ProbeState(theta=math.pi / 2, relative_phase=math.pi / 2))
    npt.assert_allclose(k, [1 / math.sqrt(2), 1j / math.sqrt(2)], atol=1e-15)


def test_probe_validation():
    with pytest.raises(InvalidStateError):
        ProbeState(theta=-0.1)
    with pytest.raises(InvalidStateError):
        ProbeState(theta=math.pi + 0.1)
    with pytest.raises(InvalidStateError):
        Hamiltonian(omega=0.0)
    with pytest.raises(InvalidStateError):
        Hamiltonian(omega=-1.0)


def test_bloch_density_round_trip():
    rng = np.random.default_rng(11)
    for _ in range(50):
        v = rng.normal(size=3)
        v *= rng.uniform(0, 1) / np.linalg.norm(v)
        rho = density_from_bloch(v)
        npt.assert_allclose(bloch_from_density(rho), v, atol=1e-14)
        assert abs(np.trace(rho) - 1.0) < 1e-14


def test_density_from_ket_matches_outer_product():
    rng = np.random.default_rng(3)
    k = rng.normal(size=2) + 1j * rng.normal(size=2)
    k /= np.linalg.norm(k)
    npt.assert_allclose(density_from_ket(k), np.outer(k, k.conj()), atol=1e-15)
    with pytest.raises(InvalidStateError):
        density_from_ket([1.0, 1.0])  # not normalised


def test_density_validation_rejects_bad_inputs():
    with pytest.raises(NonHermitianError):
        validate_density_matrix(np.array([[0.5, 0.5], [0.0, 0.5]]))
    with pytest.raises(InvalidStateError):
        validate_density_matrix(np.array([[0.6, 0.0], [0.0, 0.6]]))
    with pytest.raises(InvalidStateError):
        validate_density_matrix(np.diag([1.25, -0.25]))  # negative eigenvalue
    with pytest.raises(InvalidStateError):
        validate_density_matrix(np.eye(3) / 3.0)


def test_closed_form_eigensolver_against_numpy():
    rng = np.random.default_rng(42)
    for _ in range(200):
        a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        m = a + a.conj().T
        evals, evecs = eig_hermitian2(m, tol=1e-9)
        ref = np.linalg.eigvalsh(m)[::-1]
        npt.assert_allclose(evals, ref, atol=1e-12 * max(1.0, np.abs(ref).max()))
        recon = evecs @ np.diag(evals) @ evecs.conj().T
        npt.assert_allclose(recon, m, atol=1e-12 * max(1.0, np.abs(m).max()))
        # orthonormal columns
        npt.assert_allclose(evecs.conj().T @ evecs, np.eye(2), atol=1e-13)


def test_entropy_landmarks():
    assert von_neumann_entropy(density_from_ket([1.0, 0.0])) == 0.0
    assert abs(von_neumann_entropy(np.eye(2) / 2) - math.log(2)) < 1e-14
    lam = 0.9
    rho = np.diag([lam, 1 - lam]).astype(complex)
    expected = -lam * math.log(lam) - (1 - lam) * math.log(1 - lam)
    assert abs(von_neumann_entropy(rho) - expected) < 1e-14


def test_expectation_matches_trace_formula():
    rng = np.random.default_rng(5)
    for _ in range(30):
        rho = random_density(rng)
        n = rng.normal(size=3)
        n /= np.linalg.norm(n)
        g = n[0] * np.array([[0, 1], [1, 0]], dtype=complex) \
            + n[1] * np.array([[0, -1j], [1j, 0]]) \
            + n[2] * np.array([[1, 0], [0, -1]], dtype=complex)
        want = float(np.trace(rho @ g).real)
        assert abs(expectation(rho, g) - want) < 1e-13


def test_observable_validation():
    with pytest.raises(NonHermitianError):
        validate_observable(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(InvalidStateError):
        validate_observable(np.diag([1.5, 0.0]))  # spectrum outside [-1, 1]
    validate_observable(np.diag([1.0, -1.0]))


def test_internal_energy_sign_convention():
    h = Hamiltonian(omega=2.0)
    excited = density_from_ket([1.0, 0.0])
    ground = density_from_ket([0.0, 1.0])
    assert internal_energy(excited, h) == pytest.approx(1.0)
    assert internal_energy(ground, h) == pytest.approx(-1.0)
    assert internal_energy(np.eye(2) / 2, h) == pytest.approx(0.0)


def _uhlmann_fidelity(a, b):
    # independent route: F = (tr sqrt(sqrt(a) b sqrt(a)))^2
    evals, evecs = np.linalg.eigh(a)
    sqrt_a = evecs @ np.diag(np.sqrt(np.clip(evals, 0, None))) @ evecs.conj().T
    inner = sqrt_a @ b @ sqrt_a
    lam = np.clip(np.linalg.eigvalsh(inner), 0.0, None)
    return float(np.sum(np.sqrt(lam)) ** 2)


def test_fidelity_against_uhlmann_route():
    rng = np.random.default_rng(17)
    for _ in range(40):
        a, b = random_density(rng), random_density(rng)
        f = fidelity(a, b)
        assert abs(f - _uhlmann_fidelity(a, b)) < 1e-12
        assert abs(f - fidelity(b, a)) < 1e-13
    one = density_from_ket([1.0, 0.0])
    other = density_from_ket([0.0, 1.0])
    assert fidelity(one, one) == pytest.approx(1.0, abs=1e-14)
    assert fidelity(one, other) == pytest.approx(0.0, abs=1e-14)


def test_pure_state_fidelity_is_overlap():
    rng = np.random.default_rng(23)
    for _ in range(20):
        ka = rng.normal(size=2) + 1j * rng.normal(size=2)
        kb = rng.normal(size=2) + 1j * rng.normal(size=2)
        ka /= np.linalg.norm(ka)
        kb /= np.linalg.norm(kb)
        f = fidelity(density_from_ket(ka), density_from_ket(kb))
        assert abs(f - abs(np.vdot(ka, kb)) ** 2) < 1e-12
