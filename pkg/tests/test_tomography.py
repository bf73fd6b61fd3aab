import math

import numpy as np
import numpy.testing as npt
import pytest

from qubitherm.errors import InvalidStateError
from qubitherm.qubit import (
    Hamiltonian,
    bloch_from_density,
    density_from_bloch,
    density_from_ket,
    expectation,
    von_neumann_entropy,
)
from qubitherm.tomography import (
    FLUX,
    NoiseModel,
    TomographyDataset,
    apply_intensity_noise,
    combine_weighted,
    dataset_from_csv,
    dataset_to_csv,
    derive_seed,
    generate_dataset,
    ideal_intensities,
    linear_reconstruct,
    monte_carlo_errors,
    noisy_intensity_block,
    project_physical,
    reconstruct_state,
)


def test_ideal_intensities_from_bloch_components():
    x, y, z = 0.3, -0.5, 0.2
    vals = ideal_intensities(density_from_bloch([x, y, z]))
    # order H, V, D, A, R, L
    npt.assert_allclose(vals, FLUX * 0.5 * np.array(
        [1 + z, 1 - z, 1 + x, 1 - x, 1 + y, 1 - y]), atol=1e-14)
    assert vals.sum() == pytest.approx(3.0 * FLUX)


def test_derive_seed_is_stable():
    # frozen regression anchors; the derivation must never drift, or every
    # recorded run becomes unreproducible
    assert derive_seed(12345) == 13091511679009522556
    assert derive_seed(12345, 0, 1, 2) == 2725326290303390302
    assert derive_seed(12345, 0, 1, 2) == derive_seed(12345, 0, 1, 2)
    assert derive_seed(12345, 1) != derive_seed(12345, 2)


def test_noise_is_deterministic_and_clipped():
    ideal = np.array([1.0, 0.5, 0.0, 0.25, 0.75, 1.0])
    noise = NoiseModel(0.3)
    a = apply_intensity_noise(ideal, noise, 77)
    b = apply_intensity_noise(ideal, noise, 77)
    npt.assert_array_equal(a, b)
    c = apply_intensity_noise(ideal, noise, 78)
    assert np.any(a != c)
    assert np.all(a >= 0.0)
    # sigma = 0 reproduces the input exactly
    npt.assert_array_equal(apply_intensity_noise(ideal, NoiseModel(0.0), 5),
                           ideal)


def test_noise_model_validation():
    NoiseModel(0.0)
    NoiseModel(0.49)
    with pytest.raises(InvalidStateError):
        NoiseModel(-0.01)
    with pytest.raises(InvalidStateError):
        NoiseModel(0.5)


def test_noiseless_reconstruction_is_exact():
    rng = np.random.default_rng(31)
    for _ in range(25):
        v = rng.normal(size=3)
        v *= rng.uniform(0, 1) / np.linalg.norm(v)
        rho = density_from_bloch(v)
        ds = generate_dataset(rho, NoiseModel(0.0), seed=1)
        rec = linear_reconstruct(ds)
        npt.assert_allclose(rec, rho, atol=1e-14)
        npt.assert_allclose(reconstruct_state(ds), rho, atol=1e-14)


def test_linear_reconstruct_rejects_zero_flux():
    ds = TomographyDataset(intensities=(0, 0, 0, 0, 0, 0), noise_sigma=0.0,
                           seed=0)
    with pytest.raises(InvalidStateError):
        linear_reconstruct(ds)


def test_projection_is_radial_clip_for_qubits():
    rng = np.random.default_rng(32)
    for _ in range(30):
        direction = rng.normal(size=3)
        direction /= np.linalg.norm(direction)
        r = rng.uniform(1.01, 2.0)
        unphysical = 0.5 * (np.eye(2, dtype=complex)
                            + r * (direction[0] * np.array([[0, 1], [1, 0]])
                                   + direction[1] * np.array([[0, -1j], [1j, 0]])
                                   + direction[2] * np.diag([1.0, -1.0])))
        proj = project_physical(unphysical)
        npt.assert_allclose(bloch_from_density(proj), direction, atol=1e-12)
        # idempotent
        npt.assert_allclose(project_physical(proj), proj, atol=1e-14)
    # physical states pass through untouched
    rho = density_from_bloch([0.1, 0.2, -0.3])
    npt.assert_array_equal(project_physical(rho), rho)


def test_combine_weighted():
    a = density_from_ket([1.0, 0.0])
    b = density_from_ket([0.0, 1.0])
    m = combine_weighted(a, b, 0.25)
    npt.assert_allclose(np.diag(m).real, [0.25, 0.75])
    with pytest.raises(InvalidStateError):
        combine_weighted(a, b, 1.5)
    with pytest.raises(InvalidStateError):
        combine_weighted(a, b, -0.1)


def test_dataset_csv_round_trip_is_exact(tmp_path):
    rho = density_from_bloch([0.21, -0.53, 0.17])
    ds = generate_dataset(rho, NoiseModel(0.05), seed=99)
    path = tmp_path / "ds.csv"
    dataset_to_csv(ds, path)
    back = dataset_from_csv(path)
    assert back.intensities == ds.intensities  # bit-exact via repr-faithful format
    assert back.noise_sigma == ds.noise_sigma
    assert back.seed == ds.seed


def test_monte_carlo_is_deterministic():
    rho = density_from_bloch([0.4, 0.1, -0.2])
    noise = NoiseModel(0.02)
    a = monte_carlo_errors(rho, noise, 50, "entropy", master_seed=7)
    b = monte_carlo_errors(rho, noise, 50, "entropy", master_seed=7)
    assert a == b
    c = monte_carlo_errors(rho, noise, 50, "entropy", master_seed=8)
    assert a != c


def test_monte_carlo_matches_scalar_route():
    # kernels route vs reconstructing every sample through the matrix API
    rho = density_from_bloch([0.35, -0.15, 0.25])
    noise = NoiseModel(0.03)
    n = 64
    g = np.diag([1.0, -1.0]).astype(complex)
    mean, std = monte_carlo_errors(rho, noise, n, "expectation",
                                   master_seed=5, observable=g)
    vals = []
    ideal = ideal_intensities(rho)
    for i in range(n):
        noisy = apply_intensity_noise(ideal, noise, derive_seed(5, i))
        ds = TomographyDataset(intensities=tuple(noisy), noise_sigma=0.03,
                               seed=derive_seed(5, i))
        vals.append(expectation(reconstruct_state(ds), g))
    assert mean == pytest.approx(float(np.mean(vals)), abs=1e-12)
    assert std == pytest.approx(float(np.std(vals, ddof=1)), abs=1e-12)


def test_monte_carlo_entropy_and_free_energy_routes():
    rho = density_from_bloch([0.0, 0.0, 0.6])
    noise = NoiseModel(0.02)
    mean, std = monte_carlo_errors(rho, noise, 200, "entropy", master_seed=3)
    assert abs(mean - von_neumann_entropy(rho)) < 5 * std + 5e-3
    h = Hamiltonian(omega=1.0)
    mean_f, std_f = monte_carlo_errors(
        rho, noise, 50, "free_energy", master_seed=3, hamiltonian=h,
        temperature=2.0, probe_rz=1.0)
    assert math.isfinite(mean_f) and std_f >= 0.0


def test_monte_carlo_argument_validation():
    rho = density_from_bloch([0.0, 0.0, 0.5])
    noise = NoiseModel(0.01)
    with pytest.raises(InvalidStateError):
        monte_carlo_errors(rho, noise, 1, "entropy")
    with pytest.raises(InvalidStateError):
        monte_carlo_errors(rho, noise, 10, "unknown_kind")
    with pytest.raises(InvalidStateError):
        monte_carlo_errors(rho, noise, 10, "expectation")  # missing observable
    with pytest.raises(InvalidStateError):
        monte_carlo_errors(rho, noise, 10, "free_energy", temperature=1.0)


def test_noisy_block_rows_match_single_draws():
    ideal = ideal_intensities(density_from_bloch([0.2, 0.3, 0.1]))
    noise = NoiseModel(0.05)
    seeds = [derive_seed(9, i) for i in range(8)]
    block = noisy_intensity_block(ideal, noise, seeds)
    for i, s in enumerate(seeds):
        npt.assert_array_equal(block[i], apply_intensity_noise(ideal, noise, s))
