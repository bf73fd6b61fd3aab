"""Simulated polarisation tomography with seeded noise and Monte Carlo errors.

Datasets hold the six analyser intensities (settings H, V, D, A, R, L).
Generation applies multiplicative Gaussian noise ``I -> I (1 + sigma g)``
with ``g`` drawn from a generator seeded explicitly, then clips at zero;
reconstruction is the linear Stokes inversion, followed by a physicality
projection that clips negative eigenvalues and renormalises (for a qubit
this equals radial clipping of the Bloch vector to the unit ball).

All randomness flows from integer seeds through one derivation rule,
:func:`derive_seed`, so results are reproducible and independent of
evaluation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import InvalidStateError
from .optics import SETTING_KETS, SETTINGS
from .qubit import (
    IDENTITY2,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    Hamiltonian,
    bloch_from_density,
    density_from_bloch,
    eig_hermitian2,
    validate_density_matrix,
    validate_hermitian,
    validate_observable,
)

# Nominal source flux in arbitrary units; intensities are fractions of it.
FLUX = 1.0

_FUNCTIONAL_KINDS = {
    "expectation": _kernels.KIND_EXPECTATION,
    "entropy": _kernels.KIND_ENTROPY,
    "free_energy": _kernels.KIND_FREE_ENERGY,
}


@dataclass(frozen=True)
class NoiseModel:
    """Multiplicative Gaussian intensity noise with relative sigma < 0.5."""

    relative_sigma: float = 0.0

    def __post_init__(self):
        s = self.relative_sigma
        if not math.isfinite(s) or s < 0.0 or s >= 0.5:
            raise InvalidStateError(
                "relative_sigma must lie in [0, 0.5), got %r" % (s,))


@dataclass(frozen=True)
class TomographyDataset:
    """Measured intensities per setting, with the noise level and seed used."""

    intensities: tuple
    noise_sigma: float
    seed: int

    def __post_init__(self):
        vals = tuple(float(v) for v in self.intensities)
        if len(vals) != len(SETTINGS):
            raise InvalidStateError(
                "expected %d intensities, got %d" % (len(SETTINGS), len(vals)))
        if any(not math.isfinite(v) or v < 0.0 for v in vals):
            raise InvalidStateError("intensities must be finite and non-negative")
        object.__setattr__(self, "intensities", vals)
        object.__setattr__(self, "seed", int(self.seed))

    def as_array(self) -> np.ndarray:
        return np.array(self.intensities, dtype=float)


def derive_seed(master: int, *path: int) -> int:
    """Derive a child seed from a master seed and an index path.

    Uses the numpy seed-sequence spawning algorithm, so the mapping is
    platform independent and children of distinct paths are statistically
    independent.
    """
    entries = [int(master)] + [int(x) for x in path]
    return int(np.random.SeedSequence(entries).generate_state(1, dtype=np.uint64)[0])


def ideal_intensities(rho) -> np.ndarray:
    """Noise-free analyser intensities ``FLUX * Tr[rho |s><s|]`` per setting."""
    m = validate_density_matrix(rho)
    out = np.empty(len(SETTINGS))
    for i, s in enumerate(SETTINGS):
        k = SETTING_KETS[s]
        out[i] = FLUX * float(np.vdot(k, m @ k).real)
    return out


def apply_intensity_noise(ideal, noise: NoiseModel, seed: int) -> np.ndarray:
    """One noisy realisation of a set of ideal intensities (clipped at zero)."""
    base = np.asarray(ideal, dtype=float)
    g = np.random.default_rng(int(seed)).standard_normal(base.shape[-1])
    return np.maximum(base * (1.0 + noise.relative_sigma * g), 0.0)


def generate_dataset(rho, noise: NoiseModel, seed: int) -> TomographyDataset:
    """Simulate one tomography run of ``rho``; deterministic given ``seed``."""
    noisy = apply_intensity_noise(ideal_intensities(rho), noise, seed)
    return TomographyDataset(
        intensities=tuple(noisy), noise_sigma=noise.relative_sigma, seed=int(seed))


def linear_reconstruct(ds: TomographyDataset) -> np.ndarray:
    """Stokes inversion of a dataset.

    Returns ``(I + s . sigma) / 2`` with ``s1 = (I_H - I_V)/N``,
    ``s2 = (I_D - I_A)/N``, ``s3 = (I_R - I_L)/N`` and ``N = I_H + I_V``.
    The result is Hermitian with unit trace but may be non positive
    semidefinite under noise; see :func:`project_physical`.
    """
    i_h, i_v, i_d, i_a, i_r, i_l = ds.intensities
    total = i_h + i_v
    if total <= 0.0:
        raise InvalidStateError("zero total flux: dataset cannot be inverted")
    s1 = (i_h - i_v) / total
    s2 = (i_d - i_a) / total
    s3 = (i_r - i_l) / total
    return 0.5 * (IDENTITY2 + s1 * PAULI_Z + s2 * PAULI_X + s3 * PAULI_Y)


def project_physical(mat) -> np.ndarray:
    """Nearest physical state: clip negative eigenvalues, renormalise.

    Idempotent, and the identity on inputs that are already valid states.
    """
    m = validate_hermitian(mat)
    tr = m[0, 0].real + m[1, 1].real
    if abs(tr - 1.0) > 1e-10:
        raise InvalidStateError("expected unit trace, got %.12g" % (tr,))
    evals, evecs = eig_hermitian2(m)
    if evals[1] >= 0.0:
        return m
    clipped = np.array([max(float(evals[0]), 0.0), 0.0])
    total = clipped[0]
    if total <= 0.0:
        raise InvalidStateError("projection collapsed to the zero matrix")
    clipped /= total
    out = (clipped[0] * np.outer(evecs[:, 0], evecs[:, 0].conj())
           + clipped[1] * np.outer(evecs[:, 1], evecs[:, 1].conj()))
    return 0.5 * (out + out.conj().T)


def combine_weighted(rho_a, rho_b, p: float) -> np.ndarray:
    """Convex mixture ``p rho_a + (1 - p) rho_b`` of two states.

    The first argument carries the weight ``p`` (the configuration that
    damps the vertical component in the optical pipeline).
    """
    if not math.isfinite(p) or p < 0.0 or p > 1.0:
        raise InvalidStateError("weight p must lie in [0, 1], got %r" % (p,))
    a = validate_density_matrix(rho_a)
    b = validate_density_matrix(rho_b)
    return p * a + (1.0 - p) * b


def noisy_intensity_block(ideal, noise: NoiseModel, seeds) -> np.ndarray:
    """Stack of noisy realisations, one row per seed; rows are independent."""
    base = np.asarray(ideal, dtype=float)
    out = np.empty((len(seeds), base.shape[-1]))
    for i, seed in enumerate(seeds):
        out[i] = apply_intensity_noise(base, noise, seed)
    return out


def _observable_components(g) -> np.ndarray:
    m = validate_observable(g)
    return np.array([
        0.5 * float(np.trace(m).real),
        0.5 * float(np.trace(m @ PAULI_X).real),
        0.5 * float(np.trace(m @ PAULI_Y).real),
        0.5 * float(np.trace(m @ PAULI_Z).real),
    ])


def monte_carlo_errors(rho_true, noise: NoiseModel, n_samples: int,
                       functional: str, *, master_seed: int = 0,
                       observable=None, hamiltonian: Hamiltonian | None = None,
                       temperature: float | None = None,
                       probe_rz: float | None = None):
    """Sample mean and standard deviation of a functional under noise.

    Repeats generate -> reconstruct -> project ``n_samples`` times with
    seeds ``derive_seed(master_seed, i)`` and evaluates the named
    functional on each reconstruction:

    - ``"expectation"`` requires ``observable``
    - ``"entropy"`` has no parameters
    - ``"free_energy"`` requires ``hamiltonian``, ``temperature`` and
      ``probe_rz`` (the z component of the pure input state)

    Deterministic given ``master_seed``; the standard deviation uses the
    ``n - 1`` normalisation.
    """
    if n_samples < 2:
        raise InvalidStateError("n_samples must be at least 2")
    if functional not in _FUNCTIONAL_KINDS:
        raise InvalidStateError(
            "unknown functional %r (expected one of %r)"
            % (functional, sorted(_FUNCTIONAL_KINDS)))
    kind = _FUNCTIONAL_KINDS[functional]
    if functional == "expectation":
        if observable is None:
            raise InvalidStateError("functional 'expectation' needs an observable")
        params = _observable_components(observable)
    elif functional == "free_energy":
        if hamiltonian is None or temperature is None or probe_rz is None:
            raise InvalidStateError(
                "functional 'free_energy' needs hamiltonian, temperature and probe_rz")
        params = np.array([hamiltonian.omega, float(probe_rz), float(temperature)])
    else:
        params = np.empty(0)
    ideal = ideal_intensities(rho_true)
    seeds = [derive_seed(master_seed, i) for i in range(n_samples)]
    block = noisy_intensity_block(ideal, noise, seeds)
    bloch = _kernels.stokes_bloch(block)
    values = _kernels.functional_values(bloch, kind, params)
    return float(np.mean(values)), float(np.std(values, ddof=1))


def reconstruct_state(ds: TomographyDataset) -> np.ndarray:
    """Convenience: linear reconstruction followed by the physicality projection."""
    return project_physical(linear_reconstruct(ds))


def dataset_to_csv(ds: TomographyDataset, path):
    """Write a dataset as CSV with columns setting,intensity,sigma,seed."""
    lines = ["setting,intensity,sigma,seed"]
    for name, value in zip(SETTINGS, ds.intensities):
        lines.append("%s,%s,%s,%d" % (
            name, format(value, ".17g"), format(ds.noise_sigma, ".17g"), ds.seed))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def dataset_from_csv(path) -> TomographyDataset:
    """Read a dataset written by :func:`dataset_to_csv`."""
    with open(path, "r", encoding="utf-8") as fh:
        rows = [line.strip() for line in fh if line.strip()]
    if not rows or rows[0] != "setting,intensity,sigma,seed":
        raise InvalidStateError("unrecognised dataset file %r" % (str(path),))
    by_setting = {}
    sigma = None
    seed = None
    for line in rows[1:]:
        parts = line.split(",")
        if len(parts) != 4:
            raise InvalidStateError("malformed dataset row %r" % (line,))
        name, intensity, s, sd = parts
        if name not in SETTINGS:
            raise InvalidStateError("unknown setting %r in dataset" % (name,))
        by_setting[name] = float(intensity)
        row_sigma, row_seed = float(s), int(sd)
        if sigma is None:
            sigma, seed = row_sigma, row_seed
        elif sigma != row_sigma or seed != row_seed:
            raise InvalidStateError("inconsistent sigma/seed across dataset rows")
    if set(by_setting) != set(SETTINGS):
        raise InvalidStateError("dataset is missing settings")
    return TomographyDataset(
        intensities=tuple(by_setting[s] for s in SETTINGS),
        noise_sigma=sigma, seed=seed)


def reconstruction_bloch_reference(ds: TomographyDataset) -> np.ndarray:
    """Scalar-route Bloch vector of a dataset, for kernel cross-checks."""
    return bloch_from_density(reconstruct_state(ds))


def state_from_bloch_batch(bloch_rows) -> list:
    """Densities for a batch of Bloch rows (test/diagnostic helper)."""
    return [density_from_bloch(row) for row in np.asarray(bloch_rows, dtype=float)]
