"""Exact 2x2 qubit algebra: states, Bloch conversions, and state functionals.

Conventions used throughout the package:

- basis index 0 is the excited state, identified with horizontal
  polarisation ``|H>``; index 1 is the ground state, ``|V>``
- energies are reported in units of ``hbar*omega``, entropies in
  ``k_B`` (natural logarithm), temperatures in ``hbar*omega/k_B``,
  so every quantity is dimensionless
- density matrices and observables are plain complex ``(2, 2)`` numpy
  arrays; the validators below define what counts as physical

Tolerances: objects built by this package satisfy their invariants to
better than ``CONSTRUCTION_TOL``; input arriving from the outside
(for example a tomographic reconstruction) is accepted up to
``INPUT_TOL``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidStateError, NonHermitianError

CONSTRUCTION_TOL = 1e-12
INPUT_TOL = 1e-10

IDENTITY2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


@dataclass(frozen=True)
class ProbeState:
    """Pure probe preparation ``cos(theta/2)|H> + e^{i phase} sin(theta/2)|V>``.

    ``theta`` runs from 0 (excited, ``|H>``) to pi (ground, ``|V>``);
    ``relative_phase`` fixes the azimuth on the Bloch sphere.
    """

    theta: float
    relative_phase: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.theta) or not math.isfinite(self.relative_phase):
            raise InvalidStateError("probe angles must be finite")
        if self.theta < 0.0 or self.theta > math.pi:
            raise InvalidStateError(
                "probe theta must lie in [0, pi], got %r" % (self.theta,))


@dataclass(frozen=True)
class Hamiltonian:
    """System Hamiltonian ``(omega/2) * sigma_z`` with ``omega > 0``."""

    omega: float = 1.0

    def __post_init__(self):
        if not math.isfinite(self.omega) or self.omega <= 0.0:
            raise InvalidStateError("omega must be positive and finite")


def as_matrix2(mat) -> np.ndarray:
    """Coerce to a finite complex (2, 2) array."""
    m = np.asarray(mat, dtype=complex)
    if m.shape != (2, 2):
        raise InvalidStateError("expected a 2x2 matrix, got shape %r" % (m.shape,))
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise InvalidStateError("matrix entries must be finite")
    return m


def _hermitian_deviation(m: np.ndarray) -> float:
    return float(np.max(np.abs(m - m.conj().T)))


def validate_hermitian(mat, tol: float = INPUT_TOL) -> np.ndarray:
    """Check Hermiticity within ``tol`` and return the symmetrised matrix."""
    m = as_matrix2(mat)
    if _hermitian_deviation(m) > tol:
        raise NonHermitianError(
            "matrix deviates from Hermiticity by %.3e (tol %.1e)"
            % (_hermitian_deviation(m), tol))
    return 0.5 * (m + m.conj().T)


def validate_density_matrix(rho, tol: float = INPUT_TOL) -> np.ndarray:
    """Validate a density matrix: Hermitian, unit trace, positive semidefinite.

    Returns the symmetrised matrix so downstream algebra can rely on exact
    Hermiticity.
    """
    m = as_matrix2(rho)
    if _hermitian_deviation(m) > tol:
        raise NonHermitianError(
            "density matrix is not Hermitian within %.1e" % (tol,))
    m = 0.5 * (m + m.conj().T)
    tr = m[0, 0].real + m[1, 1].real
    if abs(tr - 1.0) > tol:
        raise InvalidStateError("density matrix trace %.12g != 1" % (tr,))
    evals, _ = eig_hermitian2(m, tol=tol)
    if evals[1] < -tol:
        raise InvalidStateError(
            "density matrix has negative eigenvalue %.3e" % (evals[1],))
    return m


def validate_observable(g, tol: float = CONSTRUCTION_TOL) -> np.ndarray:
    """Validate a bounded measurement operator: Hermitian, spectrum in [-1, 1]."""
    m = validate_hermitian(g, tol=tol)
    evals, _ = eig_hermitian2(m, tol=tol)
    if evals[0] > 1.0 + tol or evals[1] < -1.0 - tol:
        raise InvalidStateError(
            "observable spectrum [%.6f, %.6f] exceeds [-1, 1]"
            % (evals[1], evals[0]))
    return m


def ket_from_probe(probe: ProbeState) -> np.ndarray:
    """Normalised state vector of the probe preparation."""
    half = 0.5 * probe.theta
    return np.array(
        [math.cos(half),
         complex(math.cos(probe.relative_phase),
                 math.sin(probe.relative_phase)) * math.sin(half)],
        dtype=complex)


def density_from_ket(ket) -> np.ndarray:
    """Rank-one density matrix ``|k><k|`` of a normalised ket."""
    k = np.asarray(ket, dtype=complex)
    if k.shape != (2,):
        raise InvalidStateError("expected a 2-vector, got shape %r" % (k.shape,))
    norm = float(np.vdot(k, k).real)
    if abs(norm - 1.0) > CONSTRUCTION_TOL:
        raise InvalidStateError("ket norm %.12g != 1" % (math.sqrt(norm),))
    return np.outer(k, k.conj())


def density_from_bloch(r) -> np.ndarray:
    """Density matrix ``(I + r . sigma) / 2`` of a Bloch vector with |r| <= 1."""
    v = np.asarray(r, dtype=float)
    if v.shape != (3,):
        raise InvalidStateError("expected a Bloch 3-vector, got shape %r" % (v.shape,))
    if not np.all(np.isfinite(v)):
        raise InvalidStateError("Bloch components must be finite")
    norm = float(np.linalg.norm(v))
    if norm > 1.0 + CONSTRUCTION_TOL:
        raise InvalidStateError("Bloch vector norm %.12g exceeds 1" % (norm,))
    rx, ry, rz = (float(v[0]), float(v[1]), float(v[2]))
    return 0.5 * np.array(
        [[1.0 + rz, rx - 1.0j * ry],
         [rx + 1.0j * ry, 1.0 - rz]], dtype=complex)


def bloch_from_density(rho, tol: float = INPUT_TOL) -> np.ndarray:
    """Bloch vector (rx, ry, rz) of a density matrix."""
    m = validate_density_matrix(rho, tol=tol)
    return np.array(
        [2.0 * m[0, 1].real,
         -2.0 * m[0, 1].imag,
         m[0, 0].real - m[1, 1].real])


def eig_hermitian2(mat, tol: float = INPUT_TOL):
    """Closed-form eigendecomposition of a Hermitian 2x2 matrix.

    Returns ``(evals, evecs)`` with eigenvalues sorted descending and the
    matching orthonormal eigenvectors as the columns of ``evecs``.  The
    solver is the explicit quadratic formula, deterministic and exact to
    round-off; no iterative routine is involved.
    """
    m = as_matrix2(mat)
    dev = _hermitian_deviation(m)
    if dev > tol:
        raise NonHermitianError(
            "eig_hermitian2 requires a Hermitian matrix (deviation %.3e)" % (dev,))
    m = 0.5 * (m + m.conj().T)
    a = m[0, 0].real
    c = m[1, 1].real
    b = m[0, 1]
    half = 0.5 * (a + c)
    # hypot keeps the discriminant stable when (a-c)/2 and |b| differ wildly
    disc = math.hypot(0.5 * (a - c), abs(b))
    evals = np.array([half + disc, half - disc])
    if disc <= 1e-300:
        return evals, np.eye(2, dtype=complex)
    # Pick the better-conditioned null-space expression for the top eigenvector.
    w1 = np.array([b, evals[0] - a], dtype=complex)
    w2 = np.array([evals[0] - c, np.conj(b)], dtype=complex)
    v = w1 if np.vdot(w1, w1).real >= np.vdot(w2, w2).real else w2
    v = v / math.sqrt(np.vdot(v, v).real)
    # The orthonormal complement is the second eigenvector in dimension 2.
    v_perp = np.array([-np.conj(v[1]), np.conj(v[0])], dtype=complex)
    evecs = np.empty((2, 2), dtype=complex)
    evecs[:, 0] = v
    evecs[:, 1] = v_perp
    return evals, evecs


def von_neumann_entropy(rho) -> float:
    """Entropy ``-sum(lam * ln(lam))`` in k_B units, with 0*ln(0) = 0."""
    m = validate_density_matrix(rho)
    evals, _ = eig_hermitian2(m)
    s = 0.0
    for lam in evals:
        lam = min(max(float(lam), 0.0), 1.0)
        if lam > 0.0:
            s -= lam * math.log(lam)
    return max(s, 0.0)


def internal_energy(rho, h: Hamiltonian) -> float:
    """``Tr[H rho] = (omega/2) (rho_00 - rho_11)`` in hbar*omega units."""
    m = validate_density_matrix(rho)
    return 0.5 * h.omega * (m[0, 0].real - m[1, 1].real)


def expectation(rho, g) -> float:
    """Real expectation value ``Tr[rho G]`` of an observable."""
    m = validate_density_matrix(rho)
    gm = validate_observable(g)
    val = complex(np.trace(m @ gm))
    if abs(val.imag) > CONSTRUCTION_TOL:
        raise NonHermitianError(
            "expectation value has imaginary residual %.3e" % (val.imag,))
    return val.real


def fidelity(rho, sigma) -> float:
    """Uhlmann fidelity of two qubit states (squared-overlap convention).

    For 2x2 states the closed form ``Tr[rho sigma] + 2 sqrt(det rho det sigma)``
    avoids any matrix square root.
    """
    a = validate_density_matrix(rho)
    b = validate_density_matrix(sigma)
    det_a = max((a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]).real, 0.0)
    det_b = max((b[0, 0] * b[1, 1] - b[0, 1] * b[1, 0]).real, 0.0)
    val = float(np.trace(a @ b).real) + 2.0 * math.sqrt(det_a * det_b)
    return min(max(val, 0.0), 1.0)
