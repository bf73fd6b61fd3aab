"""Generalized amplitude damping in three equivalent pictures.

The channel couples the qubit to a bosonic bath with mean occupation
``nbar``.  It mixes two opposed amplitude-damping processes:

- with weight ``p``, damping toward index 0 (the excited state ``|H>``),
  i.e. transfer of ground-state amplitude upward;
- with weight ``1 - p``, damping toward index 1 (the ground state ``|V>``).

Each application is characterised by ``ChannelParams(p, gamma)``.  The
time-resolved picture uses the closed-form solution of the underlying
relaxation dynamics, with the dimensionless mappings::

    gamma       = 1 - exp(-(1 + 2 nbar) tau)
    1 - 2 p     = 1 / (1 + 2 nbar)          (so p = nbar / (1 + 2 nbar))
    r_z(infty)  = -1 / (1 + 2 nbar)

The ``p`` mapping above is the unique choice whose fixed point equals the
Gibbs state of the bath; ``thermal_state`` and ``lindblad_closed_form``
are consistent with it to round-off.

Optical calibration: a birefringent phase ``phi`` set on the simulator
realises ``gamma = sin^2(phi/2)``, giving the interaction-time curve
``tau(phi)`` and the temperature curve ``T(p) = 1 / (2 artanh(1 - 2p))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InfiniteTimeError, InvalidStateError
from .qubit import (
    CONSTRUCTION_TOL,
    density_from_bloch,
    validate_density_matrix,
)


@dataclass(frozen=True)
class ChannelParams:
    """One channel application: mixing weight ``p`` and damping rate ``gamma``."""

    p: float
    gamma: float

    def __post_init__(self):
        for name in ("p", "gamma"):
            v = getattr(self, name)
            if not math.isfinite(v) or v < -CONSTRUCTION_TOL or v > 1.0 + CONSTRUCTION_TOL:
                raise InvalidStateError("%s must lie in [0, 1], got %r" % (name, v))
            # clamp round-off so downstream square roots stay real
            object.__setattr__(self, name, min(max(v, 0.0), 1.0))


@dataclass(frozen=True)
class BathSpec:
    """Bosonic bath with mean occupation ``nbar >= 0``."""

    nbar: float

    def __post_init__(self):
        if not math.isfinite(self.nbar) or self.nbar < 0.0:
            raise InvalidStateError("nbar must be non-negative, got %r" % (self.nbar,))

    @property
    def total_rate(self) -> float:
        """Dimensionless relaxation rate ``1 + 2 nbar`` of the Bloch vector."""
        return 1.0 + 2.0 * self.nbar


@dataclass(frozen=True)
class GADKraus:
    """The four Kraus operators of one channel application.

    ``e0``/``e1`` form the weight-``p`` pair damping toward index 0
    (``e0`` attenuates the index-1 amplitude, ``e1`` performs the jump
    ``|V> -> |H>``); ``e2``/``e3`` form the weight-``(1-p)`` pair damping
    toward index 1.  Completeness ``sum(E_k^dag E_k) = I`` is enforced.
    """

    e0: np.ndarray
    e1: np.ndarray
    e2: np.ndarray
    e3: np.ndarray

    def __post_init__(self):
        acc = np.zeros((2, 2), dtype=complex)
        for e in (self.e0, self.e1, self.e2, self.e3):
            acc = acc + e.conj().T @ e
        if np.max(np.abs(acc - np.eye(2))) > CONSTRUCTION_TOL:
            raise InvalidStateError("Kraus set is not trace preserving")

    def __iter__(self):
        return iter((self.e0, self.e1, self.e2, self.e3))


def kraus_ops(cp: ChannelParams) -> GADKraus:
    """Kraus operators for one application with parameters ``cp``."""
    sp = math.sqrt(cp.p)
    sq = math.sqrt(1.0 - cp.p)
    keep = math.sqrt(1.0 - cp.gamma)
    jump = math.sqrt(cp.gamma)
    e0 = sp * np.array([[1.0, 0.0], [0.0, keep]], dtype=complex)
    e1 = sp * np.array([[0.0, jump], [0.0, 0.0]], dtype=complex)
    e2 = sq * np.array([[keep, 0.0], [0.0, 1.0]], dtype=complex)
    e3 = sq * np.array([[0.0, 0.0], [jump, 0.0]], dtype=complex)
    return GADKraus(e0, e1, e2, e3)


def apply_channel(rho, cp: ChannelParams) -> np.ndarray:
    """Apply the channel: ``rho' = sum_k E_k rho E_k^dag``."""
    m = validate_density_matrix(rho)
    ops = kraus_ops(cp)
    out = np.zeros((2, 2), dtype=complex)
    for e in ops:
        out = out + e @ m @ e.conj().T
    return 0.5 * (out + out.conj().T)


def bloch_map(r, cp: ChannelParams) -> np.ndarray:
    """Affine Bloch-sphere action of one channel application.

    ``(rx, ry, rz) -> (rx sqrt(1-gamma), ry sqrt(1-gamma),
    gamma (2p - 1) + rz (1 - gamma))``
    """
    v = np.asarray(r, dtype=float)
    if v.shape != (3,):
        raise InvalidStateError("expected a Bloch 3-vector, got shape %r" % (v.shape,))
    keep = math.sqrt(1.0 - cp.gamma)
    return np.array(
        [v[0] * keep,
         v[1] * keep,
         cp.gamma * (2.0 * cp.p - 1.0) + v[2] * (1.0 - cp.gamma)])


def lindblad_closed_form(r0, bath: BathSpec, tau: float) -> np.ndarray:
    """Closed-form Bloch vector after interaction time ``tau >= 0``.

    ``rx, ry`` shrink as ``exp(-(1+2 nbar) tau / 2)``; the population
    component relaxes as
    ``rz(tau) = [exp(-(1+2 nbar) tau) (1 + (1+2 nbar) rz0) - 1] / (1+2 nbar)``
    toward the fixed point ``-1/(1+2 nbar)``.
    """
    v = np.asarray(r0, dtype=float)
    if v.shape != (3,):
        raise InvalidStateError("expected a Bloch 3-vector, got shape %r" % (v.shape,))
    if not math.isfinite(tau) or tau < 0.0:
        raise InvalidStateError("tau must be non-negative, got %r" % (tau,))
    a = bath.total_rate
    # Evaluate the decay through expm1 so the survival probability is the
    # same float as 1 - gamma in params_from_bath; the stepped (Kraus or
    # affine) route and this closed form then agree to round-off even when
    # gamma saturates near 1.
    decay = 1.0 + math.expm1(-a * tau)
    transverse = math.sqrt(decay)
    return np.array(
        [v[0] * transverse,
         v[1] * transverse,
         (decay * (1.0 + a * v[2]) - 1.0) / a])


def bloch_trajectory(r0, bath: BathSpec, taus) -> np.ndarray:
    """Vectorised ``lindblad_closed_form`` over an array of times.

    Returns an ``(n, 3)`` array; row ``i`` equals
    ``lindblad_closed_form(r0, bath, taus[i])`` to round-off.
    """
    v = np.asarray(r0, dtype=float)
    t = np.asarray(taus, dtype=float)
    if v.shape != (3,):
        raise InvalidStateError("expected a Bloch 3-vector, got shape %r" % (v.shape,))
    if t.ndim != 1:
        raise InvalidStateError("taus must be one-dimensional")
    if t.size and (not np.all(np.isfinite(t)) or float(t.min()) < 0.0):
        raise InvalidStateError("taus must be finite and non-negative")
    a = bath.total_rate
    # Same expm1 evaluation as the scalar form, see lindblad_closed_form.
    decay = 1.0 + np.expm1(-a * t)
    transverse = np.sqrt(decay)
    out = np.empty((t.size, 3))
    out[:, 0] = v[0] * transverse
    out[:, 1] = v[1] * transverse
    out[:, 2] = (decay * (1.0 + a * v[2]) - 1.0) / a
    return out


def params_from_bath(bath: BathSpec, tau: float) -> ChannelParams:
    """Channel parameters equivalent to evolving for time ``tau`` in ``bath``."""
    if not math.isfinite(tau) or tau < 0.0:
        raise InvalidStateError("tau must be non-negative, got %r" % (tau,))
    a = bath.total_rate
    gamma = -math.expm1(-a * tau)
    p = 0.5 * (1.0 - 1.0 / a)
    return ChannelParams(p=p, gamma=gamma)


def gamma_from_phase(phi: float) -> float:
    """Damping rate realised by birefringent phase ``phi``: ``sin^2(phi/2)``."""
    if not math.isfinite(phi) or phi < 0.0 or phi > math.pi:
        raise InvalidStateError("phi must lie in [0, pi], got %r" % (phi,))
    return math.sin(0.5 * phi) ** 2


def tau_from_phase(phi: float, bath: BathSpec) -> float:
    """Interaction time realised by phase ``phi``: ``-ln(1-gamma)/(1+2 nbar)``.

    Monotone increasing in ``phi`` and divergent at ``phi = pi``.
    """
    if not math.isfinite(phi) or phi < 0.0 or phi > math.pi:
        raise InvalidStateError("phi must lie in [0, pi], got %r" % (phi,))
    gamma = math.sin(0.5 * phi) ** 2
    if gamma >= 1.0:
        raise InfiniteTimeError("phi = pi corresponds to infinite interaction time")
    return -math.log1p(-gamma) / bath.total_rate


def phi_from_tau(tau: float, bath: BathSpec) -> float:
    """Phase setting that realises interaction time ``tau`` in ``bath``.

    Raises :class:`InfiniteTimeError` when the damping saturates in double
    precision (``gamma`` rounds to 1, so the phase would have to reach pi).
    """
    if not math.isfinite(tau) or tau < 0.0:
        raise InvalidStateError("tau must be non-negative, got %r" % (tau,))
    gamma = -math.expm1(-bath.total_rate * tau)
    if gamma >= 1.0:
        raise InfiniteTimeError(
            "tau %.6g is not representable: damping saturates at phi = pi" % (tau,))
    return 2.0 * math.asin(math.sqrt(gamma))


def temperature_from_p(p: float) -> float:
    """Bath temperature from the mixing weight: ``T = 1/(2 artanh(1-2p))``.

    Only ``p`` in the open interval (0, 0.5) corresponds to a finite,
    positive temperature for this protocol.
    """
    if not math.isfinite(p) or p <= 0.0:
        raise InvalidStateError("p must be positive, got %r" % (p,))
    if p >= 0.5:
        raise InvalidStateError(
            "p = %r has no finite positive temperature (requires p < 1/2)" % (p,))
    return 1.0 / (2.0 * math.atanh(1.0 - 2.0 * p))


def temperature_from_occupation(bath: BathSpec) -> float:
    """Bose-Einstein inversion ``T = 1 / ln(1 + 1/nbar)``; zero for ``nbar = 0``."""
    if bath.nbar == 0.0:
        return 0.0
    return 1.0 / math.log1p(1.0 / bath.nbar)


def occupation_from_temperature(temperature: float) -> float:
    """Mean occupation at temperature ``T``: ``1 / (exp(1/T) - 1)``."""
    if not math.isfinite(temperature) or temperature < 0.0:
        raise InvalidStateError(
            "temperature must be non-negative, got %r" % (temperature,))
    if temperature == 0.0:
        return 0.0
    return 1.0 / math.expm1(1.0 / temperature)


def thermal_state(bath: BathSpec) -> np.ndarray:
    """Gibbs state of the bath: diagonal with ``rz = -1/(1 + 2 nbar)``.

    This is the unique fixed point of the channel at any ``tau`` and the
    large-time limit of ``lindblad_closed_form``.
    """
    return density_from_bloch(np.array([0.0, 0.0, -1.0 / bath.total_rate]))
