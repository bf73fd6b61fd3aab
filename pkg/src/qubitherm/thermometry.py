"""Two-temperature discrimination and free-energy diagnostics.

Given a pure probe evolved for a time ``tau`` in contact with either a
cold or a hot bath, the optimal two-outcome measurement distinguishing
the two hypotheses is the sign observable of ``rho_cold - rho_hot``
(the Helstrom construction).  Its expectation gap equals the trace
distance, which for qubits is the Euclidean distance of the Bloch
vectors.  This module locates the interaction time that maximises the
gap and tracks the Helmholtz free energy ``dF = dU - T dS`` along each
trajectory.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import (
    BathSpec,
    bloch_trajectory,
    lindblad_closed_form,
    temperature_from_occupation,
)
from .errors import DegeneratePairError, InvalidStateError
from .qubit import (
    CONSTRUCTION_TOL,
    Hamiltonian,
    ProbeState,
    bloch_from_density,
    density_from_bloch,
    density_from_ket,
    eig_hermitian2,
    expectation,
    internal_energy,
    ket_from_probe,
    validate_density_matrix,
    von_neumann_entropy,
)

# Trace distances below this are treated as "states coincide".
DEGENERACY_TOL = 1e-10

# Grid horizon and resolution for the coarse stage of optimal_time.
OPTIMAL_TIME_HORIZON = 2.0
OPTIMAL_TIME_COARSE_STEP = 1e-3
OPTIMAL_TIME_REFINE_TOL = 1e-8

# Interaction time treated as "fully thermalised" when evaluating the
# large-time free-energy limit; exp(-(1+2 nbar) tau) underflows double
# precision well before this for any bath of interest.
THERMALIZATION_TAU = 50.0


@dataclass(frozen=True)
class DiscriminationPoint:
    """One point of a discrimination curve.

    ``g`` is the optimal observable at this time, or ``None`` at times
    where the two hypotheses coincide (then the separation is zero by
    definition and both expectations are recorded as zero).
    """

    tau: float
    g: np.ndarray | None
    ev_cold: float
    ev_hot: float
    separation: float

    def __post_init__(self):
        if self.separation < 0.0:
            raise InvalidStateError("separation must be non-negative")
        if abs(self.separation - abs(self.ev_hot - self.ev_cold)) > CONSTRUCTION_TOL:
            raise InvalidStateError(
                "separation %.12g inconsistent with expectation gap %.12g"
                % (self.separation, abs(self.ev_hot - self.ev_cold)))


@dataclass(frozen=True)
class FreeEnergyRecord:
    """Free-energy bookkeeping at one interaction time.

    ``dU`` in hbar*omega, ``dS`` in k_B, ``dF = dU - T dS`` with the
    ``temperature`` stored alongside; ``dF_normalized`` is ``dF`` divided
    by its large-time limit (zero when that limit vanishes).
    """

    tau: float
    dU: float
    dS: float
    dF: float
    dF_normalized: float
    temperature: float

    def __post_init__(self):
        if abs(self.dF - (self.dU - self.temperature * self.dS)) > CONSTRUCTION_TOL:
            raise InvalidStateError("dF inconsistent with dU - T*dS")


def optimal_observable(rho1, rho2) -> np.ndarray:
    """Helstrom observable: difference of the sign projectors of rho1 - rho2.

    The result has spectrum {+1, -1}, so its expectation gap between the
    two states equals the trace norm of their difference.  Raises
    :class:`DegeneratePairError` when the states are indistinguishable.
    """
    a = validate_density_matrix(rho1)
    b = validate_density_matrix(rho2)
    delta = a - b
    evals, evecs = eig_hermitian2(delta, tol=CONSTRUCTION_TOL)
    if abs(evals[0]) + abs(evals[1]) < DEGENERACY_TOL:
        raise DegeneratePairError(
            "states coincide (trace distance %.3e); any observable is vacuous"
            % (abs(evals[0]) + abs(evals[1]),))
    plus = np.outer(evecs[:, 0], evecs[:, 0].conj())
    minus = np.outer(evecs[:, 1], evecs[:, 1].conj())
    g = plus - minus
    return 0.5 * (g + g.conj().T)


def separation(rho1, rho2) -> float:
    """Trace norm of ``rho1 - rho2``: the optimal expectation gap."""
    a = validate_density_matrix(rho1)
    b = validate_density_matrix(rho2)
    evals, _ = eig_hermitian2(a - b, tol=CONSTRUCTION_TOL)
    return float(abs(evals[0]) + abs(evals[1]))


def success_probability(rho1, rho2) -> float:
    """Helstrom bound for equiprobable discrimination: ``1/2 + |d|_1 / 4``."""
    return 0.5 + 0.25 * separation(rho1, rho2)


def _probe_bloch(probe: ProbeState) -> np.ndarray:
    return bloch_from_density(density_from_ket(ket_from_probe(probe)))


def _check_baths(cold: BathSpec, hot: BathSpec):
    if not cold.nbar < hot.nbar:
        raise InvalidStateError(
            "need cold.nbar < hot.nbar, got %r >= %r" % (cold.nbar, hot.nbar))


def discrimination_curve(probe: ProbeState, cold: BathSpec, hot: BathSpec,
                         taus) -> list[DiscriminationPoint]:
    """Expectation values of the per-time optimal observable along a tau grid.

    ``taus`` must be strictly increasing and non-negative.  At any time
    where the two evolved states coincide (always at tau = 0, and at an
    interior crossing for probes whose trajectories intersect) the point
    carries a null marker instead of an arbitrary observable.
    """
    t = np.asarray(taus, dtype=float)
    if t.ndim != 1 or t.size == 0:
        raise InvalidStateError("taus must be a non-empty 1-d sequence")
    if float(t[0]) < 0.0 or (t.size > 1 and not np.all(np.diff(t) > 0.0)):
        raise InvalidStateError("taus must be strictly increasing and >= 0")
    _check_baths(cold, hot)
    r0 = _probe_bloch(probe)
    traj_cold = bloch_trajectory(r0, cold, t)
    traj_hot = bloch_trajectory(r0, hot, t)
    points = []
    for i, tau in enumerate(t):
        rho_c = density_from_bloch(traj_cold[i])
        rho_h = density_from_bloch(traj_hot[i])
        if float(np.linalg.norm(traj_cold[i] - traj_hot[i])) < DEGENERACY_TOL:
            points.append(DiscriminationPoint(
                tau=float(tau), g=None, ev_cold=0.0, ev_hot=0.0, separation=0.0))
            continue
        g = optimal_observable(rho_c, rho_h)
        ev_c = expectation(rho_c, g)
        ev_h = expectation(rho_h, g)
        points.append(DiscriminationPoint(
            tau=float(tau), g=g, ev_cold=ev_c, ev_hot=ev_h,
            separation=abs(ev_h - ev_c)))
    return points


def optimal_time(probe: ProbeState, cold: BathSpec, hot: BathSpec):
    """Interaction time maximising the discrimination gap.

    A coarse scan (step 1e-3 up to tau = 2) brackets the global maximum;
    golden-section refinement narrows it to 1e-8.  Returns
    ``(tau_star, separation_max)``.
    """
    _check_baths(cold, hot)
    r0 = _probe_bloch(probe)

    def gap(tau: float) -> float:
        return float(np.linalg.norm(
            lindblad_closed_form(r0, cold, tau) - lindblad_closed_form(r0, hot, tau)))

    step = OPTIMAL_TIME_COARSE_STEP
    grid = np.arange(step, OPTIMAL_TIME_HORIZON + 0.5 * step, step)
    gaps = np.linalg.norm(
        bloch_trajectory(r0, cold, grid) - bloch_trajectory(r0, hot, grid), axis=1)
    k = int(np.argmax(gaps))
    lo = max(float(grid[k]) - step, 0.0)
    hi = float(grid[k]) + step

    # golden-section search for the maximum inside the bracketing interval
    inv_phi = 0.5 * (math.sqrt(5.0) - 1.0)
    x1 = hi - inv_phi * (hi - lo)
    x2 = lo + inv_phi * (hi - lo)
    f1, f2 = gap(x1), gap(x2)
    while hi - lo > OPTIMAL_TIME_REFINE_TOL:
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + inv_phi * (hi - lo)
            f2 = gap(x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - inv_phi * (hi - lo)
            f1 = gap(x1)
    tau_star = 0.5 * (lo + hi)
    return tau_star, gap(tau_star)


def free_energy_change(rho_in, rho_out, temperature: float, h: Hamiltonian):
    """Free-energy balance between a pure input and an evolved output.

    Returns ``(dU, dS, dF)`` with ``dU = Tr[H rho_out] - Tr[H rho_in]``
    (out minus in), ``dS = S(rho_out)`` (the input is required to be pure,
    so its entropy vanishes) and ``dF = dU - T dS``.
    """
    if not math.isfinite(temperature) or temperature < 0.0:
        raise InvalidStateError(
            "temperature must be non-negative, got %r" % (temperature,))
    rin = validate_density_matrix(rho_in)
    evals, _ = eig_hermitian2(rin)
    if evals[0] < 1.0 - 1e-10:
        raise InvalidStateError(
            "input state must be pure (largest eigenvalue %.12g)" % (evals[0],))
    rout = validate_density_matrix(rho_out)
    d_u = internal_energy(rout, h) - internal_energy(rin, h)
    d_s = von_neumann_entropy(rout)
    return d_u, d_s, d_u - temperature * d_s


def free_energy_trajectory(probe: ProbeState, bath: BathSpec, taus,
                           h: Hamiltonian | None = None) -> list[FreeEnergyRecord]:
    """Free-energy records along a tau grid, normalised by the large-time limit.

    The bath temperature is derived from its occupation.  The limit value
    ``dF_inf`` is evaluated at ``tau = THERMALIZATION_TAU``; each record's
    ``dF_normalized`` is ``dF / dF_inf`` (or zero if the limit vanishes).
    """
    t = np.asarray(taus, dtype=float)
    if t.ndim != 1 or t.size == 0:
        raise InvalidStateError("taus must be a non-empty 1-d sequence")
    if float(t[0]) < 0.0 or (t.size > 1 and not np.all(np.diff(t) > 0.0)):
        raise InvalidStateError("taus must be strictly increasing and >= 0")
    if h is None:
        h = Hamiltonian()
    temperature = temperature_from_occupation(bath)
    rho_in = density_from_ket(ket_from_probe(probe))
    r0 = _probe_bloch(probe)

    def balance(tau: float):
        rho_out = density_from_bloch(lindblad_closed_form(r0, bath, tau))
        return free_energy_change(rho_in, rho_out, temperature, h)

    _, _, df_inf = balance(THERMALIZATION_TAU)
    records = []
    for tau in t:
        d_u, d_s, d_f = balance(float(tau))
        normalized = d_f / df_inf if df_inf != 0.0 else 0.0
        records.append(FreeEnergyRecord(
            tau=float(tau), dU=d_u, dS=d_s, dF=d_f,
            dF_normalized=normalized, temperature=temperature))
    return records
