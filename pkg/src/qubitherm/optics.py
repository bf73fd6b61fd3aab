"""Jones-calculus model of the damping interferometer.

A polarising beamsplitter (PBS) couples polarisation to the propagation
direction of a common-path loop: the horizontal component circulates
clockwise, the vertical one counter-clockwise.  Both directions traverse
the same pair of half-wave plates set to act as Hadamard transforms, with
a programmable birefringent phase ``phi`` applied between them on one
loop only.  Recombination at the PBS sends the undamped components to
output 1 and the damped amplitude to output 2, realising single-pair
amplitude damping with ``gamma = sin^2(phi/2)``.

Two mask configurations exist:

- ``PairSelector.PAIR_B``: phase on the counter-clockwise loop, so the
  vertical component is attenuated (transfer ``|V> -> |H>``); this is the
  weight-``p`` member of the thermal mixture.
- ``PairSelector.PAIR_A``: phase on the clockwise loop, attenuating the
  horizontal component (``|H> -> |V>``); mixture weight ``1 - p``.

States over (polarisation x path) are carried as unnormalised amplitude
arrays so that port intensities double as port probabilities.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .channel import ChannelParams, apply_channel, gamma_from_phase
from .errors import InvalidStateError
from .qubit import CONSTRUCTION_TOL, eig_hermitian2, validate_density_matrix

LOOP_PATHS = ("cw", "ccw")
OUTPUT_PORTS = ("out1", "out2")

# Analyzer settings and their projection kets.  The circular pair is chosen
# so that (I_R - I_L) / (I_H + I_V) equals the y Bloch component in this
# basis convention.
SETTINGS = ("H", "V", "D", "A", "R", "L")
_SQ2 = 1.0 / math.sqrt(2.0)
SETTING_KETS = {
    "H": np.array([1.0, 0.0], dtype=complex),
    "V": np.array([0.0, 1.0], dtype=complex),
    "D": np.array([_SQ2, _SQ2], dtype=complex),
    "A": np.array([_SQ2, -_SQ2], dtype=complex),
    "R": np.array([_SQ2, 1.0j * _SQ2], dtype=complex),
    "L": np.array([_SQ2, -1.0j * _SQ2], dtype=complex),
}

# Half-wave plate angle realising the Hadamard-like transform.
HADAMARD_ANGLE = math.pi / 8.0


class PairSelector(enum.Enum):
    """Which amplitude-damping orientation the mask implements."""

    PAIR_A = "damp_horizontal"
    PAIR_B = "damp_vertical"

    @property
    def mask_loop(self) -> str:
        """Loop that carries the variable phase for this configuration."""
        return "cw" if self is PairSelector.PAIR_A else "ccw"

    @property
    def damped_polarisation(self) -> str:
        return "H" if self is PairSelector.PAIR_A else "V"

    def mixture_weight(self, p: float) -> float:
        """Weight of this configuration in the thermal mixture."""
        return 1.0 - p if self is PairSelector.PAIR_A else p


@dataclass(frozen=True)
class PhaseMask:
    """Birefringent phase ``phi`` in [0, pi] applied on one loop."""

    phi: float
    target_loop: str

    def __post_init__(self):
        if not math.isfinite(self.phi) or self.phi < 0.0 or self.phi > math.pi:
            raise InvalidStateError("phi must lie in [0, pi], got %r" % (self.phi,))
        if self.target_loop not in LOOP_PATHS:
            raise InvalidStateError(
                "target_loop must be one of %r, got %r"
                % (LOOP_PATHS, self.target_loop))


@dataclass(frozen=True)
class PolPathState:
    """Complex amplitudes over (polarisation, path).

    ``amps[i, j]`` is the amplitude with polarisation index ``i`` (0 = H,
    1 = V) on path ``j``.  ``domain`` is ``"loop"`` (paths cw, ccw) or
    ``"output"`` (ports out1, out2).  Amplitudes are unnormalised; the
    squared norm of a path column is the probability of that path.
    """

    amps: np.ndarray
    domain: str

    def __post_init__(self):
        a = np.asarray(self.amps, dtype=complex)
        if a.shape != (2, 2):
            raise InvalidStateError("amps must have shape (2, 2)")
        if self.domain not in ("loop", "output"):
            raise InvalidStateError("domain must be 'loop' or 'output'")
        object.__setattr__(self, "amps", a)

    def path_names(self):
        return LOOP_PATHS if self.domain == "loop" else OUTPUT_PORTS

    def path_index(self, name: str) -> int:
        names = self.path_names()
        if name not in names:
            raise InvalidStateError(
                "unknown path %r for domain %r (expected one of %r)"
                % (name, self.domain, names))
        return names.index(name)

    def port_ket(self, name: str) -> np.ndarray:
        """Unnormalised polarisation 2-vector on one path/port."""
        return np.array(self.amps[:, self.path_index(name)])

    def total_intensity(self) -> float:
        return float(np.sum(np.abs(self.amps) ** 2))


def jones_hwp(angle: float) -> np.ndarray:
    """Half-wave plate with fast axis at ``angle`` (global phase dropped)."""
    c = math.cos(2.0 * angle)
    s = math.sin(2.0 * angle)
    return np.array([[c, s], [s, -c]], dtype=complex)


def jones_qwp(angle: float) -> np.ndarray:
    """Quarter-wave plate with fast axis at ``angle`` (global phase dropped)."""
    c = math.cos(angle)
    s = math.sin(angle)
    return np.array(
        [[c * c + 1.0j * s * s, (1.0 - 1.0j) * s * c],
         [(1.0 - 1.0j) * s * c, s * s + 1.0j * c * c]], dtype=complex)


def _check_ket(ket) -> np.ndarray:
    k = np.asarray(ket, dtype=complex)
    if k.shape != (2,):
        raise InvalidStateError("expected a 2-vector, got shape %r" % (k.shape,))
    if abs(float(np.vdot(k, k).real) - 1.0) > CONSTRUCTION_TOL:
        raise InvalidStateError("input ket must be normalised")
    return k


def pbs_split(input_ket) -> PolPathState:
    """Split on the PBS: H amplitude to the cw loop, V amplitude to ccw."""
    k = _check_ket(input_ket)
    amps = np.zeros((2, 2), dtype=complex)
    amps[0, 0] = k[0]
    amps[1, 1] = k[1]
    return PolPathState(amps=amps, domain="loop")


def apply_slm(state: PolPathState, mask: PhaseMask) -> PolPathState:
    """Apply the birefringent phase on the mask's loop; identity elsewhere.

    On the target loop the H amplitude gains ``exp(+i phi/2)`` and the V
    amplitude ``exp(-i phi/2)``; the element is unitary.
    """
    if state.domain != "loop":
        raise InvalidStateError("the phase element acts on loop modes")
    amps = np.array(state.amps)
    j = state.path_index(mask.target_loop)
    amps[0, j] *= complex(math.cos(0.5 * mask.phi), math.sin(0.5 * mask.phi))
    amps[1, j] *= complex(math.cos(0.5 * mask.phi), -math.sin(0.5 * mask.phi))
    return PolPathState(amps=amps, domain="loop")


def loop_plate_sandwich(phi: float) -> np.ndarray:
    """Net Jones matrix of Hadamard plate, phase ``phi``, Hadamard plate.

    Written in closed form,
    ``[[cos(phi/2), i sin(phi/2)], [i sin(phi/2), cos(phi/2)]]``,
    which is the exact algebraic product of the three elements; building
    it directly keeps the phi = 0 case the exact identity and the
    transfer intensity exactly ``sin^2(phi/2)``, free of the rounding a
    generic matrix product of 1/sqrt(2) factors would introduce.
    """
    c = math.cos(0.5 * phi)
    s = math.sin(0.5 * phi)
    return np.array([[c, 1.0j * s], [1.0j * s, c]], dtype=complex)


def sagnac_transform(input_ket, phi: float, pair: PairSelector) -> PolPathState:
    """Full pass through the interferometer onto the two output ports.

    The loop carrying the mask sees the plate-phase-plate sandwich; the
    other loop sees the exact identity.  Recombination at the PBS routes
    (cw: H, ccw: V) to out1 and (cw: V, ccw: H) to out2, so the damped
    amplitude leaves on out2 in the polarisation it is pumped into.
    """
    gamma_from_phase(phi)  # domain check: phi in [0, pi]
    k = _check_ket(input_ket)
    split = pbs_split(k)
    out = np.zeros((2, 2), dtype=complex)
    loop_vectors = []
    for j, name in enumerate(LOOP_PATHS):
        transform = loop_plate_sandwich(phi if name == pair.mask_loop else 0.0)
        loop_vectors.append(transform @ split.amps[:, j])
    cw_vec, ccw_vec = loop_vectors
    out[0, 0] = cw_vec[0]   # H from cw  -> out1
    out[1, 0] = ccw_vec[1]  # V from ccw -> out1
    out[1, 1] = cw_vec[1]   # V from cw  -> out2
    out[0, 1] = ccw_vec[0]  # H from ccw -> out2
    return PolPathState(amps=out, domain="output")


def port_intensity(state: PolPathState, port: str) -> float:
    """Total intensity (probability) arriving at one path or port."""
    ket = state.port_ket(port)
    return float(np.abs(ket[0]) ** 2 + np.abs(ket[1]) ** 2)


def analyzer_intensity(state: PolPathState, port: str, setting: str) -> float:
    """Intensity behind the polarisation analyser on one output port.

    The port amplitudes are unnormalised, so the value already carries
    the port probability: ``|<setting|psi_port>|^2`` with the raw port
    vector.
    """
    if state.domain != "output":
        raise InvalidStateError("analysers sit on the output ports")
    if setting not in SETTING_KETS:
        raise InvalidStateError(
            "unknown analyser setting %r (expected one of %r)"
            % (setting, SETTINGS))
    amp = np.vdot(SETTING_KETS[setting], state.port_ket(port))
    return float(abs(amp) ** 2)


def simulate_kraus_pair(rho_in, phi: float, pair: PairSelector) -> np.ndarray:
    """Channel action of one mask configuration, ports summed incoherently.

    Mixed inputs are handled by eigendecomposition and linearity.  The
    result equals single-pair amplitude damping of matching orientation
    with ``gamma = sin^2(phi/2)``; see :func:`equivalent_channel_params`.
    """
    rho = validate_density_matrix(rho_in)
    evals, evecs = eig_hermitian2(rho)
    out = np.zeros((2, 2), dtype=complex)
    for lam, idx in zip(evals, range(2)):
        lam = float(lam)
        if lam <= 0.0:
            continue
        state = sagnac_transform(evecs[:, idx], phi, pair)
        for port in OUTPUT_PORTS:
            ket = state.port_ket(port)
            out = out + lam * np.outer(ket, ket.conj())
    return 0.5 * (out + out.conj().T)


def equivalent_channel_params(phi: float, pair: PairSelector) -> ChannelParams:
    """Channel parameters reproducing one mask configuration exactly.

    ``p = 1`` selects the pair damping the vertical component, ``p = 0``
    the one damping the horizontal component.
    """
    p = 1.0 if pair is PairSelector.PAIR_B else 0.0
    return ChannelParams(p=p, gamma=gamma_from_phase(phi))


def reference_channel_output(rho_in, phi: float, pair: PairSelector) -> np.ndarray:
    """Kraus-route twin of :func:`simulate_kraus_pair` for cross-checks."""
    return apply_channel(rho_in, equivalent_channel_params(phi, pair))
