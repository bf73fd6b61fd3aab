import math

import numpy as np
import numpy.testing as npt
import pytest

from qubitherm.channel import ChannelParams, apply_channel, gamma_from_phase
from qubitherm.errors import InvalidStateError
from qubitherm.optics import (
    HADAMARD_ANGLE,
    PairSelector,
    PhaseMask,
    analyzer_intensity,
    apply_slm,
    equivalent_channel_params,
    jones_hwp,
    jones_qwp,
    loop_plate_sandwich,
    pbs_split,
    port_intensity,
    sagnac_transform,
    simulate_kraus_pair,
)
from qubitherm.qubit import density_from_bloch, density_from_ket


def _random_states(rng, n):
    out = []
    for _ in range(n):
        v = rng.normal(size=3)
        v *= rng.uniform(0, 1) ** (1 / 3) / np.linalg.norm(v)
        out.append(density_from_bloch(v))
    return out


def test_wave_plates_are_unitary():
    rng = np.random.default_rng(4)
    for _ in range(20):
        angle = rng.uniform(0, math.pi)
        for plate in (jones_hwp(angle), jones_qwp(angle)):
            npt.assert_allclose(plate @ plate.conj().T, np.eye(2), atol=1e-14)


def test_hadamard_plate_setting():
    h = jones_hwp(HADAMARD_ANGLE)
    npt.assert_allclose(h, np.array([[1, 1], [1, -1]]) / math.sqrt(2),
                        atol=1e-15)


def test_sandwich_closed_form_matches_element_product():
    # the closed form must agree with literally multiplying the three
    # Jones matrices; it exists only to avoid their rounding residue
    for phi in np.linspace(0.0, math.pi, 17):
        h = jones_hwp(HADAMARD_ANGLE)
        phase = np.diag([np.exp(0.5j * phi), np.exp(-0.5j * phi)])
        product = h @ phase @ h
        npt.assert_allclose(loop_plate_sandwich(float(phi)), product,
                            atol=1e-14)
    npt.assert_allclose(loop_plate_sandwich(0.0), np.eye(2), atol=0)


def test_pbs_split_routes_polarisations():
    k = np.array([0.6, 0.8j])
    st = pbs_split(k)
    assert st.domain == "loop"
    npt.assert_allclose(st.port_ket("cw"), [0.6, 0.0])
    npt.assert_allclose(st.port_ket("ccw"), [0.0, 0.8j])
    assert st.total_intensity() == pytest.approx(1.0)


def test_slm_acts_on_target_loop_only():
    st = pbs_split(np.array([1.0, 1.0]) / math.sqrt(2))
    out = apply_slm(st, PhaseMask(phi=1.0, target_loop="ccw"))
    npt.assert_allclose(out.port_ket("cw"), st.port_ket("cw"))
    expected = st.amps[1, 1] * complex(math.cos(0.5), -math.sin(0.5))
    assert out.amps[1, 1] == pytest.approx(expected)
    assert out.total_intensity() == pytest.approx(1.0)


def test_phase_mask_validation():
    with pytest.raises(InvalidStateError):
        PhaseMask(phi=-0.1, target_loop="cw")
    with pytest.raises(InvalidStateError):
        PhaseMask(phi=4.0, target_loop="cw")
    with pytest.raises(InvalidStateError):
        PhaseMask(phi=0.5, target_loop="north")


def test_interferometer_is_lossless():
    rng = np.random.default_rng(9)
    for _ in range(25):
        k = rng.normal(size=2) + 1j * rng.normal(size=2)
        k /= np.linalg.norm(k)
        phi = rng.uniform(0, math.pi)
        for pair in PairSelector:
            st = sagnac_transform(k, phi, pair)
            assert st.domain == "output"
            assert st.total_intensity() == pytest.approx(1.0, abs=1e-13)


def test_transfer_intensity_exactly_gamma():
    # pumping the polarisation a configuration damps, the jumped amplitude
    # leaves on out2 with intensity bitwise equal to gamma(phi)
    vertical = np.array([0.0, 1.0])
    horizontal = np.array([1.0, 0.0])
    for phi in np.linspace(0.0, math.pi, 101):
        phi = float(phi)
        g = gamma_from_phase(phi)
        st = sagnac_transform(vertical, phi, PairSelector.PAIR_B)
        assert port_intensity(st, "out2") == g
        st = sagnac_transform(horizontal, phi, PairSelector.PAIR_A)
        assert port_intensity(st, "out2") == g


def test_analyzer_intensities_sum_to_port_intensity():
    st = sagnac_transform(np.array([0.6, 0.8]), 1.1, PairSelector.PAIR_B)
    for port in ("out1", "out2"):
        total = port_intensity(st, port)
        for a, b in (("H", "V"), ("D", "A"), ("R", "L")):
            s = analyzer_intensity(st, port, a) + analyzer_intensity(st, port, b)
            assert s == pytest.approx(total, abs=1e-14)
    with pytest.raises(InvalidStateError):
        analyzer_intensity(st, "out1", "Q")
    loop_state = pbs_split(np.array([1.0, 0.0]))
    with pytest.raises(InvalidStateError):
        analyzer_intensity(loop_state, "out1", "H")


def test_pair_selector_roles():
    assert PairSelector.PAIR_B.damped_polarisation == "V"
    assert PairSelector.PAIR_A.damped_polarisation == "H"
    assert PairSelector.PAIR_B.mixture_weight(0.3) == pytest.approx(0.3)
    assert PairSelector.PAIR_A.mixture_weight(0.3) == pytest.approx(0.7)
    cp = equivalent_channel_params(1.3, PairSelector.PAIR_B)
    assert cp.p == 1.0 and cp.gamma == pytest.approx(math.sin(0.65) ** 2)
    cp = equivalent_channel_params(1.3, PairSelector.PAIR_A)
    assert cp.p == 0.0


def test_simulated_pair_equals_channel():
    rng = np.random.default_rng(12)
    states = _random_states(rng, 20)
    for phi in np.linspace(0.0, math.pi, 21):
        phi = float(phi)
        for pair in PairSelector:
            cp = equivalent_channel_params(phi, pair)
            for rho in states[:5]:
                npt.assert_allclose(simulate_kraus_pair(rho, phi, pair),
                                    apply_channel(rho, cp), atol=1e-13)


def test_pair_mixture_rebuilds_full_channel():
    rng = np.random.default_rng(13)
    for _ in range(20):
        v = rng.normal(size=3)
        v *= rng.uniform(0, 1) / np.linalg.norm(v)
        rho = density_from_bloch(v)
        phi = rng.uniform(0, math.pi)
        p = rng.uniform(0, 1)
        gamma = gamma_from_phase(phi)
        mixed = (p * simulate_kraus_pair(rho, phi, PairSelector.PAIR_B)
                 + (1 - p) * simulate_kraus_pair(rho, phi, PairSelector.PAIR_A))
        direct = apply_channel(rho, ChannelParams(p=p, gamma=gamma))
        npt.assert_allclose(mixed, direct, atol=1e-13)


def test_full_damping_limit():
    # phi = pi reduces PAIR_B to a complete jump onto the excited state
    rho = density_from_ket([0.0, 1.0])
    out = simulate_kraus_pair(rho, math.pi, PairSelector.PAIR_B)
    npt.assert_allclose(out, density_from_ket([1.0, 0.0]), atol=1e-14)
    out = simulate_kraus_pair(density_from_ket([1.0, 0.0]), math.pi,
                              PairSelector.PAIR_A)
    npt.assert_allclose(out, density_from_ket([0.0, 1.0]), atol=1e-14)
