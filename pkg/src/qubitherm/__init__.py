"""Qubit thermometry by bath discrimination, simulated optically.

A single qubit relaxing toward a bosonic bath carries information about
the bath's mean occupation.  This package evolves probe states under the
corresponding mixing channel, builds the optimal two-outcome observable
separating a cold from a hot hypothesis, tracks the free-energy balance
along the trajectory, and reproduces the whole protocol on a simulated
polarisation interferometer with noisy tomography and Monte Carlo error
bars.

Numerically heavy reconstruction loops run through ``qubitherm._kernels``
which transparently picks a compiled backend when available; set
``QUBITHERM_KERNELS`` to ``python`` or ``cython`` to force one.
"""

__version__ = "0.1.0"

from ._kernels import backend_name as kernel_backend
from .channel import (
    BathSpec,
    ChannelParams,
    GADKraus,
    apply_channel,
    bloch_map,
    bloch_trajectory,
    gamma_from_phase,
    kraus_ops,
    lindblad_closed_form,
    occupation_from_temperature,
    params_from_bath,
    phi_from_tau,
    tau_from_phase,
    temperature_from_occupation,
    temperature_from_p,
    thermal_state,
)
from .errors import (
    ConfigError,
    DegeneratePairError,
    InfiniteTimeError,
    InvalidStateError,
    NonHermitianError,
    QubithermError,
)
from .optics import (
    PairSelector,
    PhaseMask,
    PolPathState,
    analyzer_intensity,
    equivalent_channel_params,
    pbs_split,
    port_intensity,
    sagnac_transform,
    simulate_kraus_pair,
)
from .qubit import (
    Hamiltonian,
    ProbeState,
    bloch_from_density,
    density_from_bloch,
    density_from_ket,
    expectation,
    fidelity,
    internal_energy,
    ket_from_probe,
    von_neumann_entropy,
)
from .thermometry import (
    DiscriminationPoint,
    FreeEnergyRecord,
    discrimination_curve,
    free_energy_change,
    free_energy_trajectory,
    optimal_observable,
    optimal_time,
    separation,
    success_probability,
)
from .tomography import (
    NoiseModel,
    TomographyDataset,
    combine_weighted,
    derive_seed,
    generate_dataset,
    ideal_intensities,
    linear_reconstruct,
    monte_carlo_errors,
    project_physical,
    reconstruct_state,
)

__all__ = [
    "__version__",
    "kernel_backend",
    # errors
    "QubithermError", "InvalidStateError", "NonHermitianError",
    "DegeneratePairError", "InfiniteTimeError", "ConfigError",
    # states and observables
    "ProbeState", "Hamiltonian", "ket_from_probe", "density_from_ket",
    "density_from_bloch", "bloch_from_density", "expectation",
    "von_neumann_entropy", "internal_energy", "fidelity",
    # channel
    "ChannelParams", "BathSpec", "GADKraus", "kraus_ops", "apply_channel",
    "bloch_map", "lindblad_closed_form", "bloch_trajectory",
    "params_from_bath", "gamma_from_phase", "tau_from_phase", "phi_from_tau",
    "temperature_from_p", "temperature_from_occupation",
    "occupation_from_temperature", "thermal_state",
    # discrimination and free energy
    "DiscriminationPoint", "FreeEnergyRecord", "optimal_observable",
    "separation", "success_probability", "discrimination_curve",
    "optimal_time", "free_energy_change", "free_energy_trajectory",
    # optics
    "PairSelector", "PhaseMask", "PolPathState", "pbs_split",
    "sagnac_transform", "port_intensity", "analyzer_intensity",
    "simulate_kraus_pair", "equivalent_channel_params",
    # tomography
    "NoiseModel", "TomographyDataset", "derive_seed", "ideal_intensities",
    "generate_dataset", "linear_reconstruct", "project_physical",
    "reconstruct_state", "combine_weighted", "monte_carlo_errors",
]
