"""Batch kernels for the tomography pipeline, with two interchangeable backends.

The compiled backend (``_speedups``, Cython) is preferred when present;
the pure-numpy twin (``_pure``) is always available.  Selection happens
once at import time via the environment variable ``QUBITHERM_KERNELS``:

- ``auto`` (default, or unset): compiled if importable, else pure
- ``cython``: compiled, raising ImportError when the extension is missing
- ``python``: force the pure backend

Both backends implement the same two functions with identical semantics:

``stokes_bloch(intensities)``
    (n, 6) float64 intensities in setting order H, V, D, A, R, L ->
    (n, 3) Bloch vectors: Stokes inversion followed by radial clipping
    to the unit ball (the 2x2 physicality projection).

``functional_values(bloch, kind, params)``
    (n, 3) Bloch vectors -> (n,) functional values.  ``kind`` selects:
    KIND_EXPECTATION (params [g0, gx, gy, gz]), KIND_ENTROPY (params
    unused), KIND_FREE_ENERGY (params [omega, rz_in, temperature]),
    KIND_FIDELITY (params = target Bloch vector).
"""

import os

KIND_EXPECTATION = 0
KIND_ENTROPY = 1
KIND_FREE_ENERGY = 2
KIND_FIDELITY = 3

_requested = os.environ.get("QUBITHERM_KERNELS", "auto").strip().lower() or "auto"

if _requested == "python":
    from . import _pure as _impl
    BACKEND = "python"
elif _requested == "cython":
    from . import _speedups as _impl  # noqa: F401  (raises if not built)
    BACKEND = "cython"
elif _requested == "auto":
    try:
        from . import _speedups as _impl
        BACKEND = "cython"
    except ImportError:
        from . import _pure as _impl
        BACKEND = "python"
else:
    raise ImportError(
        "QUBITHERM_KERNELS must be 'auto', 'python' or 'cython', got %r"
        % (_requested,))

stokes_bloch = _impl.stokes_bloch
functional_values = _impl.functional_values


def backend_name() -> str:
    """Name of the kernel backend selected at import time."""
    return BACKEND
