"""Pure-numpy kernel backend; semantics documented in the package __init__."""

import numpy as np


def _as_batch(arr, width, name):
    a = np.ascontiguousarray(arr, dtype=np.float64)
    if a.ndim != 2 or a.shape[1] != width:
        raise ValueError("%s must have shape (n, %d), got %r" % (name, width, a.shape))
    return a


def stokes_bloch(intensities):
    arr = _as_batch(intensities, 6, "intensities")
    total = arr[:, 0] + arr[:, 1]
    if arr.shape[0] and float(total.min()) <= 0.0:
        raise ValueError("zero total flux in at least one row")
    bloch = np.empty((arr.shape[0], 3))
    bloch[:, 0] = (arr[:, 2] - arr[:, 3]) / total
    bloch[:, 1] = (arr[:, 4] - arr[:, 5]) / total
    bloch[:, 2] = (arr[:, 0] - arr[:, 1]) / total
    norm = np.sqrt(bloch[:, 0] ** 2 + bloch[:, 1] ** 2 + bloch[:, 2] ** 2)
    scale = np.where(norm > 1.0, 1.0 / np.maximum(norm, 1.0), 1.0)
    bloch *= scale[:, None]
    return bloch


def _entropy(bloch):
    r = np.sqrt(bloch[:, 0] ** 2 + bloch[:, 1] ** 2 + bloch[:, 2] ** 2)
    r = np.minimum(r, 1.0)
    lam_hi = 0.5 * (1.0 + r)
    lam_lo = 0.5 * (1.0 - r)
    out = np.zeros(bloch.shape[0])
    mask = lam_hi > 0.0
    out[mask] -= lam_hi[mask] * np.log(lam_hi[mask])
    mask = lam_lo > 0.0
    out[mask] -= lam_lo[mask] * np.log(lam_lo[mask])
    return np.maximum(out, 0.0)


def functional_values(bloch, kind, params):
    b = _as_batch(bloch, 3, "bloch")
    p = np.ascontiguousarray(params, dtype=np.float64)
    if kind == 0:  # expectation: g0 + r . g
        if p.shape != (4,):
            raise ValueError("expectation needs params [g0, gx, gy, gz]")
        return p[0] + b[:, 0] * p[1] + b[:, 1] * p[2] + b[:, 2] * p[3]
    if kind == 1:  # entropy
        return _entropy(b)
    if kind == 2:  # free energy: dU - T * S
        if p.shape != (3,):
            raise ValueError("free_energy needs params [omega, rz_in, temperature]")
        omega, rz_in, temperature = p
        d_u = 0.5 * omega * (b[:, 2] - rz_in)
        return d_u - temperature * _entropy(b)
    if kind == 3:  # fidelity against a fixed target state
        if p.shape != (3,):
            raise ValueError("fidelity needs the target Bloch vector")
        dot = b[:, 0] * p[0] + b[:, 1] * p[1] + b[:, 2] * p[2]
        r2 = b[:, 0] ** 2 + b[:, 1] ** 2 + b[:, 2] ** 2
        s2 = float(p[0] ** 2 + p[1] ** 2 + p[2] ** 2)
        rad = np.maximum((1.0 - r2) * (1.0 - s2), 0.0)
        val = 0.5 * (1.0 + dot + np.sqrt(rad))
        return np.minimum(np.maximum(val, 0.0), 1.0)
    raise ValueError("unknown functional kind %r" % (kind,))
