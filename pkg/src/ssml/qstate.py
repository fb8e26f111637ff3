"""Dense complex linear algebra for the learning loop.

State vectors are plain complex ndarrays of shape (d,), control unitaries
complex ndarrays of shape (d, d). Everything here treats its inputs as
immutable; sampled objects are freshly allocated and safe to share.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import NumericIntegrityError

# Validation tolerances (absolute).
STATE_NORM_ATOL = 1e-12
UNITARY_ATOL = 1e-10

# Fidelity may land this far outside [0, 1] before we call it corruption.
_CLAMP_SLACK = 1e-12

StateVector = np.ndarray
UnitaryMatrix = np.ndarray


def basis_state(d: int, index: int = 0) -> StateVector:
    """Computational basis vector e_index in dimension d."""
    if d < 1:
        raise ValueError(f"invalid dimension d={d}")
    if not 0 <= index < d:
        raise IndexError(f"basis index {index} out of range for d={d}")
    v = np.zeros(d, dtype=np.complex128)
    v[index] = 1.0
    return v


def check_state(psi: np.ndarray) -> StateVector:
    """Validate the unit-norm invariant and return psi as complex128."""
    psi = np.asarray(psi, dtype=np.complex128)
    if psi.ndim != 1 or psi.size < 1:
        raise ValueError(f"state must be a nonempty vector, got shape {psi.shape}")
    norm_sq = float(np.real(np.vdot(psi, psi)))
    if abs(norm_sq - 1.0) > STATE_NORM_ATOL:
        raise ValueError(f"state norm**2 = {norm_sq!r} violates unit-norm tolerance")
    return psi


def check_unitary(u: np.ndarray) -> UnitaryMatrix:
    """Validate U'U = I entrywise within tolerance and return U as complex128."""
    u = np.asarray(u, dtype=np.complex128)
    if u.ndim != 2 or u.shape[0] != u.shape[1] or u.shape[0] < 1:
        raise ValueError(f"unitary must be square, got shape {u.shape}")
    d = u.shape[0]
    dev = np.max(np.abs(u.conj().T @ u - np.eye(d)))
    if dev > UNITARY_ATOL:
        raise ValueError(f"matrix deviates from unitarity by {dev!r}")
    return u


def haar_random_state(d: int, rng: np.random.Generator) -> StateVector:
    """Sample a Haar-distributed pure state on C^d.

    Uses the standard construction: a vector of independent standard complex
    Gaussians, normalized. Draw pattern: one (2, d) block of real normals.
    """
    if d < 1:
        raise ValueError(f"invalid dimension d={d}")
    while True:
        g = rng.standard_normal((2, d))
        z = g[0] + 1j * g[1]
        norm = np.linalg.norm(z)
        if norm > 0.0:
            return z / norm


def haar_random_unitary(d: int, rng: np.random.Generator) -> UnitaryMatrix:
    """Sample a Haar-distributed unitary on U(d).

    QR decomposition of a complex Gaussian matrix with the phase correction
    that normalizes the R diagonal to unit modulus; without the correction
    the QR convention biases the distribution.
    """
    if d < 1:
        raise ValueError(f"invalid dimension d={d}")
    g = rng.standard_normal((2, d, d))
    z = (g[0] + 1j * g[1]) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r)
    phases = diag / np.abs(diag)
    return q * phases


def fidelity(u: UnitaryMatrix, psi: StateVector, f: StateVector) -> float:
    """Success probability |<f|U|psi>|**2, clamped to [0, 1].

    Values beyond the bounds by more than the clamp slack indicate corrupted
    inputs and raise instead of being silently clamped.
    """
    u = np.asarray(u)
    psi = np.asarray(psi)
    f = np.asarray(f)
    d = psi.shape[0] if psi.ndim == 1 else -1
    if psi.ndim != 1 or f.shape != psi.shape or u.shape != (d, d):
        raise ValueError(
            f"shape mismatch: U {u.shape}, psi {psi.shape}, f {f.shape}")
    amp = np.vdot(f, u @ psi)
    value = float(amp.real * amp.real + amp.imag * amp.imag)
    if value < -_CLAMP_SLACK or value > 1.0 + _CLAMP_SLACK:
        raise NumericIntegrityError(
            f"fidelity {value!r} outside [0, 1] beyond clamp slack")
    return min(max(value, 0.0), 1.0)


def embed_su2_rotation(d: int, k: int, omega: float,
                       rng: np.random.Generator) -> UnitaryMatrix:
    """Random SU(2) rotation of angle omega on span{e_0, e_k}, identity elsewhere.

    The rotation axis is drawn uniformly on the sphere (normalized Gaussian
    triple); the rotation angle on the Bloch sphere of the two-dimensional
    subspace is exactly omega, i.e. the block is cos(omega/2) I - i
    sin(omega/2) (n . sigma).
    """
    if d < 2:
        raise ValueError(f"subspace rotation needs d >= 2, got d={d}")
    if not 1 <= k <= d - 1:
        raise IndexError(f"failure index k={k} out of range 1..{d - 1}")
    if omega < 0.0:
        raise ValueError(f"rotation angle must be nonnegative, got {omega!r}")
    while True:
        gx, gy, gz = rng.standard_normal(3)
        norm = math.sqrt(gx * gx + gy * gy + gz * gz)
        if norm > 0.0:
            break
    nx, ny, nz = gx / norm, gy / norm, gz / norm
    c = math.cos(0.5 * omega)
    s = math.sin(0.5 * omega)
    out = np.zeros((d, d), dtype=np.complex128)
    out.flat[:: d + 1] = 1.0
    out[0, 0] = complex(c, -s * nz)
    out[0, k] = complex(-s * ny, -s * nx)
    out[k, 0] = complex(s * ny, -s * nx)
    out[k, k] = complex(c, s * nz)
    return out


def unitary_with_fidelity(d: int, f: float) -> UnitaryMatrix:
    """Real rotation on span{e_0, e_1} with |<e_0|U|e_0>|**2 = f.

    Convenience for frozen-control experiments and oracle comparisons.
    """
    if d < 2:
        raise ValueError(f"needs d >= 2, got d={d}")
    if not 0.0 <= f <= 1.0:
        raise ValueError(f"target fidelity must lie in [0, 1], got {f!r}")
    c = np.sqrt(f)
    s = np.sqrt(1.0 - f)
    out = np.eye(d, dtype=np.complex128)
    out[0, 0] = c
    out[0, 1] = -s
    out[1, 0] = s
    out[1, 1] = c
    return out
