"""Direction-signed unitary Fourier pair on the periodic lattice.

Forward::

    psi_k(k_m) = dx/sqrt(2 pi) * sum_j exp(-i s k_m x_j) psi(x_j)

Inverse::

    psi(x_j) = dk/sqrt(2 pi) * sum_m exp(+i s k_m x_j) psi_k(k_m)

With ``dx*dk*n = 2 pi`` the pair is an exact inverse and
``dx*sum|psi|^2 == dk*sum|psi_k|^2``. Because ``k_m x_j = -pi m + 2 pi m j/n``
both directions reduce to a single FFT; the ``s = -1`` transform is the
``s = +1`` transform read at ``-k``, done by index reversal.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy.signal import czt

from .core import Lattice, RepresentationError

Rep = Literal["position", "momentum"]


@dataclass(frozen=True)
class ChannelAmplitude:
    rep: Rep
    values: np.ndarray

    def __post_init__(self):
        if self.rep not in ("position", "momentum"):
            raise RepresentationError(f"unknown representation {self.rep!r}")
        values = np.asarray(self.values, dtype=complex)
        if values.ndim != 1:
            raise RepresentationError("channel amplitude must be one-dimensional")
        object.__setattr__(self, "values", values)


def _check_s(s: int) -> None:
    if s not in (-1, 1):
        raise ValueError(f"direction s must be +1 or -1, got {s!r}")


def reverse_k(values: np.ndarray) -> np.ndarray:
    """Map ``f(k_m) -> f(-k_m)`` on the ascending grid (Nyquist maps to itself)."""
    values = np.asarray(values)
    n = values.shape[-1]
    idx = (n - np.arange(n)) % n
    return values[..., idx]


def _alternating(n: int) -> np.ndarray:
    # (-1)^m for m = -n/2 .. n/2-1
    return np.where(np.arange(-n // 2, n // 2) % 2 == 0, 1.0, -1.0)


def forward(psi: np.ndarray, s: int, lattice: Lattice) -> np.ndarray:
    """Position samples -> momentum amplitudes on ``lattice.ks`` (array level)."""
    _check_s(s)
    psi = np.asarray(psi, dtype=complex)
    n = lattice.n
    if psi.shape[-1] != n:
        raise RepresentationError(f"expected {n} samples, got {psi.shape[-1]}")
    spec = np.fft.fftshift(np.fft.fft(psi, axis=-1), axes=-1)
    out = spec * _alternating(n) * (lattice.dx / np.sqrt(2.0 * np.pi))
    return out if s == 1 else reverse_k(out)


def inverse(psi_k: np.ndarray, s: int, lattice: Lattice) -> np.ndarray:
    """Momentum amplitudes on ``lattice.ks`` -> position samples (array level)."""
    _check_s(s)
    psi_k = np.asarray(psi_k, dtype=complex)
    n = lattice.n
    if psi_k.shape[-1] != n:
        raise RepresentationError(f"expected {n} samples, got {psi_k.shape[-1]}")
    if s == -1:
        psi_k = reverse_k(psi_k)
    spec = np.fft.ifftshift(psi_k * _alternating(n), axes=-1)
    return np.fft.ifft(spec, axis=-1) * (n * lattice.dk / np.sqrt(2.0 * np.pi))


def to_momentum(psi: ChannelAmplitude, s: int, lattice: Lattice) -> ChannelAmplitude:
    if psi.rep != "position":
        raise RepresentationError("to_momentum expects a position-representation amplitude")
    return ChannelAmplitude("momentum", forward(psi.values, s, lattice))


def to_position(psi_k: ChannelAmplitude, s: int, lattice: Lattice) -> ChannelAmplitude:
    if psi_k.rep != "momentum":
        raise RepresentationError("to_position expects a momentum-representation amplitude")
    return ChannelAmplitude("position", inverse(psi_k.values, s, lattice))


def brute_force_forward(psi: np.ndarray, s: int, lattice: Lattice) -> np.ndarray:
    """O(n^2) evaluation of the defining sum. Reference only."""
    _check_s(s)
    psi = np.asarray(psi, dtype=complex)
    out = np.empty(lattice.n, dtype=complex)
    step = max(1, 2 ** 22 // lattice.n)
    for a in range(0, lattice.n, step):
        kk = lattice.ks[a:a + step, None]
        out[a:a + step] = np.exp(-1j * s * kk * lattice.xs[None, :]) @ psi
    return out * (lattice.dx / np.sqrt(2.0 * np.pi))


def uniform_exponential_sum(coeffs: np.ndarray, node0: float, dnode: float,
                            point0: float, dpoint: float, count: int,
                            sign: float) -> np.ndarray:
    """``out[m] = sum_j coeffs[j] * exp(i*sign*(node0 + j*dnode)*(point0 + m*dpoint))``.

    Evaluated as a chirp-z transform, so the target points may sit on any
    uniform grid (used for band-limited resampling at non-lattice points).
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    j = np.arange(coeffs.shape[-1])
    m = np.arange(count)
    points = point0 + m * dpoint
    pre = coeffs * np.exp(1j * sign * dnode * point0 * j)
    w = np.exp(1j * sign * dnode * dpoint)
    core = czt(pre, m=count, w=w, a=1.0)
    return core * np.exp(1j * sign * node0 * points)


def evaluate_spectrum(psi: np.ndarray, s: int, lattice: Lattice,
                      q0: float, dq: float) -> np.ndarray:
    """Forward transform of position samples evaluated at ``q0 + m*dq``, m < n."""
    _check_s(s)
    raw = uniform_exponential_sum(psi, lattice.xs[0], lattice.dx, q0, dq, lattice.n, -s)
    return raw * (lattice.dx / np.sqrt(2.0 * np.pi))


def evaluate_position(psi_k: np.ndarray, s: int, lattice: Lattice,
                      y0: float, dy: float) -> np.ndarray:
    """Inverse transform of momentum amplitudes evaluated at ``y0 + j*dy``, j < n.

    This is the trigonometric (band-limited) interpolant of the position
    samples; it is periodic with period ``lattice.length``.
    """
    _check_s(s)
    raw = uniform_exponential_sum(psi_k, lattice.ks[0], lattice.dk, y0, dy, lattice.n, s)
    return raw * (lattice.dk / np.sqrt(2.0 * np.pi))
