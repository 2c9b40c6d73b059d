"""Boosts along x for photon amplitudes and classical fields.

Convention: an observer moving with velocity ``beta*c`` along +x sees a
wavenumber ``k`` of direction ``s`` as ``p = k * D**s`` with
``D = sqrt((1 - beta)/(1 + beta))``, so the phase ``s k (x - s c t)`` is frame
invariant. Amplitudes transform with the Jacobian of ``dk``:
``psi'(p) = D_s**-0.5 * psi(p / D_s)``, which preserves the norm.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import transforms
from .core import CHANNELS, AliasingError, ConfigError, PhysicalConstants
from .observables import FieldSnapshot, field_expectation, regularised_amplitudes
from .states import StateVector

# amplitude (relative to peak) above which resampling is considered lossy
ALIAS_TOLERANCE = 1e-10


@dataclass(frozen=True)
class BoostParams:
    beta: float

    def __post_init__(self):
        if not abs(self.beta) < 1:
            raise ConfigError(f"|beta| must be < 1, got {self.beta!r}")

    @property
    def doppler(self) -> float:
        return float(np.sqrt((1.0 - self.beta) / (1.0 + self.beta)))

    @property
    def gamma(self) -> float:
        return float(1.0 / np.sqrt(1.0 - self.beta ** 2))


def doppler_factor(beta: float, s: int) -> float:
    """``D(beta)**s``; e.g. 0.5 for ``beta=0.6, s=+1`` and 2.0 for ``s=-1``."""
    if s not in (-1, 1):
        raise ValueError(f"direction s must be +1 or -1, got {s!r}")
    return BoostParams(beta).doppler ** s


def compose_velocities(beta1: float, beta2: float) -> float:
    return (beta1 + beta2) / (1.0 + beta1 * beta2)


def _check_resampling(psi_x: np.ndarray, psi_k: np.ndarray, lattice, D: float) -> None:
    peak_x = np.abs(psi_x).max()
    peak_k = np.abs(psi_k).max()
    if peak_x == 0:
        return
    if D > 1:
        # spectrum is stretched: |k| >= k_max / D falls off the grid
        lost = np.abs(psi_k[np.abs(lattice.ks) >= lattice.k_max / D])
        if lost.size and lost.max() > ALIAS_TOLERANCE * peak_k:
            raise AliasingError(
                f"boost pushes spectral weight past the band edge "
                f"({lost.max() / peak_k:.3g} of peak)")
    elif D < 1:
        # packet is stretched in x: |x| >= D L/2 leaves the domain
        lost = np.abs(psi_x[np.abs(lattice.xs) >= 0.5 * D * lattice.length])
        if lost.size and lost.max() > ALIAS_TOLERANCE * peak_x:
            raise AliasingError(
                f"boost stretches the packet past the domain edge "
                f"({lost.max() / peak_x:.3g} of peak)")


def boost_state(st: StateVector, beta: float) -> StateVector:
    """Boost every channel; ``s`` and polarisation are unchanged.

    The new amplitude at each lattice wavenumber ``p`` is obtained by
    evaluating the band-limited spectrum of the position samples at
    ``p / D_s``. Works for both state kinds (the rule is linear).
    Returns a momentum-representation state with the Nyquist mode zeroed.
    """
    params = BoostParams(beta)
    if beta == 0:
        return st.momentum()
    pos = st.position()
    mom = st.momentum()
    lat = st.lattice
    out = np.zeros_like(mom.amplitudes)
    for i, ch in enumerate(CHANNELS):
        psi = pos.amplitudes[i]
        if not np.any(psi):
            continue
        D = params.doppler ** ch.s
        _check_resampling(psi, mom.amplitudes[i], lat, D)
        out[i] = transforms.evaluate_spectrum(psi, ch.s, lat, lat.ks[0] / D, lat.dk / D) / np.sqrt(D)
        # the sampled spectrum is periodic in q; sources beyond the band are empty
        out[i, np.abs(lat.ks / D) >= lat.k_max] = 0.0
        out[i, 0] = 0.0
    return mom.with_amplitudes(out)


def _translate(st: StateVector, shift: float) -> StateVector:
    """Spatial translation by ``shift``: a pure phase ``exp(-i s k shift)`` per channel."""
    mom = st.momentum()
    amps = np.stack([mom.amplitudes[i] * np.exp(-1j * ch.s * mom.lattice.ks * shift)
                     for i, ch in enumerate(CHANNELS)])
    return mom.with_amplitudes(amps).to(st.rep)


def boost_classical_fields(channel_fields: dict, beta: float, lattice,
                           consts: PhysicalConstants, t: float = 0.0) -> FieldSnapshot:
    """Transform per-channel classical fields to the boosted frame.

    ``channel_fields`` maps each :class:`~blipfield.core.Channel` to its
    complex E-field contribution ``E_{s pol}(x)`` at time ``t``. A field of
    direction ``s`` depends on ``x - s c t`` only, and in the boosted frame
    ``E'(x', t') = D_s * E(D_s (x' - s c t') + s c t, t)``; the result is
    reported at ``t' = t``. Off-grid values come from band-limited
    interpolation; points mapped outside the domain are set to zero.
    """
    params = BoostParams(beta)
    c = consts.c
    n = lattice.n
    Ey = np.zeros(n, dtype=complex)
    Ez = np.zeros(n, dtype=complex)
    By = np.zeros(n, dtype=complex)
    Bz = np.zeros(n, dtype=complex)
    for ch, values in channel_fields.items():
        values = np.asarray(values, dtype=complex)
        if not np.any(values):
            continue
        D = params.doppler ** ch.s
        y0 = D * (lattice.xs[0] - ch.s * c * t) + ch.s * c * t
        spec = transforms.forward(values, ch.s, lattice)
        ys = y0 + D * lattice.dx * np.arange(n)
        moved = D * transforms.evaluate_position(spec, ch.s, lattice, y0, D * lattice.dx)
        moved[(ys < lattice.xs[0]) | (ys >= lattice.xs[0] + lattice.length)] = 0.0
        if ch.pol == "H":
            Ey += moved
            Bz += ch.s * moved / c
        else:
            Ez += moved
            By -= ch.s * moved / c
    return FieldSnapshot(float(t), lattice.xs.copy(), Ey, Ez, By, Bz)


def covariance_two_path(coh: StateVector, beta: float, consts: PhysicalConstants,
                        exponent: float = 0.5, relative: bool = True) -> float:
    """Compare "boost amplitudes, then compute fields" with "compute fields,
    then boost them classically" at t = 0.

    Returns the max-abs difference of the real fields, divided by the peak
    field of the boosted frame when ``relative`` is set. Agreement requires
    the field normalisation to scale as ``|k|**0.5``; any other ``exponent``
    breaks it.
    """
    if coh.kind != "coherent":
        raise ConfigError("covariance check needs a coherent amplitude profile")
    boosted = boost_state(coh, beta)
    path_a = field_expectation(boosted, 0.0, consts, exponent=exponent)

    ra = regularised_amplitudes(coh, 0.0, consts, exponent=exponent)
    fields = {ch: consts.c * ra[ch] for ch in coh.occupied()}
    path_b = boost_classical_fields(fields, beta, coh.lattice, consts)

    worst = 0.0
    for fa, fb in zip(path_a.components(), path_b.components()):
        worst = max(worst, float(np.abs(fa.real - fb.real).max()))
    if relative:
        peak = max(np.abs(f.real).max() for f in path_b.components())
        return worst / peak if peak > 0 else worst
    return worst
