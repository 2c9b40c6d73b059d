"""Free evolution: the signed-frequency blip law, the positive-frequency
standard law, and the circular-shift cross-check."""

from __future__ import annotations

from enum import Enum

import numpy as np

from .core import CHANNELS, Channel, ConfigError, PhysicalConstants, RepresentationError
from .states import StateVector


class EvolutionLaw(str, Enum):
    BLIP = "blip"        # exp(-i c k t)
    STANDARD = "standard"  # exp(-i c |k| t)

    def phases(self, ks: np.ndarray, t: float, c: float) -> np.ndarray:
        omega = c * ks if self is EvolutionLaw.BLIP else c * np.abs(ks)
        return np.exp(-1j * omega * t)


def _law(law) -> EvolutionLaw:
    try:
        return EvolutionLaw(law)
    except ValueError:
        raise ConfigError(f"unknown evolution law {law!r}") from None


def evolve(st: StateVector, t: float, law: EvolutionLaw | str = EvolutionLaw.BLIP,
           consts: PhysicalConstants | None = None) -> StateVector:
    """Evolve every channel by ``t``; the result keeps the caller's representation."""
    law = _law(law)
    c = (consts or PhysicalConstants()).c
    if t == 0:
        return st
    mom = st.momentum()
    amps = mom.amplitudes * law.phases(st.lattice.ks, t, c)[None, :]
    return mom.with_amplitudes(amps).to(st.rep)


def shift_oracle(st: StateVector, sites: int) -> StateVector:
    """Circularly shift each channel by ``s * sites`` lattice sites."""
    if st.rep != "position":
        raise RepresentationError("shift_oracle needs a position-representation state")
    amps = np.stack([np.roll(st.amplitudes[i], ch.s * int(sites))
                     for i, ch in enumerate(CHANNELS)])
    return st.with_amplitudes(amps)


def circular_mean(weights: np.ndarray, xs: np.ndarray, length: float) -> float:
    """Centre of a periodic distribution via the mean resultant angle."""
    theta = 2.0 * np.pi * (xs + 0.5 * length) / length
    z = np.sum(weights * np.exp(1j * theta))
    if z == 0:
        raise ValueError("circular mean undefined for a balanced distribution")
    return float((np.angle(z) * length / (2.0 * np.pi)) % length - 0.5 * length)


def rms_width(st: StateVector, channel: Channel, center: float | None = None) -> float:
    """Standard deviation of ``|psi|^2`` in one channel.

    Positions are unwrapped to ``[-L/2, L/2)`` around ``center`` (default:
    the circular mean) before taking moments.
    """
    pos = st.position()
    lat = pos.lattice
    w = np.abs(pos[channel]) ** 2
    total = w.sum()
    if total == 0:
        raise ValueError(f"channel {channel.label()} is empty")
    w = w / total
    if center is None:
        center = circular_mean(w, lat.xs, lat.length)
    d = (lat.xs - center + 0.5 * lat.length) % lat.length - 0.5 * lat.length
    mean = np.sum(w * d)
    var = np.sum(w * d * d) - mean * mean
    return float(np.sqrt(max(var, 0.0)))


def times_on_grid(t0: float, t1: float, samples: int, dx: float, c: float) -> np.ndarray:
    """``samples`` times in ``[t0, t1]`` rounded to integer multiples of ``dx/c``."""
    if samples < 1:
        raise ConfigError("need at least one time sample")
    step = dx / c
    ts = np.linspace(t0, t1, samples) if samples > 1 else np.array([t0])
    return np.round(ts / step) * step
