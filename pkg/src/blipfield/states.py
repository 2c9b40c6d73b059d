"""Single-excitation wavefunctions and coherent amplitude profiles.

A :class:`StateVector` carries one complex amplitude per channel
``(s, pol)`` on a shared lattice. Single-excitation states are normalised to
unit probability; coherent states are amplitude profiles ``alpha`` whose
squared norm is the mean photon number.

Continuum blips are delta-normalised; the discrete stand-in used here
(:func:`blip_basis_proxy`) is ``1/sqrt(dx)`` on one site, so distinct proxies
have Kronecker-delta overlaps.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field, replace
from typing import Literal, Mapping

import numpy as np

from . import transforms
from .core import (CHANNELS, Channel, ConfigError, EdgeLeakageError, Lattice,
                   RepresentationError)
from .transforms import ChannelAmplitude, Rep

Kind = Literal["single", "coherent"]

EDGE_TOLERANCE = 1e-12


@dataclass(frozen=True)
class PacketSpec:
    shape: str = "gaussian"
    center: float = 0.0
    width: float = 1.0
    carrier: float = 0.0
    phase: float = 0.0
    channel: Channel = Channel(1, "H")
    amplitude: float = 1.0
    samples: np.ndarray | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.shape not in ("gaussian", "rectangular", "custom"):
            raise ConfigError(f"unknown packet shape {self.shape!r}")
        if self.shape != "custom" and not self.width > 0:
            raise ConfigError(f"packet width must be positive, got {self.width!r}")
        if self.shape == "custom" and self.samples is None:
            raise ConfigError("custom packets need samples")
        if isinstance(self.channel, str):
            object.__setattr__(self, "channel", Channel.parse(self.channel))


@dataclass(frozen=True)
class StateVector:
    kind: Kind
    rep: Rep
    lattice: Lattice
    amplitudes: np.ndarray  # shape (4, n), rows ordered as CHANNELS

    def __post_init__(self):
        if self.kind not in ("single", "coherent"):
            raise RepresentationError(f"unknown state kind {self.kind!r}")
        if self.rep not in ("position", "momentum"):
            raise RepresentationError(f"unknown representation {self.rep!r}")
        amps = np.array(self.amplitudes, dtype=complex)
        if amps.shape != (len(CHANNELS), self.lattice.n):
            raise RepresentationError(
                f"amplitudes must have shape (4, {self.lattice.n}), got {amps.shape}")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_channels(cls, kind: Kind, rep: Rep, lattice: Lattice,
                      channels: Mapping[Channel, np.ndarray]) -> "StateVector":
        amps = np.zeros((len(CHANNELS), lattice.n), dtype=complex)
        for ch, values in channels.items():
            amps[CHANNELS.index(ch)] = values
        return cls(kind, rep, lattice, amps)

    @classmethod
    def vacuum(cls, lattice: Lattice, kind: Kind = "coherent",
               rep: Rep = "position") -> "StateVector":
        return cls(kind, rep, lattice, np.zeros((len(CHANNELS), lattice.n)))

    def __getitem__(self, ch: Channel) -> np.ndarray:
        return self.amplitudes[CHANNELS.index(ch)]

    def channel_amplitude(self, ch: Channel) -> ChannelAmplitude:
        return ChannelAmplitude(self.rep, self[ch])

    def occupied(self) -> list[Channel]:
        return [ch for ch in CHANNELS if np.any(self[ch] != 0)]

    def with_amplitudes(self, amplitudes: np.ndarray, rep: Rep | None = None) -> "StateVector":
        return replace(self, amplitudes=amplitudes, rep=rep or self.rep)

    def to(self, rep: Rep) -> "StateVector":
        if rep == self.rep:
            return self
        amps = np.empty_like(self.amplitudes)
        for i, ch in enumerate(CHANNELS):
            if rep == "momentum":
                amps[i] = transforms.forward(self.amplitudes[i], ch.s, self.lattice)
            else:
                amps[i] = transforms.inverse(self.amplitudes[i], ch.s, self.lattice)
        return replace(self, rep=rep, amplitudes=amps)

    def momentum(self) -> "StateVector":
        return self.to("momentum")

    def position(self) -> "StateVector":
        return self.to("position")

    def norm_sq(self) -> float:
        w = self.lattice.dx if self.rep == "position" else self.lattice.dk
        return float(w * np.sum(np.abs(self.amplitudes) ** 2))

    def __add__(self, other: "StateVector") -> "StateVector":
        _check_compatible(self, other)
        return replace(self, amplitudes=self.amplitudes + other.amplitudes)

    def scaled(self, factor: complex) -> "StateVector":
        return replace(self, amplitudes=self.amplitudes * factor)


def _check_compatible(a: StateVector, b: StateVector) -> None:
    if a.kind != b.kind:
        raise RepresentationError(f"state kinds differ: {a.kind} vs {b.kind}")
    if a.rep != b.rep:
        raise RepresentationError(f"representations differ: {a.rep} vs {b.rep}")
    if a.lattice != b.lattice:
        raise RepresentationError("states live on different lattices")


def _envelope(spec: PacketSpec, lattice: Lattice) -> np.ndarray:
    x = lattice.xs
    if spec.shape == "gaussian":
        return np.exp(-((x - spec.center) ** 2) / (4.0 * spec.width ** 2))
    if spec.shape == "rectangular":
        return (np.abs(x - spec.center) <= spec.width).astype(float)
    samples = np.asarray(spec.samples, dtype=complex)
    if samples.shape != (lattice.n,):
        raise ConfigError(f"custom packet needs {lattice.n} samples, got {samples.shape}")
    return samples


def check_edge(values: np.ndarray, tolerance: float = EDGE_TOLERANCE) -> None:
    """Raise EdgeLeakageError unless both end samples are below ``tolerance`` x peak."""
    mag = np.abs(values)
    peak = mag.max()
    if peak == 0:
        raise ConfigError("packet is identically zero")
    edge = max(mag[0], mag[-1]) / peak
    if edge >= tolerance:
        raise EdgeLeakageError(
            f"packet amplitude at the domain edge is {edge:.3g} of its peak "
            f"(limit {tolerance:g})")


def build_packet(spec: PacketSpec, lattice: Lattice, kind: Kind = "single") -> StateVector:
    """Position-representation packet in ``spec.channel``; other channels empty.

    The carrier enters as ``exp(i s k0 x)`` so the momentum amplitude peaks at
    ``+k0`` for either direction. The Nyquist mode is removed before
    normalisation.
    """
    s = spec.channel.s
    values = _envelope(spec, lattice).astype(complex)
    check_edge(values)
    values = values * np.exp(1j * s * spec.carrier * lattice.xs) * np.exp(1j * spec.phase)
    spectrum = transforms.forward(values, s, lattice)
    spectrum[0] = 0.0
    values = transforms.inverse(spectrum, s, lattice)
    norm = np.sqrt(lattice.dx * np.sum(np.abs(values) ** 2))
    if norm == 0:
        raise ConfigError("packet vanishes after removing the Nyquist mode")
    target = 1.0 if kind == "single" else spec.amplitude
    values *= target / norm
    return StateVector.from_channels(kind, "position", lattice, {spec.channel: values})


def gaussian_packet(spec: PacketSpec, lattice: Lattice, kind: Kind = "single") -> StateVector:
    if spec.shape != "gaussian":
        spec = replace(spec, shape="gaussian")
    return build_packet(spec, lattice, kind)


def blip_basis_proxy(site: int, channel: Channel, lattice: Lattice) -> StateVector:
    if not 0 <= site < lattice.n:
        raise IndexError(f"site {site} outside 0..{lattice.n - 1}")
    values = np.zeros(lattice.n, dtype=complex)
    values[site] = 1.0 / np.sqrt(lattice.dx)
    return StateVector.from_channels("single", "position", lattice, {channel: values})


def inner_product(a: StateVector, b: StateVector) -> complex:
    """``sum_channels w * sum conj(a) b`` with ``w = dx`` or ``dk`` by representation.

    Channels never mix, which is the discrete form of the
    ``delta_{ss'} delta_{pol pol'}`` factor.
    """
    if a.kind != "single" or b.kind != "single":
        raise RepresentationError("inner_product is defined for single-excitation states")
    _check_compatible(a, b)
    w = a.lattice.dx if a.rep == "position" else a.lattice.dk
    return complex(w * np.sum(np.conj(a.amplitudes) * b.amplitudes))


def project_positive_wavenumbers(st: StateVector) -> tuple[StateVector, float]:
    """Zero every amplitude with ``k <= 0``; return the state (momentum rep,
    not renormalised) and the discarded fraction of the squared norm."""
    mom = st.momentum()
    keep = mom.lattice.ks > 0
    amps = np.where(keep[None, :], mom.amplitudes, 0.0)
    total = np.sum(np.abs(mom.amplitudes) ** 2)
    kept = np.sum(np.abs(amps) ** 2)
    fraction = 0.0 if total == 0 else float((total - kept) / total)
    return mom.with_amplitudes(amps), fraction


def read_samples_csv(path, n: int | None = None) -> np.ndarray:
    """Read a two-column ``re, im`` CSV (optional header) into a complex array."""
    rows = []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or not "".join(row).strip():
                continue
            try:
                re_, im_ = float(row[0]), float(row[1])
            except (ValueError, IndexError):
                if rows:
                    raise ConfigError(f"bad sample row {row!r} in {path}")
                continue  # header
            rows.append(complex(re_, im_))
    samples = np.asarray(rows, dtype=complex)
    if n is not None and samples.size != n:
        raise ConfigError(f"{path}: expected {n} samples, found {samples.size}")
    return samples


def write_samples_csv(path, values: np.ndarray) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["re", "im"])
        for z in np.asarray(values, dtype=complex):
            w.writerow([f"{z.real:.16e}", f"{z.imag:.16e}"])
