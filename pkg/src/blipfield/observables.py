"""Regularisation operator, field and energy observables, and the two
Hamiltonians, all evaluated through their diagonal-in-k symbols.

The regularisation multiplier is ``r(k) = sqrt(2 hbar |k| / (eps0 c A)) e^{i phi(k)}``.
It maps blip amplitudes to field amplitudes; in position space it acts as a
convolution whose kernel falls off as ``-|u|^{-3/2}``.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np
from scipy.special import fresnel

from . import transforms
from .core import (CHANNELS, Channel, ConfigError, Lattice, PhysicalConstants,
                   RepresentationError)
from .dynamics import EvolutionLaw, evolve
from .states import StateVector
from .transforms import ChannelAmplitude

PhaseGauge = Union[None, np.ndarray, Callable[[np.ndarray], np.ndarray]]

SNAPSHOT_COLUMNS = ("x", "Re Ey", "Im Ey", "Re Ez", "Im Ez",
                    "Re By", "Im By", "Re Bz", "Im Bz")


def resolve_phase(phase_gauge: PhaseGauge, lattice: Lattice) -> np.ndarray:
    if phase_gauge is None:
        return np.zeros(lattice.n)
    if callable(phase_gauge):
        phase = np.asarray(phase_gauge(lattice.ks), dtype=float)
    else:
        phase = np.asarray(phase_gauge, dtype=float)
    if phase.shape != (lattice.n,):
        raise ConfigError(f"phase gauge must have {lattice.n} entries")
    return phase


def is_antisymmetric(phase: np.ndarray, atol: float = 1e-12) -> bool:
    """``phi(k) + phi(-k) == 0`` on the paired modes (Nyquist excluded)."""
    paired = phase + transforms.reverse_k(phase)
    return bool(np.all(np.abs(paired[1:]) <= atol))


def random_antisymmetric_phase(lattice: Lattice, rng: np.random.Generator) -> np.ndarray:
    raw = rng.uniform(-np.pi, np.pi, lattice.n)
    phase = 0.5 * (raw - transforms.reverse_k(raw))
    phase[0] = 0.0
    phase[lattice.zero_index()] = 0.0
    return phase


@dataclass(frozen=True)
class SpectralMultiplier:
    """A diagonal-in-k operator sampled on ``lattice.ks``."""

    lattice: Lattice
    symbol: np.ndarray

    @classmethod
    def regularisation(cls, lattice: Lattice, consts: PhysicalConstants,
                       phase_gauge: PhaseGauge = None, exponent: float = 0.5,
                       strict: bool = True) -> "SpectralMultiplier":
        phase = resolve_phase(phase_gauge, lattice)
        if strict and not is_antisymmetric(phase):
            raise ConfigError("phase gauge must satisfy phi(k) = -phi(-k)")
        ks = np.abs(lattice.ks)
        mag = np.sqrt(consts.omega0_sq) * ks ** exponent
        mag[lattice.zero_index()] = 0.0
        return cls(lattice, mag * np.exp(1j * phase))

    @classmethod
    def hdyn(cls, lattice: Lattice, consts: PhysicalConstants) -> "SpectralMultiplier":
        return cls(lattice, consts.hbar * consts.c * lattice.ks)

    @classmethod
    def henergy(cls, lattice: Lattice, consts: PhysicalConstants) -> "SpectralMultiplier":
        return cls(lattice, consts.hbar * consts.c * np.abs(lattice.ks))

    @classmethod
    def field_commutator(cls, lattice: Lattice, consts: PhysicalConstants) -> "SpectralMultiplier":
        """Symbol ``(2 hbar / eps0 c A) |k|`` of ``R R^dagger``."""
        return cls(lattice, consts.omega0_sq * np.abs(lattice.ks))

    def apply(self, amp: ChannelAmplitude, s: int) -> ChannelAmplitude:
        if amp.rep == "momentum":
            return ChannelAmplitude("momentum", amp.values * self.symbol)
        spec = transforms.forward(amp.values, s, self.lattice) * self.symbol
        return ChannelAmplitude("position", transforms.inverse(spec, s, self.lattice))

    def adjoint(self) -> "SpectralMultiplier":
        return SpectralMultiplier(self.lattice, np.conj(self.symbol))


def apply_regularisation(ch: ChannelAmplitude, s: int, lattice: Lattice,
                         consts: PhysicalConstants,
                         phase_gauge: PhaseGauge = None) -> ChannelAmplitude:
    return SpectralMultiplier.regularisation(lattice, consts, phase_gauge).apply(ch, s)


def _tail_integral(K: float, a: np.ndarray) -> np.ndarray:
    """Abel-summed ``int_K^inf sqrt(k) exp(i a k) dk`` for ``a > 0``."""
    z = np.sqrt(2.0 * K * a / np.pi)
    S, C = fresnel(z)
    inv_sqrt = np.sqrt(2.0 * np.pi / a) * ((0.5 - C) + 1j * (0.5 - S))
    return -np.sqrt(K) * np.exp(1j * K * a) / (1j * a) - inv_sqrt / (2j * a)


def kernel_real_space(lattice: Lattice, consts: PhysicalConstants, pad: int = 8,
                      tail: bool = True) -> tuple[np.ndarray, np.ndarray]:
    """Position-space kernel ``R(u) = int dk/2pi r(k) e^{iku}`` at ``u = x_j``.

    The band ``|k| <= pi/dx`` is integrated by the trapezoid rule on a k grid
    ``pad`` times finer than the lattice's (equivalently, on a domain ``pad``
    times longer, which pushes periodic images away). The part of the
    integral beyond the band is added in closed form via Fresnel integrals.
    ``R(0)`` is formally infinite; the returned value there is the band part.

    With ``tail=False`` and ``pad=1`` this is exactly the lattice inverse
    transform of the multiplier, which rings at the band edge.
    """
    if pad < 1 or int(pad) != pad:
        raise ConfigError("pad must be a positive integer")
    n, dx = lattice.n, lattice.dx
    fine = Lattice(n * pad, lattice.length * pad)
    K = lattice.k_max
    omega0 = np.sqrt(consts.omega0_sq)
    r = omega0 * np.sqrt(np.abs(fine.ks))
    r[0] = 0.0
    c = np.fft.ifftshift(r)
    band = np.fft.fftshift(np.fft.ifft(c)) * (fine.n * fine.dk / (2.0 * np.pi))
    mid = fine.n // 2
    R = band[mid - n // 2: mid + n // 2]
    u = lattice.xs.copy()
    if tail:
        # trapezoid end points at +-K (half weight each)
        R = R + fine.dk / (2.0 * np.pi) * omega0 * np.sqrt(K) * np.cos(K * u)
        nz = u != 0
        R[nz] = R[nz] + omega0 / np.pi * _tail_integral(K, np.abs(u[nz])).real
    return u, R


def kernel_asymptote(u: np.ndarray, consts: PhysicalConstants) -> np.ndarray:
    """Closed form ``-sqrt(hbar / (4 pi eps0 c A)) |u|^{-3/2}`` for ``u != 0``."""
    pref = np.sqrt(consts.hbar / (4.0 * np.pi * consts.eps0 * consts.c * consts.area))
    return -pref * np.abs(u) ** -1.5


def fit_kernel_slope(u: np.ndarray, R: np.ndarray, lo: float, hi: float) -> float:
    sel = (u >= lo) & (u <= hi)
    if sel.sum() < 3:
        raise ConfigError("fit window holds fewer than three samples")
    return float(np.polyfit(np.log(u[sel]), np.log(np.abs(np.real(R[sel]))), 1)[0])


@dataclass(frozen=True)
class FieldSnapshot:
    """Complex field expectation values on the lattice at time ``t``.

    Measurable fields are the real parts (see :meth:`real`).
    """

    t: float
    xs: np.ndarray
    Ey: np.ndarray
    Ez: np.ndarray
    By: np.ndarray
    Bz: np.ndarray

    def real(self) -> dict[str, np.ndarray]:
        return {"Ey": self.Ey.real, "Ez": self.Ez.real,
                "By": self.By.real, "Bz": self.Bz.real}

    def components(self) -> tuple[np.ndarray, ...]:
        return self.Ey, self.Ez, self.By, self.Bz

    def peak(self) -> float:
        return float(max(np.abs(f).max() for f in self.components()))

    def rows(self) -> np.ndarray:
        cols = [self.xs]
        for f in self.components():
            cols += [f.real, f.imag]
        return np.column_stack(cols)

    def to_csv(self, path) -> None:
        write_snapshot_csv(path, self)


def write_snapshot_csv(path, snapshot: FieldSnapshot) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SNAPSHOT_COLUMNS)
        for row in snapshot.rows():
            w.writerow([f"{v:.16e}" for v in row])


def read_snapshot_csv(path, t: float = 0.0) -> FieldSnapshot:
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if data.shape[1] != len(SNAPSHOT_COLUMNS):
        raise ConfigError(f"{path}: expected {len(SNAPSHOT_COLUMNS)} columns")
    z = data[:, 1::2] + 1j * data[:, 2::2]
    return FieldSnapshot(t, data[:, 0], z[:, 0], z[:, 1], z[:, 2], z[:, 3])


def regularised_amplitudes(coh: StateVector, t: float, consts: PhysicalConstants,
                           law: EvolutionLaw | str = EvolutionLaw.BLIP,
                           phase_gauge: PhaseGauge = None,
                           exponent: float = 0.5) -> StateVector:
    """``R[alpha_{s pol}](x, t)`` for every channel, position representation."""
    if coh.kind != "coherent":
        raise RepresentationError("field expectation values need a coherent amplitude profile")
    mom = evolve(coh.momentum(), t, law, consts)
    mult = SpectralMultiplier.regularisation(coh.lattice, consts, phase_gauge, exponent)
    return mom.with_amplitudes(mom.amplitudes * mult.symbol[None, :]).position()


def channel_field(coh: StateVector, channel: Channel, t: float,
                  consts: PhysicalConstants, **kw) -> np.ndarray:
    """Electric-field contribution ``E_{s pol}(x, t) = c R[alpha_{s pol}]`` of one channel."""
    return consts.c * regularised_amplitudes(coh, t, consts, **kw)[channel]


def field_expectation(coh: StateVector, t: float, consts: PhysicalConstants,
                      **kw) -> FieldSnapshot:
    """Complex E and B expectation values of a coherent profile at time ``t``.

    Keyword arguments (``law``, ``phase_gauge``, ``exponent``) are passed to
    :func:`regularised_amplitudes`.
    """
    ra = regularised_amplitudes(coh, t, consts, **kw)
    zero = np.zeros(coh.lattice.n, dtype=complex)
    Ey, Ez, By, Bz = zero.copy(), zero.copy(), zero.copy(), zero.copy()
    for ch in CHANNELS:
        a = ra[ch]
        if ch.pol == "H":
            Ey += consts.c * a
            Bz += ch.s * a
        else:
            Ez += consts.c * a
            By -= ch.s * a
    return FieldSnapshot(float(t), coh.lattice.xs.copy(), Ey, Ez, By, Bz)


def classical_field_energy(snapshot: FieldSnapshot, lattice: Lattice,
                           consts: PhysicalConstants) -> float:
    """Grid quadrature of ``eps0 A / 2 * int (E^2 + c^2 B^2) dx`` on the real fields."""
    f = snapshot.real()
    density = f["Ey"] ** 2 + f["Ez"] ** 2 + consts.c ** 2 * (f["By"] ** 2 + f["Bz"] ** 2)
    return float(0.5 * consts.eps0 * consts.area * lattice.dx * density.sum())


def maxwell_residual(prev: np.ndarray, now: np.ndarray, nxt: np.ndarray, dt: float,
                     s: int, lattice: Lattice, c: float = 1.0,
                     method: str = "fd") -> float:
    """RMS of ``(d/dx + (s/c) d/dt) E_{s pol}`` at the middle of three snapshots.

    ``d/dt`` is a centred difference. ``method="fd"`` uses a centred
    difference in x too (second order in dx and c*dt). ``method="spectral"``
    uses the x-operator ``i s sin(c k dt)/(c dt)``, which is the exact partner
    of the centred time difference, so exact solutions give zero residual.
    """
    prev, now, nxt = (np.asarray(a, dtype=complex) for a in (prev, now, nxt))
    if not (prev.shape == now.shape == nxt.shape == (lattice.n,)):
        raise ConfigError("snapshots must share the lattice")
    if dt <= 0:
        raise ConfigError("dt must be positive")
    dEdt = (nxt - prev) / (2.0 * dt)
    if method == "fd":
        dEdx = (np.roll(now, -1) - np.roll(now, 1)) / (2.0 * lattice.dx)
    elif method == "spectral":
        sym = 1j * s * np.sin(c * lattice.ks * dt) / (c * dt)
        dEdx = transforms.inverse(transforms.forward(now, s, lattice) * sym, s, lattice)
    else:
        raise ConfigError(f"unknown residual method {method!r}")
    res = dEdx + (s / c) * dEdt
    return float(np.sqrt(np.mean(np.abs(res) ** 2)))


def energy_expectation(st: StateVector, consts: PhysicalConstants,
                       phase_gauge: PhaseGauge = None) -> float:
    """Normal-ordered energy observable.

    Single excitation: ``sum_ch dk sum_k hbar c |k| |psi(k)|^2``.
    Coherent profile: the same plus the pair term
    ``Re(e^{i(phi(k)+phi(-k))} alpha(k) alpha(-k))``, which is what makes the
    result equal to the classical energy of the real expectation fields. The
    pair term is gauge independent only for antisymmetric ``phi``; no check
    is made here.
    """
    mom = st.momentum()
    lat = mom.lattice
    absk = np.abs(lat.ks)
    a = mom.amplitudes
    dens = np.abs(a) ** 2
    if st.kind == "coherent":
        phase = resolve_phase(phase_gauge, lat)
        pair_phase = np.exp(1j * (phase + transforms.reverse_k(phase)))
        dens = dens + np.real(pair_phase[None, :] * a * transforms.reverse_k(a))
    return float(consts.hbar * consts.c * lat.dk * np.sum(absk[None, :] * dens))


def hdyn_expectation(st: StateVector, consts: PhysicalConstants) -> float:
    """Normal-ordered dynamical Hamiltonian ``sum dk hbar c k |psi(k)|^2`` (signed)."""
    mom = st.momentum()
    lat = mom.lattice
    return float(consts.hbar * consts.c * lat.dk
                 * np.sum(lat.ks[None, :] * np.abs(mom.amplitudes) ** 2))


def eigenvalue_hdyn(n: int, k: float, consts: PhysicalConstants) -> float:
    """Eigenvalue ``n hbar c k`` of the n-photon state of mode ``k``."""
    if int(n) != n or n < 0:
        raise ValueError(f"excitation count must be a non-negative integer, got {n!r}")
    return int(n) * consts.hbar * consts.c * k


@dataclass(frozen=True)
class Spectra:
    ks: np.ndarray
    hdyn: dict
    henergy: dict
    commutator_norm: float
    position_commutator_norm: float | None = None


def position_space_matrix(lattice: Lattice, symbol: np.ndarray, s: int) -> np.ndarray:
    """Dense matrix of a k-diagonal operator acting on position samples of direction ``s``."""
    eye = np.eye(lattice.n, dtype=complex)
    cols = transforms.forward(eye, s, lattice) * symbol[None, :]
    return transforms.inverse(cols, s, lattice).T


def single_excitation_spectra(lattice: Lattice, consts: PhysicalConstants,
                              dense: bool = False) -> Spectra:
    """Spectra of H_dyn and H_energy on the one-photon subspace.

    Both are diagonal in k, so their commutator is computed on the
    diagonals and vanishes identically. With ``dense=True`` the commutator is
    also formed from the position-space (blip basis) matrices.
    """
    hd = SpectralMultiplier.hdyn(lattice, consts).symbol
    he = SpectralMultiplier.henergy(lattice, consts).symbol
    comm = 0.0
    for _ in CHANNELS:
        comm = max(comm, float(np.abs(hd * he - he * hd).max()))
    pos_comm = None
    if dense:
        pos_comm = 0.0
        for s in (-1, 1):
            A = position_space_matrix(lattice, hd, s)
            B = position_space_matrix(lattice, he, s)
            pos_comm = max(pos_comm, float(np.abs(A @ B - B @ A).max()))
    return Spectra(lattice.ks.copy(), {ch: hd.copy() for ch in CHANNELS},
                   {ch: he.copy() for ch in CHANNELS}, comm, pos_comm)


def rr_composition_check(lattice: Lattice, consts: PhysicalConstants,
                         rng: np.random.Generator | None = None, trials: int = 4) -> float:
    """Largest relative deviation between ``R`` applied twice and the single
    multiplier ``(2 hbar/eps0 c A)|k|``, on random position-space inputs."""
    rng = rng or np.random.default_rng(0)
    reg = SpectralMultiplier.regularisation(lattice, consts)
    direct = SpectralMultiplier.field_commutator(lattice, consts)
    worst = 0.0
    for _ in range(trials):
        for s in (-1, 1):
            spec = rng.normal(size=lattice.n) + 1j * rng.normal(size=lattice.n)
            spec[0] = 0.0
            amp = ChannelAmplitude("position", transforms.inverse(spec, s, lattice))
            twice = reg.apply(reg.apply(amp, s), s).values
            once = direct.apply(amp, s).values
            scale = np.abs(once).max()
            if scale > 0:
                worst = max(worst, float(np.abs(twice - once).max() / scale))
    return worst
