"""Physical constants, channel labels and the periodic lattice."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class BlipError(Exception):
    """Base class for errors raised by this package."""


class ConfigError(BlipError, ValueError):
    """Invalid parameters or configuration."""


class RepresentationError(BlipError, ValueError):
    """An amplitude or state is in the wrong representation or kind."""


class PreconditionError(BlipError, ValueError):
    """A numerical precondition does not hold."""


class EdgeLeakageError(PreconditionError):
    """A packet is not negligible at the edge of the periodic domain."""


class AliasingError(PreconditionError):
    """A rescaled amplitude would leave the resolvable band or domain."""


@dataclass(frozen=True)
class PhysicalConstants:
    """Speed of light, reduced Planck constant, vacuum permittivity and
    transverse quantisation area. Defaults are natural units."""

    c: float = 1.0
    hbar: float = 1.0
    eps0: float = 1.0
    area: float = 1.0

    def __post_init__(self):
        for name in ("c", "hbar", "eps0", "area"):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0:
                raise ConfigError(f"{name} must be positive, got {value!r}")

    @classmethod
    def natural(cls) -> "PhysicalConstants":
        return cls()

    @classmethod
    def si(cls, area: float = 1.0) -> "PhysicalConstants":
        return cls(c=299792458.0, hbar=1.054571817e-34,
                   eps0=8.8541878128e-12, area=area)

    @property
    def omega0_sq(self) -> float:
        """Squared field normalisation 2*hbar/(eps0*c*A)."""
        return 2.0 * self.hbar / (self.eps0 * self.c * self.area)

    def as_dict(self) -> dict:
        return {"c": self.c, "hbar": self.hbar, "eps0": self.eps0, "area": self.area}


@dataclass(frozen=True, order=True)
class Channel:
    """Direction of propagation ``s`` (+1 right, -1 left) and polarisation ``pol``."""

    s: int
    pol: str

    def __post_init__(self):
        if self.s not in (-1, 1):
            raise ConfigError(f"direction s must be +1 or -1, got {self.s!r}")
        if self.pol not in ("H", "V"):
            raise ConfigError(f"polarisation must be 'H' or 'V', got {self.pol!r}")

    @classmethod
    def parse(cls, text: str) -> "Channel":
        """Parse labels such as ``"+1H"``, ``"-V"`` or ``"-1,H"``."""
        t = text.replace(",", "").replace(" ", "").upper()
        if len(t) < 2 or t[-1] not in "HV":
            raise ConfigError(f"cannot parse channel {text!r}")
        sign = t[:-1]
        if sign in ("+", "+1", "1"):
            s = 1
        elif sign in ("-", "-1"):
            s = -1
        else:
            raise ConfigError(f"cannot parse channel {text!r}")
        return cls(s, t[-1])

    def label(self) -> str:
        return f"{self.s:+d}{self.pol}"


CHANNELS: tuple[Channel, ...] = tuple(sorted(Channel(s, p) for s in (-1, 1) for p in "HV"))


@dataclass(frozen=True)
class Lattice:
    """Periodic grid of ``n`` sites on a domain of length ``length``.

    Sites are ``x_j = -L/2 + j*dx``; wavenumbers ``k_m = 2*pi*m/L`` for
    ``m = -n/2 .. n/2-1``, both stored ascending. Index 0 of ``ks`` is the
    unpaired Nyquist mode.
    """

    n: int
    length: float
    dx: float = field(init=False)
    dk: float = field(init=False)
    xs: np.ndarray = field(init=False, repr=False, compare=False)
    ks: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if int(self.n) != self.n or self.n % 2 or self.n < 8:
            raise ConfigError(f"site count must be an even integer >= 8, got {self.n!r}")
        if not np.isfinite(self.length) or self.length <= 0:
            raise ConfigError(f"domain length must be positive, got {self.length!r}")
        n = int(self.n)
        dx = self.length / n
        m = np.arange(-n // 2, n // 2)
        xs = -0.5 * self.length + np.arange(n) * dx
        ks = 2.0 * np.pi * m / self.length
        xs.flags.writeable = False
        ks.flags.writeable = False
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "dx", dx)
        object.__setattr__(self, "dk", 2.0 * np.pi / self.length)
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ks", ks)

    @property
    def modes(self) -> np.ndarray:
        """Integer mode numbers aligned with ``ks``."""
        return np.arange(-self.n // 2, self.n // 2)

    @property
    def k_max(self) -> float:
        return np.pi / self.dx

    def zero_index(self) -> int:
        return self.n // 2


def build_lattice(n: int, length: float) -> Lattice:
    return Lattice(n, float(length))
