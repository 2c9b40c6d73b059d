"""Local blip quantisation of the one-dimensional electromagnetic field."""

__version__ = "0.1.0"

from .core import (CHANNELS, AliasingError, BlipError, Channel, ConfigError,
                   EdgeLeakageError, Lattice, PhysicalConstants, PreconditionError,
                   RepresentationError, build_lattice)
from .dynamics import EvolutionLaw, evolve, rms_width, shift_oracle
from .lorentz import boost_classical_fields, boost_state, covariance_two_path, doppler_factor
from .observables import (SpectralMultiplier, energy_expectation, field_expectation,
                          kernel_real_space, maxwell_residual, rr_composition_check,
                          single_excitation_spectra)
from .states import (PacketSpec, StateVector, blip_basis_proxy, build_packet,
                     inner_product, project_positive_wavenumbers)

__all__ = [
    "__version__", "CHANNELS", "AliasingError", "BlipError", "Channel", "ConfigError",
    "EdgeLeakageError", "Lattice", "PhysicalConstants", "PreconditionError",
    "RepresentationError", "build_lattice", "EvolutionLaw", "evolve", "rms_width",
    "shift_oracle", "boost_classical_fields", "boost_state", "covariance_two_path",
    "doppler_factor", "SpectralMultiplier", "energy_expectation", "field_expectation",
    "kernel_real_space", "maxwell_residual", "rr_composition_check",
    "single_excitation_spectra", "PacketSpec", "StateVector", "blip_basis_proxy",
    "build_packet", "inner_product", "project_positive_wavenumbers",
]
