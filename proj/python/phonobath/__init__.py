"""Phonon DOS models, coupling functions and memory kernels.

Frequencies are in THz (nu = omega / 2 pi), times in ps, sound speeds in km/s.
"""

from ._core import (
    Coupling,
    Debye,
    DomainError,
    InputError,
    LorentzianSum,
    Tabulated,
    UnsupportedError,
    calibrate,
    classify,
    coupling,
    coupling_tensor,
    debye_cutoff_from_temperature,
    dos,
    dos_from_coupling,
    dumps,
    fit,
    ingest,
    kernel,
    load,
    loads,
    memory_times,
    spectral_density,
    total_weight,
    validate_positivity,
)

__all__ = [
    "Coupling",
    "Debye",
    "DomainError",
    "InputError",
    "LorentzianSum",
    "Tabulated",
    "UnsupportedError",
    "calibrate",
    "classify",
    "coupling",
    "coupling_tensor",
    "debye_cutoff_from_temperature",
    "dos",
    "dos_from_coupling",
    "dumps",
    "fit",
    "ingest",
    "kernel",
    "load",
    "loads",
    "memory_times",
    "spectral_density",
    "total_weight",
    "validate_positivity",
]
