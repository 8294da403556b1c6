"""Gaussian-beam diffraction, aperture coupling and loss-only rate bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import atmosphere, geometry
from .atmosphere import DEFAULT_EXTINCTION, ExtinctionModel

LN2 = math.log(2.0)


@dataclass(frozen=True)
class BeamParams:
    """Transmitted Gaussian beam: wavelength, field spot size, curvature radius.

    curvature = inf means a collimated beam (the default operating mode).
    """

    wavelength: float = 800e-9
    waist: float = 0.2
    curvature: float = math.inf

    def __post_init__(self):
        if self.wavelength <= 0 or self.waist <= 0:
            raise ValueError("wavelength and waist must be positive")

    @property
    def wavenumber(self) -> float:
        return 2.0 * math.pi / self.wavelength

    @property
    def rayleigh_range(self) -> float:
        return math.pi * self.waist**2 / self.wavelength


@dataclass(frozen=True)
class ReceiverParams:
    """Receiving telescope and detector parameters (SI units)."""

    aperture: float = 0.4          # radius a_R, m
    fov_sr: float = 1e-10          # field of view, sr
    detection_time: float = 10e-9  # s
    filter_width: float = 1e-9     # spectral filter, m
    efficiency: float = 0.4        # end-to-end setup efficiency
    excess_photons: float = 0.0    # trusted excess thermal photons

    def __post_init__(self):
        if not 0.0 < self.efficiency <= 1.0:
            raise ValueError("efficiency must lie in (0, 1]")
        if min(self.aperture, self.fov_sr, self.detection_time, self.filter_width) <= 0:
            raise ValueError("receiver dimensions must be positive")
        if self.excess_photons < 0:
            raise ValueError("excess photons must be non-negative")

    @property
    def gamma_r(self) -> float:
        """Background-collection parameter: filter(nm) * time * fov * aperture^2."""
        return (self.filter_width / 1e-9) * self.detection_time * self.fov_sr * self.aperture**2


def diffraction_waist(z: float, beam: BeamParams) -> float:
    """Field spot size after free propagation over distance z."""
    if z < 0:
        raise ValueError("propagation distance must be non-negative")
    ratio = z / beam.rayleigh_range
    return beam.waist * math.hypot(1.0 - z / beam.curvature, ratio)


def eta_diffraction(z: float, beam: BeamParams, aperture: float) -> float:
    """Fraction of the beam collected by a circular aperture of radius `aperture`."""
    w = diffraction_waist(z, beam)
    return -math.expm1(-2.0 * aperture**2 / w**2)


def eta_diffraction_far(z: float, beam: BeamParams, aperture: float) -> float:
    """Far-field approximation 2 a_R^2 / w_d^2 (valid when << 1)."""
    w = diffraction_waist(z, beam)
    return 2.0 * aperture**2 / w**2


def plob(eta: float) -> float:
    """Repeaterless secret-key capacity -log2(1 - eta) of a pure-loss channel."""
    if not 0.0 <= eta <= 1.0:
        raise ValueError("transmissivity must lie in [0, 1]")
    if eta == 1.0:
        return math.inf
    return -math.log1p(-eta) / LN2


def diffraction_bound(z: float, beam: BeamParams, aperture: float) -> float:
    """Far-field upper bound (2/ln2) a_R^2 / w_d^2, bits per channel use."""
    w = diffraction_waist(z, beam)
    return (2.0 / LN2) * aperture**2 / w**2


def eta_total(
    h: float,
    theta: float,
    beam: BeamParams,
    receiver: ReceiverParams,
    extinction: ExtinctionModel = DEFAULT_EXTINCTION,
) -> float:
    """Fixed point-to-point loss: setup efficiency x extinction x diffraction."""
    z = geometry.slant_range(h, theta)
    return (
        receiver.efficiency
        * atmosphere.eta_atm(h, theta, extinction)
        * eta_diffraction(z, beam, receiver.aperture)
    )


def bound_v(
    h: float,
    theta: float,
    beam: BeamParams,
    receiver: ReceiverParams,
    extinction: ExtinctionModel = DEFAULT_EXTINCTION,
) -> float:
    """Key-rate upper bound -log2(1 - eta_total), bits per use."""
    return plob(eta_total(h, theta, beam, receiver, extinction))
