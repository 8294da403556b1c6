"""Atmospheric extinction along vertical, slant and refracted paths.

Beer-Lambert absorption/scattering with an exponentially decaying extinction
coefficient alpha(h) = alpha0 * exp(-h / h_scale).  The shipped default
alpha0 = 5e-6 1/m is the sea-level value at 800 nm; other wavelengths need a
caller-supplied alpha0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from . import geometry
from ._integrate import quad_checked
from .geometry import true_zenith, unit_elongation

# the extinction tail above this altitude shifts the loss exponent by < 1e-13
PATH_TOP_M = 200e3


@dataclass(frozen=True)
class ExtinctionModel:
    alpha0: float = 5e-6        # sea-level extinction, 1/m (800 nm)
    h_scale: float = 6600.0     # decay scale height, m

    def alpha(self, h: float) -> float:
        return self.alpha0 * math.exp(-h / self.h_scale)


DEFAULT_EXTINCTION = ExtinctionModel()


def eta_atm_zenith(h: float, model: ExtinctionModel = DEFAULT_EXTINCTION) -> float:
    """Vertical-path transmissivity up to altitude h (closed form)."""
    if h < 0:
        raise ValueError("altitude must be non-negative")
    return math.exp(model.alpha0 * model.h_scale * (math.exp(-h / model.h_scale) - 1.0))


def eta_atm_zenith_inf(model: ExtinctionModel = DEFAULT_EXTINCTION) -> float:
    """Vertical transmissivity through the whole atmosphere, exp(-alpha0*h_scale)."""
    return math.exp(-model.alpha0 * model.h_scale)


def _path_integral(
    path_length: float,
    altitude_at: Callable[[float], float],
    model: ExtinctionModel,
) -> float:
    """Integral of exp(-h(y)/h_scale) along the line of sight."""
    return quad_checked(
        lambda y: math.exp(-altitude_at(y) / model.h_scale),
        0.0,
        path_length,
        rel_tol=1e-10,
        abs_tol=1e-14,
    )


def eta_atm(
    h: float, theta: float, model: ExtinctionModel = DEFAULT_EXTINCTION
) -> float:
    """Slant-path transmissivity to altitude h at zenith angle theta.

    The path integral is truncated where the line of sight clears the
    atmosphere; the neglected tail is far below the quadrature tolerance.
    """
    if h < 0:
        raise ValueError("altitude must be non-negative")
    if h == 0:
        return 1.0
    path = geometry.slant_range(min(h, PATH_TOP_M), theta)
    g = _path_integral(path, lambda y: geometry.altitude_from_slant(y, theta), model)
    return math.exp(-model.alpha0 * g)


def eta_atm_secant(
    h: float, theta: float, model: ExtinctionModel = DEFAULT_EXTINCTION
) -> float:
    """Secant-law approximation [eta_zenith(inf)]^(sec theta); good for h >= 30 km."""
    del h  # the saturated zenith value is used regardless of altitude
    return math.exp(-model.alpha0 * model.h_scale / math.cos(abs(theta)))


def eta_atm_refracted(
    h: float,
    theta_app: float,
    elongation: Callable[[float], float] = unit_elongation,
    model: ExtinctionModel = DEFAULT_EXTINCTION,
) -> float:
    """Slant transmissivity with Snell bending and optional path elongation.

    The apparent angle is converted to the true angle for the geometry while
    the path length is stretched by elongation(theta_app).
    """
    if h < 0:
        raise ValueError("altitude must be non-negative")
    if h == 0:
        return 1.0
    factor = elongation(theta_app)
    if factor < 1.0:
        raise ValueError("elongation factor must be >= 1")
    theta = true_zenith(theta_app)
    path = factor * geometry.slant_range(min(h, PATH_TOP_M), theta)
    g = _path_integral(
        path, lambda y: geometry.altitude_from_slant(y / factor, theta), model
    )
    return math.exp(-model.alpha0 * g)
