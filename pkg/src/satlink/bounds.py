"""Capacity-type bounds for the satellite fading channel.

The loss-limited bound averages the pure-loss key capacity over the
transmissivity distribution; with background thermal photons it splits into
an upper bound (loss-limited minus a thermal correction) and a reverse
coherent information lower bound.  Maximum secure ranges follow either from
a Fresnel-number argument or from the root of upper-bound = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

from ._integrate import quad_checked
from .beam import LN2, ReceiverParams, plob
from .fading import FadingModel, eta_slow

_H_TINY = -1e-12


def entropy_h(x: float) -> float:
    """Thermal-state entropy (x+1)log2(x+1) - x log2(x), with h(0) = 0."""
    if x < 0:
        if x > _H_TINY:  # numerical dust from symplectic eigenvalues
            return 0.0
        raise ValueError("mean photon number must be non-negative")
    if x == 0.0:
        return 0.0
    return (x + 1.0) * math.log2(x + 1.0) - x * math.log2(x)


def phi_thermal(tau: float, nbar: float) -> float:
    """Key-rate upper bound of a thermal-loss channel, 0 when nbar > tau."""
    if not 0.0 < tau < 1.0:
        raise ValueError("transmissivity must lie in (0, 1)")
    if nbar < 0:
        raise ValueError("thermal photons must be non-negative")
    if nbar > tau:
        return 0.0
    n_e = nbar / (1.0 - tau)
    return -math.log2(1.0 - tau) - n_e * math.log2(tau) - entropy_h(n_e)


def wander_delta(eta: float, sigma2: float, gamma: float, r0: float) -> float:
    """Beam-wandering correction factor Delta(eta, sigma) in (0, 1].

    Delta = 1 + (eta / ln(1-eta)) * I with
    I = integral_0^inf exp(-(r0^2/2 sigma^2) x^(2/gamma)) / (e^x - eta) dx.
    The integral is split at x = 1 with the substitution u = x^(2/gamma) on
    the lower piece, which removes the infinite-derivative endpoint when
    gamma > 2.
    """
    if sigma2 == 0.0:
        return 1.0
    s = r0 * r0 / (2.0 * sigma2)

    def low(u: float) -> float:
        x = u ** (gamma / 2.0)
        return math.exp(-s * u) * (gamma / 2.0) * u ** (gamma / 2.0 - 1.0) / (math.exp(x) - eta)

    def high(x: float) -> float:
        # written as exp(-s x^(2/g) - x) / (1 - eta e^-x) to avoid overflow
        exponent = -s * x ** (2.0 / gamma) - x
        if exponent < -745.0:
            return 0.0
        return math.exp(exponent) / (1.0 - eta * math.exp(-x))

    integral = quad_checked(low, 0.0, 1.0, rel_tol=1e-10, abs_tol=1e-12, limit=300)
    integral += quad_checked(high, 1.0, math.inf, rel_tol=1e-10, abs_tol=1e-12, limit=300)
    return 1.0 + eta / math.log1p(-eta) * integral


def bound_b(eta: float, sigma2: float, gamma: float, r0: float) -> float:
    """Loss-limited bound -Delta(eta, sigma) * log2(1 - eta), bits per use."""
    if not 0.0 < eta < 1.0:
        raise ValueError("eta must lie in (0, 1)")
    return -wander_delta(eta, sigma2, gamma, r0) * math.log1p(-eta) / LN2


def bound_b_model(model: FadingModel) -> float:
    return bound_b(model.eta, model.sigma2, model.gamma, model.r0)


def thermal_correction(nbar: float, model: FadingModel) -> float:
    """Thermal correction subtracted from the loss-limited bound (nbar <= eta)."""
    if nbar < 0:
        raise ValueError("thermal photons must be non-negative")
    if nbar == 0.0:
        return 0.0
    if nbar > model.eta:
        raise ValueError("thermal correction defined for nbar <= eta")
    u = math.log(model.eta / nbar) ** (2.0 / model.gamma)
    weight = 1.0 - math.exp(-model.spread * u)
    bracket = nbar * math.log2(nbar) / (1.0 - nbar) + entropy_h(nbar)
    return weight * bracket + bound_b(nbar, model.sigma2, model.gamma, model.r0)


def thermal_upper(nbar: float, model: FadingModel) -> float:
    """Thermal-loss upper bound max(0, B - T); zero beyond entanglement breaking."""
    if nbar == 0.0:
        return bound_b_model(model)
    if nbar >= model.eta:
        return 0.0
    return max(0.0, bound_b_model(model) - thermal_correction(nbar, model))


class ThermalLower(NamedTuple):
    middle: float  # B - <h(nbar / (1 - tau))> averaged over fading
    simple: float  # B - h(nbar / (1 - eta))


def thermal_lower(nbar: float, model: FadingModel) -> ThermalLower:
    """Reverse-coherent-information lower bounds, clamped at zero.

    The middle form averages the entropy penalty over the fading law; the
    simple form replaces tau by its maximum eta and is never larger.
    """
    if nbar < 0:
        raise ValueError("thermal photons must be non-negative")
    b = bound_b_model(model)
    if nbar == 0.0:
        return ThermalLower(b, b)
    s = model.spread
    gamma = model.gamma
    eta = model.eta

    def integrand(u: float) -> float:
        tau = eta * math.exp(-(u ** (gamma / 2.0)))
        return s * math.exp(-s * u) * entropy_h(nbar / (1.0 - tau))

    penalty = quad_checked(integrand, 0.0, math.inf, rel_tol=1e-9, abs_tol=1e-12, limit=300)
    middle = max(0.0, b - penalty)
    simple = max(0.0, b - entropy_h(nbar / (1.0 - eta)))
    return ThermalLower(middle, simple)


def average_plob(model: FadingModel) -> float:
    """Direct fading average of -log2(1 - tau); oracle for bound_b."""
    s = model.spread
    gamma = model.gamma
    eta = model.eta

    def integrand(u: float) -> float:
        tau = eta * math.exp(-(u ** (gamma / 2.0)))
        return s * math.exp(-s * u) * plob(tau)

    return quad_checked(integrand, 0.0, math.inf, rel_tol=1e-9, abs_tol=1e-13, limit=300)


def average_phi_thermal(nbar: float, model: FadingModel) -> float:
    """Fading average of the thermal-loss upper bound; <= thermal_upper."""
    s = model.spread
    gamma = model.gamma
    eta = model.eta

    def integrand(u: float) -> float:
        tau = eta * math.exp(-(u ** (gamma / 2.0)))
        if tau <= nbar:  # entanglement-breaking slots contribute nothing
            return 0.0
        return s * math.exp(-s * u) * phi_thermal(tau, nbar)

    return quad_checked(integrand, 0.0, math.inf, rel_tol=1e-9, abs_tol=1e-13, limit=300)


def bound_slow(model: FadingModel, receiver: ReceiverParams, eta_atm: float) -> float:
    """Upper bound for slow (fading-averaged) detection."""
    denom = model.w_lt**2 + model.sigma_p2
    return min(
        plob(eta_slow(model, receiver, eta_atm)),
        (2.0 / LN2) * receiver.aperture**2 / denom,
    )


@dataclass(frozen=True)
class MaxRangeResult:
    z_max: float          # meters; 0.0 when no secure range exists
    mode: str
    secure_anywhere: bool


def max_range(
    build_model: Callable[[float], FadingModel] | None,
    nbar: float,
    mode: str = "tight",
    waist: float | None = None,
    wavelength: float | None = None,
    aperture: float | None = None,
    gamma_r: float | None = None,
    h_source: float | None = None,
    z_lo: float = 10e3,
    z_hi: float = 1e9,
    tol: float = 1e3,
) -> MaxRangeResult:
    """Maximum slant range (m) for secure key distribution at zenith.

    mode "simple" uses the Fresnel-number product threshold and needs
    waist/wavelength/aperture/gamma_r/h_source (background photons per unit
    collection).  mode "tight" locates the zero of the thermal-loss upper
    bound B - T by bisection on the geometry supplied by build_model, with
    the bracket grown geometrically up to z_hi.
    """
    if nbar >= 1.0:
        return MaxRangeResult(0.0, mode, False)
    if mode == "simple":
        if None in (waist, wavelength, aperture, gamma_r, h_source):
            raise ValueError("simple mode needs waist, wavelength, aperture, gamma_r, h_source")
        sigma = math.pi * waist * aperture / (wavelength * gamma_r)
        return MaxRangeResult(sigma / h_source, "simple", True)
    if mode != "tight":
        raise ValueError("mode must be 'simple' or 'tight'")
    if build_model is None:
        raise ValueError("tight mode needs a geometry builder")

    def upper_at(z: float) -> float:
        model = build_model(z)
        return thermal_upper(nbar, model)

    if upper_at(z_lo) <= 0.0:
        return MaxRangeResult(0.0, "tight", False)

    # expand until the bound dies or the cap is reached
    lo, hi = z_lo, 2.0 * z_lo
    while hi < z_hi and upper_at(hi) > 0.0:
        lo, hi = hi, 2.0 * hi
    if hi >= z_hi and upper_at(z_hi) > 0.0:
        return MaxRangeResult(z_hi, "tight", True)

    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if upper_at(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return MaxRangeResult(0.5 * (lo + hi), "tight", True)
