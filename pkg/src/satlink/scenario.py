"""Scenario assembly: one object wiring geometry, turbulence, noise and protocol.

A Scenario fixes the link direction, the time of day / sky condition, the
hardware setup and the protocol parameters, and exposes the derived
channel states and key rates that the CLI and the experiment scripts
consume.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from . import bounds, cvqkd, fading, noise, orbit
from .atmosphere import ExtinctionModel
from .beam import BeamParams, ReceiverParams, bound_v, diffraction_bound
from .cvqkd import KeyRate, ProtocolParams
from .errors import ConfigError
from .fading import FadingModel
from .geometry import slant_range
from .noise import NoiseEnvironment
from .turbulence import TurbulenceProfile

# hardware presets: (beam waist w0, receiver aperture a_R, spectral filter)
SETUPS: dict[int, tuple[float, float, float]] = {
    1: (0.2, 0.4, 1e-9),
    2: (0.4, 1.0, 1e-9),
    3: (0.4, 2.0, 1e-9),
    4: (0.4, 2.0, 1e-13),
}


@dataclass(frozen=True)
class Scenario:
    link: str = "down"                  # "up" | "down"
    period: str = "night"               # "day" | "night"
    sky: str = "clear"                  # "clear" | "cloudy"
    setup: int = 1
    beam: BeamParams = field(default_factory=BeamParams)
    receiver: ReceiverParams = field(default_factory=ReceiverParams)
    profile: TurbulenceProfile | None = None   # default: resolved from period
    extinction: ExtinctionModel = field(default_factory=ExtinctionModel)
    pointing_error: float = 1e-6
    protocol: ProtocolParams = field(default_factory=ProtocolParams)
    h_sky_override: float | None = None
    kappa_override: float | None = None

    def __post_init__(self):
        if self.link not in ("up", "down"):
            raise ConfigError("link must be 'up' or 'down'")
        if self.period not in ("day", "night"):
            raise ConfigError("period must be 'day' or 'night'")
        if self.sky not in ("clear", "cloudy"):
            raise ConfigError("sky must be 'clear' or 'cloudy'")
        if self.setup not in SETUPS:
            raise ConfigError(f"setup must be one of {sorted(SETUPS)}")

    @classmethod
    def build(
        cls,
        link: str = "down",
        period: str = "night",
        sky: str = "clear",
        setup: int = 1,
        **overrides,
    ) -> "Scenario":
        """Assemble a scenario applying the hardware preset for `setup`.

        Keyword overrides are applied on top of the preset, e.g.
        build(..., receiver=ReceiverParams(...)) replaces the whole receiver.
        """
        w0, a_r, filt = SETUPS[setup]
        base = cls(
            link=link,
            period=period,
            sky=sky,
            setup=setup,
            beam=BeamParams(waist=w0),
            receiver=ReceiverParams(aperture=a_r, filter_width=filt),
        )
        return replace(base, **overrides) if overrides else base

    @property
    def resolved_profile(self) -> TurbulenceProfile:
        if self.profile is not None:
            return self.profile
        return TurbulenceProfile.night() if self.period == "night" else TurbulenceProfile.day()

    @property
    def noise_env(self) -> NoiseEnvironment:
        return NoiseEnvironment(
            direction=self.link,
            period=self.period,
            sky=self.sky,
            h_sky=self.h_sky_override,
            kappa=self.kappa_override,
        )

    def nbar(self) -> float:
        """Thermal photons at the channel output for this scenario's receiver."""
        return noise.nbar_total(self.noise_env, self.receiver)

    def nbar_prime(self) -> float:
        """Worst-case thermal photons after single-block pilot estimation."""
        return cvqkd.worst_case_nbar(
            self.nbar(),
            self.protocol.pilots,
            self.protocol.nu_add,
            self.protocol.eps_pe,
            self.protocol.tail,
        )

    def fading_model(self, h: float, theta: float) -> FadingModel:
        return fading.fading_model(
            h,
            theta,
            self.beam,
            self.receiver,
            self.resolved_profile,
            self.link,
            self.extinction,
            self.pointing_error,
        )

    # -- bounds ------------------------------------------------------------

    def bounds_at(self, h: float, theta: float) -> dict[str, float]:
        """Upper/lower bounds at one geometry, keyed for the CLI sweep."""
        z = slant_range(h, theta)
        model = self.fading_model(h, theta)
        nbar = self.nbar()
        lower = bounds.thermal_lower(nbar, model)
        return {
            "U": diffraction_bound(z, self.beam, self.receiver.aperture),
            "V": bound_v(h, theta, self.beam, self.receiver, self.extinction),
            "B": bounds.bound_b_model(model),
            "upper": bounds.thermal_upper(nbar, model),
            "lower": lower.simple,
            "lower_middle": lower.middle,
            "eta": model.eta,
            "nbar": nbar,
        }

    def max_range(self, mode: str = "tight") -> bounds.MaxRangeResult:
        """Maximum secure slant range for a zenith-overflight geometry."""
        nbar = self.nbar()
        if mode == "simple":
            env = self.noise_env
            if env.direction == "up":
                h_source = env.resolved_kappa() * env.h_sun
            else:
                h_source = env.resolved_h_sky()
            return bounds.max_range(
                None,
                nbar,
                mode="simple",
                waist=self.beam.waist,
                wavelength=self.beam.wavelength,
                aperture=self.receiver.aperture,
                gamma_r=self.receiver.gamma_r,
                h_source=h_source,
            )
        return bounds.max_range(lambda z: self.fading_model(z, 0.0), nbar, mode="tight")

    # -- key rates ----------------------------------------------------------

    def rate_at(
        self, h: float, theta: float, attacks: str = "collective"
    ) -> KeyRate:
        """Post-selected composable key rate at a fixed geometry."""
        model = self.fading_model(h, abs(theta))
        return cvqkd.postselected_rate(model, self.nbar_prime(), self.protocol, attacks)

    def pass_report(
        self, h: float, n_blocks: int, attacks: str = "collective"
    ) -> dict:
        """Full zenith-crossing pass: slices, per-slice rates, daily yield."""
        slices = orbit.slice_orbit(
            h, n_blocks, self.protocol.clock_hz, self.protocol.block_size
        )
        t_q, t_t = orbit.transit_times(h)
        if not slices:
            return {
                "h_km": h / 1e3,
                "t_Q_s": t_q,
                "t_T_s": t_t,
                "slices": [],
                "per_slice_rate": [],
                "R_orb": 0.0,
                "bits_per_pass": 0.0,
                "bits_per_day": 0.0,
                "diagnostic": "no block fits in the quantum transit time",
            }
        rate_fn = lambda theta: self.rate_at(h, theta, attacks).rate
        r_orb, per_slice = orbit.orbital_rate(rate_fn, slices)
        bits_pass = r_orb * self.protocol.clock_hz * t_q
        period = orbit.orbital_period(h)
        report = {
            "h_km": h / 1e3,
            "t_Q_s": t_q,
            "t_T_s": t_t,
            "slices": [[lo, hi] for lo, hi in slices],
            "per_slice_rate": per_slice,
            "R_orb": r_orb,
            "bits_per_pass": bits_pass,
            # one zenith-crossing pass per day is credited
            "bits_per_day": bits_pass,
            "orbital_period_s": period,
            "orbits_per_day": int(orbit.SECONDS_PER_DAY // period),
            "processing_window_s": (t_t - t_q) / 2.0,
        }
        if h <= orbit.SUN_SYNC_MAX_ALT_M:
            report["sun_sync_inclination_deg"] = orbit.sun_sync_inclination(h)
        return report

    def describe(self) -> dict[str, object]:
        """Flat, deterministic key/value view of the resolved configuration."""
        prof = self.resolved_profile
        prot = self.protocol
        return {
            "scenario.link": self.link,
            "scenario.period": self.period,
            "scenario.sky": self.sky,
            "scenario.setup": self.setup,
            "beam.wavelength": self.beam.wavelength,
            "beam.waist": self.beam.waist,
            "beam.curvature": self.beam.curvature,
            "receiver.aperture": self.receiver.aperture,
            "receiver.fov_sr": self.receiver.fov_sr,
            "receiver.detection_time": self.receiver.detection_time,
            "receiver.filter": self.receiver.filter_width,
            "receiver.efficiency": self.receiver.efficiency,
            "receiver.excess_photons": self.receiver.excess_photons,
            "atmosphere.alpha0": self.extinction.alpha0,
            "atmosphere.scale_height": self.extinction.h_scale,
            "turbulence.profile": prof.name,
            "pointing.error_rad": self.pointing_error,
            "protocol.N": prot.block_size,
            "protocol.m": prot.pilots,
            "protocol.f_et": prot.energy_test_fraction,
            "protocol.beta": prot.beta,
            "protocol.p_ec": prot.p_ec,
            "protocol.eps_s": prot.eps_s,
            "protocol.eps_h": prot.eps_h,
            "protocol.eps_pe": prot.eps_pe,
            "protocol.eps_cor": prot.eps_cor,
            "protocol.d": prot.alphabet,
            "protocol.mu": prot.mu,
            "protocol.phi": prot.phi_thr,
            "protocol.clock_hz": prot.clock_hz,
            "protocol.detection": prot.detection,
            "protocol.tail": prot.tail,
            "noise.nbar_background": noise.nbar_background(self.noise_env, self.receiver),
        }
