"""Single-slit far-field pattern inside the slab and its capture on the
detector plane.

The relative point intensity is the squared sinc envelope

    I / I_max = sinc^2(a * sin(theta) / lambda_m),    lambda_m = lambda / n_ris

with ``theta`` measured from the steered pattern centre and ``lambda_m``
the in-medium wavelength (the pattern forms after entry into the slab,
which is what makes spot size respond to index tuning).  The steered
centre sits at the refraction angle of the configured order, so direction
and concentration stay separable effects.

Capture convention: point sampling on the detector plane uses the exact
angular map theta(u) = atan((u - centre) / depth).  The plane-integrated
capture fraction instead uses the paraxial pattern
sinc^2(a * (u - centre) / (lambda_m * depth)), whose full-plane integral
converges; its main-lobe share is the textbook sinc^2 value independent
of geometry.  The normalisation integral is truncated at the 89.9 deg
horizon, with the analytic tail bound  integral_{t>T} sinc^2 < 1/(pi^2 T)
checked per call.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np

from .optics import Angle, IncidentWave, SteeringGeometry, refraction_angle
from .quadrature import adaptive_quad

__all__ = [
    "NullBeyondHorizon",
    "IntensityProfile",
    "SpotReport",
    "medium_wavelength_nm",
    "fraunhofer_relative_intensity",
    "steering_offset_mm",
    "first_null_angle",
    "profile_on_pd",
    "spot_report",
    "pattern_power_fraction",
]

# Truncation horizon for the "infinite" detector-plane normalisation.
_HORIZON = math.radians(89.9)
_TAN_HORIZON = math.tan(_HORIZON)

# Warn when the neglected analytic tail beyond the horizon grows
# non-negligible relative to the unit-normalised total.
_TAIL_WARN = 1e-3


class NullBeyondHorizon(Exception):
    """First diffraction null does not exist: slit narrower than the
    in-medium wavelength, so the central lobe fills the half-space."""


@dataclass(frozen=True, eq=False)
class IntensityProfile:
    """Sampled relative intensity over the detector plane.

    ``positions_mm`` are lateral offsets from the slit axis (strictly
    increasing); values are normalised to the central maximum of the
    pattern.  ``center_offset_mm`` is the steering displacement of the
    pattern centre on the plane.
    """

    positions_mm: np.ndarray
    relative_intensity: np.ndarray
    center_offset_mm: float
    medium_wavelength_nm: float

    def __post_init__(self) -> None:
        if self.positions_mm.shape != self.relative_intensity.shape:
            raise ValueError("positions and intensities must have equal length")
        if not np.all(np.diff(self.positions_mm) > 0):
            raise ValueError("positions must be strictly increasing")
        if np.any(self.relative_intensity < 0) or np.any(self.relative_intensity > 1):
            raise ValueError("relative intensity must lie in [0, 1]")

    def write_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["position_mm", "relative_intensity"])
            for u, i in zip(self.positions_mm, self.relative_intensity):
                writer.writerow([format(u, ".17g"), format(i, ".17g")])


@dataclass(frozen=True)
class SpotReport:
    """Central-lobe geometry on the detector plane.

    ``full_width_mm`` is +inf when the first null does not exist (the
    lobe fills the half-space); ``pd_coverage`` is still computed then.
    """

    full_width_mm: float
    first_null_angle: Angle
    pd_coverage: float

    def __post_init__(self) -> None:
        if not self.full_width_mm > 0:
            raise ValueError(f"full width must be > 0, got {self.full_width_mm}")
        if not 0.0 <= self.pd_coverage <= 1.0:
            raise ValueError(f"pd_coverage must lie in [0, 1], got {self.pd_coverage}")


def medium_wavelength_nm(geom: SteeringGeometry, wave: IncidentWave) -> float:
    """In-medium wavelength lambda / n_ris, in nanometres."""
    return wave.wavelength.nanometres / geom.n_ris


def fraunhofer_relative_intensity(
    geom: SteeringGeometry, wave: IncidentWave, theta: Angle
) -> float:
    """Relative intensity of the pattern at angle ``theta`` from its centre.

    Exactly 1 at theta = 0 (the sinc limit is handled analytically by
    numpy) and 0 at the nulls sin(theta) = k * lambda_m / a.
    """
    if not -math.pi / 2 < theta.radians < math.pi / 2:
        raise ValueError(
            f"theta must lie in (-90, 90) deg, got {theta.degrees:.6g} deg")
    ratio = geom.slit_um * 1e3 / medium_wavelength_nm(geom, wave)
    return float(np.sinc(ratio * math.sin(theta.radians)) ** 2)


def steering_offset_mm(geom: SteeringGeometry, wave: IncidentWave) -> float:
    """Lateral displacement of the pattern centre on the detector plane."""
    return geom.depth_mm * math.tan(refraction_angle(geom, wave).radians)


def first_null_angle(geom: SteeringGeometry, wave: IncidentWave) -> Angle:
    """Angle of the first intensity null about the pattern centre.

    Raises:
        NullBeyondHorizon: lambda_m / a >= 1, no null exists.
    """
    ratio = medium_wavelength_nm(geom, wave) / (geom.slit_um * 1e3)
    if ratio >= 1.0:
        raise NullBeyondHorizon(
            f"lambda_m/a = {ratio:.6g} >= 1: slit narrower than the in-medium "
            f"wavelength, central lobe fills the half-space")
    return Angle(math.asin(ratio))


def profile_on_pd(
    geom: SteeringGeometry, wave: IncidentWave, samples: int
) -> IntensityProfile:
    """Sample the steered pattern across the detector aperture.

    Positions run over [-x/2, x/2] on the plane at the slab depth; the
    angular coordinate of a point is atan((u - centre) / depth).
    """
    if samples < 3:
        raise ValueError(f"samples must be >= 3, got {samples}")
    centre = steering_offset_mm(geom, wave)
    lam_m = medium_wavelength_nm(geom, wave)
    u = np.linspace(-geom.pd_length_mm / 2, geom.pd_length_mm / 2, samples)
    theta = np.arctan((u - centre) / geom.depth_mm)
    intensity = np.sinc(geom.slit_um * 1e3 / lam_m * np.sin(theta)) ** 2
    return IntensityProfile(
        positions_mm=u,
        relative_intensity=intensity,
        center_offset_mm=centre,
        medium_wavelength_nm=lam_m,
    )


def spot_report(geom: SteeringGeometry, wave: IncidentWave) -> SpotReport:
    """Central-lobe width, first-null angle and detector coverage."""
    refraction_angle(geom, wave)  # configured order must propagate
    try:
        null = first_null_angle(geom, wave)
        width = 2.0 * geom.depth_mm * math.tan(null.radians)
    except NullBeyondHorizon:
        null = Angle(math.pi / 2)
        width = math.inf
    coverage = pattern_power_fraction(geom, wave, geom.pd_length_mm / 2)
    return SpotReport(full_width_mm=width, first_null_angle=null,
                      pd_coverage=coverage)


@lru_cache(maxsize=200_000)
def _half_capture(t: float, tol: float) -> float:
    """integral_0^t sinc^2, by adaptive quadrature seeded at the nulls."""
    if t <= 0.0:
        return 0.0
    breakpoints = np.arange(1.0, math.ceil(t)) if t > 1.0 else None
    return adaptive_quad(lambda x: np.sinc(x) ** 2, 0.0, t,
                         abs_tol=tol, breakpoints=breakpoints)


def pattern_power_fraction(
    geom: SteeringGeometry,
    wave: IncidentWave,
    window_halfwidth_mm: float,
    *,
    tol: float = 1e-9,
) -> float:
    """Fraction of the pattern's plane-integrated power inside a window
    centred on the pattern centre.

    Both the window integral and the full-plane normalisation are done by
    adaptive quadrature (see the module capture convention); the result is
    nondecreasing in the window size and bounded by [0, 1].
    """
    if not window_halfwidth_mm > 0:
        raise ValueError(
            f"window_halfwidth_mm must be > 0, got {window_halfwidth_mm}")
    lam_m_mm = medium_wavelength_nm(geom, wave) * 1e-6
    scale = lam_m_mm * geom.depth_mm / (geom.slit_um * 1e-3)  # first-null distance
    t_max = _TAN_HORIZON * geom.depth_mm / scale
    tail_bound = 1.0 / (math.pi ** 2 * t_max)
    if tail_bound > _TAIL_WARN:
        warnings.warn(
            f"normalisation tail beyond the 89.9 deg horizon bounded by "
            f"{tail_bound:.2e} of total power", stacklevel=2)
    t_win = min(window_halfwidth_mm / scale, t_max)
    numerator = _half_capture(t_win, tol)
    denominator = _half_capture(t_max, tol)
    return min(max(numerator / denominator, 0.0), 1.0)
