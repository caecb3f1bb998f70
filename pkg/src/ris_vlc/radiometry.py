"""Transmittance of the slab onto the detector and the tuning gain
between two slab states.

Transmittance is detector-captured power over slit-incident power:

    T = cos(theta_in) * capture_fraction(pd_length / 2)

The cos factor is the whole incidence penalty (the wave is projected
perpendicular to the slit); the capture fraction is the share of the
diffraction pattern landing on the detector aperture.  Tuning gain is the
plain difference of transmittance after minus before a state change.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .diffraction import pattern_power_fraction
from .optics import (EvanescentOrder, IncidentWave, SteeringGeometry,
                     Wavelength, refraction_angle)
from .quadrature import QuadratureError

__all__ = [
    "TransmittanceResult",
    "TuningGain",
    "SweepPoint",
    "transmittance",
    "tuning_gain",
    "wavelength_sweep",
    "sweep_to_csv",
]

_STATE_ERRORS = (EvanescentOrder, QuadratureError, ValueError)


@dataclass(frozen=True)
class TransmittanceResult:
    """value = incidence_factor * capture fraction, in [0, 1];
    captured_power_w = value * incident power."""

    value: float
    incidence_factor: float
    captured_power_w: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.value <= 1.0:
            raise ValueError(f"transmittance must lie in [0, 1], got {self.value}")
        if not 0.0 <= self.incidence_factor <= 1.0:
            raise ValueError(
                f"incidence factor must lie in [0, 1], got {self.incidence_factor}")


@dataclass(frozen=True)
class TuningGain:
    """gain = after.value - before.value; positive means the state change
    delivered more power to the detector."""

    before: TransmittanceResult
    after: TransmittanceResult
    gain: float

    def __post_init__(self) -> None:
        if not -1.0 <= self.gain <= 1.0:
            raise ValueError(f"gain must lie in [-1, 1], got {self.gain}")


@dataclass(frozen=True)
class SweepPoint:
    """One sweep entry; ``error`` holds the failure name when the point
    could not be evaluated (the sweep itself continues)."""

    wavelength_nm: float
    result: TransmittanceResult | None
    error: str | None


def _incidence_factor(wave: IncidentWave) -> float:
    # Exactly zero at grazing incidence so the 90 deg limit is exact
    # rather than cos(pi/2) ~ 6e-17.
    if wave.incidence.radians >= math.pi / 2:
        return 0.0
    return math.cos(wave.incidence.radians)


def transmittance(
    geom: SteeringGeometry, wave: IncidentWave, *, quad_tol: float = 1e-9
) -> TransmittanceResult:
    """Detector-captured share of the slit-incident power."""
    refraction_angle(geom, wave)  # configured order must propagate
    factor = _incidence_factor(wave)
    if factor == 0.0:
        value = 0.0
    else:
        value = factor * pattern_power_fraction(
            geom, wave, geom.pd_length_mm / 2, tol=quad_tol)
    return TransmittanceResult(
        value=value,
        incidence_factor=factor,
        captured_power_w=value * wave.power_w,
    )


def tuning_gain(
    geom_before: SteeringGeometry,
    geom_after: SteeringGeometry,
    wave: IncidentWave,
    *,
    quad_tol: float = 1e-9,
) -> TuningGain:
    """Transmittance difference after minus before a slab state change.

    Errors from either state are re-raised annotated with which state
    failed.
    """
    try:
        before = transmittance(geom_before, wave, quad_tol=quad_tol)
    except _STATE_ERRORS as exc:
        raise type(exc)(f"before state: {exc}") from exc
    try:
        after = transmittance(geom_after, wave, quad_tol=quad_tol)
    except _STATE_ERRORS as exc:
        raise type(exc)(f"after state: {exc}") from exc
    return TuningGain(before=before, after=after, gain=after.value - before.value)


def wavelength_sweep(
    geom: SteeringGeometry,
    wave_template: IncidentWave,
    band: tuple[float, float],
    steps: int,
    *,
    spacing: str = "linear",
    quad_tol: float = 1e-9,
) -> list[SweepPoint]:
    """Transmittance over a wavelength grid, endpoints included.

    Per-point failures are recorded in the returned entries instead of
    aborting the sweep.
    """
    if steps < 2:
        raise ValueError(f"steps must be >= 2, got {steps}")
    lo, hi = band
    if not lo < hi:
        raise ValueError(f"band must be increasing, got ({lo}, {hi})")
    Wavelength(lo), Wavelength(hi)  # both endpoints inside the guard band
    if spacing == "linear":
        grid = np.linspace(lo, hi, steps)
    elif spacing == "log":
        grid = np.geomspace(lo, hi, steps)
    else:
        raise ValueError(f"spacing must be 'linear' or 'log', got {spacing!r}")

    points: list[SweepPoint] = []
    for lam in grid:
        wave = replace(wave_template, wavelength=Wavelength(float(lam)))
        try:
            result = transmittance(geom, wave, quad_tol=quad_tol)
            points.append(SweepPoint(float(lam), result, None))
        except _STATE_ERRORS as exc:
            points.append(SweepPoint(float(lam), None,
                                     f"{type(exc).__name__}: {exc}"))
    return points


def sweep_to_csv(points: list[SweepPoint], path: str | Path) -> None:
    """Write a sweep as CSV (wavelength_nm, transmittance,
    incidence_factor, captured_power_w); failed points leave the value
    columns empty."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["wavelength_nm", "transmittance",
                         "incidence_factor", "captured_power_w"])
        for p in points:
            if p.result is None:
                writer.writerow([format(p.wavelength_nm, ".17g"), "", "", ""])
            else:
                writer.writerow([
                    format(p.wavelength_nm, ".17g"),
                    format(p.result.value, ".17g"),
                    format(p.result.incidence_factor, ".17g"),
                    format(p.result.captured_power_w, ".17g"),
                ])
