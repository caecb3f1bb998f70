"""Actuator models for the two tunable front-end realisations and the
inverse-design solvers for index, depth and drive voltage.

Both voltage maps are linear in the drive (the minimal assumption for a
stated monotone proportionality) and clamp outside their active interval:

  * stretchable meta-lens: lateral stretch s(v) = 1 + v/v_max * (s_max-1),
    slit a -> s*a, depth y -> y/s^2 (volume-conserving elastomer);
  * liquid-crystal cell: n(v) ramps linearly from n_base at the threshold
    voltage to n_base + delta_n at saturation, geometry unchanged.

Inverse solvers either use the closed form (index, depth) or bisect the
forward pipeline over the drive interval (voltage), exploiting the
monotonicity of the maps.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace
from typing import Callable, Union

from .diffraction import first_null_angle, steering_offset_mm
from .optics import (INDEX_RANGE, Angle, IncidentWave, SteeringGeometry,
                     refraction_angle)

__all__ = [
    "OutOfMaterialRange",
    "Infeasible",
    "NonMonotonic",
    "MetaLensActuator",
    "LiquidCrystalActuator",
    "Actuator",
    "DesignTarget",
    "metalens_apply",
    "lc_apply",
    "solve_index_for_angle",
    "solve_depth_for_spot",
    "solve_voltage",
    "actuator_preset",
    "PRESET_NAMES",
]

TARGET_KINDS = ("refraction_angle", "spot_width", "pd_landing")
FREE_VARIABLES = ("n_ris", "depth", "voltage")


class OutOfMaterialRange(ValueError):
    """Solved refractive index falls outside the physical material band."""


class Infeasible(Exception):
    """Design target lies outside the actuator's reachable interval."""

    def __init__(self, msg: str, achievable: tuple[float, float]):
        super().__init__(msg)
        self.achievable = achievable


class NonMonotonic(Exception):
    """Forward metric is not monotone over the bisection bracket."""


@dataclass(frozen=True)
class MetaLensActuator:
    """Stretchable meta-lens driven by kilovolt-range electrodes."""

    v_max_v: float
    stretch_max: float
    base_geometry: SteeringGeometry

    def __post_init__(self) -> None:
        if not self.v_max_v > 0:
            raise ValueError(f"v_max_v must be > 0, got {self.v_max_v}")
        if not self.stretch_max > 1:
            raise ValueError(f"stretch_max must be > 1, got {self.stretch_max}")


@dataclass(frozen=True)
class LiquidCrystalActuator:
    """Liquid-crystal cell whose index ramps between threshold and
    saturation voltage."""

    v_on_v: float = 3.0
    v_sat_v: float = 5.0
    n_base: float = 1.508
    delta_n: float = 0.3

    def __post_init__(self) -> None:
        if not 0 < self.v_on_v < self.v_sat_v:
            raise ValueError(
                f"need v_sat > v_on > 0, got v_on={self.v_on_v}, v_sat={self.v_sat_v}")
        if not 0.2 <= self.delta_n <= 0.4:
            raise ValueError(f"delta_n must lie in [0.2, 0.4], got {self.delta_n}")
        if not self.n_base + self.delta_n <= INDEX_RANGE[1]:
            raise ValueError(
                f"n_base + delta_n = {self.n_base + self.delta_n:g} exceeds "
                f"{INDEX_RANGE[1]}")


Actuator = Union[MetaLensActuator, LiquidCrystalActuator]


@dataclass(frozen=True)
class DesignTarget:
    """One design goal with a single free variable.

    ``value`` is in degrees for the refraction_angle kind and in
    millimetres otherwise.  ``geometry`` holds the fixed fields; the free
    variable's entry in it serves only as a base value.  It may be None
    for voltage solves against a meta-lens, whose actuator carries its
    own base geometry.
    """

    kind: str
    value: float
    wave: IncidentWave
    geometry: SteeringGeometry | None
    free: str

    def __post_init__(self) -> None:
        if self.kind not in TARGET_KINDS:
            raise ValueError(f"kind must be one of {TARGET_KINDS}, got {self.kind!r}")
        if self.free not in FREE_VARIABLES:
            raise ValueError(f"free must be one of {FREE_VARIABLES}, got {self.free!r}")
        if not (math.isfinite(self.value) and self.value > 0):
            raise ValueError(f"target value must be positive, got {self.value}")
        if self.kind == "refraction_angle" and not self.value < 90.0:
            raise ValueError(
                f"refraction-angle target must lie in (0, 90) deg, got {self.value}")


def metalens_apply(act: MetaLensActuator, v: float) -> SteeringGeometry:
    """Geometry after driving the meta-lens at ``v`` volts.

    Drives above v_max clamp to full stretch (with a warning); v = 0
    returns the base geometry unchanged.
    """
    if not (math.isfinite(v) and v >= 0):
        raise ValueError(f"drive voltage must be >= 0, got {v}")
    if v > act.v_max_v:
        warnings.warn(f"drive {v:g} V clamped to v_max {act.v_max_v:g} V",
                      stacklevel=2)
        v = act.v_max_v
    s = 1.0 + v / act.v_max_v * (act.stretch_max - 1.0)
    base = act.base_geometry
    if s == 1.0:
        return base
    return replace(base, slit_um=base.slit_um * s, depth_mm=base.depth_mm / s**2)


def lc_apply(
    act: LiquidCrystalActuator, v: float, base: SteeringGeometry
) -> SteeringGeometry:
    """Geometry after driving the liquid-crystal cell at ``v`` volts.

    The index is flat at n_base below the threshold voltage by design;
    drives above saturation clamp (with a warning).
    """
    if not (math.isfinite(v) and v >= 0):
        raise ValueError(f"drive voltage must be >= 0, got {v}")
    if v > act.v_sat_v:
        warnings.warn(f"drive {v:g} V clamped to saturation {act.v_sat_v:g} V",
                      stacklevel=2)
    level = min(max((v - act.v_on_v) / (act.v_sat_v - act.v_on_v), 0.0), 1.0)
    return replace(base, n_ris=act.n_base + level * act.delta_n)


def solve_index_for_angle(
    wave: IncidentWave,
    slit_um: float,
    theta_target: Angle,
    *,
    n_air: float = 1.0,
) -> float:
    """Slab index that steers ``wave`` to ``theta_target`` (closed form).

    Raises:
        OutOfMaterialRange: the required index falls outside the physical
            material band.
    """
    if not 0.0 < theta_target.radians < math.pi / 2:
        raise ValueError(
            f"theta_target must lie in (0, 90) deg, got {theta_target.degrees:.6g}")
    if not slit_um > 0:
        raise ValueError(f"slit_um must be > 0, got {slit_um}")
    numerator = (n_air * math.sin(wave.incidence.radians)
                 + wave.order * wave.wavelength.nanometres / (slit_um * 1e3))
    n = numerator / math.sin(theta_target.radians)
    lo, hi = INDEX_RANGE
    if not lo < n <= hi:
        raise OutOfMaterialRange(
            f"required index {n:.6g} outside the material band ({lo}, {hi}]")
    return n


def solve_depth_for_spot(
    slit_um: float,
    n_ris: float,
    wave: IncidentWave,
    spot_target_mm: float,
    *,
    n_air: float = 1.0,
) -> float:
    """Slab depth whose central lobe has the target full width (closed
    form); propagates NullBeyondHorizon when no first null exists."""
    if not spot_target_mm > 0:
        raise ValueError(f"spot_target_mm must be > 0, got {spot_target_mm}")
    probe = SteeringGeometry(slit_um=slit_um, depth_mm=1.0, pd_length_mm=1.0,
                             n_ris=n_ris, n_air=n_air)
    null = first_null_angle(probe, wave)
    return spot_target_mm / (2.0 * math.tan(null.radians))


def _evaluate_metric(kind: str, geom: SteeringGeometry, wave: IncidentWave) -> float:
    if kind == "refraction_angle":
        return refraction_angle(geom, wave).degrees
    if kind == "spot_width":
        return 2.0 * geom.depth_mm * math.tan(first_null_angle(geom, wave).radians)
    return steering_offset_mm(geom, wave)


def _bisect_monotone(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    target: float,
    *,
    rel_tol: float = 1e-6,
    max_steps: int = 60,
) -> float:
    """Bisection for a monotone (either direction) metric on [lo, hi].

    Raises Infeasible when the target is outside [f(lo), f(hi)] and
    NonMonotonic when midpoint values escape the current bracket.
    """
    f_lo, f_hi = f(lo), f(hi)
    scale = max(abs(target), 1e-30)
    lo_val, hi_val = min(f_lo, f_hi), max(f_lo, f_hi)
    slack = rel_tol * scale
    if not lo_val - slack <= target <= hi_val + slack:
        raise Infeasible(
            f"target {target:.9g} outside achievable interval "
            f"[{lo_val:.9g}, {hi_val:.9g}]", achievable=(lo_val, hi_val))
    if abs(f_lo - target) <= slack:
        return lo
    if abs(f_hi - target) <= slack:
        return hi
    increasing = f_hi > f_lo
    for _ in range(max_steps):
        mid = 0.5 * (lo + hi)
        f_mid = f(mid)
        bracket_lo, bracket_hi = min(f_lo, f_hi), max(f_lo, f_hi)
        if not bracket_lo - slack <= f_mid <= bracket_hi + slack:
            raise NonMonotonic(
                f"metric {f_mid:.9g} at {mid:.9g} escapes bracket "
                f"[{bracket_lo:.9g}, {bracket_hi:.9g}]")
        if abs(f_mid - target) <= slack:
            return mid
        if (f_mid < target) == increasing:
            lo, f_lo = mid, f_mid
        else:
            hi, f_hi = mid, f_mid
    raise NonMonotonic(
        f"metric failed to reach target {target:.9g} within {max_steps} "
        f"bisection steps (bracket values {f_lo:.9g}, {f_hi:.9g})")


def solve_voltage(
    target: DesignTarget,
    actuator: Actuator,
    *,
    rel_tol: float = 1e-6,
    max_steps: int = 60,
) -> float:
    """Drive voltage meeting the target metric within ``rel_tol`` relative.

    Bisects the forward pipeline (apply actuator, evaluate the target
    kind) over [0, v_max] for the meta-lens or [v_on, v_sat] for the
    liquid-crystal cell.
    """
    if isinstance(actuator, MetaLensActuator):
        if target.geometry is not None:
            actuator = replace(actuator, base_geometry=target.geometry)
        forward = lambda v: _evaluate_metric(
            target.kind, metalens_apply(actuator, v), target.wave)
        lo, hi = 0.0, actuator.v_max_v
    else:
        if target.geometry is None:
            raise ValueError(
                "liquid-crystal voltage solve requires the target geometry")
        forward = lambda v: _evaluate_metric(
            target.kind, lc_apply(actuator, v, target.geometry), target.wave)
        lo, hi = actuator.v_on_v, actuator.v_sat_v
    return _bisect_monotone(forward, lo, hi, target.value,
                            rel_tol=rel_tol, max_steps=max_steps)


def _metalens_she2018(base_geometry: SteeringGeometry | None) -> MetaLensActuator:
    # Stretch limit reconstructed from the quoted focal-spot band
    # 21.4..37.7 um: spot scales as 1/s^3 under the volume-conserving
    # map, so s_max = (37.7 / 21.4)^(1/3).
    if base_geometry is None:
        base_geometry = SteeringGeometry(
            slit_um=4.0, depth_mm=50.0, pd_length_mm=0.0377, n_ris=1.4)
    return MetaLensActuator(
        v_max_v=1000.0,
        stretch_max=(37.7 / 21.4) ** (1.0 / 3.0),
        base_geometry=base_geometry,
    )


def _lc_sun2019(base_geometry: SteeringGeometry | None) -> LiquidCrystalActuator:
    return LiquidCrystalActuator(v_on_v=3.0, v_sat_v=5.0,
                                 n_base=1.508, delta_n=0.392)


_PRESETS = {
    "metalens-she2018": _metalens_she2018,
    "lc-sun2019": _lc_sun2019,
}

PRESET_NAMES = tuple(sorted(_PRESETS))


def actuator_preset(
    name: str, base_geometry: SteeringGeometry | None = None
) -> Actuator:
    """Named actuator configuration; ``base_geometry`` overrides the
    meta-lens default (ignored by the liquid-crystal preset)."""
    try:
        factory = _PRESETS[name]
    except KeyError:
        raise ValueError(
            f"unknown preset {name!r}; available: {', '.join(PRESET_NAMES)}"
        ) from None
    return factory(base_geometry)
