"""Rotation-sweep comparison of legacy lens front-ends against tunable
slab front-ends.

Legacy lenses are modelled by their published acceptance envelopes, not
by ray tracing: detection holds up to the envelope angle and the detected
intensity follows cos(rotation).  The catadioptric bi-parabolic kind
additionally loses intensity past its roll-off angle (linear placeholder
down to 0.5 at the envelope edge).  Tunable kinds re-solve their drive
voltage at every rotation so the steered pattern lands on the detector,
then score the full radiometric transmittance.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

from .optics import Angle, EvanescentOrder, IncidentWave, SteeringGeometry, Wavelength
from .radiometry import transmittance
from .diffraction import steering_offset_mm
from .tuning import (Actuator, DesignTarget, Infeasible, MetaLensActuator,
                     NonMonotonic, actuator_preset, lc_apply, metalens_apply,
                     solve_voltage)

__all__ = [
    "KINDS",
    "RIS_KINDS",
    "ReceiverFrontEnd",
    "RotationSweepResult",
    "FrontEndSummary",
    "default_front_end",
    "default_roster",
    "detect",
    "rotation_sweep",
    "compare_table",
    "table_to_csv",
    "format_table",
]

KINDS = ("convex", "gilcpc", "spherical", "cmbbp", "adj_lens",
         "metalens_ris", "lc_ris")
RIS_KINDS = ("metalens_ris", "lc_ris")

# Published acceptance envelopes (degrees); adj_lens is only bounded
# below 90 in its source, its default envelope is a configuration value.
_ENVELOPE_CAP = {
    "convex": 36.2,
    "gilcpc": 40.0,
    "spherical": 45.0,
    "cmbbp": 85.0,
    "adj_lens": 90.0,
    "metalens_ris": 90.0,
    "lc_ris": 90.0,
}

# Intensity factor left at the envelope edge of the cmbbp roll-off.
_CMBBP_FLOOR = 0.5

_ANGLE_EPS_DEG = 1e-9


@dataclass(frozen=True)
class ReceiverFrontEnd:
    """One receiver front-end and its acceptance envelope.

    Tunable kinds carry the actuator to re-solve per rotation;
    ``geometry`` is the slab at rest (required for the liquid-crystal
    kind, optional for the meta-lens whose actuator has its own base).
    """

    kind: str
    max_incidence: Angle
    spot_mm: float
    tunable: bool
    rolloff_start: Angle | None = None
    voltage_range: tuple[float, float] | None = None
    actuator: Actuator | None = None
    geometry: SteeringGeometry | None = None
    wavelength_nm: float = 550.0

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        cap = _ENVELOPE_CAP[self.kind]
        deg = self.max_incidence.degrees
        if self.kind == "adj_lens":
            if not 0 < deg < cap:
                raise ValueError(
                    f"adj_lens envelope must lie in (0, {cap}) deg, got {deg:g}")
        elif not 0 < deg <= cap + _ANGLE_EPS_DEG:
            raise ValueError(
                f"{self.kind} envelope must be <= {cap} deg, got {deg:g}")
        if (self.rolloff_start is not None) != (self.kind == "cmbbp"):
            raise ValueError("rolloff_start is required for cmbbp and "
                             "forbidden otherwise")
        if not self.spot_mm > 0:
            raise ValueError(f"spot_mm must be > 0, got {self.spot_mm}")
        if self.kind in RIS_KINDS:
            if self.actuator is None:
                raise ValueError(f"{self.kind} requires an actuator")
            if self.kind == "lc_ris" and self.geometry is None:
                raise ValueError("lc_ris requires a base geometry")


@dataclass(frozen=True)
class RotationSweepResult:
    angles_deg: tuple[float, ...]
    detected: tuple[bool, ...]
    relative_intensity: tuple[float, ...]

    def __post_init__(self) -> None:
        if not (len(self.angles_deg) == len(self.detected)
                == len(self.relative_intensity)):
            raise ValueError("sweep columns must have equal length")
        for d, i in zip(self.detected, self.relative_intensity):
            if not d and i != 0.0:
                raise ValueError("undetected points must carry zero intensity")


@dataclass(frozen=True)
class FrontEndSummary:
    kind: str
    max_detected_deg: float
    mean_intensity: float
    tunable: bool
    voltage_range: tuple[float, float] | None


def default_front_end(kind: str) -> ReceiverFrontEnd:
    """Standard configuration for each kind.

    Spot sizes without a published value (gilcpc, cmbbp, adj_lens) are
    nominal placeholders; the adj_lens 60 deg envelope is likewise a
    configuration default, not a published figure.
    """
    if kind == "convex":
        return ReceiverFrontEnd("convex", Angle.from_degrees(36.2), 2.0, False)
    if kind == "gilcpc":
        return ReceiverFrontEnd("gilcpc", Angle.from_degrees(40.0), 3.0, False)
    if kind == "spherical":
        return ReceiverFrontEnd("spherical", Angle.from_degrees(45.0), 3.0, False)
    if kind == "cmbbp":
        return ReceiverFrontEnd("cmbbp", Angle.from_degrees(85.0), 1.0, False,
                                rolloff_start=Angle.from_degrees(25.0))
    if kind == "adj_lens":
        return ReceiverFrontEnd("adj_lens", Angle.from_degrees(60.0), 2.0, True,
                                voltage_range=None)
    base = SteeringGeometry(slit_um=100.0, depth_mm=0.75, pd_length_mm=1.0,
                            n_ris=1.508)
    if kind == "lc_ris":
        return ReceiverFrontEnd(
            "lc_ris", Angle.from_degrees(90.0), 0.1, True,
            voltage_range=(2.0, 5.0),
            actuator=actuator_preset("lc-sun2019"),
            geometry=base)
    if kind == "metalens_ris":
        lens_base = SteeringGeometry(slit_um=100.0, depth_mm=0.75,
                                     pd_length_mm=1.0, n_ris=1.6)
        actuator = MetaLensActuator(v_max_v=1000.0, stretch_max=1.5,
                                    base_geometry=lens_base)
        return ReceiverFrontEnd(
            "metalens_ris", Angle.from_degrees(90.0), 0.1, True,
            voltage_range=(1000.0, 3000.0),
            actuator=actuator)
    raise ValueError(f"kind must be one of {KINDS}, got {kind!r}")


def default_roster() -> list[ReceiverFrontEnd]:
    return [default_front_end(k) for k in KINDS]


def _cmbbp_rolloff(fe: ReceiverFrontEnd, deg: float) -> float:
    start = fe.rolloff_start.degrees
    edge = fe.max_incidence.degrees
    if deg <= start:
        return 1.0
    return 1.0 - (1.0 - _CMBBP_FLOOR) * (deg - start) / (edge - start)


def _detect_ris(fe: ReceiverFrontEnd, rotation: Angle) -> tuple[bool, float]:
    wave = IncidentWave(Wavelength(fe.wavelength_nm), rotation, order=1)
    act = fe.actuator
    if isinstance(act, MetaLensActuator):
        base = fe.geometry or act.base_geometry
        if fe.geometry is not None:
            act = MetaLensActuator(act.v_max_v, act.stretch_max, fe.geometry)
        v_rest, v_full = 0.0, act.v_max_v
        apply = lambda v: metalens_apply(act, v)
        target_geometry = None
    else:
        base = fe.geometry
        v_rest, v_full = act.v_on_v, act.v_sat_v
        apply = lambda v: lc_apply(act, v, base)
        target_geometry = base
    half = base.pd_length_mm / 2
    try:
        landing_rest = steering_offset_mm(apply(v_rest), wave)
        landing_full = steering_offset_mm(apply(v_full), wave)
        if landing_full > half + 1e-12:
            return (False, 0.0)  # not steerable onto the detector
        if landing_rest <= half:
            v = v_rest
        else:
            target = DesignTarget("pd_landing", half, wave, target_geometry,
                                  "voltage")
            v = solve_voltage(target, act)
        return (True, transmittance(apply(v), wave).value)
    except (EvanescentOrder, Infeasible, NonMonotonic):
        return (False, 0.0)


def detect(front_end: ReceiverFrontEnd, rotation: Angle) -> tuple[bool, float]:
    """(detected, relative intensity) at one receiver rotation."""
    deg = rotation.degrees
    if not 0.0 <= deg <= 90.0:
        raise ValueError(f"rotation must lie in [0, 90] deg, got {deg:g}")
    if deg > front_end.max_incidence.degrees + _ANGLE_EPS_DEG:
        return (False, 0.0)
    if front_end.kind in RIS_KINDS:
        return _detect_ris(front_end, rotation)
    intensity = math.cos(rotation.radians)
    if front_end.kind == "cmbbp":
        intensity *= _cmbbp_rolloff(front_end, deg)
    return (True, intensity)


def rotation_sweep(front_end: ReceiverFrontEnd, step_deg: float) -> RotationSweepResult:
    """Detection sweep over rotations 0..90 deg inclusive."""
    if not 0.0 < step_deg <= 90.0:
        raise ValueError(f"step must lie in (0, 90] deg, got {step_deg:g}")
    count = int(math.floor(90.0 / step_deg + 1e-9))
    angles = [round(k * step_deg, 12) for k in range(count + 1)]
    if angles[-1] < 90.0 - _ANGLE_EPS_DEG:
        angles.append(90.0)
    else:
        angles[-1] = 90.0
    detected: list[bool] = []
    intensity: list[float] = []
    for deg in angles:
        d, i = detect(front_end, Angle.from_degrees(deg))
        detected.append(d)
        intensity.append(i)
    return RotationSweepResult(tuple(angles), tuple(detected), tuple(intensity))


def compare_table(
    front_ends: list[ReceiverFrontEnd], step_deg: float
) -> list[FrontEndSummary]:
    """One summary row per front-end (duplicates preserved, order kept)."""
    rows = []
    for fe in front_ends:
        sweep = rotation_sweep(fe, step_deg)
        det_angles = [a for a, d in zip(sweep.angles_deg, sweep.detected) if d]
        det_intensity = [i for i, d in zip(sweep.relative_intensity,
                                           sweep.detected) if d]
        rows.append(FrontEndSummary(
            kind=fe.kind,
            max_detected_deg=max(det_angles) if det_angles else math.nan,
            mean_intensity=(sum(det_intensity) / len(det_intensity)
                            if det_intensity else 0.0),
            tunable=fe.tunable,
            voltage_range=fe.voltage_range,
        ))
    return rows


def _voltage_text(rng: tuple[float, float] | None) -> str:
    if rng is None:
        return "-"
    return f"{rng[0]:g}-{rng[1]:g} V"


def table_to_csv(rows: list[FrontEndSummary], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["kind", "max_detected_deg", "mean_intensity",
                         "tunable", "voltage_low_v", "voltage_high_v"])
        for r in rows:
            lo, hi = r.voltage_range if r.voltage_range else ("", "")
            writer.writerow([
                r.kind,
                format(r.max_detected_deg, ".17g"),
                format(r.mean_intensity, ".17g"),
                str(r.tunable).lower(),
                format(lo, ".17g") if lo != "" else "",
                format(hi, ".17g") if hi != "" else "",
            ])


def format_table(rows: list[FrontEndSummary]) -> str:
    header = f"{'kind':<14}{'max angle':>10}{'mean int.':>11}{'tunable':>9}{'voltage':>13}"
    lines = [header, "-" * len(header)]
    for r in rows:
        lines.append(
            f"{r.kind:<14}{r.max_detected_deg:>9.1f}°{r.mean_intensity:>11.4f}"
            f"{('yes' if r.tunable else 'no'):>9}{_voltage_text(r.voltage_range):>13}")
    return "\n".join(lines)
