"""Shared planner parameters."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Params:
    """Workspace and robot parameters used across the pipeline.

    Defaults follow the hardware regime the planner targets: a 30.5 x 29.0 m
    hall, perception radius 1.52 m, crack-filling footprint radius 0.44 m,
    exploration speed 1.2 m/s and service speed 0.4 m/s.
    """

    length_m: float = 30.5
    width_m: float = 29.0
    sensor_radius: float = 1.52
    service_radius: float = 0.44
    explore_speed: float = 1.2
    service_speed: float = 0.4
    resolution: float = 0.05
    alpha: float = 1.0

    def __post_init__(self) -> None:
        if self.length_m <= 0 or self.width_m <= 0:
            raise ValueError("workspace dimensions must be positive")
        if self.resolution <= 0:
            raise ValueError("resolution must be positive")
        if min(self.sensor_radius, self.service_radius) <= 0:
            raise ValueError("radii must be positive")
