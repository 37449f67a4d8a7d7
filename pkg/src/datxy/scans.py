"""Rectangular parameter grids shared by the scan functions and the CLI."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .params import ModelParams

AXIS_NAMES = ("lambda1", "lambda2", "d", "betaJ", "t")

QUANTITIES = ("LN", "dLN_dl1", "dLN_dl2", "Mx", "S", "Cchi", "gap", "mz",
              "correlators", "phase_label")


@dataclass(frozen=True)
class Axis:
    name: str
    start: float
    stop: float
    count: int

    def __post_init__(self):
        if self.name not in AXIS_NAMES:
            raise DomainError(f"axis name must be one of {AXIS_NAMES}, got {self.name!r}")
        if self.count < 2:
            raise DomainError(f"axis count must be >= 2, got {self.count}")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.count)


@dataclass(frozen=True)
class ScanGrid:
    x: Axis
    y: Axis | None
    base: ModelParams
    quantity: str = "LN"

    def __post_init__(self):
        if self.quantity not in QUANTITIES:
            raise DomainError(f"unknown quantity {self.quantity!r}")
        if self.y is not None and self.y.name == self.x.name:
            raise DomainError("x and y axes must differ")

    def shape(self):
        return (self.x.count, 1 if self.y is None else self.y.count)

    def points(self):
        """Row-major (ix, iy, params) with the axis values substituted.

        The time axis has no ModelParams field; callers handling 't'
        read the coordinate from the axis values instead.
        """
        xs = self.x.values()
        ys = self.y.values() if self.y is not None else [None]
        for ix, xv in enumerate(xs):
            for iy, yv in enumerate(ys if self.y is not None else [0.0]):
                over = {}
                if self.x.name != "t":
                    over[self.x.name] = float(xv)
                if self.y is not None and self.y.name != "t":
                    over[self.y.name] = float(yv)
                yield ix, iy, self.base.replace(**over)
