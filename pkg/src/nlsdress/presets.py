"""Named one-, two- and three-soliton reflection setups with their sampling grids."""

from __future__ import annotations

from dataclasses import dataclass

from .boundary import BoundaryCondition, Dirichlet, New
from .core import SolitonParameters
from .verification import Grid


@dataclass(frozen=True)
class Preset:
    name: str
    boundary: BoundaryCondition
    solitons: tuple[SolitonParameters, ...]
    grid: Grid


PRESETS = {
    "fig-dir2": Preset(
        "fig-dir2",
        Dirichlet(),
        (SolitonParameters(1.0, 1.0, 5.0, 0.0),),
        Grid(0.0, 3.0, 50, 0.0, 15.0, 50),
    ),
    "fig-new2": Preset(
        "fig-new2",
        New(1.0, 2.0),
        (SolitonParameters(1.0, 1.0, 5.0, 0.0),),
        Grid(0.0, 3.0, 50, 0.0, 15.0, 50),
    ),
    "fig-new4": Preset(
        "fig-new4",
        New(1.0, 2.0),
        (SolitonParameters(0.5, 0.5, 5.0, 0.0), SolitonParameters(0.5, 1.5, 5.0, 0.0)),
        Grid(0.0, 6.0, 40, 0.0, 15.0, 40),
    ),
    "fig-new6": Preset(
        "fig-new6",
        New(1.0, 2.0),
        (
            SolitonParameters(1.5, 1.0, 5.0, 0.0),
            SolitonParameters(0.5, 0.75, 8.0, 0.0),
            SolitonParameters(1.25, 0.5, 11.0, 0.0),
        ),
        Grid(0.0, 8.0, 40, 0.0, 25.0, 40),
    ),
}


def get_preset(name: str) -> Preset:
    try:
        return PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}") from None
