"""Node positioning: map projection, force simulation, overlap removal."""

from .forceatlas2 import LayoutConfig, fa2_layout
from .overlap import remove_overlaps
from .projection import MAP_RADIUS_UNITS, map_positions, vdg_project

__all__ = [
    "LayoutConfig",
    "MAP_RADIUS_UNITS",
    "fa2_layout",
    "map_positions",
    "remove_overlaps",
    "vdg_project",
]
