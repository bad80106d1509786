"""Connected guard placement in simple polygons."""
from .geometry import (
    GeometryError,
    ObjectRef,
    Orientation,
    SimplePolygon,
    orientation,
    points_visible,
    visibility_polygon,
    vertex_limited_visibility_polygon,
    crop,
)

__all__ = [
    "GeometryError",
    "ObjectRef",
    "Orientation",
    "SimplePolygon",
    "crop",
    "orientation",
    "points_visible",
    "vertex_limited_visibility_polygon",
    "visibility_polygon",
]
__version__ = "0.1.0"
