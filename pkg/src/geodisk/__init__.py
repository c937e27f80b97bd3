"""Geodesic disk intersection graphs in polygons with holes.

Builds the intersection graph of geodesic disks under the Euclidean
shortest-path metric of a polygon with holes, constructs balanced
clique-based separators for it, and uses them for an additive-error-1
hop-distance oracle and a separator-based q-coloring solver.
"""

from .geometry import Point, PolygonWithHoles, Segment
from .kernels import backend_name

__version__ = "0.1.0"

__all__ = [
    "Point",
    "Segment",
    "PolygonWithHoles",
    "backend_name",
    "__version__",
]
