"""Bottleneck profiles and discrete f-Prokhorov distances for persistence diagrams."""

from .diagram import (
    LINF,
    DiagramParseError,
    GroundMetric,
    PersistenceDiagram,
    PlanePoint,
    diagonal_distance,
    ground_distance,
    load_diagram,
    parse_diagram,
    project_to_diagonal,
    serialize_diagram,
)
from .matching import MatchingResult, candidate_distances, max_matching_size, maximum_matching
from .profile import BottleneckProfile, full_profile, profile_query, profile_value
from .prokhorov import ParamFunction, eval_f, inverse_f, kth_bottleneck, prokhorov_distance
from .wasserstein import BoundsReport, audit_bounds, bottleneck_distance, wasserstein_distance

__version__ = "0.1.0"
